#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "mcov/error.hpp"

namespace mcov {

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

/// Node cap for exhaustive searches; MCOV_BUDGET overrides the default.
inline std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("MCOV_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return kDefaultNodeBudget;
}

/// Counts search nodes and throws SearchBudgetExceeded past the cap.
class NodeCounter {
 public:
  explicit NodeCounter(std::uint64_t cap, const char* what = "search")
      : cap_(cap), what_(what) {}

  void tick() {
    if (++used_ > cap_)
      throw Error(Errc::SearchBudgetExceeded,
                  std::string(what_) + " exceeded node budget " + std::to_string(cap_));
  }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t cap_;
  std::uint64_t used_ = 0;
  const char* what_;
};

}  // namespace mcov
