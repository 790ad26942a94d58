#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <string>
#include <vector>

namespace mcov {

/// Largest ground set representable by a Subset.
inline constexpr int kMaxElements = 64;

/**
 * A subset of a ground set {0, ..., n-1} with n <= 64, stored as one
 * machine word. All engine work is subset arithmetic on these.
 */
class Subset {
 public:
  using Word = std::uint64_t;

  constexpr Subset() = default;
  constexpr explicit Subset(Word bits) : bits_(bits) {}

  Subset(std::initializer_list<int> elems) {
    for (int e : elems) bits_ |= bit(e);
  }

  static Subset of(const std::vector<int>& elems) {
    Subset s;
    for (int e : elems) s.bits_ |= bit(e);
    return s;
  }

  /// {0, ..., n-1}
  static constexpr Subset prefix(int n) {
    return Subset(n >= 64 ? ~Word{0} : (Word{1} << n) - 1);
  }

  static constexpr Subset singleton(int e) { return Subset(bit(e)); }

  constexpr Word bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int e) const { return (bits_ >> e) & 1U; }
  constexpr bool is_subset_of(Subset o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(Subset o) const { return (bits_ & o.bits_) != 0; }

  /// Smallest element; -1 when empty.
  constexpr int lowest() const { return bits_ ? std::countr_zero(bits_) : -1; }
  /// Largest element; -1 when empty.
  constexpr int highest() const { return bits_ ? 63 - std::countl_zero(bits_) : -1; }

  constexpr Subset with(int e) const { return Subset(bits_ | bit(e)); }
  constexpr Subset without(int e) const { return Subset(bits_ & ~bit(e)); }

  constexpr Subset operator|(Subset o) const { return Subset(bits_ | o.bits_); }
  constexpr Subset operator&(Subset o) const { return Subset(bits_ & o.bits_); }
  constexpr Subset operator-(Subset o) const { return Subset(bits_ & ~o.bits_); }
  constexpr Subset operator^(Subset o) const { return Subset(bits_ ^ o.bits_); }
  constexpr Subset& operator|=(Subset o) { bits_ |= o.bits_; return *this; }
  constexpr Subset& operator&=(Subset o) { bits_ &= o.bits_; return *this; }
  constexpr Subset& operator-=(Subset o) { bits_ &= ~o.bits_; return *this; }

  constexpr bool operator==(const Subset&) const = default;
  /// Orders by the underlying word; use lex_less for the canonical order.
  constexpr auto operator<=>(const Subset&) const = default;

  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    using pointer = const int*;
    using reference = int;

    constexpr iterator() = default;
    constexpr explicit iterator(Word w) : w_(w) {}
    constexpr int operator*() const { return std::countr_zero(w_); }
    constexpr iterator& operator++() { w_ &= w_ - 1; return *this; }
    constexpr iterator operator++(int) { iterator t = *this; ++*this; return t; }
    constexpr bool operator==(const iterator&) const = default;

   private:
    Word w_ = 0;
  };

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> elements() const { return {begin(), end()}; }

 private:
  static constexpr Word bit(int e) { return Word{1} << e; }
  Word bits_ = 0;
};

/// Lexicographic order on ascending element lists ({0,5} < {0,5,7} < {0,6} < {1}).
inline bool lex_less(Subset a, Subset b) {
  auto ia = a.begin(), ib = b.begin();
  for (; ia != a.end() && ib != b.end(); ++ia, ++ib) {
    if (*ia != *ib) return *ia < *ib;
  }
  return ia == a.end() && ib != b.end();
}

/// Space-separated ascending indices; "" for the empty set.
inline std::string to_string(Subset s) {
  std::string out;
  for (int e : s) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e);
  }
  return out;
}

/// Calls f(subset) for every k-subset of `from`, in increasing word order.
template <class F>
void for_each_k_subset(Subset from, int k, F&& f) {
  const std::vector<int> elems = from.elements();
  const int n = static_cast<int>(elems.size());
  if (k < 0 || k > n) return;
  if (k == 0) { f(Subset{}); return; }
  // Gosper's hack over positions within `elems`.
  std::uint64_t pos = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = (n == 64) ? 0 : (std::uint64_t{1} << n);
  while (true) {
    Subset s;
    for (std::uint64_t w = pos; w; w &= w - 1) s = s.with(elems[std::countr_zero(w)]);
    f(s);
    const std::uint64_t c = pos & (~pos + 1);
    const std::uint64_t r = pos + c;
    if (r == 0 || (limit != 0 && r >= limit)) break;
    pos = (((r ^ pos) >> 2) / c) | r;
    if (limit != 0 && pos >= limit) break;
  }
}

}  // namespace mcov
