#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mcov/catalog.hpp"
#include "mcov/io.hpp"
#include "mcov/oracle.hpp"
#include "mcov/pyramid.hpp"
#include "mcov/rng.hpp"

namespace mcov {

struct CheckReport {
  std::string lemma;
  std::string instance;
  std::string params;
  Verdict verdict = Verdict::Vacuous;
  std::string witness_path = "-";
  std::string witness;  // serialized counterexample for fail verdicts
  long long millis = -1;
  std::size_t seq = 0;
  int samples = 0;  // passing samples behind the verdict
};

struct SuiteConfig {
  std::string catalog = "all";
  std::uint64_t seed = 42;
  std::vector<std::string> lemmas;  // empty: every lemma
  std::uint64_t budget = default_node_budget();
  RandomLinearOptions random_linear;
  int a_max = 3;
  int b_max = 9;
  std::vector<std::uint64_t> d_values = {2, 3, 4};
  std::uint64_t d_max = 12;
  std::vector<int> q_values = {1, 2, 3};
  int t_max = 4;
  int h_max = 3;
  int rank_pairs = 1000;
  int minor_chains = 100;
  int firm_families = 7;
  int pick_families = 4;
  int samples = 12;
  int scatter_exhaustive = 10;  // witnesses up to this size: every subset
  int minor_oracle_n = 8;
  int cross_oracle_n = 12;
  int jobs = 1;
};

inline const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {
      "rank-axioms",        "cross-oracle",      "kdensity",          "kdensitycon",
      "kdensityrel",        "coveringcompare",   "dcoverdensity",     "getscattered",
      "densityabsscattered", "maximalminimalcover", "maintainthickness", "thickuniform",
      "thicknessfirmness",  "firmness-oracle",   "minor-oracle",      "firmdensity",
      "firmdensityrel",     "pickcontract",      "findskew",          "sizepyramid",
      "shrinkpyramid",      "restrictpyramid",   "boundpyramid",      "minorpyramid",
      "augmentpyramid",     "climbinductive"};
  return ids;
}

namespace detail {

// ---- shared per-instance data --------------------------------------------

/// Computed once per instance and parameter, shared by every task.
class InstanceData {
 public:
  InstanceData(std::string id, MinorView m, std::uint64_t budget, int b_max)
      : id_(std::move(id)), m_(std::move(m)), budget_(budget), b_max_(b_max) {}

  const std::string& id() const { return id_; }
  const MinorView& m() const { return m_; }

  /// Largest b <= b_max+1 with a U_{a+1,b}-minor (0 when r <= a). Throws on budget.
  int max_arc(int a) {
    Slot& s = arcs_[a];
    std::call_once(s.once, [&] {
      try {
        if (m_.rank() <= a) {
          s.value = 0;
          return;
        }
        int best = a + 1;
        for (int b = a + 2; b <= b_max_ + 1; ++b) {
          if (!has_uniform_minor(m_, a, b, budget_)) break;
          best = b;
        }
        s.value = best;
      } catch (const Error& e) {
        s.error = e.code();
        s.message = e.detail();
      }
    });
    if (s.error) throw Error(*s.error, s.message);
    return static_cast<int>(s.value);
  }

  /// M in U(a,b)
  bool excludes(int a, int b) { return max_arc(a) < b; }

  std::uint64_t tau(int a) {
    Slot& s = taus_[a];
    std::call_once(s.once, [&] {
      try {
        s.value = tau_a(m_, a, budget_).value;
      } catch (const Error& e) {
        s.error = e.code();
        s.message = e.detail();
      }
    });
    if (s.error) throw Error(*s.error, s.message);
    return s.value;
  }

  const FlatLattice& lattice() {
    std::call_once(lat_once_, [&] { lat_ = enumerate_flats(m_, m_.rank()); });
    return lat_;
  }

 private:
  struct Slot {
    std::once_flag once;
    std::uint64_t value = 0;
    std::optional<Errc> error;
    std::string message;
  };
  std::string id_;
  MinorView m_;
  std::uint64_t budget_;
  int b_max_;
  std::map<int, Slot> arcs_;
  std::map<int, Slot> taus_;
  std::once_flag lat_once_;
  FlatLattice lat_;

 public:
  // std::map nodes are stable; pre-create slots so call_once never races on insertion.
  void reserve(int a_max) {
    for (int a = 0; a <= a_max + 1; ++a) {
      arcs_[a];
      taus_[a];
    }
  }
};

/// Accumulates sample outcomes for one report line.
class Tally {
 public:
  void pass() { ++passed_; }
  void vacuous() { ++vacuous_; }
  void fail(std::string witness) {
    if (witness_.empty()) witness_ = std::move(witness);
    failed_ = true;
  }
  void budget() { budget_ = true; }
  int passed() const { return passed_; }

  Verdict verdict() const {
    if (failed_) return Verdict::Fail;
    if (budget_) return Verdict::BudgetExceeded;
    return passed_ > 0 ? Verdict::Pass : Verdict::Vacuous;
  }
  const std::string& witness() const { return witness_; }

  /// Runs one sample, turning budget errors into a budget mark.
  template <class F>
  void run(F&& f) {
    try {
      f();
    } catch (const Error& e) {
      if (e.code() == Errc::SearchBudgetExceeded) budget();
      else fail(std::string("error: ") + e.what() + "\n");
    }
  }

 private:
  int passed_ = 0;
  int vacuous_ = 0;
  bool failed_ = false;
  bool budget_ = false;
  std::string witness_;
};

inline std::string describe_view(const MinorView& m) {
  std::ostringstream out;
  write_matroid(out, *m.base());
  if (!m.contracted().empty()) out << "# contract " << to_string(m.contracted()) << '\n';
  if (!m.deleted().empty()) out << "# delete " << to_string(m.deleted()) << '\n';
  return out.str();
}

inline std::string describe_family(const SetFamily& fam) {
  std::ostringstream out;
  write_family(out, fam);
  return out.str();
}

/// Random minor of m, keeping a nonempty ground set and never touching `keep`.
inline MinorView random_minor(const MinorView& m, Rng& rng, Subset keep = {}) {
  Subset free = m.ground() - keep;
  Subset c, d;
  for (int e : free) {
    const int roll = rng.uniform(0, 3);
    if (roll == 0) c = c.with(e);
    else if (roll == 1) d = d.with(e);
  }
  if ((m.ground() - c - d).empty()) {
    const int e = m.ground().highest();
    c = c.without(e);
    d = d.without(e);
  }
  return m.minor(c, d);
}

/// True when deleting e from m leaves the lattice of flats unchanged up to e:
/// e is a loop or has a parallel partner among the remaining elements.
inline bool redundant(const MinorView& m, int e) {
  if (m.is_loop(e)) return true;
  const Subset par = m.closure(Subset::singleton(e)) - m.loops();
  return par.size() > 1;
}

/// Random minor M/C with some redundant elements of M/C deleted. Deleting a
/// non-redundant element can drop covering numbers arbitrarily, so the
/// density-relative checks draw from this family.
inline MinorView random_reduced_minor(const MinorView& m, Rng& rng) {
  Subset c = rng.subset(m.ground(), 1, 3);
  if (c == m.ground()) c = c.without(c.highest());
  MinorView n = m.contract(c);
  for (int e : n.ground())
    if (n.size() > 1 && rng.coin() && redundant(n, e)) n = n.remove(Subset::singleton(e));
  return n;
}

/// Random family of k sets of rank exactly a (independent a-subsets).
inline SetFamily random_rank_family(const MinorView& m, Rng& rng, int a, int k) {
  SetFamily fam;
  const Subset live = m.ground() - m.loops();
  if (live.size() < a) return fam;
  for (int tries = 0; static_cast<int>(fam.size()) < k && tries < 40 * k; ++tries) {
    const Subset x = rng.k_subset(live, a);
    if (m.rank(x) == a) fam.push_back(x);
  }
  return fam;
}

inline std::string fmt_params(const std::vector<std::pair<std::string, long long>>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    if (!out.empty()) out += ',';
    out += k + "=" + std::to_string(v);
  }
  return out.empty() ? "-" : out;
}

struct Task {
  std::string lemma;
  std::string instance;
  std::string params;
  std::function<void(Tally&, Rng&)> body;
};

// ---- catalog lemmas --------------------------------------------------------

inline void rank_axioms(InstanceData& inst, Tally& t, Rng& rng, int pairs) {
  const MinorView& m = inst.m();
  const Subset g = m.ground();
  std::ostringstream bad;
  if (m.rank(Subset{}) != 0) bad << "r(empty) != 0\n";
  for (int i = 0; i < pairs && bad.str().empty(); ++i) {
    const Subset x = rng.subset(g), y = rng.subset(g);
    const int rx = m.rank(x), ry = m.rank(y);
    if (rx < 0 || rx > x.size()) bad << "rank bound {" << to_string(x) << "}\n";
    if (m.rank(x | y) + m.rank(x & y) > rx + ry)
      bad << "submodularity {" << to_string(x) << "} {" << to_string(y) << "}\n";
    if (!(g - x).empty()) {
      const int e = rng.pick(g - x);
      const int rxe = m.rank(x.with(e));
      if (rxe < rx || rxe > rx + 1) bad << "unit increase {" << to_string(x) << "} + " << e << "\n";
    }
    if ((x & y) == x && rx > ry) bad << "monotonicity {" << to_string(x) << "}\n";
    const Subset cl = m.closure(x);
    if (m.closure(cl) != cl || m.rank(cl) != rx) bad << "closure {" << to_string(x) << "}\n";
    const Subset c = rng.subset(g - y, 1, 3);
    const Subset z = y - c;
    if (m.contract(c).rank(z) + m.rank(c) != m.rank(z | c))
      bad << "minor rank {" << to_string(z) << "} / {" << to_string(c) << "}\n";
  }
  if (m.base()->kind() == MatroidKind::ProjectiveGeometry && m.contracted().empty() &&
      m.deleted().empty()) {
    const auto* lin = m.base()->linear();
    const int q = lin->field->order();
    const FlatLattice lat = enumerate_flats(m, 2);
    for (Subset line : lat.rank(2))
      if (line.size() != q + 1) bad << "line {" << to_string(line) << "} size " << line.size() << "\n";
  }
  if (bad.str().empty()) t.pass();
  else t.fail(describe_view(m) + bad.str());
}

inline void cross_oracle(InstanceData& inst, Tally& t, Rng& rng, int full_n) {
  const MinorView& m = inst.m();
  const auto bases = enumerate_bases(m);
  const InstancePtr rebuilt = make_bases(m.base()->size(), bases);
  auto check = [&](Subset x) {
    if (rebuilt->rank(x) != m.rank(x)) {
      t.fail(describe_view(m) + "bases rebuild differs on {" + to_string(x) + "}\n");
      return false;
    }
    return true;
  };
  const Subset g = m.ground();
  if (g.size() <= full_n) {
    for (std::uint64_t w = 0; w < (std::uint64_t{1} << g.size()); ++w)
      if (!check(Subset(w))) return;
  } else {
    for (int i = 0; i < 2000; ++i)
      if (!check(rng.subset(g))) return;
  }
  t.pass();
}

inline std::string cell_witness(const InstanceData& inst, const std::string& what) {
  return describe_view(inst.m()) + what + "\n";
}

inline void kdensity(InstanceData& inst, Tally& t, int a, int b) {
  const MinorView& m = inst.m();
  if (m.rank() <= a || !inst.excludes(a, b)) return t.vacuous();
  const std::uint64_t bound = checked_pow(binom(b - 1, a), m.rank() - a);
  const std::uint64_t tau = inst.tau(a);
  if (tau > bound)
    return t.fail(cell_witness(inst, "tau_a = " + std::to_string(tau) + " > " + std::to_string(bound)));
  const FlatCover kc = kdensity_cover(m, a, b);
  if (!covers_ground(m, kc)) return t.fail(cell_witness(inst, "kdensity cover misses elements"));
  for (Subset f : kc.flats)
    if (m.rank(f) > a) return t.fail(cell_witness(inst, "kdensity cover has rank > a"));
  if (kc.flats.size() > bound)
    return t.fail(cell_witness(inst, "kdensity cover size " + std::to_string(kc.flats.size())));
  t.pass();
}

inline void kdensitycon(InstanceData& inst, Tally& t, Rng& rng, int a, int b, int samples) {
  const MinorView& m = inst.m();
  if (m.rank() <= a || !inst.excludes(a, b)) return t.vacuous();
  const std::uint64_t tau = inst.tau(a);
  for (int s = 0; s < samples; ++s) {
    t.run([&] {
      Subset c = rng.subset(m.ground(), 1, 3);
      if (c == m.ground()) c = c.without(c.highest());
      const MinorView mc = m.contract(c);
      const std::uint64_t rhs = checked_pow(binom(b - 1, a), m.rank(c)) * tau_a(mc, a).value;
      if (tau > rhs)
        t.fail(cell_witness(inst, "contract {" + to_string(c) + "}: " + std::to_string(tau) + " > " +
                                      std::to_string(rhs)));
      else t.pass();
    });
  }
}

inline void kdensityrel(InstanceData& inst, Tally& t, Rng& rng, int a, int b, int samples) {
  const MinorView& m = inst.m();
  if (m.rank() <= a || !inst.excludes(a, b)) return t.vacuous();
  const std::uint64_t tau = inst.tau(a);
  for (int s = 0; s < samples; ++s) {
    t.run([&] {
      const MinorView n = random_reduced_minor(m, rng);
      const std::uint64_t rhs = checked_pow(binom(b - 1, a), m.rank() - n.rank()) * tau_a(n, a).value;
      if (tau > rhs)
        t.fail(cell_witness(inst, "minor /{" + to_string(n.contracted()) + "} \\{" +
                                      to_string(n.deleted()) + "}: " + std::to_string(tau) + " > " +
                                      std::to_string(rhs)));
      else t.pass();
    });
  }
}

inline void coveringcompare(InstanceData& inst, Tally& t, int a, int b, std::uint64_t budget) {
  const MinorView& m = inst.m();
  if (m.rank() <= a || !inst.excludes(a, b)) return t.vacuous();
  const std::uint64_t d = binom(b, a);
  const std::uint64_t tau = inst.tau(a);
  const CoverResult w = tau_weighted(m, inst.lattice(), d, budget);
  const std::uint64_t upper = checked_pow(d, a) * tau;
  if (tau > w.value || w.value > upper)
    return t.fail(cell_witness(inst, "tau_a = " + std::to_string(tau) + ", tau^d = " +
                                         std::to_string(w.value) + ", d^a tau_a = " + std::to_string(upper)));
  for (Subset f : w.witness.flats)
    if (m.rank(f) > a)
      return t.fail(cell_witness(inst, serialize_cover(m, w.witness) + "witness flat of rank > a"));
  t.pass();
}

inline void dcoverdensity(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int chains,
                          std::uint64_t budget) {
  const MinorView& m = inst.m();
  const std::uint64_t tm = tau_weighted(m, inst.lattice(), d, budget).value;
  for (int c = 0; c < chains; ++c) {
    t.run([&] {
      MinorView n = m;
      const int steps = rng.uniform(1, std::max(1, m.size() - 1));
      for (int s = 0; s < steps && n.size() > 1; ++s) {
        const int e = rng.pick(n.ground());
        const Subset one = Subset::singleton(e);
        n = rng.coin() && redundant(n, e) ? n.remove(one) : n.contract(one);
      }
      const std::uint64_t tn = tau_weighted(n, d, budget).value;
      // tau^d(N) >= d^(r(N)-r(M)) tau^d(M)  <=>  tau^d(N) d^(r(M)-r(N)) >= tau^d(M)
      const std::uint64_t lhs = tn * checked_pow(d, m.rank() - n.rank());
      if (lhs < tm)
        t.fail(cell_witness(inst, "minor /{" + to_string(n.contracted()) + "} \\{" +
                                      to_string(n.deleted()) + "}: tau^d(N) = " + std::to_string(tn) +
                                      ", tau^d(M) = " + std::to_string(tm)));
      else t.pass();
    });
  }
}

/// Subfamilies of the witness: all of them up to `exhaustive` flats, else seeded samples.
inline std::vector<SetFamily> witness_subfamilies(const std::vector<Subset>& flats, Rng& rng,
                                                  int exhaustive, int samples) {
  std::vector<SetFamily> out;
  const int k = static_cast<int>(flats.size());
  if (k <= exhaustive) {
    for (std::uint64_t w = 1; w < (std::uint64_t{1} << k); ++w) {
      SetFamily f;
      for (int i = 0; i < k; ++i)
        if (w >> i & 1) f.push_back(flats[i]);
      out.push_back(std::move(f));
    }
  } else {
    out.push_back(flats);
    for (int s = 0; s < samples; ++s) {
      SetFamily f;
      for (Subset x : flats)
        if (rng.coin()) f.push_back(x);
      if (f.empty()) f.push_back(flats[rng.uniform(0, k - 1)]);
      out.push_back(std::move(f));
    }
  }
  return out;
}

inline void getscattered(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int exhaustive,
                         int samples, std::uint64_t budget) {
  const MinorView& m = inst.m();
  const CoverResult w = tau_weighted(m, inst.lattice(), d, budget);
  std::map<std::uint64_t, bool> thick;
  for (Subset f : w.witness.flats) thick[f.bits()] = f.empty() || thickness(m, f, budget).at_least(d);
  for (const SetFamily& sub : witness_subfamilies(w.witness.flats, rng, exhaustive, samples)) {
    bool ok = true;
    for (Subset f : sub) ok = ok && thick[f.bits()];
    if (ok) {
      FlatCover own{sub, d};
      ok = weight(m, own) == weight(m, dmin_cover_family(m, inst.lattice(), sub, d, false, budget));
    }
    if (ok) t.pass();
    else return t.fail(cell_witness(inst, serialize_cover(m, w.witness) + "subfamily not scattered:\n" +
                                              describe_family(sub)));
  }
}

inline void densityabsscattered(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d,
                                int exhaustive, int samples, std::uint64_t budget) {
  const MinorView& m = inst.m();
  const CoverResult w = tau_weighted(m, inst.lattice(), d, budget);
  std::map<int, std::vector<Subset>> by_rank;
  for (Subset f : w.witness.flats) by_rank[m.rank(f)].push_back(f);
  for (const auto& [a, flats] : by_rank) {
    if (a < 1) continue;
    for (const SetFamily& sub : witness_subfamilies(flats, rng, exhaustive, samples)) {
      if (!is_d_scattered(m, sub, d, budget)) {
        t.vacuous();
        continue;
      }
      const auto eps = static_cast<std::uint64_t>(epsilon(m, sub));
      if (eps > checked_pow(d, m.rank() - a))
        return t.fail(cell_witness(inst, "eps = " + std::to_string(eps) + " with a = " +
                                             std::to_string(a) + ":\n" + describe_family(sub)));
      t.pass();
    }
  }
}

inline void maximalminimalcover(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int samples,
                                std::uint64_t budget) {
  const MinorView& m = inst.m();
  const int r = m.rank();
  const FlatLattice& lat = inst.lattice();
  std::optional<bool> m_thick;
  for (int a = 1; a < r; ++a) {
    std::vector<Subset> thick;
    std::vector<Subset> level = lat.rank(a);
    if (static_cast<int>(level.size()) > 3 * samples) {
      std::vector<Subset> pick;
      for (int i = 0; i < 3 * samples; ++i) pick.push_back(level[rng.uniform(0, static_cast<int>(level.size()) - 1)]);
      level = pick;
    }
    for (Subset f : level)
      if (thickness(m, f, budget).at_least(d)) thick.push_back(f);
    if (thick.empty()) continue;
    std::vector<SetFamily> fams = {thick};
    for (int s = 0; s < samples; ++s) {
      SetFamily f;
      for (Subset x : thick)
        if (rng.coin()) f.push_back(x);
      if (!f.empty()) fams.push_back(std::move(f));
    }
    const std::uint64_t full = checked_pow(d, r);
    for (const SetFamily& fam : fams) {
      const FlatCover best = dmin_cover_family(m, lat, fam, d, false, budget);
      if (weight(m, best) != full) {
        t.vacuous();
        continue;
      }
      const auto eps = static_cast<std::uint64_t>(epsilon(m, fam));
      if (eps < checked_pow(d, r - a))
        return t.fail(cell_witness(inst, "eps = " + std::to_string(eps) + " below d^(r-a):\n" +
                                             describe_family(fam)));
      if (!m_thick) m_thick = thickness(m, m.ground(), budget).at_least(d);
      if (!*m_thick) return t.fail(cell_witness(inst, "M is not d-thick"));
      t.pass();
    }
  }
}

inline void maintainthickness(InstanceData& inst, Tally& t, Rng& rng, int samples, std::uint64_t budget) {
  const MinorView& m = inst.m();
  for (int s = 0; s < samples; ++s) {
    t.run([&] {
      Subset x = rng.subset(m.ground(), 2, 3);
      if (x.empty()) x = Subset::singleton(rng.pick(m.ground()));
      const ThicknessValue tm = thickness(m, x, budget);
      const MinorView n = random_minor(m, rng, x);
      const ThicknessValue tn = thickness(n, x, budget);
      if (!tm.unbounded && !tn.at_least(tm.value))
        t.fail(cell_witness(inst, "X = {" + to_string(x) + "} thickness " + to_string(tm) + " in M, " +
                                      to_string(tn) + " in /{" + to_string(n.contracted()) + "} \\{" +
                                      to_string(n.deleted()) + "}"));
      else t.pass();
    });
  }
}

inline void thickuniform(InstanceData& inst, Tally& t, int a, int b, std::uint64_t budget) {
  const MinorView& m = inst.m();
  if (m.rank() <= a) return t.vacuous();
  if (!thickness(m, m.ground(), budget).at_least(binom(b, a))) return t.vacuous();
  if (inst.max_arc(a) >= b) return t.pass();
  t.fail(cell_witness(inst, "binom(b,a)-thick without a U_{a+1,b}-minor"));
}

inline void thicknessfirmness(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int samples,
                              std::uint64_t budget) {
  const MinorView& m = inst.m();
  const FlatLattice& lat = inst.lattice();
  for (int a = 1; a <= std::min(3, m.rank()); ++a) {
    const std::vector<Subset>& level = lat.rank(a);
    if (level.empty()) continue;
    for (int s = 0; s < samples; ++s) {
      t.run([&] {
        SetFamily fam;
        const int k = rng.uniform(1, std::min<int>(12, static_cast<int>(level.size())));
        for (int i = 0; i < k; ++i) fam.push_back(level[rng.uniform(0, static_cast<int>(level.size()) - 1)]);
        if (!is_d_firm(m, fam, d).firm) return t.vacuous();
        for (Subset x : fam)
          if (!thickness(m, x, budget).at_least(d)) return t.vacuous();
        const Subset cl = family_closure(m, fam);
        if (!thickness(m, cl, budget).at_least(d))
          return t.fail(cell_witness(inst, "closure {" + to_string(cl) + "} not d-thick:\n" +
                                               describe_family(fam)));
        t.pass();
      });
    }
  }
}

inline void firmness_oracle(InstanceData& inst, Tally& t, Rng& rng, int families) {
  const MinorView& m = inst.m();
  for (int s = 0; s < families; ++s) {
    const int k = rng.uniform(1, 12);
    SetFamily fam;
    for (int i = 0; i < k; ++i) fam.push_back(rng.subset(m.ground(), 1, 3));
    const auto d = static_cast<std::uint64_t>(rng.uniform(1, 12));
    const bool fast = is_d_firm(m, fam, d).firm;
    const bool slow = oracle::firm(m, fam, d);
    if (fast != slow)
      return t.fail(cell_witness(inst, "d = " + std::to_string(d) + " fast " + std::to_string(fast) +
                                           " brute " + std::to_string(slow) + ":\n" + describe_family(fam)));
    t.pass();
  }
}

inline void minor_oracle(InstanceData& inst, Tally& t, int a, int b, std::uint64_t budget) {
  const MinorView& m = inst.m();
  const auto fast = has_uniform_minor(m, a, b, budget);
  const auto slow = oracle::uniform_minor(m, a, b);
  if (fast.has_value() != slow.has_value())
    return t.fail(cell_witness(inst, std::string("detector ") + (fast ? "found" : "missed") + " a minor"));
  if (fast && !validate_uniform_witness(m, *fast))
    return t.fail(cell_witness(inst, "invalid witness /{" + to_string(fast->contract) + "} arc {" +
                                         to_string(fast->arc) + "}"));
  t.pass();
}

inline void firmdensity(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int samples) {
  const MinorView& m = inst.m();
  const int r = m.rank();
  const FlatLattice& lat = inst.lattice();
  for (int a = 1; a <= std::min(3, r - 1); ++a) {
    std::vector<SetFamily> fams;
    fams.push_back(lat.rank(a));
    for (int s = 0; s < samples; ++s) fams.push_back(random_rank_family(m, rng, a, rng.uniform(1, 24)));
    for (const SetFamily& fam : fams) {
      if (fam.empty() || static_cast<std::uint64_t>(epsilon(m, fam)) < checked_pow(d, r - a)) {
        t.vacuous();
        continue;
      }
      t.run([&] {
        const SetFamily y = firm_extract(m, fam, a, d);
        const bool sub = std::all_of(y.begin(), y.end(), [&](Subset x) {
          return std::find(fam.begin(), fam.end(), x) != fam.end();
        });
        if (!sub || family_rank(m, y) <= a || !is_d_firm(m, y, d).firm)
          t.fail(cell_witness(inst, "firm_extract output invalid:\n" + describe_family(y)));
        else t.pass();
      });
    }
  }
}

inline void firmdensityrel(InstanceData& inst, Tally& t, Rng& rng, std::uint64_t d, int samples) {
  const MinorView& m = inst.m();
  for (int s = 0; s < samples; ++s) {
    const MinorView n = random_minor(m, rng);
    for (int a = 1; a <= std::min(3, n.rank()); ++a) {
      SetFamily fam;
      for (Subset x : random_rank_family(n, rng, a, 30))
        if (m.rank(x) == a) fam.push_back(x);
      if (fam.empty()) {
        t.vacuous();
        continue;
      }
      const auto lhs = static_cast<std::uint64_t>(epsilon(m, fam));
      const std::uint64_t rhs = checked_pow(d, m.rank() - n.rank()) * static_cast<std::uint64_t>(epsilon(n, fam));
      if (lhs <= rhs) {
        t.vacuous();
        continue;
      }
      t.run([&] {
        const SetFamily y = firm_extract_relative(m, n, fam, a, d);
        if (family_rank(m, y) <= a || !is_d_firm(m, y, d).firm)
          t.fail(cell_witness(inst, "firm_extract_relative output invalid:\n" + describe_family(y)));
        else t.pass();
      });
    }
  }
}

inline void pickcontract(InstanceData& inst, Tally& t, Rng& rng, int families) {
  const MinorView& m = inst.m();
  if (m.rank() < 1) return t.vacuous();
  for (int s = 0; s < families; ++s) {
    const int a = rng.uniform(1, std::min(3, m.rank()));
    const SetFamily fam = random_rank_family(m, rng, a, rng.uniform(1, 20));
    if (fam.empty()) {
      t.vacuous();
      continue;
    }
    const PickContractResult pc = pick_contract(m, fam, a);
    if (!pc.bound_holds || m.is_loop(pc.element))
      return t.fail(cell_witness(inst, "e = " + std::to_string(pc.element) + " survivors " +
                                           std::to_string(pc.survivors) + " of eps " + std::to_string(pc.eps) +
                                           ":\n" + describe_family(fam)));
    t.pass();
  }
}

/// The three Concentration invariants plus rank a in N and e a nonloop of N.
inline std::string check_skew_result(const MinorView& m, const SetFamily& fam, int a, int t,
                                     const SkewExtractionResult& res) {
  if (res.kind == SkewExtractionResult::Kind::SkewFamily) {
    if (static_cast<int>(res.skew.size()) != t) return "skew family of wrong size";
    if (!mutually_skew(m, res.skew)) return "skew family not mutually skew";
    for (Subset w : res.skew)
      if (std::find(fam.begin(), fam.end(), w) == fam.end()) return "skew member not in family";
    return "";
  }
  const MinorView& n = res.minor;
  if (!m.has_minor(n)) return "N is not a minor";
  if (n.rank() < m.rank() - a * t) return "r(N) too small";
  if (static_cast<long long>(res.concentrated.size()) * a * t < static_cast<long long>(fam.size()))
    return "Y too small";
  if (res.element < 0 || !n.ground().contains(res.element) || n.is_loop(res.element))
    return "e is not a nonloop of N";
  for (Subset y : res.concentrated) {
    if (!y.is_subset_of(n.ground()) || n.rank(y) != a) return "member of Y without rank a in N";
    if (!n.closure(y).contains(res.element)) return "member of Y does not span e";
  }
  return "";
}

inline void findskew(InstanceData& inst, Tally& t, Rng& rng, int tt, int samples) {
  const MinorView& m = inst.m();
  for (int s = 0; s < samples; ++s) {
    if (m.rank() < 1) return t.vacuous();
    const int a = rng.uniform(1, std::min(3, m.rank()));
    const SetFamily fam = random_rank_family(m, rng, a, rng.uniform(1, 20));
    if (fam.empty()) {
      t.vacuous();
      continue;
    }
    const SkewExtractionResult res = find_skew(m, fam, a, tt);
    const std::string why = check_skew_result(m, fam, a, tt, res);
    if (!why.empty()) return t.fail(cell_witness(inst, why + ":\n" + describe_family(fam)));
    t.pass();
  }
}

// ---- pyramid lemmas --------------------------------------------------------

inline std::string describe_pyramid(const Pyramid& p) {
  std::ostringstream out;
  write_pyramid(out, p, "base.matroid");
  out << "# base.matroid\n" << describe_view(MinorView(p.ctx.base()));
  return out.str();
}

inline void sizepyramid(const Pyramid& p, Tally& t) {
  const EpsilonCheck c = pyramid_epsilon_check(p);
  if (!c.holds || !c.equality || c.eps != checked_pow(static_cast<std::uint64_t>(p.q), p.h))
    return t.fail(describe_pyramid(p) + "eps " + std::to_string(c.eps) + " bound " + std::to_string(c.bound));
  t.pass();
}

inline bool same_pyramid(const Pyramid& x, const Pyramid& y) {
  return x.ctx.same_view(y.ctx) && x.spine == y.spine && x.family == y.family && x.h == y.h;
}

inline void shrinkpyramid(const Pyramid& p, Tally& t) {
  for (int i = 0; i <= p.h; ++i)
    for (int j = i; j <= p.h; ++j) {
      const Pyramid s = shrink_pyramid(p, i, j);
      if (!pyramid_epsilon_check(s).holds) return t.fail(describe_pyramid(s) + "eps check fails");
      // composing with a second shrink equals one shrink over the merged index set
      for (int i2 = 0; i2 <= s.h; ++i2)
        for (int j2 = i2; j2 <= s.h; ++j2) {
          const Pyramid twice = shrink_pyramid(s, i2, j2);
          Subset gone = p.spine_set() - twice.spine_set();
          Pyramid once = p;
          once.spine = twice.spine;
          once.h = twice.h;
          once.ctx = p.ctx.contract(gone);
          if (!same_pyramid(once, twice))
            return t.fail(describe_pyramid(p) + "shrink composition differs");
        }
      t.pass();
    }
}

inline void restrictpyramid(const Pyramid& p, Tally& t) {
  std::vector<Subset> seen;
  for (Subset s : p.family) {
    const Subset cl = p.level(p.h).closure(s);
    if (std::find(seen.begin(), seen.end(), cl) != seen.end()) continue;
    seen.push_back(cl);
    const Pyramid r = restrict_pyramid(p, s);
    if (r.ctx.rank() != p.a + p.h || !pyramid_epsilon_check(r).holds)
      return t.fail(describe_pyramid(r) + "restriction rank/eps");
    t.pass();
  }
}

inline void boundpyramid(const Pyramid& p, Tally& t) {
  for (int hp = 0; hp <= p.h; ++hp) {
    const Pyramid b = bound_pyramid(p, hp);
    const auto eps = static_cast<std::uint64_t>(epsilon(b.ctx, b.family));
    if (b.ctx.rank() != p.a + hp || eps < checked_pow(static_cast<std::uint64_t>(p.q), hp) ||
        !pyramid_epsilon_check(b).holds)
      return t.fail(describe_pyramid(b) + "bound h' = " + std::to_string(hp));
    t.pass();
  }
}

/// Pyramid with its spine cut to the first k elements.
inline Pyramid truncate_spine(const Pyramid& p, int k) {
  Pyramid out = p;
  out.spine.resize(k);
  out.h = k;
  return out;
}

inline void minorpyramid(const Pyramid& full, Tally& t, Rng& rng, int samples) {
  for (int k = 0; k <= full.h; ++k) {
    const Pyramid p = truncate_spine(full, k);
    const MinorView top = p.level(p.h);
    for (int s = 0; s < samples; ++s) {
      t.run([&] {
        const MinorView n = random_minor(top, rng);
        SetFamily ys;
        for (Subset y : p.family)
          if (y.is_subset_of(n.ground()) && n.rank(y) == p.a) ys.push_back(y);
        if (ys.empty()) return t.vacuous();
        const Pyramid out = minor_project_pyramid(p, n, ys);
        // N|Y and (M'/spine)|Y agree: rank of Y and every member union.
        const MinorView mt = out.level(out.h);
        const Subset yu = family_union(ys);
        bool agree = mt.rank(yu) == n.rank(yu);
        for (int i = 0; i < 16 && agree; ++i) {
          const Subset z = rng.subset(yu);
          agree = mt.rank(z) == n.rank(z);
        }
        bool inside = std::all_of(out.family.begin(), out.family.end(), [&](Subset x) {
          return std::find(p.family.begin(), p.family.end(), x) != p.family.end();
        });
        if (!agree || !inside) t.fail(describe_pyramid(out) + "projection disagrees with N on Y");
        else t.pass();
      });
    }
  }
}

/// Rebuilds pg_pyramid(q, h) by h augmentations from the top level down.
inline void augmentpyramid(const Pyramid& pg, Tally& t) {
  const auto points = projective_points(pg.h + 1, pg.q);
  auto family_below = [&](int k) {  // points with last coordinate 1 and coordinates 0..k-1 zero
    SetFamily fam;
    for (std::size_t i = 0; i < points.size(); ++i) {
      bool ok = points[i][pg.h] == 1;
      for (int c = 0; c < k && ok; ++c) ok = points[i][c] == 0;
      if (ok) fam.push_back(Subset::singleton(static_cast<int>(i)));
    }
    return fam;
  };
  Pyramid cur;
  cur.ctx = pg.ctx.contract(pg.spine_set());
  cur.family = family_below(pg.h);
  cur.a = 1;
  cur.q = pg.q;
  cur.h = 0;
  cur.d = pg.d;
  for (int k = pg.h; k >= 1; --k) {
    Subset below;
    for (int i = 0; i < k - 1; ++i) below = below.with(pg.spine[i]);
    const MinorView m = pg.ctx.contract(below);
    cur = augment_pyramid(m, pg.spine[k - 1], family_below(k - 1), pg.q - 1, cur);
    if (!pyramid_epsilon_check(cur).holds) return t.fail(describe_pyramid(cur) + "eps check");
    t.pass();
  }
  SetFamily got = cur.family, want = pg.family;
  std::sort(got.begin(), got.end());
  std::sort(want.begin(), want.end());
  if (pg.h > 0 && (got != want || cur.spine != pg.spine))
    return t.fail(describe_pyramid(cur) + "replay differs from pg_pyramid");
  if (pg.h == 0) t.vacuous();
}

inline void climbinductive(const Pyramid& full, Tally& t, std::uint64_t d) {
  if (full.h < 1 || full.q < 2) return t.vacuous();
  const Pyramid p = truncate_spine(full, 1);
  const MinorView me = p.level(1);
  const int e = p.spine[0];
  for (const auto& cls : similarity_classes(me, p.family)) {
    const SetFamily x = pick_members(p.family, cls.members);
    const int a = family_rank(me, x);
    if (!is_d_firm(me, x, checked_pow(d, p.q + 2)).firm) {
      t.vacuous();
      continue;
    }
    t.run([&] {
      const ClimbResult res = climb_inductive(p, x, a, d);
      if (res.kind == ClimbResult::Kind::Lifted) {
        const std::string why = check_lifted(p.ctx, e, x, res.lifted, a, d);
        if (static_cast<int>(res.lifted.size()) != p.q || !why.empty())
          return t.fail(describe_pyramid(p) + "lifted: " + why);
      } else {
        if (family_rank(p.ctx, res.firm_up) != a + 1 || !is_d_firm(p.ctx, res.firm_up, d).firm)
          return t.fail(describe_pyramid(p) + "firm-up family invalid");
      }
      t.pass();
    });
  }
}

}  // namespace detail

/**
 * Builds every (lemma, instance, parameter) check for the configuration,
 * runs them on cfg.jobs threads and returns the reports sorted by
 * (lemma, instance, generation order).
 */
inline std::vector<CheckReport> run_suite(const SuiteConfig& cfg, bool timing = false) {
  using namespace detail;
  auto wanted = [&](const std::string& id) {
    return cfg.lemmas.empty() || std::find(cfg.lemmas.begin(), cfg.lemmas.end(), id) != cfg.lemmas.end();
  };
  for (const auto& id : cfg.lemmas)
    if (std::find(lemma_ids().begin(), lemma_ids().end(), id) == lemma_ids().end())
      throw Error(Errc::PreconditionViolated, "unknown lemma '" + id + "'");

  std::vector<std::shared_ptr<InstanceData>> insts;
  for (auto& entry : catalog_generate(cfg.catalog, cfg.seed, cfg.random_linear)) {
    insts.push_back(std::make_shared<InstanceData>(entry.id, MinorView(entry.matroid), cfg.budget, cfg.b_max));
    insts.back()->reserve(cfg.a_max);
  }

  std::vector<Task> tasks;
  auto add = [&](const std::string& lemma, const std::string& inst, std::string params,
                 std::function<void(Tally&, Rng&)> body) {
    if (wanted(lemma)) tasks.push_back({lemma, inst, std::move(params), std::move(body)});
  };
  const std::uint64_t budget = cfg.budget;
  for (const auto& ip : insts) {
    InstanceData* in = ip.get();
    const std::string& id = in->id();
    const int n = in->m().size();
    add("rank-axioms", id, fmt_params({{"pairs", cfg.rank_pairs}}),
        [=, &cfg](Tally& t, Rng& r) { rank_axioms(*in, t, r, cfg.rank_pairs); });
    add("cross-oracle", id, fmt_params({{"n", n}}),
        [=, &cfg](Tally& t, Rng& r) { cross_oracle(*in, t, r, cfg.cross_oracle_n); });
    add("firmness-oracle", id, fmt_params({{"families", cfg.firm_families}}),
        [=, &cfg](Tally& t, Rng& r) { firmness_oracle(*in, t, r, cfg.firm_families); });
    add("maintainthickness", id, fmt_params({{"samples", cfg.samples}}),
        [=, &cfg](Tally& t, Rng& r) { maintainthickness(*in, t, r, cfg.samples, budget); });
    add("pickcontract", id, fmt_params({{"families", cfg.pick_families}}),
        [=, &cfg](Tally& t, Rng& r) { pickcontract(*in, t, r, cfg.pick_families); });
    for (int tt = 1; tt <= cfg.t_max; ++tt)
      add("findskew", id, fmt_params({{"t", tt}}),
          [=, &cfg](Tally& t, Rng& r) { findskew(*in, t, r, tt, cfg.samples / 4 + 1); });
    for (int a = 1; a <= cfg.a_max; ++a)
      for (int b = a + 1; b <= cfg.b_max; ++b) {
        const std::string pr = fmt_params({{"a", a}, {"b", b}});
        add("kdensity", id, pr, [=](Tally& t, Rng&) { t.run([&] { kdensity(*in, t, a, b); }); });
        add("kdensitycon", id, pr,
            [=](Tally& t, Rng& r) { t.run([&] { kdensitycon(*in, t, r, a, b, 2); }); });
        add("kdensityrel", id, pr,
            [=](Tally& t, Rng& r) { t.run([&] { kdensityrel(*in, t, r, a, b, 2); }); });
        add("coveringcompare", id, fmt_params({{"a", a}, {"b", b}, {"d", static_cast<long long>(binom(b, a))}}),
            [=](Tally& t, Rng&) { t.run([&] { coveringcompare(*in, t, a, b, budget); }); });
        add("thickuniform", id, pr, [=](Tally& t, Rng&) { t.run([&] { thickuniform(*in, t, a, b, budget); }); });
        if (n <= cfg.minor_oracle_n && a <= 2 && b <= 6)
          add("minor-oracle", id, pr, [=](Tally& t, Rng&) { t.run([&] { minor_oracle(*in, t, a, b, budget); }); });
      }
    for (std::uint64_t d : cfg.d_values) {
      const auto dl = static_cast<long long>(d);
      add("dcoverdensity", id, fmt_params({{"d", dl}, {"chains", cfg.minor_chains}}),
          [=, &cfg](Tally& t, Rng& r) { t.run([&] { dcoverdensity(*in, t, r, d, cfg.minor_chains, budget); }); });
      add("getscattered", id, fmt_params({{"d", dl}}), [=, &cfg](Tally& t, Rng& r) {
        t.run([&] { getscattered(*in, t, r, d, cfg.scatter_exhaustive, cfg.samples, budget); });
      });
      add("densityabsscattered", id, fmt_params({{"d", dl}}), [=, &cfg](Tally& t, Rng& r) {
        t.run([&] { densityabsscattered(*in, t, r, d, cfg.scatter_exhaustive, cfg.samples, budget); });
      });
      add("maximalminimalcover", id, fmt_params({{"d", dl}}), [=, &cfg](Tally& t, Rng& r) {
        t.run([&] { maximalminimalcover(*in, t, r, d, cfg.samples / 3 + 1, budget); });
      });
      add("thicknessfirmness", id, fmt_params({{"d", dl}}), [=, &cfg](Tally& t, Rng& r) {
        t.run([&] { thicknessfirmness(*in, t, r, d, cfg.samples, budget); });
      });
      add("firmdensity", id, fmt_params({{"d", dl}}),
          [=, &cfg](Tally& t, Rng& r) { t.run([&] { firmdensity(*in, t, r, d, cfg.samples / 2); }); });
      add("firmdensityrel", id, fmt_params({{"d", dl}}),
          [=, &cfg](Tally& t, Rng& r) { t.run([&] { firmdensityrel(*in, t, r, d, cfg.samples / 2); }); });
    }
  }

  std::vector<std::shared_ptr<Pyramid>> pyramids;
  for (int q : cfg.q_values) {
    if (q < 2) continue;
    for (int h = 0; h <= cfg.h_max; ++h) {
      std::shared_ptr<Pyramid> p;
      try {
        p = std::make_shared<Pyramid>(pg_pyramid(q, h));
      } catch (const Error& e) {
        if (e.code() == Errc::SizeCapExceeded) continue;
        throw;
      }
      pyramids.push_back(p);
      const std::string id = "pgpyr-q" + std::to_string(q) + "-h" + std::to_string(h);
      const std::string pr = fmt_params({{"q", q}, {"h", h}});
      const Pyramid* pp = p.get();
      add("sizepyramid", id, pr, [=](Tally& t, Rng&) {
        t.run([&] {
          if (!verify_pyramid(*pp)) return t.fail(describe_pyramid(*pp) + "pg_pyramid invalid");
          sizepyramid(*pp, t);
        });
      });
      add("shrinkpyramid", id, pr, [=](Tally& t, Rng&) { t.run([&] { shrinkpyramid(*pp, t); }); });
      add("restrictpyramid", id, pr, [=](Tally& t, Rng&) { t.run([&] { restrictpyramid(*pp, t); }); });
      add("boundpyramid", id, pr, [=](Tally& t, Rng&) { t.run([&] { boundpyramid(*pp, t); }); });
      add("minorpyramid", id, pr,
          [=, &cfg](Tally& t, Rng& r) { t.run([&] { minorpyramid(*pp, t, r, cfg.samples / 3 + 1); }); });
      add("augmentpyramid", id, pr, [=](Tally& t, Rng&) { t.run([&] { augmentpyramid(*pp, t); }); });
      for (std::uint64_t d : {2, 3})
        add("climbinductive", id, fmt_params({{"q", q}, {"h", h}, {"d", static_cast<long long>(d)}}),
            [=](Tally& t, Rng&) { t.run([&] { climbinductive(*pp, t, d); }); });
    }
  }

  std::vector<CheckReport> reports(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& task = tasks[i];
      Rng rng(mix_seed(cfg.seed, hash_label(task.lemma + "|" + task.instance + "|" + task.params)));
      Tally tally;
      const auto start = std::chrono::steady_clock::now();
      tally.run([&] { task.body(tally, rng); });
      const auto stop = std::chrono::steady_clock::now();
      CheckReport& rep = reports[i];
      rep.lemma = task.lemma;
      rep.instance = task.instance;
      rep.params = task.params;
      rep.verdict = tally.verdict();
      rep.seq = i;
      rep.samples = tally.passed();
      if (rep.verdict == Verdict::Fail) rep.witness = tally.witness();
      if (timing) rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(stop - start).count();
    }
  };
  const int jobs = std::max(1, cfg.jobs);
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::stable_sort(reports.begin(), reports.end(), [](const CheckReport& x, const CheckReport& y) {
    if (x.lemma != y.lemma) return x.lemma < y.lemma;
    if (x.instance != y.instance) return x.instance < y.instance;
    return x.seq < y.seq;
  });
  return reports;
}

/// Writes one file per fail verdict and records its path in the report.
inline void write_witnesses(std::vector<CheckReport>& reports, const std::filesystem::path& dir) {
  for (auto& r : reports) {
    if (r.verdict != Verdict::Fail) continue;
    std::filesystem::create_directories(dir);
    std::string name = r.lemma + "__" + r.instance + "__" + r.params + ".txt";
    std::replace(name.begin(), name.end(), ',', '_');
    const auto path = dir / name;
    std::ofstream out(path);
    out << "# " << r.lemma << ' ' << r.instance << ' ' << r.params << '\n' << r.witness;
    r.witness_path = path.string();
  }
}

inline std::string format_report(const CheckReport& r) {
  std::string out = r.lemma + '\t' + r.instance + '\t' + r.params + '\t' + verdict_name(r.verdict) + '\t' +
                    r.witness_path + '\t' + (r.millis < 0 ? std::string("-") : std::to_string(r.millis));
  return out;
}

}  // namespace mcov
