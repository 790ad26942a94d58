// Runs every acceptance criterion and prints one line per criterion.
// Exit status is the number of failing criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "mcov/mcov.hpp"

using namespace mcov;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct LemmaStats {
  int lines = 0, pass = 0, vacuous = 0, fail = 0, budget = 0;
  long long samples = 0;
  std::string first_bad;
  bool clean() const { return lines > 0 && fail == 0 && budget == 0; }
};

std::map<std::string, LemmaStats> summarize(const std::vector<CheckReport>& reports) {
  std::map<std::string, LemmaStats> out;
  for (const auto& r : reports) {
    LemmaStats& s = out[r.lemma];
    ++s.lines;
    s.samples += r.samples;
    switch (r.verdict) {
      case Verdict::Pass: ++s.pass; break;
      case Verdict::Vacuous: ++s.vacuous; break;
      case Verdict::Fail: ++s.fail; break;
      case Verdict::BudgetExceeded: ++s.budget; break;
    }
    if ((r.verdict == Verdict::Fail || r.verdict == Verdict::BudgetExceeded) && s.first_bad.empty())
      s.first_bad = format_report(r);
  }
  return out;
}

std::string render(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) out << format_report(r) << '\n';
  return out.str();
}

std::string stats_text(const std::string& id, const LemmaStats& s) {
  std::string t = id + " lines=" + std::to_string(s.lines) + " pass=" + std::to_string(s.pass) +
                  " vacuous=" + std::to_string(s.vacuous) + " fail=" + std::to_string(s.fail) +
                  " budget=" + std::to_string(s.budget) + " samples=" + std::to_string(s.samples);
  if (!s.first_bad.empty()) t += " first-bad=[" + s.first_bad + "]";
  return t;
}

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s %s\n", n, ok ? "pass" : "fail", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

// Runs a check body, converting any exception into a failing line.
void criterion(int n, const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [ok, detail] = body();
    report(n, ok, detail);
  } catch (const std::exception& e) {
    report(n, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());

  criterion(1, [] {
    const auto t0 = Clock::now();
    const MinorView fano(make_pg(3, 2)), pg23(make_pg(3, 3));
    std::string why;
    auto expect = [&](const char* what, std::uint64_t got, std::uint64_t want) {
      if (got != want && why.empty()) why = std::string(what) + " got " + std::to_string(got);
    };
    expect("tau1(PG(2,2))", tau_a(fano, 1).value, 7);
    expect("tau2(PG(2,2))", tau_a(fano, 2).value, 3);
    expect("tau2(PG(2,3))", tau_a(pg23, 2).value, 4);
    expect("brute tau1(PG(2,2))", oracle::tau_a(fano, 1), 7);
    expect("brute tau2(PG(2,2))", oracle::tau_a(fano, 2), 3);
    expect("brute tau2(PG(2,3))", oracle::tau_a(pg23, 2), 4);
    int cells = 0;
    for (int b = 2; b <= 9; ++b)
      for (int a = 1; a < b; ++a) {
        const MinorView u(make_uniform(a + 1, b));
        expect("uniform", tau_a(u, a).value, static_cast<std::uint64_t>((b + a - 1) / a));
        ++cells;
      }
    const double secs = seconds_since(t0);
    if (secs >= 10 && why.empty()) why = "too slow";
    return std::pair{why.empty(), "uniform-cells=" + std::to_string(cells) + " seconds=" + std::to_string(secs) +
                                      (why.empty() ? "" : " " + why)};
  });

  criterion(2, [] {
    const auto t0 = Clock::now();
    const MinorView fano(make_pg(3, 2));
    const CoverResult two = tau_weighted(fano, 2), ten = tau_weighted(fano, 10);
    bool ok = two.value == 8 && two.witness.flats.size() == 1 && two.witness.flats[0] == fano.ground();
    ok = ok && ten.value == 70 && ten.witness.flats.size() == 7 &&
         std::all_of(ten.witness.flats.begin(), ten.witness.flats.end(), [](Subset f) { return f.size() == 1; });
    const double secs = seconds_since(t0);
    return std::pair{ok && secs < 5, "tau^2=" + std::to_string(two.value) + " tau^10=" + std::to_string(ten.value) +
                                         " seconds=" + std::to_string(secs)};
  });

  SuiteConfig cfg;
  cfg.catalog = "all";
  cfg.seed = 42;
  cfg.jobs = static_cast<int>(hw);
  std::vector<CheckReport> reports;
  std::map<std::string, LemmaStats> stats;
  double suite_secs = 0;
  std::string suite_error;
  try {
    const auto t0 = Clock::now();
    reports = run_suite(cfg);
    suite_secs = seconds_since(t0);
    stats = summarize(reports);
  } catch (const std::exception& e) {
    suite_error = e.what();
  }
  auto lemma_check = [&](std::initializer_list<const char*> ids, long long min_samples = 0,
                         const char* sample_lemma = nullptr) {
    return [&, ids, min_samples, sample_lemma] {
      if (!suite_error.empty()) return std::pair{false, "suite error: " + suite_error};
      bool ok = true;
      std::string detail;
      for (const char* id : ids) {
        const LemmaStats& s = stats[id];
        ok = ok && s.clean();
        if (sample_lemma && std::string(id) == sample_lemma) ok = ok && s.samples >= min_samples;
        detail += (detail.empty() ? "" : "; ") + stats_text(id, s);
      }
      return std::pair{ok, detail};
    };
  };

  criterion(3, [&] {
    auto r = lemma_check({"kdensity"})();
    const LemmaStats& s = stats["kdensity"];
    r.first = r.first && s.pass >= 200 && suite_secs < 300;
    return r;
  });
  criterion(4, lemma_check({"coveringcompare"}));
  criterion(5, [&] {
    auto r = lemma_check({"dcoverdensity"})();
    const LemmaStats& s = stats["dcoverdensity"];
    r.first = r.first && s.vacuous == 0;
    return r;
  });
  criterion(6, lemma_check({"getscattered", "densityabsscattered"}));
  criterion(7, lemma_check({"firmness-oracle"}, 500, "firmness-oracle"));

  criterion(8, [&] {
    const auto t0 = Clock::now();
    auto r = lemma_check({"minor-oracle"})();
    const MinorView fano(make_pg(3, 2));
    const auto yes = has_uniform_minor(fano, 2, 4);
    const bool fano_ok = yes && validate_uniform_witness(fano, *yes) && !has_uniform_minor(fano, 2, 5);
    r.first = r.first && fano_ok && seconds_since(t0) + suite_secs < 120;
    r.second += std::string(" fano(2,4)=") + (yes ? "yes" : "no") + " fano-ok=" + (fano_ok ? "1" : "0");
    return r;
  });

  criterion(9, [&] {
    auto r = lemma_check({"sizepyramid", "shrinkpyramid", "restrictpyramid", "boundpyramid"})();
    int built = 0;
    for (int q : {2, 3})
      for (int h = 0; h <= 3; ++h) {
        const Pyramid p = pg_pyramid(q, h);
        const EpsilonCheck e = pyramid_epsilon_check(p);
        if (!verify_pyramid(p).ok || !e.equality || e.eps != checked_pow(q, h)) {
          r.first = false;
          r.second += " pg(" + std::to_string(q) + "," + std::to_string(h) + ") bad";
        }
        ++built;
      }
    r.second += " direct-pyramids=" + std::to_string(built);
    return r;
  });

  criterion(10, lemma_check({"pickcontract", "findskew", "firmdensity"}, 200, "pickcontract"));

  criterion(11, [&] {
    auto r = lemma_check({"rank-axioms", "cross-oracle"})();
    r.first = r.first && suite_secs < 60;
    return r;
  });

  criterion(12, [&] {
    if (!suite_error.empty()) return std::pair{false, "suite error: " + suite_error};
    const std::string many = render(reports);
    SuiteConfig one = cfg;
    one.jobs = 1;
    const std::string a = render(run_suite(one));
    const std::string b = render(run_suite(one));
    const bool ok = a == b && a == many;
    return std::pair{ok, "lines=" + std::to_string(reports.size()) + " workers=" + std::to_string(cfg.jobs) +
                             " runs-identical=" + (a == b ? "1" : "0") + " workers-identical=" +
                             (a == many ? "1" : "0")};
  });

  std::printf("summary: %d of 12 criteria failing\n", failures);
  return failures;
}
