// mcov: covering numbers, structure checks and pyramids for small matroids.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "mcov/mcov.hpp"

namespace fs = std::filesystem;
using namespace mcov;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

MinorView load(const std::string& path) { return MinorView(read_matroid_file(path)); }

Subset to_subset(const std::vector<int>& v, const MinorView& m) {
  Subset s;
  for (int e : v) {
    if (e < 0 || e >= m.base()->size())
      throw Error(Errc::ElementOutOfRange, "element " + std::to_string(e) + " out of range");
    s = s.with(e);
  }
  return s;
}

void print_cover(const MinorView& m, const CoverResult& r) {
  std::cout << r.value << '\n' << serialize_cover(m, r.witness);
}

/// Writes the pyramid plus its base matroid next to it.
void save_pyramid(const Pyramid& p, const std::string& out) {
  const fs::path path(out);
  const fs::path mat = path.string() + ".matroid";
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream mo(mat);
  write_matroid(mo, *p.ctx.base());
  std::ofstream po(path);
  write_pyramid(po, p, mat.filename().string());
  if (!po || !mo) throw Error(Errc::ParseError, "cannot write " + out);
}

void emit_pyramid(const Pyramid& p, const std::string& out) {
  if (!out.empty()) {
    save_pyramid(p, out);
    std::cout << "wrote " << out << '\n';
    return;
  }
  std::ostringstream base;
  write_matroid(base, *p.ctx.base());
  write_pyramid(std::cout, p, "-");
  std::cout << "# base\n" << base.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Covering numbers and structure checks for small matroids"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, family_file, out;
  int a = 1, b = 2;
  std::uint64_t d = 2;
  std::vector<int> subset;
  bool subset_given = false;

  auto* tau = app.add_subcommand("tau", "Exact a-covering number with a witness cover");
  tau->add_option("--a", a, "Rank bound")->required()->check(CLI::Range(0, 64));
  tau->add_option("file", file, "Matroid file")->required();

  auto* tauw = app.add_subcommand("tauw", "Weighted covering number tau^d");
  tauw->add_option("--d", d, "Weight base")->required()->check(CLI::Range(1, 1 << 20));
  tauw->add_option("file", file, "Matroid file")->required();

  auto* thick = app.add_subcommand("thickness", "Thickness of the ground set or a subset");
  thick->add_option("file", file, "Matroid file")->required();
  auto* subset_opt = thick->add_option("--subset", subset, "Elements of X");

  auto* firm = app.add_subcommand("firm", "Is a family d-firm");
  firm->add_option("--d", d, "Firmness parameter")->required()->check(CLI::PositiveNumber);
  firm->add_option("--family", family_file, "Family file")->required();
  firm->add_option("file", file, "Matroid file")->required();

  auto* scatter = app.add_subcommand("scatter", "Is a family d-scattered");
  scatter->add_option("--d", d, "Weight base")->required()->check(CLI::PositiveNumber);
  scatter->add_option("--family", family_file, "Family file")->required();
  scatter->add_option("file", file, "Matroid file")->required();

  auto* minor = app.add_subcommand("minor", "Search for a U_{r,b}-minor");
  std::vector<int> uni;
  minor->add_option("--uniform", uni, "Rank and size of the uniform matroid")->required()->expected(2);
  minor->add_option("file", file, "Matroid file")->required();

  auto* ckd = app.add_subcommand("cover-kd", "Constructive cover of a U(a,b) matroid by rank-a flats");
  ckd->add_option("--a", a, "Rank of the cover sets")->required()->check(CLI::Range(1, 64));
  ckd->add_option("--b", b, "Excluded arc size")->required()->check(CLI::Range(2, 64));
  ckd->add_option("file", file, "Matroid file")->required();

  auto* pyr = app.add_subcommand("pyramid", "Pyramid operations");
  pyr->require_subcommand(1);
  std::string pfile;
  int q = 2, h = 1, i = 0, j = 0, hp = 0, e = 0;
  auto* pverify = pyr->add_subcommand("verify", "Check every pyramid condition");
  pverify->add_option("pyramid", pfile, "Pyramid file")->required();
  auto* ppg = pyr->add_subcommand("pg", "Pyramid inside PG(h, q)");
  ppg->add_option("--q", q, "Field order")->required();
  ppg->add_option("--height", h, "Height")->required()->check(CLI::Range(0, 8));
  ppg->add_option("--d", d, "Thickness parameter");
  ppg->add_option("--out", out, "Output pyramid file");
  auto* pshrink = pyr->add_subcommand("shrink", "Contract spine elements i+1..j");
  pshrink->add_option("--i", i)->required();
  pshrink->add_option("--j", j)->required();
  pshrink->add_option("pyramid", pfile)->required();
  pshrink->add_option("--out", out);
  auto* pbound = pyr->add_subcommand("bound", "Rank-(a+h') restriction");
  pbound->add_option("--hp", hp, "New height h'")->required();
  pbound->add_option("pyramid", pfile)->required();
  pbound->add_option("--out", out);
  auto* paug = pyr->add_subcommand("augment", "Add a new first spine element");
  std::string mfile;
  paug->add_option("--matroid", mfile, "Matroid M")->required();
  paug->add_option("--element", e, "Element e")->required();
  paug->add_option("--family", family_file, "Family of M")->required();
  paug->add_option("--q", q, "Witnesses per level, minus one")->required();
  paug->add_option("pyramid", pfile, "Pyramid on a minor of M/e")->required();
  paug->add_option("--out", out);
  auto* pclimb = pyr->add_subcommand("climb", "Climb a height-1 pyramid");
  pclimb->add_option("--d", d)->required();
  pclimb->add_option("--a", a)->required();
  pclimb->add_option("--family", family_file, "Subfamily X")->required();
  pclimb->add_option("pyramid", pfile)->required();

  auto* check = app.add_subcommand("check", "Run the lemma verification suite");
  SuiteConfig cfg;
  std::string witness_dir;
  bool timing = false;
  check->add_option("--suite", cfg.catalog, "Catalog name or 'all'")->required();
  check->add_option("--seed", cfg.seed, "Seed");
  check->add_option("--lemma", cfg.lemmas, "Only these lemmas");
  check->add_option("--jobs", cfg.jobs, "Worker threads")->check(CLI::Range(1, 256));
  check->add_option("--witness-dir", witness_dir, "Directory for counterexample files");
  check->add_flag("--timing", timing, "Record wall time per check");

  auto* cat = app.add_subcommand("catalog", "Write catalog matroids to files");
  std::string emit_dir, cat_name = "all";
  std::uint64_t cat_seed = 42;
  cat->add_option("--emit", emit_dir, "Output directory")->required();
  cat->add_option("--suite", cat_name, "Catalog name");
  cat->add_option("--seed", cat_seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  subset_given = subset_opt->count() > 0;

  try {
    if (*tau) {
      const MinorView m = load(file);
      print_cover(m, tau_a(m, a));
    } else if (*tauw) {
      const MinorView m = load(file);
      print_cover(m, tau_weighted(m, d));
    } else if (*thick) {
      const MinorView m = load(file);
      const Subset x = subset_given ? to_subset(subset, m) : m.ground();
      std::cout << to_string(thickness(m, x)) << '\n';
    } else if (*firm) {
      const MinorView m = load(file);
      const SetFamily fam = read_family_file(family_file, m.base()->size());
      const FirmnessResult r = is_d_firm(m, fam, d);
      if (r.firm) {
        std::cout << "firm\n";
      } else {
        std::cout << "not-firm flat {" << to_string(r.flat) << "} members";
        for (std::size_t k : r.violating) std::cout << ' ' << k;
        std::cout << '\n';
      }
    } else if (*scatter) {
      const MinorView m = load(file);
      const SetFamily fam = read_family_file(family_file, m.base()->size());
      std::cout << (is_d_scattered(m, fam, d) ? "scattered" : "not-scattered") << '\n';
    } else if (*minor) {
      const MinorView m = load(file);
      if (uni[0] < 2 || uni[1] <= uni[0]) {
        std::cerr << "need 2 <= r < b for U_{r,b}\n";
        return kExitUsage;
      }
      const auto w = has_uniform_minor(m, uni[0] - 1, uni[1]);
      if (!w) std::cout << "none\n";
      else std::cout << "contract {" << to_string(w->contract) << "} arc {" << to_string(w->arc) << "}\n";
    } else if (*ckd) {
      const MinorView m = load(file);
      const FlatCover c = kdensity_cover(m, a, b);
      std::cout << c.flats.size() << '\n' << serialize_cover(m, c);
    } else if (*pyr) {
      if (*pverify) {
        const PyramidVerdict v = verify_pyramid(read_pyramid_file(pfile));
        if (v) {
          std::cout << "valid\n";
        } else {
          std::cout << "invalid condition=" << v.condition << " level=" << v.level << " member=" << v.member
                    << ' ' << v.message << '\n';
          return kExitFail;
        }
      } else if (*ppg) {
        emit_pyramid(pg_pyramid(q, h, d), out);
      } else if (*pshrink) {
        emit_pyramid(shrink_pyramid(read_pyramid_file(pfile), i, j), out);
      } else if (*pbound) {
        emit_pyramid(bound_pyramid(read_pyramid_file(pfile), hp), out);
      } else if (*paug) {
        const MinorView m = load(mfile);
        const Pyramid p = read_pyramid_file(pfile);
        if (p.ctx.base()->size() != m.base()->size())
          throw Error(Errc::PreconditionViolated, "pyramid and matroid have different ground sets");
        // The pyramid file names its own copy of the base; rebase it onto M.
        Pyramid pm = p;
        pm.ctx = m.minor(p.ctx.contracted(), p.ctx.deleted());
        emit_pyramid(augment_pyramid(m, e, read_family_file(family_file, m.base()->size()), q, pm), out);
      } else if (*pclimb) {
        const Pyramid p = read_pyramid_file(pfile);
        const SetFamily x = read_family_file(family_file, p.ctx.base()->size());
        const ClimbResult r = climb_inductive(p, x, a, d);
        if (r.kind == ClimbResult::Kind::FirmUp) {
          std::cout << "firm-up\n";
          write_family(std::cout, r.firm_up);
        } else {
          std::cout << "lifted " << r.lifted.size() << '\n';
          for (const auto& fam : r.lifted) {
            write_family(std::cout, fam);
            std::cout << '\n';
          }
        }
      }
    } else if (*check) {
      std::vector<CheckReport> reports = run_suite(cfg, timing);
      if (!witness_dir.empty()) write_witnesses(reports, witness_dir);
      std::map<std::string, std::map<std::string, int>> counts;
      bool failed = false, budget = false;
      for (const auto& r : reports) {
        std::cout << format_report(r) << '\n';
        counts[r.lemma][verdict_name(r.verdict)]++;
        failed = failed || r.verdict == Verdict::Fail;
        budget = budget || r.verdict == Verdict::BudgetExceeded;
      }
      for (const auto& [lemma, c] : counts) {
        std::cerr << lemma;
        for (const auto& [v, n] : c) std::cerr << ' ' << v << '=' << n;
        std::cerr << '\n';
      }
      if (failed) return kExitFail;
      if (budget) return kExitBudget;
    } else if (*cat) {
      fs::create_directories(emit_dir);
      for (const auto& entry : catalog_generate(cat_name, cat_seed)) {
        std::ofstream o(fs::path(emit_dir) / (entry.id + ".matroid"));
        write_matroid(o, *entry.matroid);
      }
    }
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    if (err.code() == Errc::SearchBudgetExceeded) return kExitBudget;
    if (err.code() == Errc::ConstructionFailed) return kExitFail;
    return kExitUsage;
  }
  return kExitOk;
}
