#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mcov/harness.hpp"

using namespace mcov;

namespace {

std::string render(const std::vector<CheckReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) out << format_report(r) << '\n';
  return out.str();
}

SuiteConfig quick(const std::string& catalog) {
  SuiteConfig cfg;
  cfg.catalog = catalog;
  cfg.seed = 7;
  cfg.minor_chains = 10;
  cfg.rank_pairs = 100;
  return cfg;
}

}  // namespace

TEST(Suite, DeterministicAcrossRunsAndWorkers) {
  SuiteConfig cfg = quick("small-graphic");
  const std::string one = render(run_suite(cfg));
  EXPECT_EQ(one, render(run_suite(cfg)));
  cfg.jobs = 4;
  EXPECT_EQ(one, render(run_suite(cfg)));
  cfg.seed = 8;
  cfg.lemmas = {"rank-axioms"};
  EXPECT_FALSE(render(run_suite(cfg)).empty());
}

TEST(Suite, ReportsAreSortedAndWellFormed) {
  SuiteConfig cfg = quick("small-pg");
  cfg.lemmas = {"kdensity", "coveringcompare", "sizepyramid"};
  const auto reports = run_suite(cfg);
  ASSERT_FALSE(reports.empty());
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& x = reports[i - 1];
    const auto& y = reports[i];
    EXPECT_TRUE(x.lemma < y.lemma || (x.lemma == y.lemma && x.instance <= y.instance));
  }
  for (const auto& r : reports) {
    EXPECT_NE(r.verdict, Verdict::Fail) << format_report(r);
    const std::string line = format_report(r);
    EXPECT_EQ(std::count(line.begin(), line.end(), '\t'), 5);
    EXPECT_EQ(line.substr(line.rfind('\t') + 1), "-");
  }
}

TEST(Suite, CoversTheWholeGrid) {
  SuiteConfig cfg = quick("small-uniform");
  cfg.lemmas = {"kdensity"};
  const auto reports = run_suite(cfg);
  // 44 instances, a in 1..3, b in a+1..9
  EXPECT_EQ(reports.size(), 44u * (8 + 7 + 6));
  int pass = 0, vacuous = 0;
  for (const auto& r : reports) {
    pass += r.verdict == Verdict::Pass;
    vacuous += r.verdict == Verdict::Vacuous;
  }
  EXPECT_GT(pass, 0);
  EXPECT_GT(vacuous, 0);
  EXPECT_EQ(pass + vacuous, static_cast<int>(reports.size()));
}

TEST(Suite, RejectsUnknownLemmas) {
  SuiteConfig cfg = quick("small-pg");
  cfg.lemmas = {"no-such-lemma"};
  EXPECT_THROW(run_suite(cfg), Error);
  cfg.lemmas.clear();
  cfg.catalog = "no-such-catalog";
  EXPECT_THROW(run_suite(cfg), Error);
}

TEST(Suite, TinyBudgetIsReportedNotThrown) {
  SuiteConfig cfg = quick("small-pg");
  cfg.lemmas = {"kdensity"};
  cfg.budget = 2;
  bool saw_budget = false;
  for (const auto& r : run_suite(cfg)) saw_budget = saw_budget || r.verdict == Verdict::BudgetExceeded;
  EXPECT_TRUE(saw_budget);
}

TEST(Suite, WitnessFilesForFailures) {
  std::vector<CheckReport> reports(2);
  reports[0] = {"kdensity", "pg-2-2", "a=1,b=2", Verdict::Fail, "-", "matroid pg 3 2\n", -1, 0};
  reports[1] = {"kdensity", "pg-2-3", "a=1,b=2", Verdict::Pass, "-", "", -1, 1};
  const auto dir = std::filesystem::temp_directory_path() / "mcov_witness_test";
  std::filesystem::remove_all(dir);
  write_witnesses(reports, dir);
  ASSERT_NE(reports[0].witness_path, "-");
  EXPECT_EQ(reports[1].witness_path, "-");
  std::ifstream in(reports[0].witness_path);
  std::string header, body;
  std::getline(in, header);
  std::getline(in, body);
  EXPECT_EQ(header, "# kdensity pg-2-2 a=1,b=2");
  EXPECT_EQ(body, "matroid pg 3 2");
  std::filesystem::remove_all(dir);
}

TEST(Suite, EveryLemmaRunsClean) {
  SuiteConfig cfg = quick("small-pg");
  for (const auto& id : lemma_ids()) {
    cfg.lemmas = {id};
    const auto reports = run_suite(cfg);
    EXPECT_FALSE(reports.empty()) << id;
    for (const auto& r : reports) EXPECT_NE(r.verdict, Verdict::Fail) << format_report(r) << '\n' << r.witness;
  }
}
