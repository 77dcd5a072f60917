#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "nnea/batch.hpp"
#include "nnea/bounds.hpp"
#include "nnea/config.hpp"
#include "nnea/errors.hpp"
#include "nnea/exact_chain.hpp"
#include "nnea/reports.hpp"

using namespace nnea;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = "test_reports_tmp";

struct TmpDir {
  TmpDir() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
  ~TmpDir() { fs::remove_all(kTmp); }
  std::string operator/(const std::string& name) const {
    return (kTmp / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.is_open());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BatchResult small_trap_batch() {
  ExperimentConfig cfg;
  cfg.n = 8;
  cfg.N = 2;
  cfg.trials = 10;
  cfg.seed = 3;
  cfg.experiment_id = "report-test";
  cfg.finalize();
  return run_batch(cfg, 1, true);
}

}  // namespace

TEST_CASE("fmt17 is shortest-exact and locale free") {
  CHECK(fmt17(kDefaultEpsilon) == "0.98039215686274517");
  CHECK(fmt17(0.25) == "0.25");
  CHECK(fmt17(1.0) == "1");
  CHECK(fmt17(0.0) == "0");
  for (const double v : {1.0 / 3.0, 2e-300, 6.02214076e23, -0.1}) {
    double back = 0.0;
    const std::string s = fmt17(v);
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
}

TEST_CASE("csv quoting round trips") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  const std::vector<std::string> fields = {"plain", "a,b", "say \"hi\"", ""};
  std::string line;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) line += ',';
    line += csv_field(fields[i]);
  }
  CHECK(csv_split(line) == fields);
  CHECK(csv_split(",,") == std::vector<std::string>{"", "", ""});
}

TEST_CASE("trial rows survive the disk round trip") {
  const TmpDir tmp;
  const BatchResult res = small_trap_batch();
  const std::string path = tmp / "trials.csv";
  write_trials_csv(path, {res});

  std::istringstream head(slurp(path));
  std::string header;
  std::getline(head, header);
  CHECK(header ==
        "experiment_id,problem,n,N,epsilon,eval_budget,trial,seed,hit,"
        "tau_generations,evaluations,first_s0_gen,first_sstar_gen,"
        "b_full_takeover_gen,early_aborted");

  const auto rows = read_trials_csv(path);
  REQUIRE(rows.size() == res.records.size());
  bool saw_miss = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    const TrialFileRow& row = rows[i];
    const TrialRecord& rec = res.records[i];
    CHECK(row.experiment_id == "report-test");
    CHECK(row.problem == ProblemKind::TrapZeros);
    CHECK(row.n == 8);
    CHECK(row.N == 2);
    CHECK(row.epsilon == kDefaultEpsilon);  // bit-exact through fmt17
    CHECK(row.eval_budget == 1280);
    CHECK(row.rec.trial == rec.trial);
    CHECK(row.rec.stream_seed == rec.stream_seed);
    CHECK(row.rec.hit == rec.hit);
    CHECK(row.rec.tau == rec.tau);
    CHECK(row.rec.evaluations == rec.evaluations);
    CHECK(row.rec.first_s0_gen == rec.first_s0_gen);
    CHECK(row.rec.first_sstar_gen == rec.first_sstar_gen);
    CHECK(row.rec.full_s0_gen == rec.full_s0_gen);
    CHECK(row.rec.early_aborted == rec.early_aborted);
    if (!rec.hit) saw_miss = true;
  }
  CHECK(saw_miss);  // ensures the empty-cell encoding of tau was exercised

  CHECK_THROWS_AS(read_trials_csv(tmp / "missing.csv"), IoError);
  CHECK_THROWS_AS(write_trials_csv("/nonexistent_dir_xyz/t.csv", {res}),
                  IoError);
}

TEST_CASE("timeline segments survive the disk round trip") {
  const TmpDir tmp;
  const BatchResult res = small_trap_batch();
  const std::string path = tmp / "timelines.jsonl";
  write_timelines_jsonl(path, {res});

  std::vector<std::pair<std::int64_t, Segment>> expected;
  for (const TrialRecord& rec : res.records) {
    for (const Segment& seg : rec.segments) {
      if (seg.side == PopClass::E0) continue;
      expected.emplace_back(rec.trial, seg);
    }
  }
  REQUIRE_FALSE(expected.empty());

  const auto rows = read_timelines_jsonl(path);
  REQUIRE(rows.size() == expected.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].n == 8);
    CHECK(rows[i].N == 2);
    CHECK(rows[i].trial == expected[i].first);
    const Segment& want = expected[i].second;
    CHECK(rows[i].seg.side == want.side);
    CHECK(rows[i].seg.rho == want.rho);
    CHECK(rows[i].seg.entry_gen == want.entry_gen);
    CHECK(rows[i].seg.takeover_gen == want.takeover_gen);
    CHECK(rows[i].seg.exit_gen == want.exit_gen);
    CHECK(rows[i].seg.exit_kind == want.exit_kind);
    CHECK(rows[i].seg.max_count == want.max_count);
  }
}

TEST_CASE("timeline reader reports the offending line") {
  const TmpDir tmp;
  const std::string path = tmp / "bad.jsonl";
  {
    std::ofstream out(path);
    out << R"({"n":8,"N":2,"trial":0,"side":"A","rho":1,"entry_gen":1,)"
        << R"("takeover_gen":null,"exit_gen":null,"exit_kind":"e",)"
        << R"("max_count":1})" << "\n";
    out << "not json\n";
  }
  CHECK_THROWS_WITH_AS(read_timelines_jsonl(path), doctest::Contains(":2:"),
                       IoError);

  const std::string path2 = tmp / "badside.jsonl";
  {
    std::ofstream out(path2);
    out << R"({"n":8,"N":2,"trial":0,"side":"Q","rho":1,"entry_gen":1,)"
        << R"("takeover_gen":null,"exit_gen":null,"exit_kind":"e",)"
        << R"("max_count":1})" << "\n";
  }
  CHECK_THROWS_WITH_AS(read_timelines_jsonl(path2),
                       doctest::Contains("unknown side"), IoError);
}

TEST_CASE("rebuilding reports from the raw bundle is byte identical") {
  const TmpDir tmp;
  const BatchResult res = small_trap_batch();
  const std::string bundle = tmp / "bundle";
  const std::string rebuilt = tmp / "rebuilt";
  fs::create_directories(bundle);
  fs::create_directories(rebuilt);

  write_trials_csv(bundle + "/trials.csv", {res});
  write_timelines_jsonl(bundle + "/timelines.jsonl", {res});
  write_summary_csv(bundle + "/summary.csv", {res});
  write_rate_csvs(bundle, {res});
  write_ecdf_csvs(bundle, {res});
  write_takeover_csv(bundle + "/takeover.csv", {res});

  rebuild_bundle_reports(bundle, rebuilt);
  for (const char* name :
       {"/summary.csv", "/rate_n8.csv", "/ecdf_n8_N2.csv", "/takeover.csv"}) {
    CAPTURE(name);
    CHECK(slurp(rebuilt + name) == slurp(bundle + name));
  }
}

TEST_CASE("the manifest parses back as a config") {
  const TmpDir tmp;
  ExperimentConfig cfg;
  cfg.n = 12;
  cfg.N = 7;
  cfg.seed = 1234;
  cfg.finalize();
  const std::string path = tmp / "manifest.txt";
  write_manifest(path, "sweep --config base.cfg", cfg, "8:1,12:7");

  const std::string text = slurp(path);
  CHECK(text.rfind("# nnea ", 0) == 0);
  CHECK(text.find("# command: sweep --config base.cfg\n") != std::string::npos);
  CHECK(text.find("# grid: 8:1,12:7\n") != std::string::npos);

  const ExperimentConfig back = parse_config_file(path);
  CHECK(back.n == cfg.n);
  CHECK(back.N == cfg.N);
  CHECK(back.seed == cfg.seed);
  CHECK(back.eval_budget == cfg.eval_budget);
  CHECK(back.epsilon == cfg.epsilon);
}

TEST_CASE("bound checks are written one per row") {
  const TmpDir tmp;
  std::vector<BoundCheck> checks;
  checks.push_back(run_bound_case(
      BoundKind::ChernoffLower,
      {{"m", 100.0}, {"p", 0.5}, {"psi", 0.5}}));
  checks.push_back(run_bound_case(BoundKind::Markov,
                                  {{"m", 10.0}, {"p", 0.5}, {"a", 5.5}}));
  const std::string path = tmp / "bounds.csv";
  write_bounds_csv(path, checks);

  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  CHECK(line == "kind,params,exact,bound,lower_bound,vacuous,satisfied");
  std::getline(in, line);
  CHECK(line.rfind("ChernoffLower,", 0) == 0);
  CHECK(line.find("m=100") != std::string::npos);
  std::getline(in, line);
  CHECK(line.rfind("Markov,", 0) == 0);
  CHECK_FALSE(std::getline(in, line));
}

TEST_CASE("chain table writers emit exact small cases") {
  const TmpDir tmp;
  ChainModel chain = ChainModel::build(ProblemKind::OneMax, 2);

  const std::string vpath = tmp / "expected_tau.csv";
  write_expected_tau_csv(vpath, chain);
  CHECK(slurp(vpath) ==
        "state_hex,fitness,expected_tau\n"
        "0,0,4\n"
        "1,1,4\n"
        "2,1,4\n"
        "3,2,0\n");

  const std::string cpath = tmp / "hitting_cdf.csv";
  write_hitting_cdf_csv(cpath, chain.hitting_cdf_uniform(2));
  CHECK(slurp(cpath) ==
        "t,p_tau_le_t\n"
        "0,0.25\n"
        "1,0.4375\n"
        "2,0.578125\n");
}
