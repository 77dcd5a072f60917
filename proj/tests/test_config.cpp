#include <string>

#include "doctest.h"
#include "nnea/config.hpp"
#include "nnea/errors.hpp"

using namespace nnea;

TEST_CASE("defaults and finalize budget rule") {
  ExperimentConfig cfg;
  CHECK(cfg.problem == ProblemKind::TrapZeros);
  CHECK(cfg.n == 100);
  CHECK(cfg.N == 1);
  CHECK(cfg.trials == 100);
  CHECK(cfg.seed == 1);
  CHECK(cfg.eval_budget == 0);
  CHECK(cfg.epsilon == kDefaultEpsilon);
  CHECK_FALSE(cfg.early_abort);
  CHECK(cfg.experiment_id == "run");

  const auto notes = cfg.finalize();
  CHECK(notes.empty());
  CHECK(cfg.eval_budget == 200000);  // 20 * n^2 when left at zero

  ExperimentConfig small;
  small.n = 8;
  small.finalize();
  CHECK(small.eval_budget == 1280);

  ExperimentConfig pinned;
  pinned.eval_budget = 4242;
  pinned.finalize();
  CHECK(pinned.eval_budget == 4242);  // explicit budgets stay put
}

TEST_CASE("emit and parse round trip every field") {
  ExperimentConfig cfg;
  cfg.problem = ProblemKind::OneMax;
  cfg.n = 37;
  cfg.N = 9;
  cfg.trials = 5000;
  cfg.seed = 18446744073709551615ULL;
  cfg.eval_budget = 123456789;
  cfg.epsilon = 0.75;
  cfg.early_abort = true;
  cfg.experiment_id = "round-trip";

  const ExperimentConfig back = parse_config_text(emit_config(cfg));
  CHECK(back.problem == cfg.problem);
  CHECK(back.n == cfg.n);
  CHECK(back.N == cfg.N);
  CHECK(back.trials == cfg.trials);
  CHECK(back.seed == cfg.seed);
  CHECK(back.eval_budget == cfg.eval_budget);
  CHECK(back.epsilon == cfg.epsilon);
  CHECK(back.early_abort == cfg.early_abort);
  CHECK(back.experiment_id == cfg.experiment_id);

  // the default threshold survives the 17-digit text form bit-exactly
  ExperimentConfig dflt;
  const ExperimentConfig back2 = parse_config_text(emit_config(dflt));
  CHECK(back2.epsilon == kDefaultEpsilon);
}

TEST_CASE("comments, blanks and section markers are skipped") {
  const ExperimentConfig cfg = parse_config_text(
      "# nnea 0.1.0\n"
      "# command: simulate --config run.cfg\n"
      "\n"
      "[experiment]\n"
      "problem = trapzeros\n"
      "  n = 12  \n"
      "trials=7\n");
  CHECK(cfg.problem == ProblemKind::TrapZeros);
  CHECK(cfg.n == 12);
  CHECK(cfg.trials == 7);
  CHECK(cfg.N == 1);
}

TEST_CASE("malformed configs are rejected") {
  CHECK_THROWS_WITH_AS(parse_config_text("speed=9\n"),
                       doctest::Contains("unknown config key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("n=5\nn=6\n"),
                       doctest::Contains("appears twice"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("n=abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("epsilon=half\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("early_abort=maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("experiment_id=\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("n=5\njust words\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("overrides reuse the config grammar") {
  ExperimentConfig cfg;
  apply_override(cfg, "N=44");
  apply_override(cfg, "early_abort=true");
  CHECK(cfg.N == 44);
  CHECK(cfg.early_abort);
  CHECK_THROWS_AS(apply_override(cfg, "N:44"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "speed=9"), ConfigError);
}

TEST_CASE("finalize validates ranges") {
  auto with = [](auto mut) {
    ExperimentConfig cfg;
    mut(cfg);
    return cfg;
  };
  auto bad_n = with([](ExperimentConfig& c) { c.n = 2; });
  CHECK_THROWS_AS(bad_n.finalize(), ConfigError);
  auto bad_onemax = with([](ExperimentConfig& c) {
    c.problem = ProblemKind::OneMax;
    c.n = 0;
  });
  CHECK_THROWS_AS(bad_onemax.finalize(), ConfigError);
  auto bad_N = with([](ExperimentConfig& c) { c.N = 0; });
  CHECK_THROWS_AS(bad_N.finalize(), ConfigError);
  auto bad_trials = with([](ExperimentConfig& c) { c.trials = 0; });
  CHECK_THROWS_AS(bad_trials.finalize(), ConfigError);
  auto bad_eps_lo = with([](ExperimentConfig& c) { c.epsilon = 0.0; });
  CHECK_THROWS_AS(bad_eps_lo.finalize(), ConfigError);
  auto bad_eps_hi = with([](ExperimentConfig& c) { c.epsilon = 1.2; });
  CHECK_THROWS_AS(bad_eps_hi.finalize(), ConfigError);
  auto bad_budget = with([](ExperimentConfig& c) { c.eval_budget = -1; });
  CHECK_THROWS_AS(bad_budget.finalize(), ConfigError);
  auto tiny_budget = with([](ExperimentConfig& c) {
    c.eval_budget = 3;
    c.N = 5;
  });
  CHECK_THROWS_AS(tiny_budget.finalize(), ConfigError);
}

TEST_CASE("finalize emits advisory notes") {
  ExperimentConfig huge;
  huge.n = 3;
  huge.N = 28;  // just past n^3
  const auto notes = huge.finalize();
  REQUIRE(notes.size() == 1);
  CHECK(notes[0].find("outside the studied regime") != std::string::npos);

  ExperimentConfig om;
  om.problem = ProblemKind::OneMax;
  om.early_abort = true;
  const auto notes2 = om.finalize();
  REQUIRE(notes2.size() == 1);
  CHECK(notes2[0].find("early_abort") != std::string::npos);
}
