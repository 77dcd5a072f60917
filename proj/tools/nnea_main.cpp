#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nnea/batch.hpp"
#include "nnea/bounds.hpp"
#include "nnea/config.hpp"
#include "nnea/errors.hpp"
#include "nnea/exact_chain.hpp"
#include "nnea/reports.hpp"
#include "nnea/version.hpp"

namespace {

using namespace nnea;

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
  ExperimentConfig cfg = parse_config_file(path);
  for (const std::string& kv : overrides) apply_override(cfg, kv);
  for (const std::string& note : cfg.finalize()) {
    std::cerr << "note: " << note << "\n";
  }
  return cfg;
}

void write_run_bundle(const std::string& out_dir, const std::string& command,
                      const ExperimentConfig& manifest_cfg,
                      const std::string& grid,
                      const std::vector<BatchResult>& cells) {
  std::filesystem::create_directories(out_dir);
  write_manifest(out_dir + "/manifest.txt", command, manifest_cfg, grid);
  write_trials_csv(out_dir + "/trials.csv", cells);
  write_summary_csv(out_dir + "/summary.csv", cells);
  write_rate_csvs(out_dir, cells);
  write_ecdf_csvs(out_dir, cells);
  bool any_trap = false;
  for (const BatchResult& cell : cells) {
    any_trap = any_trap || cell.cfg.problem == ProblemKind::TrapZeros;
  }
  if (any_trap) {
    write_timelines_jsonl(out_dir + "/timelines.jsonl", cells);
    write_takeover_csv(out_dir + "/takeover.csv", cells);
  }
}

void print_cells(const std::vector<BatchResult>& cells) {
  for (const BatchResult& cell : cells) {
    std::cout << "n=" << cell.cfg.n << " N=" << cell.cfg.N
              << " trials=" << cell.rate.trials
              << " hits=" << cell.rate.successes
              << " p_hat=" << fmt17(cell.rate.p_hat) << " wilson=["
              << fmt17(cell.rate.wilson_lo) << ", "
              << fmt17(cell.rate.wilson_hi) << "]";
    if (cell.rate.successes > 0) {
      std::cout << " mean_tau_hits=" << fmt17(cell.mean_tau_hits);
    }
    if (cell.early_aborts > 0) {
      std::cout << " early_aborts=" << cell.early_aborts;
    }
    std::cout << "\n";
  }
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int workers, const std::vector<std::string>& overrides) {
  const ExperimentConfig cfg = load_config(config_path, overrides);
  const std::vector<BatchResult> cells = {run_batch(cfg, workers, true)};
  write_run_bundle(out_dir, "simulate", cfg, "", cells);
  print_cells(cells);
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& grid_text,
              const std::string& out_dir, int workers,
              const std::vector<std::string>& overrides) {
  // cells finalize themselves, so a zero budget rescales with each cell's n
  ExperimentConfig base = parse_config_file(config_path);
  for (const std::string& kv : overrides) apply_override(base, kv);
  const std::vector<std::pair<int, int>> grid = parse_grid(grid_text);
  const std::vector<BatchResult> cells = run_sweep(base, grid, workers);
  write_run_bundle(out_dir, "sweep", base, grid_text, cells);
  print_cells(cells);
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

int cmd_exact(const std::string& problem, int n, std::int64_t horizon,
              const std::string& out_dir) {
  ChainModel chain = ChainModel::build(problem_from_string(problem), n);
  std::filesystem::create_directories(out_dir);
  write_expected_tau_csv(out_dir + "/expected_tau.csv", chain);

  if (horizon < 0) {  // default: the simulation budget at this size
    horizon = n <= 12 ? 20LL * n * n : 0;
    if (horizon == 0) {
      std::cerr << "note: horizon defaults to 0 at n >= 13; pass --horizon "
                   "to pay for a longer table\n";
    }
  }
  const ChainModel::CdfResult cdf = chain.hitting_cdf_uniform(horizon);
  write_hitting_cdf_csv(out_dir + "/hitting_cdf.csv", cdf);

  const auto zeros = std::uint64_t{0};
  std::cout << "states=" << chain.states() << "\n";
  std::cout << "expected_tau_uniform="
            << fmt17(static_cast<double>(chain.expected_from_uniform()))
            << "\n";
  std::cout << "expected_tau_zeros="
            << fmt17(static_cast<double>(chain.expected_from(zeros))) << "\n";
  std::cout << "recurrence_residual="
            << fmt17(static_cast<double>(chain.recurrence_residual())) << "\n";
  std::cout << "p_tau_le_horizon=" << fmt17(static_cast<double>(cdf.mass))
            << " horizon=" << horizon << "\n";
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}

std::vector<BoundCheck> run_cases_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw IoError("cannot read " + path);
  std::vector<BoundCheck> out;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string body = line.substr(0, line.find('#'));
    std::istringstream words(body);
    std::string kind_name;
    if (!(words >> kind_name)) continue;
    std::map<std::string, double> params;
    std::string kv;
    while (words >> kv) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == kv.size()) {
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": expected key=value, got '" + kv + "'");
      }
      try {
        params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      } catch (const std::exception&) {
        throw ConfigError(path + ":" + std::to_string(lineno) +
                          ": bad number in '" + kv + "'");
      }
    }
    try {
      out.push_back(run_bound_case(bound_kind_from_string(kind_name), params));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

int cmd_verify_bounds(const std::string& cases_path, const std::string& out_dir,
                      int tuples, std::uint64_t seed) {
  std::vector<BoundCheck> checks;
  if (tuples > 0) {
    BoundSweepConfig sweep_cfg;
    sweep_cfg.tuples_per_kind = tuples;
    sweep_cfg.seed = seed;
    checks = sweep_bound_checks(sweep_cfg);
  }
  if (!cases_path.empty()) {
    for (BoundCheck& check : run_cases_file(cases_path)) {
      checks.push_back(std::move(check));
    }
  }
  if (checks.empty()) {
    throw ConfigError("nothing to check: pass --tuples >= 1 or --cases");
  }

  std::filesystem::create_directories(out_dir);
  write_bounds_csv(out_dir + "/bounds.csv", checks);

  std::map<BoundKind, std::array<std::int64_t, 3>> tally;
  for (const BoundCheck& check : checks) {
    auto& t = tally[check.kind];
    ++t[0];
    if (check.vacuous) ++t[1];
    if (!check.satisfied) ++t[2];
  }
  std::int64_t violations = 0;
  for (const auto& [kind, t] : tally) {
    std::cout << to_string(kind) << ": checked=" << t[0] << " vacuous=" << t[1]
              << " violations=" << t[2] << "\n";
    violations += t[2];
  }
  std::cout << "wrote " << out_dir << "/bounds.csv\n";
  if (violations > 0) {
    std::cerr << "error: " << violations << " bound check(s) violated\n";
    return 2;
  }
  return 0;
}

int cmd_report(const std::string& bundle_dir, const std::string& out_dir) {
  const std::string target = out_dir.empty() ? bundle_dir : out_dir;
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
  rebuild_bundle_reports(bundle_dir, target);
  std::cout << "rebuilt reports in " << target << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"(N+N) evolutionary algorithm laboratory"};
  app.set_version_flag("--version", std::string("nnea ") + NNEA_VERSION);
  app.require_subcommand(1);

  std::string config_path;
  std::string grid_text;
  std::string out_dir = "nnea_out";
  int workers = 1;

  CLI::App* simulate = app.add_subcommand(
      "simulate", "run one batch of trials and write its bundle");
  simulate->add_option("--config", config_path, "config file")->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber);
  simulate->allow_extras();

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run a grid of (n, N) cells and write one bundle");
  sweep->add_option("--config", config_path, "base config file")->required();
  sweep->add_option("--grid", grid_text, "cells as n:N,n:N,...")->required();
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--workers", workers, "worker threads")
      ->check(CLI::PositiveNumber);
  sweep->allow_extras();

  std::string problem = "trapzeros";
  int chain_n = 8;
  std::int64_t horizon = -1;
  CLI::App* exact = app.add_subcommand(
      "exact", "solve the N=1 chain exactly and write its tables");
  exact->add_option("--problem", problem, "onemax or trapzeros");
  exact->add_option("--n", chain_n, "genome length")->required();
  exact->add_option("--horizon", horizon,
                    "steps tabulated in the hitting-time distribution");
  exact->add_option("--out", out_dir, "output directory");

  std::string cases_path;
  int tuples = 1000;
  std::uint64_t bounds_seed = 1;
  CLI::App* verify = app.add_subcommand(
      "verify-bounds", "compare tail bounds against exact probabilities");
  verify->add_option("--cases", cases_path, "extra cases file");
  verify->add_option("--tuples", tuples, "random tuples per bound kind")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", bounds_seed, "sweep seed");
  verify->add_option("--out", out_dir, "output directory");

  std::string bundle_dir;
  std::string report_out;
  CLI::App* report = app.add_subcommand(
      "report", "rebuild summary tables from a bundle's raw artifacts");
  report->add_option("--bundle", bundle_dir, "bundle directory")->required();
  report->add_option("--out", report_out,
                     "write rebuilt tables here instead of the bundle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(config_path, out_dir, workers, simulate->remaining());
    }
    if (sweep->parsed()) {
      return cmd_sweep(config_path, grid_text, out_dir, workers,
                       sweep->remaining());
    }
    if (exact->parsed()) {
      return cmd_exact(problem, chain_n, horizon, out_dir);
    }
    if (verify->parsed()) {
      return cmd_verify_bounds(cases_path, out_dir, tuples, bounds_seed);
    }
    if (report->parsed()) {
      return cmd_report(bundle_dir, report_out);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
