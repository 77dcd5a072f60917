#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nnea/batch.hpp"
#include "nnea/bounds.hpp"
#include "nnea/config.hpp"
#include "nnea/exact_chain.hpp"

namespace nnea {

// shortest round-trippable decimal form, locale independent
std::string fmt17(double v);

std::string csv_field(const std::string& s);
std::vector<std::string> csv_split(const std::string& line);

// every writer takes a list of cells; a single run is a one-cell list
void write_trials_csv(const std::string& path,
                      const std::vector<BatchResult>& cells);
void write_summary_csv(const std::string& path,
                       const std::vector<BatchResult>& cells);
// one rate_n<k>.csv per distinct n, rows ordered by N
void write_rate_csvs(const std::string& dir,
                     const std::vector<BatchResult>& cells);
// one ecdf_n<k>_N<m>.csv per cell
void write_ecdf_csvs(const std::string& dir,
                     const std::vector<BatchResult>& cells);
void write_takeover_csv(const std::string& path,
                        const std::vector<BatchResult>& cells);
void write_timelines_jsonl(const std::string& path,
                           const std::vector<BatchResult>& cells);
void write_bounds_csv(const std::string& path,
                      const std::vector<BoundCheck>& checks);

void write_expected_tau_csv(const std::string& path, ChainModel& chain);
void write_hitting_cdf_csv(const std::string& path,
                           const ChainModel::CdfResult& cdf);

// the manifest doubles as a config file: comment lines carry the tool
// version, the subcommand, and the grid; the body is the canonical config
void write_manifest(const std::string& path, const std::string& command,
                    const ExperimentConfig& cfg, const std::string& grid);

// raw trial rows as stored on disk, carrying their cell settings
struct TrialFileRow {
  std::string experiment_id;
  ProblemKind problem = ProblemKind::TrapZeros;
  int n = 0;
  int N = 0;
  double epsilon = 0.0;
  std::int64_t eval_budget = 0;
  TrialRecord rec;
};

std::vector<TrialFileRow> read_trials_csv(const std::string& path);

struct TimelineRow {
  int n = 0;
  int N = 0;
  std::int64_t trial = 0;
  Segment seg;
};

std::vector<TimelineRow> read_timelines_jsonl(const std::string& path);

// rebuilds summary.csv, rate_n*.csv, ecdf_*.csv, and takeover.csv in
// out_dir from the raw trials.csv and timelines.jsonl in bundle_dir
void rebuild_bundle_reports(const std::string& bundle_dir,
                            const std::string& out_dir);

}  // namespace nnea
