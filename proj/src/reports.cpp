#include "nnea/reports.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "nnea/errors.hpp"
#include "nnea/stats.hpp"
#include "nnea/version.hpp"

namespace nnea {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out.is_open()) throw IoError("cannot write " + path);
  return out;
}

std::string int_or_empty(std::int64_t v) {
  return v < 0 ? std::string() : std::to_string(v);
}

std::int64_t parse_int_field(const std::string& s, const std::string& what) {
  if (s.empty()) return -1;
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("bad integer in column " + what + ": '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint_field(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("bad unsigned integer in column " + what + ": '" + s + "'");
  }
  return v;
}

double parse_double_field(const std::string& s, const std::string& what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("bad number in column " + what + ": '" + s + "'");
  }
  return v;
}

}  // namespace

std::string fmt17(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                 std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"' && cur.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

void write_trials_csv(const std::string& path,
                      const std::vector<BatchResult>& cells) {
  std::ofstream out = open_out(path);
  out << "experiment_id,problem,n,N,epsilon,eval_budget,trial,seed,hit,"
         "tau_generations,evaluations,first_s0_gen,first_sstar_gen,"
         "b_full_takeover_gen,early_aborted\n";
  for (const BatchResult& cell : cells) {
    const ExperimentConfig& cfg = cell.cfg;
    const std::string prefix = csv_field(cfg.experiment_id) + "," +
                               to_string(cfg.problem) + "," +
                               std::to_string(cfg.n) + "," +
                               std::to_string(cfg.N) + "," +
                               fmt17(cfg.epsilon) + "," +
                               std::to_string(cfg.eval_budget) + ",";
    for (const TrialRecord& rec : cell.records) {
      out << prefix << rec.trial << ',' << rec.stream_seed << ','
          << (rec.hit ? 1 : 0) << ',' << int_or_empty(rec.tau) << ','
          << rec.evaluations << ',' << int_or_empty(rec.first_s0_gen) << ','
          << int_or_empty(rec.first_sstar_gen) << ','
          << int_or_empty(rec.full_s0_gen) << ','
          << (rec.early_aborted ? 1 : 0) << '\n';
    }
  }
}

void write_summary_csv(const std::string& path,
                       const std::vector<BatchResult>& cells) {
  std::ofstream out = open_out(path);
  out << "n,N,trials,successes,p_hat,wilson_lo,wilson_hi,mean_tau_hits,"
         "budget\n";
  for (const BatchResult& cell : cells) {
    out << cell.cfg.n << ',' << cell.cfg.N << ',' << cell.rate.trials << ','
        << cell.rate.successes << ',' << fmt17(cell.rate.p_hat) << ','
        << fmt17(cell.rate.wilson_lo) << ',' << fmt17(cell.rate.wilson_hi)
        << ','
        << (cell.rate.successes > 0 ? fmt17(cell.mean_tau_hits)
                                    : std::string())
        << ',' << cell.cfg.eval_budget << '\n';
  }
}

void write_rate_csvs(const std::string& dir,
                     const std::vector<BatchResult>& cells) {
  std::map<int, std::vector<const BatchResult*>> by_n;
  for (const BatchResult& cell : cells) by_n[cell.cfg.n].push_back(&cell);
  for (auto& [n, group] : by_n) {
    std::sort(group.begin(), group.end(),
              [](const BatchResult* a, const BatchResult* b) {
                return a->cfg.N < b->cfg.N;
              });
    std::ofstream out = open_out(dir + "/rate_n" + std::to_string(n) + ".csv");
    out << "N,p_hat,wilson_lo,wilson_hi\n";
    for (const BatchResult* cell : group) {
      out << cell->cfg.N << ',' << fmt17(cell->rate.p_hat) << ','
          << fmt17(cell->rate.wilson_lo) << ',' << fmt17(cell->rate.wilson_hi)
          << '\n';
    }
  }
}

void write_ecdf_csvs(const std::string& dir,
                     const std::vector<BatchResult>& cells) {
  for (const BatchResult& cell : cells) {
    std::ofstream out =
        open_out(dir + "/ecdf_n" + std::to_string(cell.cfg.n) + "_N" +
                 std::to_string(cell.cfg.N) + ".csv");
    out << "t,ecdf\n";
    for (const auto& [t, frac] : hitting_ecdf(cell.records)) {
      out << t << ',' << fmt17(frac) << '\n';
    }
  }
}

namespace {

void write_takeover_rows(
    const std::string& path,
    const std::vector<std::tuple<int, int, std::vector<TakeoverRow>>>& cells) {
  std::ofstream out = open_out(path);
  out << "n,N,side,rho,entries,takeovers,eta_mean,eta_p50,eta_p90,eta_p99,"
         "eta_max,phi_count,phi_mean,phi_max\n";
  for (const auto& [n, N, rows] : cells) {
    for (const TakeoverRow& row : rows) {
      out << n << ',' << N << ',' << to_string(row.side) << ',' << row.rho
          << ',' << row.entries << ',' << row.takeovers << ','
          << fmt17(row.eta_mean) << ',' << fmt17(row.eta_p50) << ','
          << fmt17(row.eta_p90) << ',' << fmt17(row.eta_p99) << ','
          << row.eta_max << ',' << row.phi_count << ',' << fmt17(row.phi_mean)
          << ',' << row.phi_max << '\n';
    }
  }
}

std::vector<std::vector<Segment>> collect_segments(
    const std::vector<TrialRecord>& records) {
  std::vector<std::vector<Segment>> out;
  out.reserve(records.size());
  for (const TrialRecord& rec : records) out.push_back(rec.segments);
  return out;
}

}  // namespace

void write_takeover_csv(const std::string& path,
                        const std::vector<BatchResult>& cells) {
  std::vector<std::tuple<int, int, std::vector<TakeoverRow>>> rows;
  for (const BatchResult& cell : cells) {
    if (cell.cfg.problem != ProblemKind::TrapZeros) continue;
    rows.emplace_back(cell.cfg.n, cell.cfg.N,
                      summarize_takeovers(collect_segments(cell.records)));
  }
  write_takeover_rows(path, rows);
}

void write_timelines_jsonl(const std::string& path,
                           const std::vector<BatchResult>& cells) {
  std::ofstream out = open_out(path);
  for (const BatchResult& cell : cells) {
    if (cell.cfg.problem != ProblemKind::TrapZeros) continue;
    for (const TrialRecord& rec : cell.records) {
      for (const Segment& seg : rec.segments) {
        // class-E0 stretches carry no label to take over; the summaries skip
        // them, so the stored timelines do too
        if (seg.side == PopClass::E0) continue;
        nlohmann::json j;
        j["n"] = cell.cfg.n;
        j["N"] = cell.cfg.N;
        j["trial"] = rec.trial;
        j["side"] = to_string(seg.side);
        j["rho"] = seg.rho;
        j["entry_gen"] = seg.entry_gen;
        if (seg.takeover_gen >= 0) {
          j["takeover_gen"] = seg.takeover_gen;
        } else {
          j["takeover_gen"] = nullptr;
        }
        if (seg.exit_gen >= 0) {
          j["exit_gen"] = seg.exit_gen;
        } else {
          j["exit_gen"] = nullptr;
        }
        j["exit_kind"] = std::string(1, seg.exit_kind);
        j["max_count"] = seg.max_count;
        out << j.dump() << '\n';
      }
    }
  }
}

void write_bounds_csv(const std::string& path,
                      const std::vector<BoundCheck>& checks) {
  std::ofstream out = open_out(path);
  out << "kind,params,exact,bound,lower_bound,vacuous,satisfied\n";
  for (const BoundCheck& check : checks) {
    std::string params;
    for (const auto& [key, value] : check.params) {
      if (!params.empty()) params += ';';
      params += key + "=" + fmt17(value);
    }
    out << to_string(check.kind) << ',' << csv_field(params) << ','
        << fmt17(check.exact) << ',' << fmt17(check.bound) << ','
        << (check.lower_bound ? 1 : 0) << ',' << (check.vacuous ? 1 : 0) << ','
        << (check.satisfied ? 1 : 0) << '\n';
  }
}

void write_expected_tau_csv(const std::string& path, ChainModel& chain) {
  const std::vector<long double>& V = chain.expected_steps();
  std::ofstream out = open_out(path);
  out << "state_hex,fitness,expected_tau\n";
  char buf[32];
  for (std::int64_t x = 0; x < chain.states(); ++x) {
    const auto res = std::to_chars(buf, buf + sizeof(buf),
                                   static_cast<std::uint64_t>(x), 16);
    out.write(buf, res.ptr - buf);
    out << ',' << chain.fitness_of(static_cast<std::uint64_t>(x)) << ','
        << fmt17(static_cast<double>(V[static_cast<std::size_t>(x)])) << '\n';
  }
}

void write_hitting_cdf_csv(const std::string& path,
                           const ChainModel::CdfResult& cdf) {
  std::ofstream out = open_out(path);
  out << "t,p_tau_le_t\n";
  for (std::size_t t = 0; t < cdf.cdf.size(); ++t) {
    out << t << ',' << fmt17(cdf.cdf[t]) << '\n';
  }
}

void write_manifest(const std::string& path, const std::string& command,
                    const ExperimentConfig& cfg, const std::string& grid) {
  std::ofstream out = open_out(path);
  out << "# nnea " << NNEA_VERSION << "\n";
  out << "# command: " << command << "\n";
  if (!grid.empty()) out << "# grid: " << grid << "\n";
  out << "[config]\n" << emit_config(cfg);
}

std::vector<TrialFileRow> read_trials_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("cannot read " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = csv_split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const auto need = [&](const std::string& name) {
    const auto it = col.find(name);
    if (it == col.end()) {
      throw IoError(path + " is missing column " + name);
    }
    return it->second;
  };
  const std::size_t c_id = need("experiment_id");
  const std::size_t c_problem = need("problem");
  const std::size_t c_n = need("n");
  const std::size_t c_bigN = need("N");
  const std::size_t c_eps = need("epsilon");
  const std::size_t c_budget = need("eval_budget");
  const std::size_t c_trial = need("trial");
  const std::size_t c_seed = need("seed");
  const std::size_t c_hit = need("hit");
  const std::size_t c_tau = need("tau_generations");
  const std::size_t c_evals = need("evaluations");
  const std::size_t c_s0 = need("first_s0_gen");
  const std::size_t c_sstar = need("first_sstar_gen");
  const std::size_t c_full = need("b_full_takeover_gen");
  const std::size_t c_abort = need("early_aborted");

  std::vector<TrialFileRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = csv_split(line);
    if (f.size() != header.size()) {
      throw IoError(path + " has a row with " + std::to_string(f.size()) +
                    " fields, expected " + std::to_string(header.size()));
    }
    TrialFileRow row;
    row.experiment_id = f[c_id];
    row.problem = problem_from_string(f[c_problem]);
    row.n = static_cast<int>(parse_int_field(f[c_n], "n"));
    row.N = static_cast<int>(parse_int_field(f[c_bigN], "N"));
    row.epsilon = parse_double_field(f[c_eps], "epsilon");
    row.eval_budget = parse_int_field(f[c_budget], "eval_budget");
    row.rec.trial = parse_int_field(f[c_trial], "trial");
    row.rec.stream_seed = parse_uint_field(f[c_seed], "seed");
    row.rec.hit = parse_int_field(f[c_hit], "hit") != 0;
    row.rec.tau = parse_int_field(f[c_tau], "tau_generations");
    row.rec.evaluations = parse_int_field(f[c_evals], "evaluations");
    row.rec.first_s0_gen = parse_int_field(f[c_s0], "first_s0_gen");
    row.rec.first_sstar_gen = parse_int_field(f[c_sstar], "first_sstar_gen");
    row.rec.full_s0_gen = parse_int_field(f[c_full], "b_full_takeover_gen");
    row.rec.early_aborted = parse_int_field(f[c_abort], "early_aborted") != 0;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<TimelineRow> read_timelines_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) throw IoError("cannot read " + path);
  std::vector<TimelineRow> rows;
  std::string line;
  std::int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    TimelineRow row;
    row.n = j.at("n").get<int>();
    row.N = j.at("N").get<int>();
    row.trial = j.at("trial").get<std::int64_t>();
    const auto side = j.at("side").get<std::string>();
    if (side == "A") {
      row.seg.side = PopClass::A;
    } else if (side == "B") {
      row.seg.side = PopClass::B;
    } else {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": unknown side " + side);
    }
    row.seg.rho = j.at("rho").get<int>();
    row.seg.entry_gen = j.at("entry_gen").get<std::int64_t>();
    row.seg.takeover_gen = j.at("takeover_gen").is_null()
                               ? -1
                               : j.at("takeover_gen").get<std::int64_t>();
    row.seg.exit_gen =
        j.at("exit_gen").is_null() ? -1 : j.at("exit_gen").get<std::int64_t>();
    const auto kind = j.at("exit_kind").get<std::string>();
    if (kind.size() != 1 || std::string("udse").find(kind) == std::string::npos) {
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": unknown exit kind " + kind);
    }
    row.seg.exit_kind = kind[0];
    row.seg.max_count = j.at("max_count").get<int>();
    rows.push_back(std::move(row));
  }
  return rows;
}

void rebuild_bundle_reports(const std::string& bundle_dir,
                            const std::string& out_dir) {
  const std::vector<TrialFileRow> rows =
      read_trials_csv(bundle_dir + "/trials.csv");
  if (rows.empty()) throw IoError(bundle_dir + "/trials.csv has no rows");

  // regroup rows into cells in first-seen order
  std::vector<BatchResult> cells;
  std::map<std::pair<int, int>, std::size_t> index;
  for (const TrialFileRow& row : rows) {
    const std::pair<int, int> key{row.n, row.N};
    auto it = index.find(key);
    if (it == index.end()) {
      BatchResult cell;
      cell.cfg.experiment_id = row.experiment_id;
      cell.cfg.problem = row.problem;
      cell.cfg.n = row.n;
      cell.cfg.N = row.N;
      cell.cfg.epsilon = row.epsilon;
      cell.cfg.eval_budget = row.eval_budget;
      it = index.emplace(key, cells.size()).first;
      cells.push_back(std::move(cell));
    }
    cells[it->second].records.push_back(row.rec);
  }
  for (BatchResult& cell : cells) {
    cell.cfg.trials = static_cast<std::int64_t>(cell.records.size());
    cell.rate = estimate_solvable_rate(cell.records, cell.cfg.eval_budget);
    std::vector<double> taus;
    for (const TrialRecord& rec : cell.records) {
      if (rec.hit) taus.push_back(static_cast<double>(rec.tau));
      if (rec.early_aborted) ++cell.early_aborts;
    }
    if (!taus.empty()) {
      cell.mean_tau_hits = mean_of(taus);
      cell.sd_tau_hits = taus.size() > 1 ? sample_sd(taus) : 0.0;
    }
  }

  write_summary_csv(out_dir + "/summary.csv", cells);
  write_rate_csvs(out_dir, cells);
  write_ecdf_csvs(out_dir, cells);

  std::ifstream probe(bundle_dir + "/timelines.jsonl");
  if (probe.is_open()) {
    probe.close();
    const std::vector<TimelineRow> tl =
        read_timelines_jsonl(bundle_dir + "/timelines.jsonl");
    // per cell, per trial, in file order
    std::map<std::pair<int, int>,
             std::map<std::int64_t, std::vector<Segment>>>
        grouped;
    for (const TimelineRow& row : tl) {
      grouped[{row.n, row.N}][row.trial].push_back(row.seg);
    }
    std::vector<std::tuple<int, int, std::vector<TakeoverRow>>> out_rows;
    for (const auto& [key, trials] : grouped) {
      std::vector<std::vector<Segment>> per_trial;
      per_trial.reserve(trials.size());
      for (const auto& [trial, segs] : trials) per_trial.push_back(segs);
      out_rows.emplace_back(key.first, key.second,
                            summarize_takeovers(per_trial));
    }
    write_takeover_rows(out_dir + "/takeover.csv", out_rows);
  }
}

}  // namespace nnea
