#include "nnea/config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nnea/errors.hpp"
#include "nnea/reports.hpp"

namespace nnea {

namespace {

const char* kKnownKeys =
    "problem, n, N, trials, seed, eval_budget, epsilon, early_abort, "
    "experiment_id";

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

template <typename T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last)
    throw ConfigError("config key '" + key + "' needs an integer, got '" + v +
                      "'");
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  double out{};
  const char* first = v.data();
  const char* last = v.data() + v.size();
  auto [p, ec] = std::from_chars(first, last, out);
  if (ec != std::errc() || p != last)
    throw ConfigError("config key '" + key + "' needs a number, got '" + v +
                      "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw ConfigError("config key '" + key + "' needs a boolean, got '" + v +
                    "'");
}

void set_key(ExperimentConfig& cfg, const std::string& key,
             const std::string& value) {
  if (key == "problem")
    cfg.problem = problem_from_string(value);
  else if (key == "n")
    cfg.n = parse_int<int>(key, value);
  else if (key == "N")
    cfg.N = parse_int<int>(key, value);
  else if (key == "trials")
    cfg.trials = parse_int<std::int64_t>(key, value);
  else if (key == "seed")
    cfg.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "eval_budget")
    cfg.eval_budget = parse_int<std::int64_t>(key, value);
  else if (key == "epsilon")
    cfg.epsilon = parse_double(key, value);
  else if (key == "early_abort")
    cfg.early_abort = parse_bool(key, value);
  else if (key == "experiment_id") {
    if (value.empty()) throw ConfigError("experiment_id must be non-empty");
    cfg.experiment_id = value;
  } else
    throw ConfigError("unknown config key '" + key + "' (known keys: " +
                      kKnownKeys + ")");
}

}  // namespace

std::vector<std::string> ExperimentConfig::finalize() {
  std::vector<std::string> notes;
  if (problem == ProblemKind::TrapZeros) {
    if (n < 3) throw ConfigError("trapzeros needs n >= 3");
  } else if (n < 1) {
    throw ConfigError("onemax needs n >= 1");
  }
  if (N < 1) throw ConfigError("N must be >= 1");
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw ConfigError("epsilon must be in (0, 1]");
  if (eval_budget < 0) throw ConfigError("eval_budget must be >= 0");
  if (eval_budget == 0)
    eval_budget = 20 * static_cast<std::int64_t>(n) * n;
  if (eval_budget < N)
    throw ConfigError("eval_budget " + std::to_string(eval_budget) +
                      " cannot cover one generation of N=" + std::to_string(N));
  const std::int64_t n3 = static_cast<std::int64_t>(n) * n * n;
  if (N > n3)
    notes.push_back("N=" + std::to_string(N) + " exceeds n^3=" +
                    std::to_string(n3) + "; outside the studied regime");
  if (problem == ProblemKind::OneMax && early_abort)
    notes.push_back("early_abort has no effect on onemax");
  return notes;
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key=value: '" + t + "'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError("config key '" + key + "' appears twice");
    set_key(cfg, key, value);
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override is not key=value: '" + kv + "'");
  set_key(cfg, trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
}

std::string emit_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "problem=" << to_string(cfg.problem) << "\n";
  out << "n=" << cfg.n << "\n";
  out << "N=" << cfg.N << "\n";
  out << "trials=" << cfg.trials << "\n";
  out << "seed=" << cfg.seed << "\n";
  out << "eval_budget=" << cfg.eval_budget << "\n";
  out << "epsilon=" << fmt17(cfg.epsilon) << "\n";
  out << "early_abort=" << (cfg.early_abort ? 1 : 0) << "\n";
  out << "experiment_id=" << cfg.experiment_id << "\n";
  return out.str();
}

}  // namespace nnea
