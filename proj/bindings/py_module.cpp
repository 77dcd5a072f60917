#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nnea/batch.hpp"
#include "nnea/bitgenome.hpp"
#include "nnea/bounds.hpp"
#include "nnea/config.hpp"
#include "nnea/decomposition.hpp"
#include "nnea/errors.hpp"
#include "nnea/exact_chain.hpp"
#include "nnea/problems.hpp"
#include "nnea/stats.hpp"
#include "nnea/version.hpp"

namespace py = pybind11;
using namespace nnea;

namespace {

ExperimentConfig config_from_kwargs(const std::string& problem, int n, int N,
                                    std::int64_t trials, std::uint64_t seed,
                                    std::int64_t eval_budget, double epsilon,
                                    bool early_abort,
                                    const std::string& experiment_id) {
  ExperimentConfig cfg;
  cfg.problem = problem_from_string(problem);
  cfg.n = n;
  cfg.N = N;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.eval_budget = eval_budget;
  cfg.epsilon = epsilon;
  cfg.early_abort = early_abort;
  cfg.experiment_id = experiment_id;
  cfg.finalize();
  return cfg;
}

py::dict record_to_dict(const TrialRecord& rec) {
  py::dict d;
  d["trial"] = rec.trial;
  d["seed"] = rec.stream_seed;
  d["hit"] = rec.hit;
  d["tau"] = rec.hit ? py::cast(rec.tau) : py::none();
  d["generations"] = rec.generations;
  d["evaluations"] = rec.evaluations;
  d["first_s0_gen"] =
      rec.first_s0_gen >= 0 ? py::cast(rec.first_s0_gen) : py::none();
  d["first_sstar_gen"] =
      rec.first_sstar_gen >= 0 ? py::cast(rec.first_sstar_gen) : py::none();
  d["full_s0_gen"] =
      rec.full_s0_gen >= 0 ? py::cast(rec.full_s0_gen) : py::none();
  d["early_aborted"] = rec.early_aborted;
  return d;
}

py::dict check_to_dict(const BoundCheck& check) {
  py::dict d;
  d["kind"] = to_string(check.kind);
  d["params"] = check.params;
  d["exact"] = check.exact;
  d["bound"] = check.bound;
  d["lower_bound"] = check.lower_bound;
  d["vacuous"] = check.vacuous;
  d["satisfied"] = check.satisfied;
  return d;
}

}  // namespace

PYBIND11_MODULE(_nnea, m) {
  m.doc() = "exact and simulated analysis of the (N+N) evolutionary algorithm";
  m.attr("__version__") = NNEA_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError",
                                        PyExc_RuntimeError);

  m.def("block_length", &block_length, py::arg("n"),
        "length of the all-ones prefix that unlocks the top fitness band");

  m.def(
      "fitness",
      [](const std::string& problem, const std::string& bits) {
        const Genome g = Genome::from_string(bits);
        return evaluate(ProblemSpec::make(problem_from_string(problem), g.size()),
                        g);
      },
      py::arg("problem"), py::arg("bits"));

  m.def(
      "classify",
      [](const std::string& bits) {
        const Genome g = Genome::from_string(bits);
        return to_string(classify_schema(g, block_length(g.size())));
      },
      py::arg("bits"), "schema class of one genome");

  m.def(
      "run_batch",
      [](const std::string& problem, int n, int N, std::int64_t trials,
         std::uint64_t seed, std::int64_t eval_budget, double epsilon,
         bool early_abort, int workers) {
        const ExperimentConfig cfg =
            config_from_kwargs(problem, n, N, trials, seed, eval_budget,
                               epsilon, early_abort, "py");
        const BatchResult res = run_batch(cfg, workers, false);
        py::dict out;
        out["n"] = cfg.n;
        out["N"] = cfg.N;
        out["eval_budget"] = cfg.eval_budget;
        out["successes"] = res.rate.successes;
        out["trials"] = res.rate.trials;
        out["p_hat"] = res.rate.p_hat;
        out["wilson_lo"] = res.rate.wilson_lo;
        out["wilson_hi"] = res.rate.wilson_hi;
        out["mean_tau_hits"] = res.mean_tau_hits;
        out["early_aborts"] = res.early_aborts;
        py::list recs;
        for (const TrialRecord& rec : res.records) {
          recs.append(record_to_dict(rec));
        }
        out["records"] = recs;
        return out;
      },
      py::arg("problem"), py::arg("n"), py::arg("N"), py::arg("trials"),
      py::arg("seed") = 1, py::arg("eval_budget") = 0,
      py::arg("epsilon") = kDefaultEpsilon, py::arg("early_abort") = false,
      py::arg("workers") = 1);

  m.def(
      "run_trial",
      [](const std::string& problem, int n, int N, std::int64_t trial,
         std::uint64_t seed, std::int64_t eval_budget, double epsilon,
         bool early_abort) {
        const ExperimentConfig cfg = config_from_kwargs(
            problem, n, N, trial + 1, seed, eval_budget, epsilon, early_abort,
            "py");
        return record_to_dict(run_trial(cfg, trial, false));
      },
      py::arg("problem"), py::arg("n"), py::arg("N"), py::arg("trial") = 0,
      py::arg("seed") = 1, py::arg("eval_budget") = 0,
      py::arg("epsilon") = kDefaultEpsilon, py::arg("early_abort") = false);

  m.def(
      "wilson95",
      [](std::int64_t successes, std::int64_t trials) {
        const WilsonInterval w = wilson95(successes, trials);
        return py::make_tuple(w.lo, w.hi);
      },
      py::arg("successes"), py::arg("trials"));

  m.def("upgrade_probability",
        [](int n, int rho, std::int64_t count) {
          return static_cast<double>(upgrade_probability(n, rho, count));
        },
        py::arg("n"), py::arg("rho"), py::arg("count"));

  m.def(
      "check_bound",
      [](const std::string& kind, const std::map<std::string, double>& params) {
        return check_to_dict(
            run_bound_case(bound_kind_from_string(kind), params));
      },
      py::arg("kind"), py::arg("params"));

  m.def(
      "sweep_bounds",
      [](int tuples_per_kind, std::uint64_t seed) {
        BoundSweepConfig cfg;
        cfg.tuples_per_kind = tuples_per_kind;
        cfg.seed = seed;
        py::list out;
        for (const BoundCheck& check : sweep_bound_checks(cfg)) {
          out.append(check_to_dict(check));
        }
        return out;
      },
      py::arg("tuples_per_kind") = 1000, py::arg("seed") = 1);

  py::class_<ChainModel>(m, "ExactChain")
      .def_static(
          "build",
          [](const std::string& problem, int n) {
            return ChainModel::build(problem_from_string(problem), n);
          },
          py::arg("problem"), py::arg("n"))
      .def_property_readonly("states", &ChainModel::states)
      .def("fitness_of", &ChainModel::fitness_of, py::arg("state"))
      .def("transition_row", &ChainModel::transition_row, py::arg("state"))
      .def("expected_from",
           [](ChainModel& chain, std::uint64_t x) {
             return static_cast<double>(chain.expected_from(x));
           },
           py::arg("state"))
      .def("expected_from_uniform",
           [](ChainModel& chain) {
             return static_cast<double>(chain.expected_from_uniform());
           })
      .def("recurrence_residual",
           [](ChainModel& chain) {
             return static_cast<double>(chain.recurrence_residual());
           })
      .def(
          "hitting_cdf",
          [](ChainModel& chain, std::int64_t horizon) {
            const ChainModel::CdfResult res = chain.hitting_cdf_uniform(horizon);
            py::dict out;
            out["cdf"] = res.cdf;
            out["partial_mean"] = static_cast<double>(res.partial_mean);
            out["mass"] = static_cast<double>(res.mass);
            return out;
          },
          py::arg("horizon"))
      .def(
          "hitting_cdf_from",
          [](ChainModel& chain, std::uint64_t state, std::int64_t horizon) {
            const ChainModel::CdfResult res =
                chain.hitting_cdf_from(state, horizon);
            py::dict out;
            out["cdf"] = res.cdf;
            out["partial_mean"] = static_cast<double>(res.partial_mean);
            out["mass"] = static_cast<double>(res.mass);
            return out;
          },
          py::arg("state"), py::arg("horizon"));
}
