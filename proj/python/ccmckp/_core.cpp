#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "ccmckp/generators.hpp"
#include "ccmckp/harness.hpp"
#include "ccmckp/instance_io.hpp"
#include "ccmckp/metrics.hpp"
#include "ccmckp/nhils.hpp"
#include "ccmckp/opera_mc.hpp"

namespace py = pybind11;
using namespace ccmckp;

namespace {

std::vector<ObjectivePoint> points(const std::vector<std::pair<double, double>>& pts) {
  std::vector<ObjectivePoint> out;
  out.reserve(pts.size());
  for (const auto& [c, n] : pts) out.push_back({c, n});
  return out;
}

std::vector<std::pair<double, double>> pairs(const std::vector<ObjectivePoint>& pts) {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : pts) out.emplace_back(p.cost, p.neg_cl);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Chance-constrained multiple-choice knapsack core";

  py::class_<Instance>(m, "Instance")
      .def_readonly("label", &Instance::label)
      .def_readonly("seed", &Instance::seed)
      .def_readonly("capacity", &Instance::capacity)
      .def_readonly("required_confidence", &Instance::required_confidence)
      .def_readonly("bank_size", &Instance::bank_size)
      .def_property_readonly("class_count", &Instance::class_count)
      .def_property_readonly("class_sizes", &Instance::class_sizes)
      .def("cost", [](const Instance& inst, std::vector<int> genes) { return evaluate_cost(inst, Solution{genes}); })
      .def("to_json", [](const Instance& inst, bool embed) { return instance_to_string(inst, WriteOptions{embed}); },
           py::arg("embed_banks") = false)
      .def_static("from_json", &instance_from_string)
      .def_static("load", [](const std::string& path) { return load_instance(path); })
      .def("__eq__", [](const Instance& a, const Instance& b) { return a == b; })
      .def("__repr__", [](const Instance& i) {
        return "<Instance " + i.label + " m=" + std::to_string(i.class_count()) + ">";
      });

  m.def("generate_lab", [](const std::string& scale, std::uint64_t seed) {
    return generate_lab_instance(parse_scale(scale), seed);
  }, py::arg("scale"), py::arg("seed") = 1);
  m.def("generate_app", [](const std::string& scale, std::uint64_t seed) {
    return generate_app_instance(parse_scale(scale), seed);
  }, py::arg("scale"), py::arg("seed") = 1);

  m.def("estimate_cl_fixed", [](const Instance& inst, std::vector<int> genes, std::uint64_t n, std::uint64_t seed) {
    RandomStream rng(seed);
    return estimate_cl_fixed(inst, Solution{genes}, n, rng).p_hat;
  }, py::arg("instance"), py::arg("genes"), py::arg("samples"), py::arg("seed") = 0);
  m.def("estimate_cl_staged",
        [](const Instance& inst, std::vector<int> genes, const std::string& schedule, std::uint64_t seed) {
          RandomStream rng(seed);
          const StageSchedule s = schedule.empty() ? StageSchedule::standard() : StageSchedule::parse(schedule);
          const ClEstimate e = estimate_cl_opera(inst, Solution{genes}, s, rng);
          return py::make_tuple(e.p_hat, e.samples_used, e.stage_reached, e.early_stopped);
        },
        py::arg("instance"), py::arg("genes"), py::arg("schedule") = "", py::arg("seed") = 0,
        "Returns (p_hat, samples_used, stage_reached, early_stopped).");

  m.def("min_sample_size", [](double eps, const std::string& bound) {
    return min_sample_size(eps, bound == "chernoff" ? SampleBound::Chernoff : SampleBound::Hoeffding);
  }, py::arg("epsilon"), py::arg("bound") = "hoeffding");
  m.def("order_error_bound", &order_error_bound, py::arg("gap"), py::arg("n_a"), py::arg("n_b"));

  m.def("hypervolume", [](const std::vector<std::pair<double, double>>& front, std::pair<double, double> ref) {
    return hypervolume(points(front), ObjectivePoint{ref.first, ref.second});
  });
  m.def("igd", [](const std::vector<std::pair<double, double>>& front,
                  const std::vector<std::pair<double, double>>& ref) { return igd(points(front), points(ref)); });
  m.def("igd_plus", [](const std::vector<std::pair<double, double>>& front,
                       const std::vector<std::pair<double, double>>& ref) {
    return igd_plus(points(front), points(ref));
  });
  m.def("nondominated_filter", [](const std::vector<std::pair<double, double>>& pts) {
    return pairs(nondominated_filter(points(pts)));
  });

  m.def("run_nhils",
        [](const Instance& inst, const std::string& variant, std::uint64_t seed,
           const std::map<std::string, std::string>& settings) {
          NhilsConfig cfg;
          for (const auto& [k, v] : settings) apply_config_setting(cfg, k, v);
          cfg.variant = parse_variant(variant);
          cfg.run_seed = seed;
          py::gil_scoped_release release;
          return run_result_to_json(run_nhils(inst, cfg));
        },
        py::arg("instance"), py::arg("variant") = "Full", py::arg("seed") = 0,
        py::arg("settings") = std::map<std::string, std::string>{},
        "Runs one NHILS variant and returns the run document as JSON text.");

  m.def("run_plan", [](const std::string& text) {
    const ExperimentPlan plan = ExperimentPlan::parse(text);
    ResultsBundle b;
    {
      py::gil_scoped_release release;
      b = run_plan(plan);
    }
    py::list rows;
    for (const auto& c : b.cells) {
      py::dict d;
      d["instance"] = c.instance;
      d["algorithm"] = c.algorithm;
      d["repetition"] = c.repetition;
      d["seed"] = c.seed;
      d["status"] = c.status;
      d["hv"] = c.hv;
      d["igd"] = c.igd;
      d["igd_plus"] = c.igd_plus;
      d["fsr"] = c.fsr;
      d["generations"] = c.generations;
      d["front"] = pairs(c.front);
      rows.append(d);
    }
    return rows;
  }, "Runs a plan document and returns one dict per cell.");

  m.def("compare_evaluators",
        [](const Instance& inst, std::size_t count, std::uint64_t solution_seed, std::uint64_t fixed_samples,
           const std::string& schedule, std::uint64_t seed) {
          const auto sols = random_solutions(inst, count, solution_seed);
          const StageSchedule s = schedule.empty() ? StageSchedule::standard() : StageSchedule::parse(schedule);
          EvaluatorComparison c;
          {
            py::gil_scoped_release release;
            c = compare_evaluators(inst, sols, s, fixed_samples, seed);
          }
          py::dict d;
          d["staged_samples"] = c.opera_samples;
          d["fixed_samples"] = c.fixed_samples;
          d["sample_reduction"] = c.sample_reduction();
          d["dominance_agreement"] = c.dominance_agreement;
          d["max_abs_delta"] = c.max_abs_delta;
          return d;
        },
        py::arg("instance"), py::arg("count") = 200, py::arg("solution_seed") = 7,
        py::arg("fixed_samples") = 1'000'000, py::arg("schedule") = "", py::arg("seed") = 1);
}
