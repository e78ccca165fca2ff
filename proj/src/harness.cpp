#include "ccmckp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ccmckp/generators.hpp"
#include "ccmckp/instance_io.hpp"

namespace ccmckp {

namespace {

constexpr const char* kResultsHeader = "# ccmckp-results 1";
constexpr const char* kFrontHeader = "# ccmckp-front 1";
constexpr std::uint64_t kFsrTag = 0xf5;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string part;
  std::istringstream in(s);
  while (std::getline(in, part, sep)) {
    part = trim(part);
    if (!part.empty()) out.push_back(part);
  }
  return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    // Allow "1e6" style counts.
    if (v.find_first_of("eE.") != std::string::npos) {
      const double d = std::stod(v, &used);
      if (used != v.size() || d < 0 || d != std::floor(d)) throw std::invalid_argument(v);
      return static_cast<std::uint64_t>(d);
    }
    const auto r = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (const std::logic_error&) {
    throw std::invalid_argument(key + ": expected a nonnegative integer, got '" + v + "'");
  }
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::logic_error&) {
    throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::invalid_argument(key + ": expected true or false, got '" + v + "'");
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? num(*v) : "-"; }

std::string file_safe(std::string s) {
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return out;
}

// Fills the per-cell metrics of one instance against a shared reference.
void score_instance(std::vector<CellResult*>& cells, ResultsBundle& bundle,
                    const std::string& label, double margin) {
  std::vector<std::vector<ObjectivePoint>> fronts;
  for (const CellResult* c : cells)
    if (c->status == "ok" && !c->front.empty()) fronts.push_back(c->front);
  if (fronts.empty()) return;  // no feasible output anywhere: all metrics stay "-"
  const ReferenceData ref = build_reference(fronts, margin);
  bundle.references[label] = ref;
  for (CellResult* c : cells) {
    if (c->status != "ok") continue;
    c->hv = hypervolume(c->front, ref.ref_point);
    c->igd = igd(c->front, ref.ref_set);
    c->igd_plus = igd_plus(c->front, ref.ref_set);
  }
}

}  // namespace

// ---------------------------------------------------------------------------

InstanceRef InstanceRef::parse(const std::string& text) {
  InstanceRef ref;
  const std::vector<std::string> parts = split(text, ':');
  if (parts.size() >= 2 && (parts[0] == "lab" || parts[0] == "app")) {
    if (parts.size() > 3) throw std::invalid_argument("instance ref '" + text + "' has extra fields");
    ref.kind = parts[0] == "lab" ? Kind::Lab : Kind::App;
    ref.scale = parse_scale(parts[1]);
    if (parts.size() == 3) ref.seed = parse_u64("instance seed", parts[2]);
    return ref;
  }
  ref.kind = Kind::File;
  ref.path = text.rfind("file:", 0) == 0 ? text.substr(5) : text;
  if (ref.path.empty()) throw std::invalid_argument("empty instance path");
  return ref;
}

std::string InstanceRef::to_string() const {
  if (kind == Kind::File) return "file:" + path.string();
  std::string s = std::string(kind == Kind::Lab ? "lab:" : "app:") + std::string(scale_name(scale));
  if (seed) s += ":" + std::to_string(*seed);
  return s;
}

Instance InstanceRef::load(std::uint64_t default_seed) const {
  switch (kind) {
    case Kind::Lab: return generate_lab_instance(scale, seed.value_or(default_seed));
    case Kind::App: return generate_app_instance(scale, seed.value_or(default_seed));
    case Kind::File: return load_instance(path);
  }
  throw std::logic_error("unreachable");
}

Budget Budget::parse(const std::string& text) {
  const std::vector<std::string> parts = split(text, ':');
  Budget b;
  if (parts.size() == 2 && parts[0] == "generations") {
    b.kind = Kind::Generations;
    b.generations = static_cast<int>(parse_u64("budget", parts[1]));
    return b;
  }
  if ((parts.size() == 2 || parts.size() == 3) && parts[0] == "walltime") {
    b.kind = Kind::WallTimeMatched;
    b.anchor = parse_variant(parts[1]);
    if (parts.size() == 3) b.generations = static_cast<int>(parse_u64("budget", parts[2]));
    return b;
  }
  throw std::invalid_argument("budget must be generations:<n> or walltime:<variant>[:<n>], got '" +
                              text + "'");
}

std::string Budget::to_string() const {
  if (kind == Kind::Generations) return "generations:" + std::to_string(generations);
  return "walltime:" + std::string(variant_name(anchor)) + ":" + std::to_string(generations);
}

void apply_config_setting(NhilsConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "population_size") {
    cfg.population_size = parse_u64(key, value);
  } else if (key == "max_generations") {
    cfg.max_generations = static_cast<int>(parse_u64(key, value));
  } else if (key == "local_search_prob") {
    cfg.local_search_prob = parse_double(key, value);
  } else if (key == "lambda") {
    cfg.surrogate.lambda = parse_double(key, value);
  } else if (key == "crossover_prob") {
    cfg.variation.crossover_prob = parse_double(key, value);
  } else if (key == "crossover_index") {
    cfg.variation.crossover_index = parse_double(key, value);
  } else if (key == "mutation_prob") {
    cfg.variation.mutation_prob = parse_double(key, value);
  } else if (key == "mutation_index") {
    cfg.variation.mutation_index = parse_double(key, value);
  } else if (key == "schedule") {
    cfg.schedule = StageSchedule::parse(value);
  } else if (key == "max_perturbation_attempts") {
    cfg.max_perturbation_attempts = parse_u64(key, value);
  } else if (key == "double_swap_pairs") {
    cfg.double_swap_pairs = parse_u64(key, value);
  } else {
    throw std::invalid_argument("unknown setting '" + key + "'");
  }
}

ExperimentPlan ExperimentPlan::parse(const std::string& text) {
  ExperimentPlan plan;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::vector<std::pair<std::string, std::string>> variant_overrides;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "format") {
        if (value != "ccmckp-plan/1") throw std::invalid_argument("unsupported plan format");
      } else if (key == "seed") {
        plan.seed = parse_u64(key, value);
      } else if (key == "instances") {
        for (const auto& s : split(value, ',')) plan.instances.push_back(InstanceRef::parse(s));
      } else if (key == "algorithms") {
        for (const auto& s : split(value, ',')) plan.algorithms.push_back({parse_variant(s), {}});
      } else if (key == "repetitions") {
        plan.repetitions = static_cast<int>(parse_u64(key, value));
      } else if (key == "budget") {
        plan.budget = Budget::parse(value);
      } else if (key == "rcl_samples") {
        plan.rcl_samples = parse_u64(key, value);
      } else if (key == "hv_margin") {
        plan.hv_margin = parse_double(key, value);
      } else if (key == "output") {
        plan.output_dir = value;
      } else if (key == "emit_fronts") {
        plan.emit_fronts = parse_bool(key, value);
      } else if (key == "emit_runs") {
        plan.emit_runs = parse_bool(key, value);
      } else if (key.find('.') != std::string::npos) {
        variant_overrides.emplace_back(key, value);
      } else {
        apply_config_setting(plan.base, key, value);
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [key, value] : variant_overrides) {
    const auto dot = key.find('.');
    const Variant v = parse_variant(key.substr(0, dot));
    auto it = std::find_if(plan.algorithms.begin(), plan.algorithms.end(),
                           [v](const AlgorithmSpec& a) { return a.variant == v; });
    if (it == plan.algorithms.end())
      throw std::invalid_argument("override for '" + key.substr(0, dot) +
                                  "' which is not in algorithms");
    NhilsConfig probe = plan.base;
    apply_config_setting(probe, key.substr(dot + 1), value);  // validates the key
    it->overrides[key.substr(dot + 1)] = value;
  }
  plan.validate();
  return plan;
}

ExperimentPlan ExperimentPlan::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void ExperimentPlan::validate() const {
  if (instances.empty()) throw std::invalid_argument("plan lists no instances");
  if (algorithms.empty()) throw std::invalid_argument("plan lists no algorithms");
  if (repetitions < 1) throw std::invalid_argument("repetitions must be positive");
  if (rcl_samples == 0) throw std::invalid_argument("rcl_samples must be positive");
  if (budget.kind == Budget::Kind::WallTimeMatched &&
      std::none_of(algorithms.begin(), algorithms.end(),
                   [&](const AlgorithmSpec& a) { return a.variant == budget.anchor; }))
    throw std::invalid_argument("budget anchor '" + std::string(variant_name(budget.anchor)) +
                                "' is not among the algorithms");
  base.validate();
}

// ---------------------------------------------------------------------------

ResultsBundle run_plan(const ExperimentPlan& plan) {
  plan.validate();
  ResultsBundle bundle;

  // Anchor first so its wall time is known before the others run.
  std::vector<std::size_t> alg_order(plan.algorithms.size());
  std::iota(alg_order.begin(), alg_order.end(), 0);
  if (plan.budget.kind == Budget::Kind::WallTimeMatched) {
    std::stable_partition(alg_order.begin(), alg_order.end(), [&](std::size_t a) {
      return plan.algorithms[a].variant == plan.budget.anchor;
    });
  }

  std::vector<std::string> used_labels;
  for (std::size_t ii = 0; ii < plan.instances.size(); ++ii) {
    const InstanceRef& ref = plan.instances[ii];
    std::optional<Instance> instance;
    std::string label = ref.to_string();
    std::string load_error;
    try {
      instance = ref.load(plan.seed);
      label = instance->label;
      // Generated instances share a label across seeds.
      if (ref.seed) label += "-s" + std::to_string(*ref.seed);
    } catch (const std::exception& e) {
      load_error = e.what();
    }

    if (std::count(used_labels.begin(), used_labels.end(), label) > 0)
      label += "#" + std::to_string(ii);
    used_labels.push_back(label);

    std::vector<CellResult> cells;
    std::optional<double> anchor_seconds;
    for (std::size_t ai : alg_order) {
      const AlgorithmSpec& alg = plan.algorithms[ai];
      std::vector<double> times;
      for (int rep = 0; rep < plan.repetitions; ++rep) {
        CellResult cell;
        cell.instance = label;
        cell.algorithm = std::string(variant_name(alg.variant));
        cell.repetition = rep;
        cell.seed = derive_seed(plan.seed, {ii, ai, static_cast<std::uint64_t>(rep)});
        if (!instance) {
          cell.status = "error: " + load_error;
          cells.push_back(std::move(cell));
          continue;
        }
        try {
          NhilsConfig cfg = plan.base;
          for (const auto& [k, v] : alg.overrides) apply_config_setting(cfg, k, v);
          cfg.variant = alg.variant;
          cfg.run_seed = cell.seed;
          cfg.max_generations = plan.budget.generations;
          const bool capped = plan.budget.kind == Budget::Kind::WallTimeMatched &&
                              alg.variant != plan.budget.anchor;
          if (capped) {
            cfg.max_generations = std::numeric_limits<int>::max();
            cfg.time_limit_seconds = anchor_seconds.value_or(0.0);
          }
          const RunResult run = run_nhils(*instance, cfg);
          cell.front = feasible_front(run.population);
          cell.generations = run.generations;
          cell.samples = run.total_samples;
          cell.evaluations = run.evaluations;
          cell.wall_seconds = run.wall_seconds;
          times.push_back(run.wall_seconds);

          std::vector<Solution> pop;
          for (const auto& ind : run.population) pop.push_back(ind.solution);
          cell.fsr = fsr(pop, *instance, plan.rcl_samples,
                         RandomStream(derive_seed(cell.seed, {kFsrTag})));

          if (plan.emit_runs && !plan.output_dir.empty()) {
            const auto dir = plan.output_dir / "runs";
            std::filesystem::create_directories(dir);
            open_out(dir / (file_safe(label + "__" + cell.algorithm + "__r" +
                                      std::to_string(rep)) + ".json"))
                << run_result_to_json(run);
          }
        } catch (const std::exception& e) {
          cell.status = std::string("error: ") + e.what();
        }
        cells.push_back(std::move(cell));
      }
      if (plan.budget.kind == Budget::Kind::WallTimeMatched && alg.variant == plan.budget.anchor &&
          !times.empty())
        anchor_seconds = mean_sd(times).mean;
    }

    std::vector<CellResult*> ptrs;
    for (auto& c : cells) ptrs.push_back(&c);
    score_instance(ptrs, bundle, label, plan.hv_margin);
    for (auto& c : cells) bundle.cells.push_back(std::move(c));
  }

  if (!plan.output_dir.empty()) write_results(bundle, plan);
  return bundle;
}

MeanSd mean_sd(const std::vector<double>& values) {
  MeanSd r;
  r.n = values.size();
  if (values.empty()) return r;
  for (double v : values) r.mean += v;
  r.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - r.mean) * (v - r.mean);
    r.sd = std::isinf(r.mean) ? 0.0 : std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return r;
}

void write_results(const ResultsBundle& bundle, const ExperimentPlan& plan) {
  const auto& dir = plan.output_dir;
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "results.tsv");
    out << kResultsHeader << '\n';
    out << "instance\talgorithm\trepetition\tseed\tstatus\thv\tigd\tigd_plus\tfsr\tgenerations"
           "\tsamples\tevaluations\tfront_size\n";
    for (const auto& c : bundle.cells) {
      out << c.instance << '\t' << c.algorithm << '\t' << c.repetition << '\t' << c.seed << '\t'
          << c.status << '\t' << opt(c.hv) << '\t' << opt(c.igd) << '\t' << opt(c.igd_plus)
          << '\t' << opt(c.fsr) << '\t' << c.generations << '\t' << c.samples << '\t'
          << c.evaluations << '\t' << c.front.size() << '\n';
    }
  }
  {
    auto out = open_out(dir / "timing.tsv");
    out << "# ccmckp-timing 1\ninstance\talgorithm\trepetition\twall_seconds\n";
    for (const auto& c : bundle.cells)
      out << c.instance << '\t' << c.algorithm << '\t' << c.repetition << '\t'
          << num(c.wall_seconds) << '\n';
  }
  {
    auto out = open_out(dir / "reference.tsv");
    out << "# ccmckp-reference 1\n";
    out << "# budget=" << plan.budget.to_string() << " rcl_samples=" << plan.rcl_samples
        << " hv_margin=" << num(plan.hv_margin) << " schedule=" << plan.base.schedule.to_string()
        << '\n';
    out << "instance\tref_cost\tref_neg_cl\tref_set_size\n";
    for (const auto& [label, ref] : bundle.references)
      out << label << '\t' << exact(ref.ref_point.cost) << '\t' << exact(ref.ref_point.neg_cl)
          << '\t' << ref.ref_set.size() << '\n';
  }
  {
    // mean and sample sd per (instance, algorithm); "-" when no run produced
    // a feasible front.
    auto out = open_out(dir / "summary.tsv");
    out << "# ccmckp-summary 1\n";
    out << "instance\talgorithm\truns\tfailed\thv_mean\thv_sd\tigd_mean\tigd_sd\tigd_plus_mean"
           "\tigd_plus_sd\tfsr_mean\tfsr_sd\tgenerations_mean\tsamples_mean\n";
    std::vector<std::pair<std::string, std::string>> keys;
    for (const auto& c : bundle.cells) {
      const std::pair<std::string, std::string> k{c.instance, c.algorithm};
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    }
    for (const auto& [inst, alg] : keys) {
      std::vector<double> hv, ig, igp, fs, gens, samples;
      std::size_t runs = 0, failed = 0;
      bool any_front = false;
      for (const auto& c : bundle.cells) {
        if (c.instance != inst || c.algorithm != alg) continue;
        ++runs;
        if (c.status != "ok") {
          ++failed;
          continue;
        }
        any_front = any_front || !c.front.empty();
        if (c.hv) hv.push_back(*c.hv);
        if (c.igd) ig.push_back(*c.igd);
        if (c.igd_plus) igp.push_back(*c.igd_plus);
        if (c.fsr) fs.push_back(*c.fsr);
        gens.push_back(c.generations);
        samples.push_back(static_cast<double>(c.samples));
      }
      auto cell = [&](const std::vector<double>& v) {
        if (!any_front || v.empty()) return std::string("-\t-");
        const MeanSd s = mean_sd(v);
        return num(s.mean) + "\t" + num(s.sd);
      };
      auto fsr_cell = [&](const std::vector<double>& v) {
        if (v.empty()) return std::string("-\t-");
        const MeanSd s = mean_sd(v);
        return num(s.mean) + "\t" + num(s.sd);
      };
      out << inst << '\t' << alg << '\t' << runs << '\t' << failed << '\t' << cell(hv) << '\t'
          << cell(ig) << '\t' << cell(igp) << '\t' << fsr_cell(fs) << '\t'
          << (gens.empty() ? "-" : num(mean_sd(gens).mean)) << '\t'
          << (samples.empty() ? "-" : num(mean_sd(samples).mean)) << '\n';
    }
  }
  if (plan.emit_fronts) emit_front_plots_data(bundle, dir / "fronts");
}

std::vector<std::filesystem::path> emit_front_plots_data(const ResultsBundle& bundle,
                                                         const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& c : bundle.cells) {
    const auto path = dir / (file_safe(c.instance + "__" + c.algorithm + "__r" +
                                       std::to_string(c.repetition)) + ".tsv");
    auto out = open_out(path);
    out << kFrontHeader << " instance=" << c.instance << " algorithm=" << c.algorithm
        << " repetition=" << c.repetition << '\n';
    out << "cost\tcl\n";
    for (const auto& p : c.front) out << exact(p.cost) << '\t' << exact(-p.neg_cl) << '\n';
    written.push_back(path);
  }
  return written;
}

FrontFile read_front_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  FrontFile f;
  std::string line;
  if (!std::getline(in, line) || line.rfind(kFrontHeader, 0) != 0)
    throw std::runtime_error(path.string() + ": not a front file");
  std::istringstream meta(line.substr(std::string(kFrontHeader).size()));
  std::string kv;
  while (meta >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) continue;
    const std::string k = kv.substr(0, eq);
    const std::string v = kv.substr(eq + 1);
    if (k == "instance") f.instance = v;
    else if (k == "algorithm") f.algorithm = v;
    else if (k == "repetition") f.repetition = std::stoi(v);
  }
  if (!std::getline(in, line) || trim(line) != "cost\tcl")
    throw std::runtime_error(path.string() + ": missing column header");
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error(path.string() + ": malformed row");
    f.points.push_back({std::stod(line.substr(0, tab)), -std::stod(line.substr(tab + 1))});
  }
  return f;
}

ResultsBundle recompute_metrics(const std::vector<FrontFile>& fronts, double hv_margin) {
  ResultsBundle bundle;
  std::vector<std::string> labels;
  for (const auto& f : fronts)
    if (std::find(labels.begin(), labels.end(), f.instance) == labels.end())
      labels.push_back(f.instance);
  for (const auto& label : labels) {
    std::vector<CellResult> cells;
    for (const auto& f : fronts) {
      if (f.instance != label) continue;
      CellResult c;
      c.instance = f.instance;
      c.algorithm = f.algorithm;
      c.repetition = f.repetition;
      c.front = f.points;
      cells.push_back(std::move(c));
    }
    std::vector<CellResult*> ptrs;
    for (auto& c : cells) ptrs.push_back(&c);
    score_instance(ptrs, bundle, label, hv_margin);
    for (auto& c : cells) bundle.cells.push_back(std::move(c));
  }
  return bundle;
}

// ---------------------------------------------------------------------------

std::vector<Solution> random_solutions(const Instance& instance, std::size_t count,
                                       std::uint64_t seed) {
  RandomStream rng(seed);
  const std::vector<int> sizes = instance.class_sizes();
  std::vector<Solution> out(count);
  for (auto& s : out) {
    s.genes.resize(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i)
      s.genes[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(sizes[i])));
  }
  return out;
}

EvaluatorComparison compare_evaluators(const Instance& instance,
                                       const std::vector<Solution>& solutions,
                                       const StageSchedule& schedule, std::uint64_t fixed_n,
                                       std::uint64_t seed) {
  if (solutions.empty()) throw std::invalid_argument("no solutions to compare");
  schedule.validate();
  using Clock = std::chrono::steady_clock;
  EvaluatorComparison r;
  r.solutions = solutions.size();
  std::vector<double> cost;
  for (const auto& s : solutions) {
    check_solution(instance, s);
    cost.push_back(evaluate_cost(instance, s));
  }

  auto t0 = Clock::now();
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    RandomStream rng(derive_seed(seed, {1, k}));
    const ClEstimate e = estimate_cl_opera(instance, solutions[k], schedule, rng);
    r.opera_p.push_back(e.p_hat);
    r.opera_used.push_back(e.samples_used);
    r.opera_samples += e.samples_used;
  }
  auto t1 = Clock::now();
  for (std::size_t k = 0; k < solutions.size(); ++k) {
    RandomStream rng(derive_seed(seed, {2, k}));
    const ClEstimate e = estimate_cl_fixed(instance, solutions[k], fixed_n, rng);
    r.fixed_p.push_back(e.p_hat);
    r.fixed_samples += e.samples_used;
  }
  auto t2 = Clock::now();
  r.opera_seconds = std::chrono::duration<double>(t1 - t0).count();
  r.fixed_seconds = std::chrono::duration<double>(t2 - t1).count();

  for (std::size_t k = 0; k < solutions.size(); ++k) {
    const double d = std::fabs(r.opera_p[k] - r.fixed_p[k]);
    r.max_abs_delta = std::max(r.max_abs_delta, d);
    r.mean_abs_delta += d;
  }
  r.mean_abs_delta /= static_cast<double>(solutions.size());

  auto relation = [&](const std::vector<double>& p, std::size_t a, std::size_t b) {
    const ObjectivePoint pa{cost[a], -p[a]};
    const ObjectivePoint pb{cost[b], -p[b]};
    if (dominates(pa, pb)) return 1;
    if (dominates(pb, pa)) return -1;
    return 0;
  };
  std::uint64_t pairs = 0, agree = 0;
  for (std::size_t a = 0; a < solutions.size(); ++a) {
    for (std::size_t b = a + 1; b < solutions.size(); ++b) {
      ++pairs;
      agree += relation(r.opera_p, a, b) == relation(r.fixed_p, a, b) ? 1U : 0U;
    }
  }
  r.dominance_agreement = pairs == 0 ? 1.0 : static_cast<double>(agree) / static_cast<double>(pairs);
  return r;
}

}  // namespace ccmckp
