#include "ccmckp/nhils.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "json.hpp"

namespace ccmckp {

namespace {

// Stream tags for the derived per-purpose streams of a run.
constexpr std::uint64_t kInitTag = 1;
constexpr std::uint64_t kEvalTag = 2;
constexpr std::uint64_t kVariationTag = 3;
constexpr std::uint64_t kGateTag = 4;
constexpr std::uint64_t kLocalSearchTag = 5;

// Weak Pareto improvement on the raw objectives.
bool improves(const Evaluation& candidate, const Evaluation& current) {
  return pareto_dominates(candidate, current);
}

// True when no evaluation outcome could make a candidate of this cost improve.
bool cannot_improve(double candidate_cost, const Evaluation& current) {
  return candidate_cost >= current.cost && current.p_hat() >= 1.0;
}

double item_cost(const Instance& inst, std::size_t cls, int item) {
  return inst.classes[cls].items[static_cast<std::size_t>(item)].cost;
}

}  // namespace

std::string_view variant_name(Variant v) noexcept {
  switch (v) {
    case Variant::Full: return "Full";
    case Variant::NoLocalSearch: return "NoLocalSearch";
    case Variant::NoHybridInit: return "NoHybridInit";
    case Variant::PlainNsga2: return "PlainNsga2";
  }
  return "Unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : {Variant::Full, Variant::NoLocalSearch, Variant::NoHybridInit,
                    Variant::PlainNsga2})
    if (variant_name(v) == name) return v;
  throw std::invalid_argument("unknown variant '" + std::string(name) +
                              "' (expected Full, NoLocalSearch, NoHybridInit or PlainNsga2)");
}

void NhilsConfig::validate() const {
  if (population_size == 0) throw std::invalid_argument("population_size must be positive");
  if (max_generations < 0) throw std::invalid_argument("max_generations must be >= 0");
  if (!(local_search_prob >= 0.0 && local_search_prob <= 1.0))
    throw std::invalid_argument("local_search_prob must lie in [0, 1]");
  if (!(surrogate.lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (max_perturbation_attempts && *max_perturbation_attempts == 0)
    throw std::invalid_argument("max_perturbation_attempts must be positive");
  variation.validate();
  schedule.validate();
}

Evaluator::Evaluator(const Instance& instance, StageSchedule schedule)
    : instance_(instance), schedule_(std::move(schedule)) {
  schedule_.validate();
}

Evaluation Evaluator::evaluate(const Solution& s, RandomStream& rng) {
  const ClEstimate cl = estimate_cl_opera(instance_, s, schedule_, rng);
  samples_ += cl.samples_used;
  ++evaluations_;
  return make_evaluation(evaluate_cost(instance_, s), cl, instance_.required_confidence);
}

Solution greedy_seed(const Instance& instance, const SurrogateConfig& cfg) {
  const SurrogateTable table(instance, cfg);
  Solution s;
  s.genes.reserve(instance.class_count());
  for (std::size_t i = 0; i < instance.class_count(); ++i) {
    const auto& items = instance.classes[i].items;
    double max_cost = 0.0;
    for (const auto& item : items) max_cost = std::max(max_cost, item.cost);
    int best = 0;
    double best_ratio = -1.0;
    for (std::size_t j = 0; j < items.size(); ++j) {
      const double utility = max_cost - items[j].cost;
      const double w = table.at(i, static_cast<int>(j));
      double ratio;
      if (w > 0.0)
        ratio = utility / w;
      else
        ratio = utility > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
      const bool better =
          ratio > best_ratio ||
          (ratio == best_ratio && w < table.at(i, best));  // lower index wins remaining ties
      if (better) {
        best = static_cast<int>(j);
        best_ratio = ratio;
      }
    }
    s.genes.push_back(best);
  }
  return s;
}

Solution repair_to_surrogate_feasible(const Instance& instance, Solution s,
                                      const SurrogateConfig& cfg) {
  check_solution(instance, s);
  const SurrogateTable table(instance, cfg);
  double lightest = 0.0;
  for (std::size_t i = 0; i < instance.class_count(); ++i) {
    const auto& row = table.row(i);
    lightest += *std::min_element(row.begin(), row.end());
  }
  if (lightest > instance.capacity)
    throw IrreparableInstanceError("instance '" + instance.label +
                                   "' has no surrogate-feasible selection");

  double total = table.total(s);
  while (total > instance.capacity) {
    // Best swap: largest weight reduction per unit of added cost; swaps that
    // add no cost rank first, then larger reductions.
    std::size_t best_cls = 0;
    int best_item = -1;
    double best_score = -1.0;
    double best_reduction = 0.0;
    for (std::size_t i = 0; i < instance.class_count(); ++i) {
      const int cur = s.genes[i];
      const double w_cur = table.at(i, cur);
      const double c_cur = item_cost(instance, i, cur);
      for (int j = 0; j < static_cast<int>(table.row(i).size()); ++j) {
        const double reduction = w_cur - table.at(i, j);
        if (!(reduction > 0.0)) continue;
        const double extra = item_cost(instance, i, j) - c_cur;
        const double score =
            extra > 0.0 ? reduction / extra : std::numeric_limits<double>::infinity();
        if (score > best_score || (score == best_score && reduction > best_reduction)) {
          best_cls = i;
          best_item = j;
          best_score = score;
          best_reduction = reduction;
        }
      }
    }
    s.genes[best_cls] = best_item;  // a reducing swap exists while total > lightest
    total = table.total(s);
  }
  return s;
}

std::vector<Solution> hybrid_initialization(const Instance& instance, const NhilsConfig& cfg,
                                            RandomStream& rng) {
  const SurrogateTable table(instance, cfg.surrogate);
  const Solution seed =
      repair_to_surrogate_feasible(instance, greedy_seed(instance, cfg.surrogate), cfg.surrogate);
  const std::size_t m = instance.class_count();
  const std::vector<int> sizes = instance.class_sizes();

  std::vector<Solution> population{seed};
  std::vector<std::size_t> classes(m);
  const std::size_t max_subset = (m + 1) / 2;
  const std::size_t cap = cfg.perturbation_attempts();
  for (std::size_t attempt = 0; attempt < cap && population.size() < cfg.population_size;
       ++attempt) {
    const std::size_t k = 1 + rng.below(max_subset);
    std::iota(classes.begin(), classes.end(), 0);
    Solution candidate = seed;
    for (std::size_t t = 0; t < k; ++t) {
      std::swap(classes[t], classes[t + rng.below(m - t)]);
      const std::size_t i = classes[t];
      const int n = sizes[i];
      if (n < 2) continue;
      // Uniform over the other items of the class.
      int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= seed.genes[i]) ++j;
      candidate.genes[i] = j;
    }
    if (table.feasible(candidate)) population.push_back(std::move(candidate));
  }
  // Fallback: seed copies nudged one gene toward a lighter item.
  while (population.size() < cfg.population_size) {
    Solution candidate = seed;
    std::iota(classes.begin(), classes.end(), 0);
    for (std::size_t t = 0; t < m; ++t) {
      std::swap(classes[t], classes[t + rng.below(m - t)]);
      const std::size_t i = classes[t];
      std::vector<int> lighter;
      for (int j = 0; j < sizes[i]; ++j)
        if (table.at(i, j) < table.at(i, seed.genes[i])) lighter.push_back(j);
      if (!lighter.empty()) {
        candidate.genes[i] = lighter[rng.below(lighter.size())];
        break;
      }
    }
    population.push_back(std::move(candidate));
  }
  return population;
}

Individual local_search_single_swap(const SearchContext& ctx, Individual x, RandomStream& rng) {
  const std::size_t m = ctx.instance.class_count();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t t = 0; t + 1 < m; ++t) std::swap(order[t], order[t + rng.below(m - t)]);

  double weight = ctx.surrogate.total(x.solution);
  for (std::size_t i : order) {
    const int cur = x.solution.genes[i];
    const int n = static_cast<int>(ctx.instance.classes[i].items.size());
    for (int j = 0; j < n; ++j) {
      if (j == cur) continue;
      const double w = weight - ctx.surrogate.at(i, cur) + ctx.surrogate.at(i, j);
      if (w > ctx.instance.capacity) continue;
      const double cost = x.eval.cost - item_cost(ctx.instance, i, cur) + item_cost(ctx.instance, i, j);
      if (cannot_improve(cost, x.eval)) continue;
      Solution candidate = x.solution;
      candidate.genes[i] = j;
      const Evaluation e = ctx.evaluator.evaluate(candidate, rng);
      if (improves(e, x.eval)) {
        x.solution = std::move(candidate);
        x.eval = e;
        weight = ctx.surrogate.total(x.solution);
        break;
      }
    }
  }
  return x;
}

Individual local_search_double_swap(const SearchContext& ctx, Individual x, RandomStream& rng) {
  const std::size_t m = ctx.instance.class_count();
  if (m < 2) return x;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(m * (m - 1) / 2);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) pairs.emplace_back(a, b);
  const std::size_t budget = std::min(pairs.size(), ctx.config.double_swap_pairs.value_or(m));

  double weight = ctx.surrogate.total(x.solution);
  for (std::size_t t = 0; t < budget; ++t) {
    std::swap(pairs[t], pairs[t + rng.below(pairs.size() - t)]);
    const auto [i1, i2] = pairs[t];
    const int cur1 = x.solution.genes[i1];
    const int cur2 = x.solution.genes[i2];
    const int n1 = static_cast<int>(ctx.instance.classes[i1].items.size());
    const int n2 = static_cast<int>(ctx.instance.classes[i2].items.size());
    const double base_w = weight - ctx.surrogate.at(i1, cur1) - ctx.surrogate.at(i2, cur2);
    const double base_c =
        x.eval.cost - item_cost(ctx.instance, i1, cur1) - item_cost(ctx.instance, i2, cur2);
    bool accepted = false;
    for (int j1 = 0; j1 < n1 && !accepted; ++j1) {
      if (j1 == cur1) continue;
      for (int j2 = 0; j2 < n2; ++j2) {
        if (j2 == cur2) continue;
        const double w = base_w + ctx.surrogate.at(i1, j1) + ctx.surrogate.at(i2, j2);
        if (w > ctx.instance.capacity) continue;
        const double cost =
            base_c + item_cost(ctx.instance, i1, j1) + item_cost(ctx.instance, i2, j2);
        if (cannot_improve(cost, x.eval)) continue;
        Solution candidate = x.solution;
        candidate.genes[i1] = j1;
        candidate.genes[i2] = j2;
        const Evaluation e = ctx.evaluator.evaluate(candidate, rng);
        if (improves(e, x.eval)) {
          x.solution = std::move(candidate);
          x.eval = e;
          weight = ctx.surrogate.total(x.solution);
          accepted = true;
          break;
        }
      }
    }
  }
  return x;
}

Individual local_search_degradation(const SearchContext& ctx, Individual x, RandomStream& rng) {
  const std::size_t i = rng.below(ctx.instance.class_count());
  const int n = static_cast<int>(ctx.instance.classes[i].items.size());
  if (n < 2) return x;
  const int cur = x.solution.genes[i];
  int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  if (j >= cur) ++j;
  Solution candidate = x.solution;
  candidate.genes[i] = j;
  if (!ctx.surrogate.feasible(candidate)) return x;
  const Evaluation e = ctx.evaluator.evaluate(candidate, rng);
  if (e.cl.p_hat < ctx.instance.required_confidence) return x;
  x.solution = std::move(candidate);
  x.eval = e;
  return x;
}

Individual local_search(const SearchContext& ctx, Individual x, RandomStream& rng) {
  x = local_search_single_swap(ctx, std::move(x), rng);
  x = local_search_double_swap(ctx, std::move(x), rng);
  return local_search_degradation(ctx, std::move(x), rng);
}

std::vector<ObjectivePoint> feasible_front(const std::vector<Individual>& population) {
  std::vector<ObjectivePoint> pts;
  for (const auto& ind : population)
    if (ind.eval.feasible) pts.push_back({ind.eval.cost, ind.eval.neg_cl});
  return nondominated_filter(pts);
}

RunResult run_nhils(const Instance& instance, const NhilsConfig& cfg) {
  cfg.validate();
  instance.validate();
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const RandomStream root(cfg.run_seed);
  const SurrogateTable surrogate(instance, cfg.surrogate);
  Evaluator evaluator(instance, cfg.schedule);
  const SearchContext ctx{instance, cfg, surrogate, evaluator};
  const std::vector<int> sizes = instance.class_sizes();
  const std::size_t S = cfg.population_size;

  std::vector<Solution> initial;
  RandomStream init_rng = root.derive({kInitTag});
  if (uses_hybrid_init(cfg.variant)) {
    initial = hybrid_initialization(instance, cfg, init_rng);
  } else {
    initial.resize(S);
    for (auto& s : initial) {
      s.genes.resize(sizes.size());
      for (std::size_t i = 0; i < sizes.size(); ++i)
        s.genes[i] = static_cast<int>(init_rng.below(static_cast<std::uint64_t>(sizes[i])));
    }
  }

  std::vector<Individual> population;
  population.reserve(S);
  for (std::size_t k = 0; k < initial.size(); ++k) {
    RandomStream rng = root.derive({kEvalTag, 0, k});
    population.push_back({initial[k], evaluator.evaluate(initial[k], rng)});
  }
  select_survivors(population, population.size());  // assigns rank and crowding

  RunResult result;
  result.variant = std::string(variant_name(cfg.variant));
  result.run_seed = cfg.run_seed;
  auto record = [&](int generation) {
    GenerationStats st;
    st.generation = generation;
    st.feasible = static_cast<std::size_t>(std::count_if(
        population.begin(), population.end(), [](const Individual& x) { return x.eval.feasible; }));
    st.evaluations = evaluator.evaluations();
    st.samples = evaluator.samples();
    st.front = feasible_front(population);
    result.history.push_back(std::move(st));
  };
  record(0);

  const bool with_ls = uses_local_search(cfg.variant) && cfg.local_search_prob > 0.0;
  int t = 0;
  for (; t < cfg.max_generations; ++t) {
    if (cfg.time_limit_seconds && elapsed() >= *cfg.time_limit_seconds) break;
    const auto gen = static_cast<std::uint64_t>(t);

    RandomStream var_rng = root.derive({kVariationTag, gen});
    std::vector<Individual> merged = population;
    merged.reserve(3 * S);
    std::size_t produced = 0;
    while (produced < S) {
      const Solution& a = population[binary_tournament(population, var_rng)].solution;
      const Solution& b = population[binary_tournament(population, var_rng)].solution;
      auto [c1, c2] = crossover(a, b, sizes, cfg.variation, var_rng);
      for (Solution* c : {&c1, &c2}) {
        if (produced == S) break;
        Solution child = mutate(*c, sizes, cfg.variation, var_rng);
        RandomStream eval_rng = root.derive({kEvalTag, gen + 1, produced});
        Evaluation e = evaluator.evaluate(child, eval_rng);
        merged.push_back({std::move(child), e});
        ++produced;
      }
    }

    if (with_ls) {
      RandomStream gate = root.derive({kGateTag, gen});
      const std::size_t before = merged.size();
      for (std::size_t k = 0; k < before; ++k) {
        if (gate.uniform01() < cfg.local_search_prob) {
          RandomStream ls_rng = root.derive({kLocalSearchTag, gen, k});
          merged.push_back(local_search(ctx, merged[k], ls_rng));
        }
      }
    }

    population = environmental_selection(std::move(merged), S);
    record(t + 1);
  }

  result.generations = t;
  result.population = std::move(population);
  result.total_samples = evaluator.samples();
  result.evaluations = evaluator.evaluations();
  result.wall_seconds = elapsed();
  return result;
}

std::string run_result_to_json(const RunResult& result, bool include_timing) {
  using Json = nlohmann::ordered_json;
  auto points = [](const std::vector<ObjectivePoint>& pts) {
    Json arr = Json::array();
    for (const auto& p : pts) arr.push_back(Json::array({p.cost, -p.neg_cl}));
    return arr;
  };
  Json doc;
  doc["format"] = "ccmckp-run";
  doc["version"] = 1;
  doc["variant"] = result.variant;
  doc["run_seed"] = result.run_seed;
  doc["generations"] = result.generations;
  doc["total_samples"] = result.total_samples;
  doc["evaluations"] = result.evaluations;
  if (include_timing) doc["wall_seconds"] = result.wall_seconds;
  Json pop = Json::array();
  for (const auto& ind : result.population) {
    pop.push_back(Json{{"genes", ind.solution.genes},
                       {"cost", ind.eval.cost},
                       {"cl", ind.eval.cl.p_hat},
                       {"samples", ind.eval.cl.samples_used},
                       {"stage", ind.eval.cl.stage_reached},
                       {"feasible", ind.eval.feasible},
                       {"rank", ind.rank}});
  }
  doc["population"] = std::move(pop);
  Json hist = Json::array();
  for (const auto& st : result.history) {
    hist.push_back(Json{{"generation", st.generation},
                        {"feasible", st.feasible},
                        {"evaluations", st.evaluations},
                        {"samples", st.samples},
                        {"front", points(st.front)}});
  }
  doc["history"] = std::move(hist);
  return doc.dump(1) + "\n";
}

}  // namespace ccmckp
