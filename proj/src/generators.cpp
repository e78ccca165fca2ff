#include "ccmckp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ccmckp {

namespace {

constexpr std::array<ScaleRow, 6> kScaleTable = {{
    {10, 10, 500, 20.0, 35.0},
    {10, 20, 500, 14.0, 15.0},
    {20, 10, 500, 30.0, 41.0},
    {30, 10, 500, 45.0, 60.0},
    {40, 10, 500, 58.0, 87.0},
    {50, 10, 500, 68.0, 97.0},
}};

// Generator constants. Every item gets a position r in [0, 1) inside its
// class: r = 0 is the expensive, light and reliable end, r = 1 the cheap,
// heavy and volatile end. Costs are assigned afterwards so that cost is
// strictly decreasing in expected weight.
struct LabConstants {
  // Mean weight = (W / m) * (mean_lo + mean_span * r). A uniformly random
  // selection weighs ~1.1 W on average: most random picks are infeasible.
  static constexpr double mean_lo = 0.6;
  static constexpr double mean_span = 1.0;
  // Coefficient of variation grows with r: cheap items are also riskier.
  static constexpr double cv_lo = 0.08;
  static constexpr double cv_span = 0.2;
  // Truncated normal: support mean +- 2.5 sd, clipped at zero.
  static constexpr double tn_half_width = 2.5;
  // Fatigue-life shape; >= 0.5 keeps the location nonnegative for cv <= 0.5.
  static constexpr double fl_shape_lo = 0.5;
  static constexpr double fl_shape_hi = 0.7;
  // Bimodal: first-component weight range; each component keeps half the
  // target standard deviation and the separation supplies the rest.
  static constexpr double bm_weight_lo = 0.3;
  static constexpr double bm_weight_hi = 0.7;
  static constexpr double bm_component_sd = 0.5;
};

struct AppConstants {
  static constexpr double window = 10.0;
  static constexpr int attempts = 4;
  // Per-attempt success probability 1 - 10^-(1 + 2 (1 - r)): 0.9 at the cheap
  // end up to 0.999 at the expensive end.
  static constexpr double success_decades_lo = 1.0;
  static constexpr double success_decades_span = 2.0;
  // Base delay within the first window: normal truncated to (0, window] with
  // mean (W / m) * (base_lo + base_span * r) and sd base_cv * mean.
  static constexpr double base_lo = 0.2;
  static constexpr double base_span = 0.8;
  static constexpr double base_cv = 0.3;
};

constexpr std::uint64_t kLabTag = 0x4c4142;  // "LAB"
constexpr std::uint64_t kAppTag = 0x415050;  // "APP"
constexpr std::uint64_t kBankTag = 0x42414e4b;

// Positions r for the items of one class: one per stratum, in random order.
std::vector<double> class_positions(int n, RandomStream& rng) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k)
    std::swap(order[static_cast<std::size_t>(k)],
              order[rng.below(static_cast<std::uint64_t>(k) + 1)]);
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    r[static_cast<std::size_t>(j)] = (order[static_cast<std::size_t>(j)] + rng.uniform01()) / n;
  return r;
}

// n distinct integer costs from [1, 100], assigned so that the item with the
// smallest expected weight gets the largest cost.
std::vector<double> anti_correlated_costs(const std::vector<double>& expected_weight,
                                          RandomStream& rng) {
  const std::size_t n = expected_weight.size();
  if (n > 100) throw std::invalid_argument("at most 100 items per class are supported");
  std::vector<int> pool(100);
  std::iota(pool.begin(), pool.end(), 1);
  for (std::size_t k = 0; k < n; ++k)
    std::swap(pool[k], pool[k + rng.below(pool.size() - k)]);
  std::vector<int> picked(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n));
  std::sort(picked.begin(), picked.end(), std::greater<>());

  std::vector<std::size_t> by_weight(n);
  std::iota(by_weight.begin(), by_weight.end(), 0);
  std::stable_sort(by_weight.begin(), by_weight.end(), [&](std::size_t a, std::size_t b) {
    return expected_weight[a] < expected_weight[b];
  });
  std::vector<double> cost(n);
  for (std::size_t rank = 0; rank < n; ++rank) cost[by_weight[rank]] = picked[rank];
  return cost;
}

WeightSpec lab_spec(int family, double mean, double sd, RandomStream& rng) {
  using C = LabConstants;
  switch (family) {
    case 0: {
      const double h = sd * std::sqrt(3.0);
      return UniformParams{mean - h, mean + h};
    }
    case 1:
      return TruncatedNormalParams{mean, sd, std::max(0.0, mean - C::tn_half_width * sd),
                                   mean + C::tn_half_width * sd};
    case 2: {
      const double a = rng.uniform(C::fl_shape_lo, C::fl_shape_hi);
      const double scale = sd / (a * std::sqrt(1.0 + 1.25 * a * a));
      const double location = std::max(0.0, mean - scale * (1.0 + 0.5 * a * a));
      return FatigueLifeParams{a, scale, location};
    }
    case 3: {
      const double w = rng.uniform(C::bm_weight_lo, C::bm_weight_hi);
      const double s = C::bm_component_sd * sd;
      const double sep = std::sqrt((sd * sd - s * s) / (w * (1.0 - w)));
      return BimodalParams{w, mean - (1.0 - w) * sep, s, mean + w * sep, s};
    }
    default: {
      const double k = (mean / sd) * (mean / sd);
      return GammaParams{k, mean / k, 0.0};
    }
  }
}

Instance assemble(std::string label, std::uint64_t seed, double capacity, const ScaleRow& row,
                  std::uint64_t tag, const std::vector<std::vector<WeightSpec>>& specs,
                  RandomStream& rng) {
  Instance inst;
  inst.label = std::move(label);
  inst.seed = seed;
  inst.capacity = capacity;
  inst.required_confidence = kBenchmarkConfidence;
  inst.bank_size = static_cast<std::size_t>(row.bank_size);
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::vector<double> expected;
    for (const auto& s : specs[i]) expected.push_back(analytic_mean(s));
    const std::vector<double> costs = anti_correlated_costs(expected, rng);
    ItemClass cls;
    for (std::size_t j = 0; j < specs[i].size(); ++j) {
      const std::uint64_t bank_seed = derive_seed(seed, {tag, kBankTag, i, j});
      cls.items.push_back(
          Item{costs[j], WeightOracle::from_seed(specs[i][j], inst.bank_size, bank_seed), bank_seed});
    }
    inst.classes.push_back(std::move(cls));
  }
  inst.validate();
  return inst;
}

}  // namespace

const ScaleRow& scale_row(Scale scale) noexcept {
  return kScaleTable[static_cast<std::size_t>(scale)];
}

std::string_view scale_name(Scale scale) noexcept {
  static constexpr std::array<std::string_view, 6> names = {"ls1", "ls2", "ls3",
                                                            "ls4", "ls5", "ls6"};
  return names[static_cast<std::size_t>(scale)];
}

Scale parse_scale(std::string_view name) {
  for (Scale s : kAllScales)
    if (scale_name(s) == name) return s;
  throw std::invalid_argument("unknown scale '" + std::string(name) + "' (expected ls1..ls6)");
}

Instance generate_lab_instance(Scale scale, std::uint64_t seed) {
  using C = LabConstants;
  const ScaleRow& row = scale_row(scale);
  RandomStream rng(derive_seed(seed, {kLabTag, static_cast<std::uint64_t>(scale)}));
  const double unit = row.capacity_lab / row.classes;
  std::vector<std::vector<WeightSpec>> specs(static_cast<std::size_t>(row.classes));
  int global = 0;
  for (auto& cls : specs) {
    for (double r : class_positions(row.items_per_class, rng)) {
      const double mean = unit * (C::mean_lo + C::mean_span * r);
      const double sd = mean * (C::cv_lo + C::cv_span * r);
      cls.push_back(lab_spec(global % 5, mean, sd, rng));
      ++global;
    }
  }
  return assemble("LAB-" + std::string(scale_name(scale)), seed, row.capacity_lab, row, kLabTag,
                  specs, rng);
}

Instance generate_app_instance(Scale scale, std::uint64_t seed) {
  using C = AppConstants;
  const ScaleRow& row = scale_row(scale);
  RandomStream rng(derive_seed(seed, {kAppTag, static_cast<std::uint64_t>(scale)}));
  const double unit = row.capacity_app / row.classes;
  const double failure_weight = row.capacity_app + C::attempts * C::window;
  std::vector<std::vector<WeightSpec>> specs(static_cast<std::size_t>(row.classes));
  for (auto& cls : specs) {
    for (double r : class_positions(row.items_per_class, rng)) {
      const double q =
          1.0 - std::pow(10.0, -(C::success_decades_lo + C::success_decades_span * (1.0 - r)));
      const double base_mean = std::min(unit * (C::base_lo + C::base_span * r), 0.8 * C::window);
      const TruncatedNormalParams base{base_mean, C::base_cv * base_mean, 0.0, C::window};
      cls.push_back(AppRetransmissionParams{q, C::window, C::attempts, base, failure_weight});
    }
  }
  return assemble("APP-" + std::string(scale_name(scale)), seed, row.capacity_app, row, kAppTag,
                  specs, rng);
}

}  // namespace ccmckp
