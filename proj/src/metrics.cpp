#include "ccmckp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ccmckp/opera_mc.hpp"

namespace ccmckp {

bool weakly_dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
  return a.cost <= b.cost && a.neg_cl <= b.neg_cl;
}

bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept {
  return weakly_dominates(a, b) && (a.cost < b.cost || a.neg_cl < b.neg_cl);
}

std::vector<ObjectivePoint> nondominated_filter(std::span<const ObjectivePoint> points) {
  std::vector<ObjectivePoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());  // cost, then neg_cl
  std::vector<ObjectivePoint> out;
  for (const auto& p : sorted) {
    // With cost ascending, p survives iff its neg_cl beats every kept point.
    if (out.empty() || p.neg_cl < out.back().neg_cl) out.push_back(p);
  }
  return out;
}

ReferenceData build_reference(std::span<const std::vector<ObjectivePoint>> fronts, double margin) {
  std::vector<ObjectivePoint> all;
  for (const auto& f : fronts) all.insert(all.end(), f.begin(), f.end());
  if (all.empty()) throw std::invalid_argument("cannot build a reference from empty fronts");
  ReferenceData ref;
  ref.margin_fraction = margin;
  ref.ref_set = nondominated_filter(all);
  double lo_c = ref.ref_set.front().cost, hi_c = lo_c;
  double lo_p = ref.ref_set.front().neg_cl, hi_p = lo_p;
  for (const auto& p : ref.ref_set) {
    lo_c = std::min(lo_c, p.cost);
    hi_c = std::max(hi_c, p.cost);
    lo_p = std::min(lo_p, p.neg_cl);
    hi_p = std::max(hi_p, p.neg_cl);
  }
  constexpr double min_margin = 1e-6;
  ref.ref_point = {hi_c + std::max(margin * (hi_c - lo_c), min_margin),
                   hi_p + std::max(margin * (hi_p - lo_p), min_margin)};
  return ref;
}

double hypervolume(std::span<const ObjectivePoint> front, const ObjectivePoint& ref) {
  std::vector<ObjectivePoint> inside;
  for (const auto& p : front)
    if (weakly_dominates(p, ref)) inside.push_back(p);
  const std::vector<ObjectivePoint> nd = nondominated_filter(inside);
  double volume = 0.0;
  for (std::size_t k = 0; k < nd.size(); ++k) {
    const double next_cost = k + 1 < nd.size() ? nd[k + 1].cost : ref.cost;
    volume += (next_cost - nd[k].cost) * (ref.neg_cl - nd[k].neg_cl);
  }
  return volume;
}

namespace {

template <class Distance>
double inverted_distance(std::span<const ObjectivePoint> front,
                         std::span<const ObjectivePoint> ref_set, Distance distance) {
  if (ref_set.empty()) throw std::invalid_argument("reference set must not be empty");
  if (front.empty()) return kInfiniteDistance;
  double sum = 0.0;
  for (const auto& r : ref_set) {
    double best = kInfiniteDistance;
    for (const auto& a : front) best = std::min(best, distance(a, r));
    sum += best;
  }
  return sum / static_cast<double>(ref_set.size());
}

}  // namespace

double igd(std::span<const ObjectivePoint> front, std::span<const ObjectivePoint> ref_set) {
  return inverted_distance(front, ref_set, [](const ObjectivePoint& a, const ObjectivePoint& r) {
    return std::hypot(a.cost - r.cost, a.neg_cl - r.neg_cl);
  });
}

double igd_plus(std::span<const ObjectivePoint> front, std::span<const ObjectivePoint> ref_set) {
  return inverted_distance(front, ref_set, [](const ObjectivePoint& a, const ObjectivePoint& r) {
    return std::hypot(std::max(a.cost - r.cost, 0.0), std::max(a.neg_cl - r.neg_cl, 0.0));
  });
}

std::vector<double> reference_confidence(std::span<const Solution> population,
                                         const Instance& instance,
                                         std::uint64_t reference_samples, const RandomStream& rng) {
  std::vector<double> rcl;
  rcl.reserve(population.size());
  for (std::size_t k = 0; k < population.size(); ++k) {
    RandomStream member = rng.derive({k});
    rcl.push_back(estimate_cl_fixed(instance, population[k], reference_samples, member).p_hat);
  }
  return rcl;
}

double fsr(std::span<const Solution> population, const Instance& instance,
           std::uint64_t reference_samples, const RandomStream& rng) {
  if (population.empty()) throw std::invalid_argument("population must not be empty");
  const std::vector<double> rcl = reference_confidence(population, instance, reference_samples, rng);
  const auto ok = std::count_if(rcl.begin(), rcl.end(),
                                [&](double p) { return p >= instance.required_confidence; });
  return static_cast<double>(ok) / static_cast<double>(population.size());
}

}  // namespace ccmckp
