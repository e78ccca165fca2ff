#pragma once

#include <limits>
#include <span>
#include <vector>

#include "ccmckp/instance.hpp"
#include "ccmckp/random.hpp"

namespace ccmckp {

// A point in the minimized objective space (cost, -CL).
struct ObjectivePoint {
  double cost = 0.0;
  double neg_cl = 0.0;
  auto operator<=>(const ObjectivePoint&) const = default;
};

// Marker for distance metrics of an empty front.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

struct ReferenceData {
  ObjectivePoint ref_point;
  std::vector<ObjectivePoint> ref_set;  // non-dominated, cost ascending
  double margin_fraction = 0.1;
};

bool weakly_dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept;
bool dominates(const ObjectivePoint& a, const ObjectivePoint& b) noexcept;

// Distinct non-dominated points, sorted by cost ascending.
std::vector<ObjectivePoint> nondominated_filter(std::span<const ObjectivePoint> points);

// Non-dominated union of all fronts; the reference point is the nadir of that
// set pushed out by max(margin * range, 1e-6) per objective.
// Throws std::invalid_argument if every front is empty.
ReferenceData build_reference(std::span<const std::vector<ObjectivePoint>> fronts,
                              double margin = 0.1);

// Exact 2-D hypervolume. Points that do not weakly dominate ref contribute 0.
double hypervolume(std::span<const ObjectivePoint> front, const ObjectivePoint& ref);

// Mean distance from each reference point to its nearest front point;
// kInfiniteDistance for an empty front. Throws for an empty ref_set.
double igd(std::span<const ObjectivePoint> front, std::span<const ObjectivePoint> ref_set);
// Same with the dominance-aware distance sqrt(sum max(a_k - r_k, 0)^2).
double igd_plus(std::span<const ObjectivePoint> front, std::span<const ObjectivePoint> ref_set);

// Share of the population whose reference confidence level, estimated from
// reference_samples fresh draws per member, reaches the required level.
// Member k draws from rng.derive({k}). Throws for an empty population.
double fsr(std::span<const Solution> population, const Instance& instance,
           std::uint64_t reference_samples, const RandomStream& rng);

// Reference confidence levels used by fsr, in population order.
std::vector<double> reference_confidence(std::span<const Solution> population,
                                         const Instance& instance,
                                         std::uint64_t reference_samples, const RandomStream& rng);

}  // namespace ccmckp
