#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "ccmckp/instance.hpp"

namespace ccmckp {

// Threshold of the final stage; compares greater than every real.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Cumulative sample sizes T_1 < ... < T_K with stage thresholds
// P_1 <= ... <= P_{K-1} and an unbounded final threshold.
struct StageSchedule {
  std::vector<std::uint64_t> cumulative_samples;
  std::vector<double> thresholds;

  // T = [1e4, 1e5, 1e6], C = [0.999, 0.9999, inf].
  static StageSchedule standard();
  // T = [n], C = [inf]: equivalent to fixed-sample evaluation.
  static StageSchedule single(std::uint64_t n);
  // "10000:0.999,100000:0.9999,1000000:inf"
  static StageSchedule parse(const std::string& text);
  std::string to_string() const;

  std::size_t stages() const noexcept { return cumulative_samples.size(); }
  std::uint64_t final_samples() const { return cumulative_samples.back(); }

  // Throws std::invalid_argument.
  void validate() const;

  bool operator==(const StageSchedule&) const = default;
};

struct ClEstimate {
  double p_hat = 0.0;
  std::uint64_t samples_used = 0;
  int stage_reached = 1;  // 1-based
  bool early_stopped = false;

  bool operator==(const ClEstimate&) const = default;
};

// Plain Monte-Carlo estimate of P(total weight <= W) from sample_count draws.
ClEstimate estimate_cl_fixed(const Instance& instance, const Solution& s,
                             std::uint64_t sample_count, RandomStream& rng);

// Staged estimate: after each stage the running estimate over all samples so
// far is compared with that stage's threshold and evaluation stops early when
// it falls strictly below.
ClEstimate estimate_cl_opera(const Instance& instance, const Solution& s,
                             const StageSchedule& schedule, RandomStream& rng);

// Upper bound on P(p_hat_B >= p_hat_A) for true levels p_A - p_B = gap when A
// receives n_a and B receives n_b <= n_a samples:
//   exp(-2 gap^2 / (1/n_b + 1/n_a)).
// A zero gap yields the vacuous bound 1. Throws std::invalid_argument for
// gap outside [0, 1], zero sample counts or n_b > n_a.
double order_error_bound(double gap, std::uint64_t n_a, std::uint64_t n_b);
// The looser closed form exp(-n_b gap^2); never smaller than the tight bound.
double order_error_bound_simplified(double gap, std::uint64_t n_a, std::uint64_t n_b);

enum class SampleBound { Hoeffding, Chernoff };

// Smallest sample count L with exp(-2 L eps^2) <= 1/2, i.e. ceil(ln 2 / (2 eps^2));
// the Chernoff row is ceil(2 * ln 2 / (2 eps^2)). Throws for eps outside (0, 1).
std::uint64_t min_sample_size(double epsilon, SampleBound bound);

}  // namespace ccmckp
