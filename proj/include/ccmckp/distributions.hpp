#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "ccmckp/random.hpp"

namespace ccmckp {

enum class Family { Uniform, TruncatedNormal, FatigueLife, Bimodal, Gamma, AppRetransmission };

std::string_view family_name(Family f) noexcept;
// Throws std::invalid_argument for unknown tags.
Family family_from_name(std::string_view name);

struct UniformParams {
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const UniformParams&) const = default;
};

// Normal(mean, stddev) conditioned on [lower, upper]; upper may be +inf.
struct TruncatedNormalParams {
  double mean = 0.0;
  double stddev = 1.0;
  double lower = 0.0;
  double upper = 0.0;
  bool operator==(const TruncatedNormalParams&) const = default;
};

// Birnbaum-Saunders: location + scale * (shape*Z/2 + sqrt((shape*Z/2)^2 + 1))^2.
struct FatigueLifeParams {
  double shape = 1.0;
  double scale = 1.0;
  double location = 0.0;
  bool operator==(const FatigueLifeParams&) const = default;
};

// Two-component mixture; each component is a normal truncated to [0, +inf).
struct BimodalParams {
  double weight = 0.5;  // probability of the first component
  double mean1 = 0.0;
  double stddev1 = 1.0;
  double mean2 = 0.0;
  double stddev2 = 1.0;
  bool operator==(const BimodalParams&) const = default;
};

struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;
  double location = 0.0;
  bool operator==(const GammaParams&) const = default;
};

using BaseDelay = std::variant<UniformParams, TruncatedNormalParams>;

// Packet delay under a windowed retransmission scheme. Attempt k (1-based)
// succeeds with probability success_prob; a success at attempt k yields
// (k-1)*window + B where B is the base delay, drawn on (0, window]. If all
// attempts fail the draw is failure_weight.
struct AppRetransmissionParams {
  double success_prob = 0.9;
  double window = 10.0;
  int attempts = 4;
  BaseDelay base = UniformParams{0.0, 10.0};
  double failure_weight = 1000.0;
  bool operator==(const AppRetransmissionParams&) const = default;
};

using WeightSpec = std::variant<UniformParams, TruncatedNormalParams, FatigueLifeParams,
                                BimodalParams, GammaParams, AppRetransmissionParams>;

Family family_of(const WeightSpec& spec) noexcept;

// Throws std::invalid_argument naming the offending parameter.
void validate(const WeightSpec& spec);

double analytic_mean(const WeightSpec& spec);
double analytic_variance(const WeightSpec& spec);

// Standard normal helpers.
double normal_pdf(double x) noexcept;
double normal_cdf(double x) noexcept;
double normal_quantile(double p) noexcept;

// Mean and variance of Normal(mean, stddev) truncated to [lower, upper].
struct Moments {
  double mean;
  double variance;
};
Moments truncated_normal_moments(const TruncatedNormalParams& p);

// A WeightSpec with its per-draw constants precomputed. Cheap to copy.
class WeightSampler {
 public:
  explicit WeightSampler(const WeightSpec& spec);

  double draw(RandomStream& rng) const;
  // totals[k] += one fresh draw, for every k.
  void add_to(std::span<double> totals, RandomStream& rng) const;

  const WeightSpec& spec() const noexcept { return spec_; }
  bool degenerate() const noexcept { return degenerate_; }

 private:
  struct TruncNormal {
    double mean = 0.0, stddev = 0.0;
    double alpha = 0.0, beta = 0.0;  // standardized bounds
    double p_lo = 0.0, p_hi = 0.0;   // CDF (or survival, see upper_tail) at the bounds
    bool rejection = false;
    bool upper_tail = false;
    double draw(RandomStream& rng) const;
  };
  static TruncNormal prepare(const TruncatedNormalParams& p);
  double draw_base(RandomStream& rng) const;

  WeightSpec spec_;
  bool degenerate_ = false;
  double constant_ = 0.0;
  TruncNormal tn_[2];
};

}  // namespace ccmckp
