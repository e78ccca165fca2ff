#include "ccmckp/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ccmckp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) bad(std::string(name) + " must be finite");
}

void validate_uniform(const UniformParams& p, const char* where) {
  require_finite(p.lower, "lower");
  require_finite(p.upper, "upper");
  if (p.lower < 0.0) bad(std::string(where) + ".lower must be >= 0");
  if (p.upper < p.lower) bad(std::string(where) + ".upper must be >= lower");
}

void validate_tn(const TruncatedNormalParams& p, const char* where) {
  require_finite(p.mean, "mean");
  require_finite(p.stddev, "stddev");
  require_finite(p.lower, "lower");
  if (p.stddev < 0.0) bad(std::string(where) + ".stddev must be >= 0");
  if (p.lower < 0.0) bad(std::string(where) + ".lower must be >= 0");
  if (!(p.upper >= p.lower)) bad(std::string(where) + ".upper must be >= lower");
  if (p.stddev == 0.0 && (p.mean < p.lower || p.mean > p.upper))
    bad(std::string(where) + ".mean must lie in [lower, upper] when stddev is 0");
  if (p.stddev > 0.0) {
    const double a = (p.lower - p.mean) / p.stddev;
    const double b = (p.upper - p.mean) / p.stddev;
    if (a > 37.0 || b < -37.0) bad(std::string(where) + " truncation interval has no mass");
  }
}

double uniform_second_moment(const UniformParams& p) {
  const double m = 0.5 * (p.lower + p.upper);
  const double w = p.upper - p.lower;
  return m * m + w * w / 12.0;
}

Moments base_moments(const BaseDelay& base) {
  if (const auto* u = std::get_if<UniformParams>(&base)) {
    const double m = 0.5 * (u->lower + u->upper);
    return {m, uniform_second_moment(*u) - m * m};
  }
  return truncated_normal_moments(std::get<TruncatedNormalParams>(base));
}

struct TwoMoments {
  double first;
  double second;
};

TwoMoments raw_moments(const WeightSpec& spec) {
  return std::visit(
      [](const auto& p) -> TwoMoments {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformParams>) {
          return {0.5 * (p.lower + p.upper), uniform_second_moment(p)};
        } else if constexpr (std::is_same_v<T, TruncatedNormalParams>) {
          const Moments m = truncated_normal_moments(p);
          return {m.mean, m.variance + m.mean * m.mean};
        } else if constexpr (std::is_same_v<T, FatigueLifeParams>) {
          const double a2 = p.shape * p.shape;
          const double mean = p.location + p.scale * (1.0 + 0.5 * a2);
          const double var = p.shape * p.shape * p.scale * p.scale * (1.0 + 1.25 * a2);
          return {mean, var + mean * mean};
        } else if constexpr (std::is_same_v<T, BimodalParams>) {
          const Moments c1 = truncated_normal_moments({p.mean1, p.stddev1, 0.0, kInf});
          const Moments c2 = truncated_normal_moments({p.mean2, p.stddev2, 0.0, kInf});
          return {p.weight * c1.mean + (1.0 - p.weight) * c2.mean,
                  p.weight * (c1.variance + c1.mean * c1.mean) +
                      (1.0 - p.weight) * (c2.variance + c2.mean * c2.mean)};
        } else if constexpr (std::is_same_v<T, GammaParams>) {
          const double mean = p.location + p.shape * p.scale;
          return {mean, p.shape * p.scale * p.scale + mean * mean};
        } else {
          const Moments b = base_moments(p.base);
          const double b2 = b.variance + b.mean * b.mean;
          double first = 0.0;
          double second = 0.0;
          double reach = 1.0;  // probability that attempt k is made
          for (int k = 1; k <= p.attempts; ++k) {
            const double mass = reach * p.success_prob;
            const double shift = (k - 1) * p.window;
            first += mass * (shift + b.mean);
            second += mass * (shift * shift + 2.0 * shift * b.mean + b2);
            reach *= 1.0 - p.success_prob;
          }
          first += reach * p.failure_weight;
          second += reach * p.failure_weight * p.failure_weight;
          return {first, second};
        }
      },
      spec);
}

// Acklam's rational approximation of the normal quantile.
double acklam(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::Uniform: return "uniform";
    case Family::TruncatedNormal: return "truncated_normal";
    case Family::FatigueLife: return "fatigue_life";
    case Family::Bimodal: return "bimodal";
    case Family::Gamma: return "gamma";
    case Family::AppRetransmission: return "app_retransmission";
  }
  return "unknown";
}

Family family_from_name(std::string_view name) {
  for (Family f : {Family::Uniform, Family::TruncatedNormal, Family::FatigueLife, Family::Bimodal,
                   Family::Gamma, Family::AppRetransmission}) {
    if (family_name(f) == name) return f;
  }
  bad("unknown distribution family '" + std::string(name) + "'");
}

Family family_of(const WeightSpec& spec) noexcept { return static_cast<Family>(spec.index()); }

void validate(const WeightSpec& spec) {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformParams>) {
          validate_uniform(p, "uniform");
        } else if constexpr (std::is_same_v<T, TruncatedNormalParams>) {
          validate_tn(p, "truncated_normal");
        } else if constexpr (std::is_same_v<T, FatigueLifeParams>) {
          require_finite(p.shape, "shape");
          require_finite(p.scale, "scale");
          require_finite(p.location, "location");
          if (p.shape <= 0.0) bad("fatigue_life.shape must be > 0");
          if (p.scale <= 0.0) bad("fatigue_life.scale must be > 0");
          if (p.location < 0.0) bad("fatigue_life.location must be >= 0");
        } else if constexpr (std::is_same_v<T, BimodalParams>) {
          if (!(p.weight >= 0.0 && p.weight <= 1.0)) bad("bimodal.weight must lie in [0, 1]");
          validate_tn({p.mean1, p.stddev1, 0.0, kInf}, "bimodal.component1");
          validate_tn({p.mean2, p.stddev2, 0.0, kInf}, "bimodal.component2");
        } else if constexpr (std::is_same_v<T, GammaParams>) {
          require_finite(p.shape, "shape");
          require_finite(p.scale, "scale");
          require_finite(p.location, "location");
          if (p.shape <= 0.0) bad("gamma.shape must be > 0");
          if (p.scale <= 0.0) bad("gamma.scale must be > 0");
          if (p.location < 0.0) bad("gamma.location must be >= 0");
        } else {
          if (!(p.success_prob > 0.0 && p.success_prob <= 1.0))
            bad("app_retransmission.success_prob must lie in (0, 1]");
          if (!(p.window > 0.0) || !std::isfinite(p.window))
            bad("app_retransmission.window must be > 0");
          if (p.attempts < 1) bad("app_retransmission.attempts must be >= 1");
          if (!std::isfinite(p.failure_weight) || p.failure_weight < p.attempts * p.window)
            bad("app_retransmission.failure_weight must be >= attempts * window");
          if (const auto* u = std::get_if<UniformParams>(&p.base)) {
            validate_uniform(*u, "app_retransmission.base");
            if (u->upper > p.window) bad("app_retransmission.base.upper must be <= window");
          } else {
            const auto& tn = std::get<TruncatedNormalParams>(p.base);
            validate_tn(tn, "app_retransmission.base");
            if (tn.upper > p.window) bad("app_retransmission.base.upper must be <= window");
          }
        }
      },
      spec);
}

double analytic_mean(const WeightSpec& spec) { return raw_moments(spec).first; }

double analytic_variance(const WeightSpec& spec) {
  const TwoMoments m = raw_moments(spec);
  return std::max(0.0, m.second - m.first * m.first);
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) noexcept {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  double x = acklam(p);
  // One Halley step against the erfc-based CDF.
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

Moments truncated_normal_moments(const TruncatedNormalParams& p) {
  if (p.stddev == 0.0) return {p.mean, 0.0};
  const double a = (p.lower - p.mean) / p.stddev;
  const double b = (p.upper - p.mean) / p.stddev;
  // Use the tail that keeps the mass difference well conditioned.
  const double z = a > 0.0 ? normal_cdf(-a) - normal_cdf(-b) : normal_cdf(b) - normal_cdf(a);
  const double pa = normal_pdf(a);
  const double pb = std::isinf(b) ? 0.0 : normal_pdf(b);
  const double apa = a * pa;
  const double bpb = std::isinf(b) ? 0.0 : b * pb;
  const double ratio = (pa - pb) / z;
  const double mean = p.mean + p.stddev * ratio;
  const double var = p.stddev * p.stddev * (1.0 + (apa - bpb) / z - ratio * ratio);
  return {mean, std::max(0.0, var)};
}

WeightSampler::TruncNormal WeightSampler::prepare(const TruncatedNormalParams& p) {
  TruncNormal t;
  t.mean = p.mean;
  t.stddev = p.stddev;
  if (p.stddev == 0.0) return t;
  t.alpha = (p.lower - p.mean) / p.stddev;
  t.beta = (p.upper - p.mean) / p.stddev;
  if (t.alpha >= 0.0) {
    t.upper_tail = true;
    t.p_lo = normal_cdf(-t.alpha);  // survival at lower bound
    t.p_hi = normal_cdf(-t.beta);   // survival at upper bound
  } else {
    t.p_lo = normal_cdf(t.alpha);
    t.p_hi = normal_cdf(t.beta);
  }
  const double mass = t.upper_tail ? t.p_lo - t.p_hi : t.p_hi - t.p_lo;
  t.rejection = mass >= 0.3;
  return t;
}

double WeightSampler::TruncNormal::draw(RandomStream& rng) const {
  if (stddev == 0.0) return mean;
  double z;
  if (rejection) {
    do {
      z = rng.normal();
    } while (z < alpha || z > beta);
  } else if (upper_tail) {
    const double q = p_hi + (p_lo - p_hi) * rng.uniform_open0();
    z = -normal_quantile(q);
  } else {
    const double q = p_lo + (p_hi - p_lo) * rng.uniform_open0();
    z = normal_quantile(q);
  }
  z = std::min(std::max(z, alpha), beta);
  return mean + stddev * z;
}

WeightSampler::WeightSampler(const WeightSpec& spec) : spec_(spec) {
  validate(spec_);
  std::visit(
      [this](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformParams>) {
          degenerate_ = p.lower == p.upper;
          constant_ = p.lower;
        } else if constexpr (std::is_same_v<T, TruncatedNormalParams>) {
          degenerate_ = p.stddev == 0.0 || p.lower == p.upper;
          constant_ = p.lower == p.upper ? p.lower : p.mean;
          tn_[0] = prepare(p);
        } else if constexpr (std::is_same_v<T, BimodalParams>) {
          tn_[0] = prepare({p.mean1, p.stddev1, 0.0, kInf});
          tn_[1] = prepare({p.mean2, p.stddev2, 0.0, kInf});
        } else if constexpr (std::is_same_v<T, AppRetransmissionParams>) {
          if (const auto* tn = std::get_if<TruncatedNormalParams>(&p.base)) tn_[0] = prepare(*tn);
        }
      },
      spec_);
}

double WeightSampler::draw_base(RandomStream& rng) const {
  const auto& app = std::get<AppRetransmissionParams>(spec_);
  if (const auto* u = std::get_if<UniformParams>(&app.base)) {
    // (lower, upper]
    return u->upper - (u->upper - u->lower) * rng.uniform01();
  }
  return tn_[0].draw(rng);
}

double WeightSampler::draw(RandomStream& rng) const {
  if (degenerate_) return constant_;
  switch (spec_.index()) {
    case 0: {
      const auto& p = std::get<UniformParams>(spec_);
      return p.lower + (p.upper - p.lower) * rng.uniform01();
    }
    case 1:
      return tn_[0].draw(rng);
    case 2: {
      const auto& p = std::get<FatigueLifeParams>(spec_);
      const double t = 0.5 * p.shape * rng.normal();
      const double r = t + std::sqrt(t * t + 1.0);
      return p.location + p.scale * r * r;
    }
    case 3: {
      const auto& p = std::get<BimodalParams>(spec_);
      return rng.uniform01() < p.weight ? tn_[0].draw(rng) : tn_[1].draw(rng);
    }
    case 4: {
      const auto& p = std::get<GammaParams>(spec_);
      return p.location + p.scale * rng.gamma(p.shape);
    }
    default: {
      const auto& p = std::get<AppRetransmissionParams>(spec_);
      for (int k = 0; k < p.attempts; ++k) {
        if (rng.uniform01() < p.success_prob) return k * p.window + draw_base(rng);
      }
      return p.failure_weight;
    }
  }
}

void WeightSampler::add_to(std::span<double> totals, RandomStream& rng) const {
  if (degenerate_) {
    for (double& t : totals) t += constant_;
    return;
  }
  switch (spec_.index()) {
    case 0: {
      const auto& p = std::get<UniformParams>(spec_);
      const double width = p.upper - p.lower;
      for (double& t : totals) t += p.lower + width * rng.uniform01();
      return;
    }
    case 2: {
      const auto& p = std::get<FatigueLifeParams>(spec_);
      const double half = 0.5 * p.shape;
      for (double& t : totals) {
        const double s = half * rng.normal();
        const double r = s + std::sqrt(s * s + 1.0);
        t += p.location + p.scale * r * r;
      }
      return;
    }
    case 4: {
      const auto& p = std::get<GammaParams>(spec_);
      for (double& t : totals) t += p.location + p.scale * rng.gamma(p.shape);
      return;
    }
    default:
      for (double& t : totals) t += draw(rng);
      return;
  }
}

}  // namespace ccmckp
