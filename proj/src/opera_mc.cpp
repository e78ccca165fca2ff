#include "ccmckp/opera_mc.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "ccmckp/sampling.hpp"

namespace ccmckp {

StageSchedule StageSchedule::standard() {
  return {{10'000, 100'000, 1'000'000}, {0.999, 0.9999, kUnbounded}};
}

StageSchedule StageSchedule::single(std::uint64_t n) { return {{n}, {kUnbounded}}; }

StageSchedule StageSchedule::parse(const std::string& text) {
  StageSchedule s;
  std::istringstream in(text);
  std::string stage;
  while (std::getline(in, stage, ',')) {
    const auto colon = stage.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("schedule stage '" + stage + "' must be samples:threshold");
    const std::string n = stage.substr(0, colon);
    const std::string p = stage.substr(colon + 1);
    try {
      std::size_t used = 0;
      s.cumulative_samples.push_back(std::stoull(n, &used));
      if (used != n.size()) throw std::invalid_argument(n);
      if (p == "inf" || p == "unbounded") {
        s.thresholds.push_back(kUnbounded);
      } else {
        s.thresholds.push_back(std::stod(p, &used));
        if (used != p.size()) throw std::invalid_argument(p);
      }
    } catch (const std::logic_error&) {
      throw std::invalid_argument("malformed schedule stage '" + stage + "'");
    }
  }
  s.validate();
  return s;
}

std::string StageSchedule::to_string() const {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t k = 0; k < stages(); ++k) {
    if (k) out << ',';
    out << cumulative_samples[k] << ':';
    if (std::isinf(thresholds[k]))
      out << "inf";
    else
      out << thresholds[k];
  }
  return out.str();
}

void StageSchedule::validate() const {
  if (cumulative_samples.empty()) throw std::invalid_argument("schedule needs at least one stage");
  if (cumulative_samples.size() != thresholds.size())
    throw std::invalid_argument("schedule samples and thresholds differ in length");
  if (cumulative_samples.front() == 0)
    throw std::invalid_argument("schedule sample sizes must be positive");
  for (std::size_t k = 1; k < cumulative_samples.size(); ++k) {
    if (cumulative_samples[k] <= cumulative_samples[k - 1])
      throw std::invalid_argument("schedule sample sizes must be strictly increasing");
    if (thresholds[k] < thresholds[k - 1])
      throw std::invalid_argument("schedule thresholds must be nondecreasing");
  }
  if (!std::isinf(thresholds.back()) || thresholds.back() < 0)
    throw std::invalid_argument("final schedule threshold must be unbounded");
  for (std::size_t k = 0; k + 1 < thresholds.size(); ++k) {
    if (!(thresholds[k] >= 0.0 && thresholds[k] <= 1.0))
      throw std::invalid_argument("intermediate schedule thresholds must lie in [0, 1]");
  }
}

ClEstimate estimate_cl_fixed(const Instance& instance, const Solution& s,
                             std::uint64_t sample_count, RandomStream& rng) {
  if (sample_count == 0) throw std::invalid_argument("sample_count must be positive");
  const std::uint64_t within = count_within_capacity(instance, s, sample_count, rng);
  return {static_cast<double>(within) / static_cast<double>(sample_count), sample_count, 1, false};
}

ClEstimate estimate_cl_opera(const Instance& instance, const Solution& s,
                             const StageSchedule& schedule, RandomStream& rng) {
  std::uint64_t total = 0;
  std::uint64_t within = 0;
  ClEstimate est;
  const std::size_t stages = schedule.stages();
  for (std::size_t k = 0; k < stages; ++k) {
    const std::uint64_t target = schedule.cumulative_samples[k];
    within += count_within_capacity(instance, s, target - total, rng);
    total = target;
    est.p_hat = static_cast<double>(within) / static_cast<double>(total);
    est.samples_used = total;
    est.stage_reached = static_cast<int>(k) + 1;
    if (est.p_hat < schedule.thresholds[k]) {
      est.early_stopped = k + 1 < stages;
      return est;
    }
  }
  return est;
}

namespace {
void check_bound_args(double gap, std::uint64_t n_a, std::uint64_t n_b) {
  if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("gap must lie in [0, 1]");
  if (n_a == 0 || n_b == 0) throw std::invalid_argument("sample counts must be positive");
  if (n_b > n_a) throw std::invalid_argument("n_b must not exceed n_a");
}
}  // namespace

double order_error_bound(double gap, std::uint64_t n_a, std::uint64_t n_b) {
  check_bound_args(gap, n_a, n_b);
  const double spread = 1.0 / static_cast<double>(n_b) + 1.0 / static_cast<double>(n_a);
  return std::exp(-2.0 * gap * gap / spread);
}

double order_error_bound_simplified(double gap, std::uint64_t n_a, std::uint64_t n_b) {
  check_bound_args(gap, n_a, n_b);
  return std::exp(-static_cast<double>(n_b) * gap * gap);
}

std::uint64_t min_sample_size(double epsilon, SampleBound bound) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  const double hoeffding = std::numbers::ln2 / (2.0 * epsilon * epsilon);
  const double value = bound == SampleBound::Hoeffding ? hoeffding : 2.0 * hoeffding;
  return static_cast<std::uint64_t>(std::ceil(value));
}

}  // namespace ccmckp
