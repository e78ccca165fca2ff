#include <doctest.h>

#include <cmath>

#include "ccmckp/generators.hpp"
#include "ccmckp/oracle.hpp"
#include "ccmckp/random.hpp"
#include "ccmckp/sampling.hpp"
#include "test_support.hpp"

using namespace ccmckp;
using ccmckp::testing::fixed_instance;
using ccmckp::testing::spec_item;

namespace {

struct Summary {
  double mean = 0.0;
  double var = 0.0;
};

Summary summarize(const WeightSpec& spec, std::size_t n, std::uint64_t seed) {
  const WeightSampler sampler(spec);
  RandomStream rng(seed);
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = sampler.draw(rng);
    REQUIRE(x >= 0.0);
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / static_cast<double>(n);
  return {mean, sum2 / static_cast<double>(n) - mean * mean};
}

// |sample mean - analytic mean| within 3 standard errors; sample variance
// within 10% of the analytic one.
void check_moments(const WeightSpec& spec, std::uint64_t seed) {
  constexpr std::size_t n = 100'000;
  const Summary s = summarize(spec, n, seed);
  const double mu = analytic_mean(spec);
  const double var = analytic_variance(spec);
  CAPTURE(family_name(family_of(spec)));
  CHECK(std::fabs(s.mean - mu) <= 3.0 * std::sqrt(var / n));
  CHECK(s.var == doctest::Approx(var).epsilon(0.1));
}

}  // namespace

TEST_CASE("random streams are reproducible and derivation is path-sensitive") {
  RandomStream a(5), b(5);
  for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(5, {1, 2}) != derive_seed(5, {1}));
  CHECK(derive_seed(5, {1, 2}) != derive_seed(5, {2, 1}));
  CHECK(RandomStream(5).derive({3}).seed() == derive_seed(5, {3}));
}

TEST_CASE("distinct streams are uncorrelated") {
  RandomStream a = RandomStream(11).derive({1});
  RandomStream b = RandomStream(11).derive({2});
  constexpr int n = 100'000;
  double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
  for (int k = 0; k < n; ++k) {
    const double x = a.uniform01(), y = b.uniform01();
    sa += x, sb += y, saa += x * x, sbb += y * y, sab += x * y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  const double r = cov / std::sqrt((saa / n - sa * sa / n / n) * (sbb / n - sb * sb / n / n));
  CHECK(std::fabs(r) < 0.05);
}

TEST_CASE("below() is unbiased over a small range") {
  RandomStream rng(3);
  int counts[7] = {};
  for (int k = 0; k < 70'000; ++k) ++counts[rng.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10'000) < 500);
}

TEST_CASE("standard variates have the right moments") {
  RandomStream rng(17);
  constexpr int n = 200'000;
  double s = 0, s2 = 0, tail = 0, e = 0, g = 0;
  for (int k = 0; k < n; ++k) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
    tail += std::fabs(z) > 3.0;
    e += rng.exponential();
    g += rng.gamma(0.5);
  }
  CHECK(std::fabs(s / n) < 0.01);
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(tail / n == doctest::Approx(2.0 * (1.0 - normal_cdf(3.0))).epsilon(0.15));
  CHECK(e / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(g / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.999, 1 - 1e-9})
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-9));
}

TEST_CASE("LAB families match their analytic moments") {
  check_moments(UniformParams{1.0, 3.0}, 1);
  check_moments(TruncatedNormalParams{2.0, 0.5, 0.75, 3.25}, 2);
  // Far-tail truncation goes through the inverse-cdf path.
  check_moments(TruncatedNormalParams{0.0, 1.0, 3.0, 6.0}, 3);
  check_moments(TruncatedNormalParams{1.0, 1.0, 0.0, std::numeric_limits<double>::infinity()}, 4);
  check_moments(FatigueLifeParams{0.6, 1.5, 0.2}, 5);
  check_moments(BimodalParams{0.4, 1.0, 0.2, 3.0, 0.4}, 6);
  check_moments(GammaParams{2.5, 0.4, 0.1}, 7);
  check_moments(GammaParams{0.7, 1.0, 0.0}, 8);
}

TEST_CASE("generated LAB items match their analytic moments") {
  const Instance inst = generate_lab_instance(Scale::ls1, 1);
  std::uint64_t seed = 100;
  for (std::size_t j = 0; j < 5; ++j) check_moments(inst.classes[0].items[j].oracle.spec(), ++seed);
}

TEST_CASE("retransmission windows carry the per-attempt masses") {
  const AppRetransmissionParams spec{0.9, 10.0, 4, UniformParams{0.0, 10.0}, 1000.0};
  const WeightSampler sampler(spec);
  RandomStream rng(21);
  constexpr std::size_t n = 1'000'000;
  std::size_t w[5] = {};
  for (std::size_t k = 0; k < n; ++k) {
    const double x = sampler.draw(rng);
    if (x == spec.failure_weight) {
      ++w[4];
    } else {
      REQUIRE(x > 0.0);
      REQUIRE(x <= 40.0);
      ++w[static_cast<int>(std::ceil(x / 10.0)) - 1];
    }
  }
  const double expected[5] = {0.9, 0.09, 0.009, 0.0009, 1e-4};
  for (int k = 0; k < 5; ++k) {
    const double p = expected[k];
    CAPTURE(k);
    CHECK(std::fabs(static_cast<double>(w[k]) / n - p) <= 3.0 * std::sqrt(p * (1 - p) / n));
  }
  CHECK(analytic_mean(spec) == doctest::Approx(summarize(spec, 200'000, 3).mean).epsilon(0.05));
}

TEST_CASE("batched sampling matches repeated single draws") {
  const Instance inst = generate_app_instance(Scale::ls1, 2);
  const WeightSampler& sampler = inst.classes[0].items[3].oracle.sampler();
  RandomStream a(9), b(9);
  std::vector<double> batch(5000, 0.0);
  sampler.add_to(batch, a);
  for (double x : batch) CHECK(x == sampler.draw(b));
}

TEST_CASE("degenerate weights") {
  RandomStream rng(1);
  const WeightOracle two = WeightOracle::from_seed(UniformParams{2, 2}, 16, 1);
  for (int k = 0; k < 10; ++k) CHECK(draw_weight(two, rng) == 2.0);
  CHECK(two.sampler().degenerate());
  CHECK(two.stddev() == 0.0);

  const Instance ten = fixed_instance(std::vector<std::vector<double>>(10, {1.0}),
                                      std::vector<std::vector<double>>(10, {1.0}), 20);
  CHECK(draw_total_weight(ten, Solution{std::vector<int>(10, 0)}, rng) == 10.0);
  const Instance pair = fixed_instance({{1}, {1}}, {{3}, {4}}, 20);
  CHECK(draw_total_weight(pair, Solution{{0, 0}}, rng) == 7.0);
}

TEST_CASE("single uniform item totals are uniform") {
  const Instance inst = ccmckp::testing::half_instance();
  RandomStream rng(4);
  int below_quarter = 0;
  for (int k = 0; k < 40'000; ++k) {
    const double x = draw_total_weight(inst, Solution{{0}}, rng);
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    below_quarter += x < 0.25;
  }
  CHECK(below_quarter / 40'000.0 == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("a failure draw always violates capacity") {
  Instance inst = fixed_instance({{1}}, {{1}}, 35);
  inst.classes.push_back(
      ItemClass{{spec_item(1, AppRetransmissionParams{0.0001, 10, 4, UniformParams{0, 10}, 75})}});
  RandomStream rng(2);
  CHECK(count_within_capacity(inst, Solution{{0, 0}}, 10'000, rng) < 10);
}

TEST_CASE("oracle statistics come from the bank") {
  const WeightOracle o(UniformParams{0, 10}, {4.0, 6.0, 5.0, 5.0});
  CHECK(o.mean() == 5.0);
  CHECK(o.stddev() == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK_THROWS_AS(WeightOracle(UniformParams{0, 10}, {}), std::invalid_argument);
  CHECK(WeightOracle::from_seed(GammaParams{2, 1, 0}, 500, 3) ==
        WeightOracle::from_seed(GammaParams{2, 1, 0}, 500, 3));
}

TEST_CASE("surrogate weight is mean plus lambda sd and additive") {
  const WeightOracle flat(UniformParams{5, 5}, {5, 5, 5});
  CHECK(surrogate_weight(flat, {3.0}) == 5.0);
  // Bank {4, 6}: mean 5, unbiased sd sqrt(2).
  const WeightOracle spread(UniformParams{0, 10}, {5 - std::sqrt(0.5), 5 + std::sqrt(0.5)});
  CHECK(surrogate_weight(spread, {3.0}) == doctest::Approx(8.0));
  CHECK(surrogate_weight(spread, {0.0}) == doctest::Approx(5.0));

  const Instance ones = fixed_instance(std::vector<std::vector<double>>(10, {1.0}),
                                       std::vector<std::vector<double>>(10, {1.0}), 20);
  const Solution all0{std::vector<int>(10, 0)};
  CHECK(surrogate_total(ones, all0, {}) == 10.0);
  CHECK(SurrogateTable(ones, {}).feasible(all0));
  const Instance threes = fixed_instance(std::vector<std::vector<double>>(10, {1.0}),
                                         std::vector<std::vector<double>>(10, {3.0}), 20);
  CHECK(surrogate_total(threes, all0, {}) == 30.0);
  CHECK_FALSE(SurrogateTable(threes, {}).feasible(all0));

  const Instance lab = generate_lab_instance(Scale::ls1, 4);
  const SurrogateTable table(lab, {});
  RandomStream rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Solution s;
    double sum = 0.0;
    for (std::size_t i = 0; i < lab.class_count(); ++i) {
      s.genes.push_back(static_cast<int>(rng.below(10)));
      sum += surrogate_weight(lab.classes[i].items[static_cast<std::size_t>(s.genes[i])].oracle, {});
    }
    CHECK(surrogate_total(lab, s, {}) == sum);
    CHECK(table.total(s) == sum);
  }
}
