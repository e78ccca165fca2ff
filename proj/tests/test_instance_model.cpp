#include <doctest.h>

#include <cmath>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ccmckp/generators.hpp"
#include "ccmckp/instance_io.hpp"
#include "ccmckp/sampling.hpp"
#include "test_support.hpp"

using namespace ccmckp;
using ccmckp::testing::fixed_instance;

namespace {

std::string error_of(const std::string& doc) {
  try {
    instance_from_string(doc);
  } catch (const InstanceError& e) {
    return e.what();
  }
  return "";
}

// Rewrites one top-level key of a serialized instance.
std::string with_field(const Instance& inst, const std::string& key, const std::string& value) {
  std::string doc = instance_to_string(inst);
  const std::string needle = "\"" + key + "\": ";
  const auto at = doc.find(needle);
  REQUIRE(at != std::string::npos);
  const auto end = doc.find_first_of(",\n", at);
  return doc.substr(0, at + needle.size()) + value + doc.substr(end);
}

}  // namespace

TEST_CASE("generated instances follow the scale table") {
  struct Row {
    Scale s;
    int m, n;
    double w_lab, w_app;
  };
  const Row rows[] = {{Scale::ls1, 10, 10, 20, 35}, {Scale::ls2, 10, 20, 14, 15},
                      {Scale::ls3, 20, 10, 30, 41}, {Scale::ls4, 30, 10, 45, 60},
                      {Scale::ls5, 40, 10, 58, 87}, {Scale::ls6, 50, 10, 68, 97}};
  for (const Row& r : rows) {
    CAPTURE(scale_name(r.s));
    for (int kind = 0; kind < 2; ++kind) {
      const Instance inst = kind == 0 ? generate_lab_instance(r.s, 3) : generate_app_instance(r.s, 3);
      CHECK(inst.class_count() == static_cast<std::size_t>(r.m));
      for (int size : inst.class_sizes()) CHECK(size == r.n);
      CHECK(inst.bank_size == 500);
      CHECK(inst.capacity == (kind == 0 ? r.w_lab : r.w_app));
      CHECK(inst.required_confidence == kBenchmarkConfidence);
      CHECK(inst.label == std::string(kind == 0 ? "LAB-" : "APP-") + std::string(scale_name(r.s)));
      CHECK_NOTHROW(inst.validate());
    }
  }
}

TEST_CASE("generators are deterministic in (scale, seed)") {
  CHECK(instance_to_string(generate_lab_instance(Scale::ls1, 42)) ==
        instance_to_string(generate_lab_instance(Scale::ls1, 42)));
  CHECK(generate_app_instance(Scale::ls2, 7) == generate_app_instance(Scale::ls2, 7));
  CHECK_FALSE(generate_lab_instance(Scale::ls1, 1) == generate_lab_instance(Scale::ls1, 2));
}

TEST_CASE("LAB families are assigned round-robin and costs anti-correlate with weight") {
  const Instance inst = generate_lab_instance(Scale::ls3, 5);
  std::size_t k = 0;
  for (const auto& cls : inst.classes) {
    std::set<double> costs;
    for (const auto& item : cls.items) {
      CHECK(static_cast<std::size_t>(family_of(item.oracle.spec())) == k % 5);
      ++k;
      CHECK(item.cost == std::floor(item.cost));
      CHECK(item.cost >= 1);
      CHECK(item.cost <= 100);
      costs.insert(item.cost);
    }
    CHECK(costs.size() == cls.items.size());
    // Strictly decreasing cost in expected weight.
    for (const auto& a : cls.items)
      for (const auto& b : cls.items)
        if (analytic_mean(a.oracle.spec()) < analytic_mean(b.oracle.spec())) CHECK(a.cost > b.cost);
  }
}

TEST_CASE("APP items use the retransmission model with a failure weight above capacity") {
  const Instance inst = generate_app_instance(Scale::ls1, 9);
  for (const auto& cls : inst.classes) {
    for (const auto& item : cls.items) {
      const auto* p = std::get_if<AppRetransmissionParams>(&item.oracle.spec());
      REQUIRE(p != nullptr);
      CHECK(p->attempts == 4);
      CHECK(p->window == 10.0);
      CHECK(p->failure_weight > inst.capacity);
      CHECK(p->success_prob >= 0.9);
      CHECK(p->success_prob < 1.0);
    }
  }
}

TEST_CASE("every scale has a surrogate-feasible selection") {
  for (Scale s : kAllScales) {
    for (int kind = 0; kind < 2; ++kind) {
      const Instance inst = kind == 0 ? generate_lab_instance(s, 1) : generate_app_instance(s, 1);
      const SurrogateTable table(inst, SurrogateConfig{});
      double lightest = 0.0;
      for (std::size_t i = 0; i < inst.class_count(); ++i) {
        const auto& row = table.row(i);
        lightest += *std::min_element(row.begin(), row.end());
      }
      CAPTURE(inst.label);
      CHECK(lightest <= inst.capacity);
    }
  }
}

TEST_CASE("instance documents round-trip") {
  for (Scale s : {Scale::ls1, Scale::ls2}) {
    const Instance lab = generate_lab_instance(s, 1);
    const Instance app = generate_app_instance(s, 1);
    CHECK(instance_from_string(instance_to_string(lab)) == lab);
    CHECK(instance_from_string(instance_to_string(app)) == app);
    CHECK(instance_from_string(instance_to_string(lab, {.embed_banks = true})) == lab);
  }
  // Items without a bank seed always carry their bank.
  const Instance toy = fixed_instance({{1, 2}, {3}}, {{0.5, 0.25}, {2}}, 10);
  const std::string doc = instance_to_string(toy);
  CHECK(doc.find("\"bank\"") != std::string::npos);
  CHECK(instance_from_string(doc) == toy);
  // Re-serializing is byte-stable.
  CHECK(instance_to_string(instance_from_string(doc)) == doc);
}

TEST_CASE("infinite truncation bounds survive serialization") {
  Instance inst = fixed_instance({{1}}, {{1}}, 10);
  inst.classes[0].items.push_back(ccmckp::testing::spec_item(
      2, TruncatedNormalParams{1.0, 0.5, 0.0, std::numeric_limits<double>::infinity()}, 4));
  CHECK(instance_from_string(instance_to_string(inst)) == inst);
}

TEST_CASE("malformed documents name the offending field") {
  const Instance inst = generate_lab_instance(Scale::ls1, 1);
  std::string doc = instance_to_string(inst);

  SUBCASE("missing capacity") {
    const auto at = doc.find(" \"capacity\"");
    const auto end = doc.find('\n', at);
    const std::string cut = doc.substr(0, at) + doc.substr(end + 1);
    CHECK(error_of(cut).rfind("capacity:", 0) == 0);
  }
  SUBCASE("required_confidence out of range") {
    CHECK(error_of(with_field(inst, "required_confidence", "1.5")).rfind("required_confidence:", 0) ==
          0);
  }
  SUBCASE("unknown family tag") {
    const auto at = doc.find("\"uniform\"");
    doc.replace(at, 9, "\"cauchy\"");
    CHECK(error_of(doc).find(".weight.family:") != std::string::npos);
  }
  SUBCASE("not JSON") { CHECK(error_of("{ nope").find("malformed") != std::string::npos); }
  SUBCASE("wrong format tag") {
    CHECK(error_of(with_field(inst, "format", "\"other\"")).rfind("format:", 0) == 0);
  }
  SUBCASE("negative cost") {
    const Instance bad = fixed_instance({{-1}}, {{1}}, 10);
    CHECK_THROWS_AS(bad.validate(), InstanceError);
  }
}

TEST_CASE("instance invariants") {
  Instance inst = fixed_instance({{1, 2}, {3}}, {{1, 1}, {1}}, 10);
  CHECK_NOTHROW(inst.validate());
  CHECK(inst.class_sizes() == std::vector<int>{2, 1});

  Instance empty_class = inst;
  empty_class.classes[1].items.clear();
  CHECK_THROWS_WITH_AS(empty_class.validate(), "classes[1].items: class must not be empty",
                       InstanceError);
  Instance zero_cap = inst;
  zero_cap.capacity = 0;
  CHECK_THROWS_AS(zero_cap.validate(), InstanceError);

  CHECK(is_valid_for(inst, Solution{{1, 0}}));
  CHECK_FALSE(is_valid_for(inst, Solution{{2, 0}}));
  CHECK_FALSE(is_valid_for(inst, Solution{{0}}));
  CHECK_THROWS_AS(check_solution(inst, Solution{{0, -1}}), std::invalid_argument);
}

TEST_CASE("evaluate_cost sums selected costs only") {
  const Instance ones = fixed_instance(std::vector<std::vector<double>>(10, {1.0}),
                                       std::vector<std::vector<double>>(10, {1.0}), 20);
  CHECK(evaluate_cost(ones, Solution{std::vector<int>(10, 0)}) == 10.0);

  const Instance toy = fixed_instance({{4, 7, 1}, {2, 9}, {5, 3, 8}}, {{1, 1, 1}, {1, 1}, {1, 1, 1}}, 9);
  CHECK(evaluate_cost(toy, Solution{{1, 0, 2}}) == 7 + 2 + 8);
  Instance permuted = toy;
  std::swap(permuted.classes[0].items[0], permuted.classes[0].items[2]);
  CHECK(evaluate_cost(permuted, Solution{{1, 0, 2}}) == evaluate_cost(toy, Solution{{1, 0, 2}}));
}

TEST_CASE("weight spec validation") {
  CHECK_THROWS_AS(validate(UniformParams{2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(GammaParams{0, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(BimodalParams{1.5, 1, 1, 2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(validate(FatigueLifeParams{1, -1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(AppRetransmissionParams{1.2, 10, 4, UniformParams{0, 10}, 100}),
                  std::invalid_argument);
  CHECK_NOTHROW(validate(AppRetransmissionParams{}));
  CHECK(family_from_name("fatigue_life") == Family::FatigueLife);
  CHECK_THROWS_AS(family_from_name("cauchy"), std::invalid_argument);
  for (Family f : {Family::Uniform, Family::TruncatedNormal, Family::FatigueLife, Family::Bimodal,
                   Family::Gamma, Family::AppRetransmission})
    CHECK(family_from_name(family_name(f)) == f);
}

#ifdef CCMCKP_FIXTURES
TEST_CASE("stored fixtures match the generators") {
  for (bool app : {false, true})
    for (Scale s : kAllScales) {
      const Instance inst = app ? generate_app_instance(s, 1) : generate_lab_instance(s, 1);
      const std::filesystem::path p =
          std::filesystem::path(CCMCKP_FIXTURES) / (inst.label + ".json");
      CAPTURE(p.string());
      REQUIRE(std::filesystem::exists(p));
      std::ifstream in(p);
      std::stringstream ss;
      ss << in.rdbuf();
      CHECK(ss.str() == instance_to_string(inst));
      CHECK(load_instance(p) == inst);
    }
}
#endif
