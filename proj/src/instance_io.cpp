#include "ccmckp/instance_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ccmckp {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kFormatName = "ccmckp-instance";

// +inf is not representable in JSON; upper bounds use the string "inf".
Json number_or_inf(double v) { return std::isinf(v) ? Json("inf") : Json(v); }

Json tn_json(const TruncatedNormalParams& p) {
  return Json{{"mean", p.mean},
              {"stddev", p.stddev},
              {"lower", p.lower},
              {"upper", number_or_inf(p.upper)}};
}

Json spec_json(const WeightSpec& spec) {
  Json j;
  j["family"] = std::string(family_name(family_of(spec)));
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, UniformParams>) {
          j["lower"] = p.lower;
          j["upper"] = p.upper;
        } else if constexpr (std::is_same_v<T, TruncatedNormalParams>) {
          j.update(tn_json(p));
        } else if constexpr (std::is_same_v<T, FatigueLifeParams>) {
          j["shape"] = p.shape;
          j["scale"] = p.scale;
          j["location"] = p.location;
        } else if constexpr (std::is_same_v<T, BimodalParams>) {
          j["weight"] = p.weight;
          j["mean1"] = p.mean1;
          j["stddev1"] = p.stddev1;
          j["mean2"] = p.mean2;
          j["stddev2"] = p.stddev2;
        } else if constexpr (std::is_same_v<T, GammaParams>) {
          j["shape"] = p.shape;
          j["scale"] = p.scale;
          j["location"] = p.location;
        } else {
          j["success_prob"] = p.success_prob;
          j["window"] = p.window;
          j["attempts"] = p.attempts;
          if (const auto* u = std::get_if<UniformParams>(&p.base)) {
            j["base"] = Json{{"family", "uniform"}, {"lower", u->lower}, {"upper", u->upper}};
          } else {
            Json b{{"family", "truncated_normal"}};
            b.update(tn_json(std::get<TruncatedNormalParams>(p.base)));
            j["base"] = b;
          }
          j["failure_weight"] = p.failure_weight;
        }
      },
      spec);
  return j;
}

// Field access with path-qualified errors.
class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw InstanceError(path_, "expected an object");
  }

  const Json& field(const char* key) const {
    auto it = node_.find(key);
    if (it == node_.end()) throw InstanceError(join(key), "missing required field");
    return *it;
  }
  bool has(const char* key) const { return node_.contains(key); }

  double number(const char* key) const {
    const Json& v = field(key);
    if (v.is_string() && v.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw InstanceError(join(key), "expected a number");
    return v.get<double>();
  }
  std::uint64_t unsigned_integer(const char* key) const {
    const Json& v = field(key);
    if (!v.is_number_unsigned()) throw InstanceError(join(key), "expected a nonnegative integer");
    return v.get<std::uint64_t>();
  }
  int integer(const char* key) const {
    const Json& v = field(key);
    if (!v.is_number_integer()) throw InstanceError(join(key), "expected an integer");
    return v.get<int>();
  }
  std::string text(const char* key) const {
    const Json& v = field(key);
    if (!v.is_string()) throw InstanceError(join(key), "expected a string");
    return v.get<std::string>();
  }
  const Json& array(const char* key) const {
    const Json& v = field(key);
    if (!v.is_array()) throw InstanceError(join(key), "expected an array");
    return v;
  }
  std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  const Json& node_;
  std::string path_;
};

TruncatedNormalParams read_tn(const Reader& r) {
  return {r.number("mean"), r.number("stddev"), r.number("lower"), r.number("upper")};
}

WeightSpec read_spec(const Reader& r) {
  Family family;
  try {
    family = family_from_name(r.text("family"));
  } catch (const std::invalid_argument& e) {
    throw InstanceError(r.join("family"), e.what());
  }
  WeightSpec spec;
  switch (family) {
    case Family::Uniform: spec = UniformParams{r.number("lower"), r.number("upper")}; break;
    case Family::TruncatedNormal: spec = read_tn(r); break;
    case Family::FatigueLife:
      spec = FatigueLifeParams{r.number("shape"), r.number("scale"), r.number("location")};
      break;
    case Family::Bimodal:
      spec = BimodalParams{r.number("weight"), r.number("mean1"), r.number("stddev1"),
                           r.number("mean2"), r.number("stddev2")};
      break;
    case Family::Gamma:
      spec = GammaParams{r.number("shape"), r.number("scale"), r.number("location")};
      break;
    case Family::AppRetransmission: {
      const Reader b(r.field("base"), r.join("base"));
      BaseDelay base;
      const std::string bf = b.text("family");
      if (bf == "uniform") {
        base = UniformParams{b.number("lower"), b.number("upper")};
      } else if (bf == "truncated_normal") {
        base = read_tn(b);
      } else {
        throw InstanceError(b.join("family"), "unknown base-delay family '" + bf + "'");
      }
      spec = AppRetransmissionParams{r.number("success_prob"), r.number("window"),
                                     r.integer("attempts"), base, r.number("failure_weight")};
      break;
    }
  }
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw InstanceError(r.path(), e.what());
  }
  return spec;
}

Item read_item(const Reader& r, std::size_t bank_size) {
  const double cost = r.number("cost");
  const WeightSpec spec = read_spec(Reader(r.field("weight"), r.join("weight")));
  std::optional<std::uint64_t> bank_seed;
  if (r.has("bank_seed")) bank_seed = r.unsigned_integer("bank_seed");

  auto build = [&]() -> WeightOracle {
    if (r.has("bank")) {
      const Json& arr = r.array("bank");
      std::vector<double> bank;
      bank.reserve(arr.size());
      for (std::size_t k = 0; k < arr.size(); ++k) {
        if (!arr[k].is_number())
          throw InstanceError(r.join("bank[" + std::to_string(k) + "]"), "expected a number");
        bank.push_back(arr[k].get<double>());
      }
      try {
        return WeightOracle(spec, std::move(bank));
      } catch (const std::invalid_argument& e) {
        throw InstanceError(r.join("bank"), e.what());
      }
    }
    if (!bank_seed) throw InstanceError(r.join("bank"), "either bank or bank_seed is required");
    return WeightOracle::from_seed(spec, bank_size, *bank_seed);
  };
  WeightOracle oracle = build();

  // Recorded summaries guard against a bank that regenerates differently.
  if (r.has("bank_mean") && r.number("bank_mean") != oracle.mean())
    throw InstanceError(r.join("bank_mean"), "does not match the bank");
  if (r.has("bank_stddev") && r.number("bank_stddev") != oracle.stddev())
    throw InstanceError(r.join("bank_stddev"), "does not match the bank");
  return Item{cost, std::move(oracle), bank_seed};
}

}  // namespace

void write_instance(const Instance& instance, std::ostream& out, const WriteOptions& opts) {
  Json doc;
  doc["format"] = kFormatName;
  doc["version"] = kInstanceFormatVersion;
  doc["label"] = instance.label;
  doc["seed"] = instance.seed;
  doc["capacity"] = instance.capacity;
  doc["required_confidence"] = instance.required_confidence;
  doc["bank_size"] = instance.bank_size;
  Json classes = Json::array();
  for (const auto& cls : instance.classes) {
    Json items = Json::array();
    for (const auto& item : cls.items) {
      Json j;
      j["cost"] = item.cost;
      j["weight"] = spec_json(item.oracle.spec());
      if (item.bank_seed) j["bank_seed"] = *item.bank_seed;
      j["bank_mean"] = item.oracle.mean();
      j["bank_stddev"] = item.oracle.stddev();
      if (opts.embed_banks || !item.bank_seed) {
        const auto bank = item.oracle.bank();
        j["bank"] = std::vector<double>(bank.begin(), bank.end());
      }
      items.push_back(std::move(j));
    }
    classes.push_back(Json{{"items", std::move(items)}});
  }
  doc["classes"] = std::move(classes);
  out << doc.dump(1) << '\n';
}

std::string instance_to_string(const Instance& instance, const WriteOptions& opts) {
  std::ostringstream os;
  write_instance(instance, os, opts);
  return os.str();
}

void save_instance(const Instance& instance, const std::filesystem::path& path,
                   const WriteOptions& opts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_instance(instance, out, opts);
}

Instance read_instance(std::istream& in) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InstanceError("", std::string("malformed document: ") + e.what());
  }
  const Reader r(doc, "");
  if (r.text("format") != kFormatName)
    throw InstanceError("format", std::string("expected '") + kFormatName + "'");
  if (r.integer("version") != kInstanceFormatVersion)
    throw InstanceError("version", "unsupported version " + std::to_string(r.integer("version")));

  Instance inst;
  inst.label = r.text("label");
  inst.seed = r.unsigned_integer("seed");
  inst.capacity = r.number("capacity");
  inst.required_confidence = r.number("required_confidence");
  inst.bank_size = r.unsigned_integer("bank_size");
  // Scalar invariants first so their errors name the field, not a later item.
  {
    Instance probe = inst;
    probe.classes.clear();
    try {
      probe.validate();
    } catch (const InstanceError& e) {
      if (e.path() != "classes") throw;
    }
  }
  const Json& classes = r.array("classes");
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Reader c(classes[i], "classes[" + std::to_string(i) + "]");
    const Json& items = c.array("items");
    ItemClass cls;
    for (std::size_t j = 0; j < items.size(); ++j)
      cls.items.push_back(
          read_item(Reader(items[j], c.join("items[" + std::to_string(j) + "]")), inst.bank_size));
    inst.classes.push_back(std::move(cls));
  }
  inst.validate();
  return inst;
}

Instance instance_from_string(const std::string& text) {
  std::istringstream is(text);
  return read_instance(is);
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_instance(in);
}

}  // namespace ccmckp
