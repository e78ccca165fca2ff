#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "ccmckp/instance.hpp"

namespace ccmckp {

enum class Scale { ls1, ls2, ls3, ls4, ls5, ls6 };

// One row of the benchmark scale table.
struct ScaleRow {
  int classes;          // m
  int items_per_class;  // n
  int bank_size;        // L
  double capacity_lab;
  double capacity_app;
};

inline constexpr double kBenchmarkConfidence = 0.9;

const ScaleRow& scale_row(Scale scale) noexcept;
std::string_view scale_name(Scale scale) noexcept;
// Accepts "ls1" ... "ls6"; throws std::invalid_argument otherwise.
Scale parse_scale(std::string_view name);
inline constexpr std::array<Scale, 6> kAllScales = {Scale::ls1, Scale::ls2, Scale::ls3,
                                                    Scale::ls4, Scale::ls5, Scale::ls6};

// Synthetic instance whose items cycle through the five parametric families.
Instance generate_lab_instance(Scale scale, std::uint64_t seed);

// Instance whose items follow the windowed-retransmission delay model.
Instance generate_app_instance(Scale scale, std::uint64_t seed);

}  // namespace ccmckp
