#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "ccmckp/instance.hpp"

namespace ccmckp {

inline constexpr int kInstanceFormatVersion = 1;

struct WriteOptions {
  // Store every bank value instead of just the bank seed and its summary.
  // Items without a bank seed always have their bank written out.
  bool embed_banks = false;
};

// Versioned JSON instance document.
void write_instance(const Instance& instance, std::ostream& out, const WriteOptions& opts = {});
std::string instance_to_string(const Instance& instance, const WriteOptions& opts = {});
void save_instance(const Instance& instance, const std::filesystem::path& path,
                   const WriteOptions& opts = {});

// Throws InstanceError naming the offending field path.
Instance read_instance(std::istream& in);
Instance instance_from_string(const std::string& text);
Instance load_instance(const std::filesystem::path& path);

}  // namespace ccmckp
