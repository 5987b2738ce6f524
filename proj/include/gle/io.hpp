#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gle/kernels.hpp"

namespace gle {

/// Plain-text key=value configuration with dotted sections
/// (kernel.family=..., model.beta=...). '#' starts a comment; blank lines
/// ignored. Values keep their literal text; typed access below.
class RunConfig {
 public:
  static RunConfig parse_file(const std::string& path);
  static RunConfig parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;          // throws if absent
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_u64(const std::string& key) const;
  std::optional<std::uint64_t> maybe_u64(const std::string& key) const;

  /// FNV-1a 64 over the canonical (sorted key=value) text; hex string.
  std::string hash() const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// Kernel from the config's kernel.* section
/// (family = exponential|power_law|pure_power|tabulated).
MemoryKernel kernel_from_config(const RunConfig& cfg);

/// Two-column CSV "t,K" with a mandatory header row.
std::vector<std::pair<double, double>> read_kernel_table(const std::string& path);

/// CSV writing: one metadata comment line ("# <tool> <version> config=<hash>"),
/// then the mandatory header row, then rows. '.' decimal separator,
/// '\n' line endings, %.17g round-trip floats.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& metadata,
            std::span<const std::string> columns);
  ~CsvWriter();
  void row(std::span<const double> values);
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

 private:
  struct Impl;
  Impl* impl_;
};

std::string format_double(double v);

std::uint64_t fnv1a64(std::string_view text);

/// Log-spaced grid helper shared by the CLI stages.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

}  // namespace gle
