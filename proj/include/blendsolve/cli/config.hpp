#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "blendsolve/bench.hpp"
#include "blendsolve/richardson.hpp"

namespace blendsolve::cli {

/// Parse or validation failure; line is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct IniEntry {
  std::string value;
  std::size_t line = 0;
};

using IniSection = std::map<std::string, IniEntry>;

struct IniFile {
  std::string source;
  std::map<std::string, IniSection> sections;
};

/// `[section]` headers, `key = value` lines, `#` comments (whole-line or trailing).
IniFile parse_ini(std::istream& in, const std::string& source);

enum class SweepLattice { full_2d, lambda_1d };

struct SweepSettings {
  SweepLattice lattice = SweepLattice::full_2d;
  double step = 0.05;
  double lambda_lo = 0.0;
  double lambda_hi = 1.0;
  double mu = 1.0;
};

struct RichardsonSettings {
  double s = 0.5;
  SearchConfig search;
};

struct OutputSettings {
  std::optional<std::filesystem::path> dir;
  bool trajectory = false;
  bool particles = false;
};

struct RunConfig {
  std::string preset;
  TestCase test;  // problem from the preset; grid and scheme settings from the file
  RichardsonSettings richardson;
  SweepSettings sweep;
  OutputSettings output;
};

/// Builds a config on top of the named benchmark preset. Unknown sections or
/// keys and out-of-range values raise ConfigError with the offending line.
RunConfig load_config(const IniFile& ini);
RunConfig load_config_file(const std::filesystem::path& path);

/// Every resolved setting, in the same INI format the loader reads.
void write_config(std::ostream& os, const RunConfig& config);

}  // namespace blendsolve::cli
