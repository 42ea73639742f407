#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "blendsolve/cli/config.hpp"

namespace blendsolve::cli {

/// --out, then [output] dir, then $BLENDSOLVE_OUT, then the working directory.
std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag, const RunConfig* config);

// Each command returns the process exit status and reports to `log`.
int cmd_run(const RunConfig& config, const std::filesystem::path& out, std::ostream& log);
int cmd_sweep(const RunConfig& config, const std::filesystem::path& out, std::size_t threads, std::ostream& log);
int cmd_estimate(const RunConfig& config, const std::filesystem::path& out, std::size_t threads, std::ostream& log);
/// `id` is a benchmark id or "all"; nonzero when any checked row fails.
int cmd_bench(const std::string& id, const std::filesystem::path& out, std::size_t threads, std::ostream& log);

}  // namespace blendsolve::cli
