#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fourcalc::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

enum class Format { Json, Csv, Text };

struct Config {
    std::optional<double> tolerance;
    int grid = 1025;
    int refine_cap = 24;
    Format format = Format::Text;
    std::string registry;
};

/// key=value lines; '#' starts a comment. Keys: tolerance, grid, refine_cap,
/// format, registry. Throws ConfigError.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Runs one invocation. `args` excludes the program name. Results go to `out`
/// in one write at the end; diagnostics go to `err`. The config file is taken
/// from --config, else from FOURCALC_CONFIG.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fourcalc::cli
