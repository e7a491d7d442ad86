#pragma once

#include "fourcalc/converge.hpp"
#include "fourcalc/fourier.hpp"
#include "fourcalc/ftc.hpp"
#include "fourcalc/riemann.hpp"
#include "fourcalc/symdiff.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace fourcalc::io {

using Json = nlohmann::ordered_json;

/// Two-space indented, trailing newline. Keys keep insertion order so output
/// is byte-stable.
std::string dump(const Json& j);

// Fourier coefficients: {"L":…, "a0":…, "a":[…], "b":[…]}
Json to_json(const FourierCoefficients& c);
/// Throws ConfigError on a malformed document.
FourierCoefficients coefficients_from_json(const Json& j);
FourierCoefficients read_coefficients(const std::string& path);
/// "n,a_n,b_n" rows; n = 0 carries a0 with an empty b.
std::string coefficients_csv(const FourierCoefficients& c);

Json to_json(const IntegralEstimate& e);
Json to_json(const DerivativeCheckReport& r);
Json to_json(const ParamEnv& env);
Json to_json(const ParamConstraints& c);
Json to_json(const AntiderivativeEntry& e);
Json to_json(const AntiderivativeRegistry& r);
Json to_json(const FtcReport& r);
Json to_json(const OrthogonalityCheck& c);
Json to_json(const SumRuleReport& r);
Json to_json(const MonotoneReport& r);
Json to_json(const ConvergenceReport& r);
Json to_json(const InfiniteSumRuleReport& r);

/// "N,sup_dev" rows.
std::string ladder_csv(const ConvergenceReport& r);

ParamConstraints constraints_from_json(const Json& j);
/// A JSON array of {"name", "f", "g", "domain": [lo, hi], "constraints"}.
std::vector<AntiderivativeSpec> read_registry_specs(const std::string& path);

/// Reads a whole file; throws ConfigError when it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace fourcalc::io
