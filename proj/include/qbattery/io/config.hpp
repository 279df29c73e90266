#pragma once

#include <string>

#include <json.hpp>

#include "qbattery/types.hpp"

namespace qb {

inline constexpr const char* kToolVersion = "qbattery 0.1.0";

/// A fully resolved run: parameters, raw initial amplitudes and grid.
struct RunConfig {
    SystemParams params;
    Complex c1_0;
    Complex c2_0;
    TimeGrid grid;
};

/// Strict config parser: exactly the documented keys, no extras, no absences.
/// Validates parameters and the grid. Throws ConfigError with the key name.
RunConfig parse_config(const nlohmann::json& j);

/// Reads and parses a JSON config file.
RunConfig load_config(const std::string& path);

/// Reads a JSON document from a file (shared by config and sweep loading).
nlohmann::json load_json(const std::string& path);

/// Canonical byte representation: object keys sorted, no whitespace.
std::string canonical_bytes(const nlohmann::json& j);

/// FNV-1a 64-bit digest of the canonical bytes, e.g. "fnv1a64:a1b2...".
std::string config_digest(const nlohmann::json& j);

/// Serializes a config back to JSON (canonical key set).
nlohmann::json config_to_json(const RunConfig& cfg);

/// Provenance record emitted next to run outputs.
nlohmann::json make_manifest(const RunConfig& cfg, const InitialState& normalized,
                             const std::string& digest);

const char* to_string(KernelMode m);
const char* to_string(SolutionMode m);

}  // namespace qb
