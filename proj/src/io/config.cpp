#include "qbattery/io/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>

#include "qbattery/params.hpp"

namespace qb {

namespace {

using nlohmann::json;

const std::set<std::string> kConfigKeys = {
    "omega0_over_lambda", "gamma_over_lambda", "D_over_lambda", "Delta_over_lambda",
    "beta",               "kernel_mode",       "solution_mode", "c1_0",
    "c2_0",               "t_max_lambda",      "n_steps",
};

double get_number(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_number()) {
        throw ConfigError("config key '" + key + "' must be a number");
    }
    return v.get<double>();
}

Complex get_complex(const json& j, const std::string& key) {
    const auto& v = j.at(key);
    if (!v.is_object() || v.size() != 2 || !v.contains("re") || !v.contains("im") ||
        !v["re"].is_number() || !v["im"].is_number()) {
        throw ConfigError("config key '" + key + "' must be an object {re, im}");
    }
    return Complex(v["re"].get<double>(), v["im"].get<double>());
}

}  // namespace

const char* to_string(KernelMode m) {
    return m == KernelMode::Consistent ? "consistent" : "as_printed";
}

const char* to_string(SolutionMode m) {
    return m == SolutionMode::TwoBranchExact ? "two_branch" : "paper_literal";
}

RunConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!kConfigKeys.count(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    for (const auto& key : kConfigKeys) {
        if (!j.contains(key)) {
            throw ConfigError("missing config key '" + key + "'");
        }
    }

    RunConfig cfg;
    cfg.params.omega0 = get_number(j, "omega0_over_lambda");
    cfg.params.gamma = get_number(j, "gamma_over_lambda");
    cfg.params.d_coupling = get_number(j, "D_over_lambda");
    cfg.params.delta = get_number(j, "Delta_over_lambda");
    cfg.params.beta = get_number(j, "beta");

    if (!j.at("kernel_mode").is_string()) {
        throw ConfigError("kernel_mode must be a string");
    }
    const std::string kernel = j.at("kernel_mode").get<std::string>();
    if (kernel == "consistent") {
        cfg.params.kernel_mode = KernelMode::Consistent;
    } else if (kernel == "as_printed") {
        cfg.params.kernel_mode = KernelMode::AsPrinted;
    } else {
        throw ConfigError("kernel_mode must be \"consistent\" or \"as_printed\" (got \"" + kernel +
                          "\")");
    }

    if (!j.at("solution_mode").is_string()) {
        throw ConfigError("solution_mode must be a string");
    }
    const std::string sol = j.at("solution_mode").get<std::string>();
    if (sol == "two_branch") {
        cfg.params.solution_mode = SolutionMode::TwoBranchExact;
    } else if (sol == "paper_literal") {
        cfg.params.solution_mode = SolutionMode::PaperLiteral;
    } else {
        throw ConfigError("solution_mode must be \"two_branch\" or \"paper_literal\" (got \"" +
                          sol + "\")");
    }

    cfg.c1_0 = get_complex(j, "c1_0");
    cfg.c2_0 = get_complex(j, "c2_0");

    cfg.grid.t_max = get_number(j, "t_max_lambda");
    const double n_raw = get_number(j, "n_steps");
    if (n_raw < 0 || n_raw != static_cast<double>(static_cast<std::size_t>(n_raw))) {
        throw ConfigError("n_steps must be a non-negative integer");
    }
    cfg.grid.n_steps = static_cast<std::size_t>(n_raw);

    validate_params(cfg.params);
    validate_grid(cfg.grid);
    return cfg;
}

nlohmann::json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) {
        throw ConfigError("cannot open config file: " + path);
    }
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

RunConfig load_config(const std::string& path) {
    return parse_config(load_json(path));
}

std::string canonical_bytes(const nlohmann::json& j) {
    // nlohmann::json stores object keys sorted, so a compact dump is canonical
    return j.dump();
}

std::string config_digest(const nlohmann::json& j) {
    const std::string bytes = canonical_bytes(j);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    static const char* hex = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) {
        buf[15 - i] = hex[(hash >> (4 * i)) & 0xF];
    }
    buf[16] = '\0';
    return std::string("fnv1a64:") + buf;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["omega0_over_lambda"] = cfg.params.omega0;
    j["gamma_over_lambda"] = cfg.params.gamma;
    j["D_over_lambda"] = cfg.params.d_coupling;
    j["Delta_over_lambda"] = cfg.params.delta;
    j["beta"] = cfg.params.beta;
    j["kernel_mode"] = to_string(cfg.params.kernel_mode);
    j["solution_mode"] = to_string(cfg.params.solution_mode);
    j["c1_0"] = {{"re", cfg.c1_0.real()}, {"im", cfg.c1_0.imag()}};
    j["c2_0"] = {{"re", cfg.c2_0.real()}, {"im", cfg.c2_0.imag()}};
    j["t_max_lambda"] = cfg.grid.t_max;
    j["n_steps"] = cfg.grid.n_steps;
    return j;
}

nlohmann::json make_manifest(const RunConfig& cfg, const InitialState& normalized,
                             const std::string& digest) {
    nlohmann::json m;
    m["tool_version"] = kToolVersion;
    m["config_digest"] = digest;
    m["params"] = {
        {"omega0_over_lambda", cfg.params.omega0},
        {"gamma_over_lambda", cfg.params.gamma},
        {"D_over_lambda", cfg.params.d_coupling},
        {"Delta_over_lambda", cfg.params.delta},
        {"beta", cfg.params.beta},
        {"kernel_mode", to_string(cfg.params.kernel_mode)},
        {"solution_mode", to_string(cfg.params.solution_mode)},
    };
    m["initial_state"] = {
        {"c1", {{"re", normalized.c1.real()}, {"im", normalized.c1.imag()}}},
        {"c2", {{"re", normalized.c2.real()}, {"im", normalized.c2.imag()}}},
    };
    m["grid"] = {{"t_max_lambda", cfg.grid.t_max}, {"n_steps", cfg.grid.n_steps}};
    return m;
}

}  // namespace qb
