#include "qbattery/params.hpp"

#include <cmath>
#include <sstream>

namespace qb {

namespace {

void require(bool ok, const char* field, const std::string& what, double got) {
    if (!ok) {
        std::ostringstream msg;
        msg << field << " " << what << " (got " << got << ")";
        throw ConfigError(msg.str());
    }
}

}  // namespace

SystemParams validate_params(const SystemParams& raw) {
    require(std::isfinite(raw.omega0), "omega0", "must be finite", raw.omega0);
    require(std::isfinite(raw.gamma), "gamma", "must be finite", raw.gamma);
    require(std::isfinite(raw.d_coupling), "d_coupling", "must be finite", raw.d_coupling);
    require(std::isfinite(raw.delta), "delta", "must be finite", raw.delta);
    require(std::isfinite(raw.beta), "beta", "must be finite", raw.beta);

    require(raw.gamma > 0.0, "gamma", "must be positive", raw.gamma);
    require(raw.omega0 > 0.0, "omega0", "must be positive", raw.omega0);
    require(raw.beta >= 0.0 && raw.beta < 1.0, "beta", "must satisfy 0 <= beta < 1 (subluminal)",
            raw.beta);
    require(raw.d_coupling >= 0.0, "d_coupling", "must be non-negative", raw.d_coupling);
    return raw;
}

KernelSpec kernel_from_params(const SystemParams& p) {
    KernelSpec k;
    k.g0 = p.gamma / 4.0;
    k.a = p.beta * Complex(1.0, p.omega0 - p.delta);
    k.mode = p.kernel_mode;
    if (p.kernel_mode == KernelMode::Consistent) {
        k.b = Complex(1.0, -p.delta);
    } else {
        k.b = Complex(1.0, p.omega0 - p.delta);
    }
    return k;
}

InitialState normalize_initial(Complex c1_0, Complex c2_0) {
    const double norm2 = std::norm(c1_0) + std::norm(c2_0);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) {
        throw ConfigError("initial state must be a finite non-zero vector");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    return InitialState{c1_0 * inv, c2_0 * inv};
}

TimeGrid validate_grid(const TimeGrid& grid) {
    if (!(grid.t_max > 0.0) || !std::isfinite(grid.t_max)) {
        std::ostringstream msg;
        msg << "invalid grid: t_max_lambda must be positive and finite (got " << grid.t_max << ")";
        throw ConfigError(msg.str());
    }
    if (grid.n_steps < 2) {
        std::ostringstream msg;
        msg << "invalid grid: n_steps must be >= 2 (got " << grid.n_steps << ")";
        throw ConfigError(msg.str());
    }
    return grid;
}

}  // namespace qb
