#include "qbattery/discrete_bath.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qbattery/params.hpp"
#include "qbattery/simd/kernels.hpp"

namespace qb {

DiscreteBath make_discrete_bath(const SystemParams& p, std::size_t n_modes, double gamma_cavity,
                                double window) {
    const SystemParams params = validate_params(p);
    if (n_modes == 0) {
        throw ConfigError("n_modes must be positive");
    }
    if (!(window > 0.0)) {
        throw ConfigError("spectral window must be positive");
    }

    DiscreteBath bath;
    bath.n_modes = n_modes;
    bath.gamma_cavity = gamma_cavity;
    bath.omega.resize(n_modes);
    bath.g.resize(n_modes);

    const double center = params.omega0 - params.delta;
    const double dw = 2.0 * window / static_cast<double>(n_modes);
    double total_weight = 0.0;
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double w = center - window + (static_cast<double>(k) + 0.5) * dw;
        const double detune = center - w;
        const double j = params.gamma / (2.0 * std::numbers::pi) / (detune * detune + 1.0);
        bath.omega[k] = w;
        bath.g[k] = std::sqrt(j * dw);
        total_weight += j * dw;
    }
    bath.coverage = total_weight / (params.gamma / 2.0);
    return bath;
}

namespace {

// State layout: [c1, c2, d_0..d_{n-1}, dp_0..dp_{n-1}]
struct Workspace {
    std::size_t n_modes;
    std::vector<double> wf;    // g_k * sin(omega_k (beta t - Gamma))
    std::vector<Complex> u;    // exp(+i (omega0 - omega_k) t)
    double cached_t = -1.0;
};

void fill_phases(Workspace& ws, const DiscreteBath& bath, const SystemParams& p, double t) {
    if (ws.cached_t == t) {
        return;
    }
    for (std::size_t k = 0; k < ws.n_modes; ++k) {
        const double shape = std::sin(bath.omega[k] * (p.beta * t - bath.gamma_cavity));
        ws.wf[k] = bath.g[k] * shape;
        const double phase = (p.omega0 - bath.omega[k]) * t;
        ws.u[k] = Complex(std::cos(phase), std::sin(phase));
    }
    ws.cached_t = t;
}

void derivative(const SystemParams& p, const DiscreteBath& bath, Workspace& ws, double t,
                const std::vector<Complex>& y, std::vector<Complex>& dy) {
    const auto& ops = simd::active_kernels();
    const std::size_t n = ws.n_modes;
    fill_phases(ws, bath, p, t);

    const Complex c1 = y[0];
    const Complex c2 = y[1];
    const Complex* d = y.data() + 2;
    const Complex* dp = y.data() + 2 + n;

    const Complex sum_a = ops.weighted_dot(ws.wf.data(), ws.u.data(), d, n);
    const Complex sum_b = ops.weighted_dot(ws.wf.data(), ws.u.data(), dp, n);

    const Complex mi(0.0, -1.0);
    dy[0] = mi * (p.d_coupling * c2 + sum_a);
    dy[1] = mi * (p.d_coupling * c1 + sum_b);
    ops.scaled_conj_store(ws.wf.data(), ws.u.data(), mi * c1, dy.data() + 2, n);
    ops.scaled_conj_store(ws.wf.data(), ws.u.data(), mi * c2, dy.data() + 2 + n, n);
}

double total_excitation(const std::vector<Complex>& y) {
    double total = 0.0;
    for (const auto& v : y) {
        total += std::norm(v);
    }
    return total;
}

}  // namespace

AmplitudeTrajectory solve_discrete_modes(const SystemParams& p, const DiscreteBath& bath,
                                         const InitialState& init, const TimeGrid& grid) {
    const SystemParams params = validate_params(p);
    validate_grid(grid);
    const std::size_t n = bath.n_modes;
    if (bath.omega.size() != n || bath.g.size() != n) {
        throw ConfigError("bath mode arrays must have n_modes entries");
    }

    const auto& ops = simd::active_kernels();
    const std::size_t dim = 2 + 2 * n;

    std::vector<Complex> y(dim, Complex(0.0));
    y[0] = init.c1;
    y[1] = init.c2;
    if (!bath.d_init.empty()) {
        if (bath.d_init.size() != n || bath.dp_init.size() != n) {
            throw ConfigError("bath initial amplitudes must have n_modes entries");
        }
        std::copy(bath.d_init.begin(), bath.d_init.end(), y.begin() + 2);
        std::copy(bath.dp_init.begin(), bath.dp_init.end(), y.begin() + 2 + n);
    }
    const double norm0 = total_excitation(y);

    // resolve the fastest interaction-picture phase across the mode window
    double max_rate = params.d_coupling + 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        max_rate = std::max(max_rate, std::abs(params.omega0 - bath.omega[k]));
    }
    const double h_grid = grid.step();
    const std::size_t substeps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(h_grid * max_rate / 0.1)));
    const double h = h_grid / static_cast<double>(substeps);

    Workspace ws{n, std::vector<double>(n), std::vector<Complex>(n), -1.0};
    std::vector<Complex> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);

    AmplitudeTrajectory traj;
    traj.t.resize(grid.size());
    traj.c1.resize(grid.size());
    traj.c2.resize(grid.size());
    traj.t[0] = 0.0;
    traj.c1[0] = y[0];
    traj.c2[0] = y[1];

    for (std::size_t node = 0; node < grid.n_steps; ++node) {
        for (std::size_t s = 0; s < substeps; ++s) {
            const double t = (static_cast<double>(node) +
                              static_cast<double>(s) / static_cast<double>(substeps)) *
                             h_grid;
            derivative(params, bath, ws, t, y, k1);
            ops.axpy(Complex(0.5 * h), y.data(), k1.data(), tmp.data(), dim);
            derivative(params, bath, ws, t + 0.5 * h, tmp, k2);
            ops.axpy(Complex(0.5 * h), y.data(), k2.data(), tmp.data(), dim);
            derivative(params, bath, ws, t + 0.5 * h, tmp, k3);
            ops.axpy(Complex(h), y.data(), k3.data(), tmp.data(), dim);
            derivative(params, bath, ws, t + h, tmp, k4);
            for (std::size_t i = 0; i < dim; ++i) {
                y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
        }
        const double drift = std::abs(total_excitation(y) - norm0);
        traj.excitation_drift = std::max(traj.excitation_drift, drift);
        if (drift > 1e-4) {
            std::ostringstream msg;
            msg << "solve_discrete_modes: excitation conservation violated at t="
                << grid.time(node + 1) << " (drift " << drift << " > 1e-4); reduce the step size";
            throw SolverError(msg.str());
        }
        traj.t[node + 1] = grid.time(node + 1);
        traj.c1[node + 1] = y[0];
        traj.c2[node + 1] = y[1];
    }
    return traj;
}

}  // namespace qb
