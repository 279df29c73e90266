#include "qbattery/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "qbattery/params.hpp"
#include "qbattery/simd/kernels.hpp"

namespace qb {

Complex kernel_time_domain(const KernelSpec& k, double tau) {
    return k.g0 * std::cosh(k.a * tau) * std::exp(-k.b * tau);
}

namespace {

struct State {
    std::vector<Complex> c1;
    std::vector<Complex> c2;
};

// Trapezoidal history integration on a uniform grid. The endpoint term is
// split off so the predictor and corrector can reuse one history sum.
//
// conv_n = h * ( F[n]/2 * y[0] + sum_{j=1}^{n-1} F[n-j] y[j] + F[0]/2 * y[n] )
State integrate(const KernelSpec& kernel, double d_coupling, const InitialState& init,
                std::size_t n_steps, double h) {
    const auto& ops = simd::active_kernels();

    std::vector<Complex> f(n_steps + 1);
    for (std::size_t m = 0; m <= n_steps; ++m) {
        f[m] = kernel_time_domain(kernel, static_cast<double>(m) * h);
    }

    State y;
    y.c1.assign(n_steps + 1, Complex(0.0));
    y.c2.assign(n_steps + 1, Complex(0.0));
    y.c1[0] = init.c1;
    y.c2[0] = init.c2;

    const Complex coupl(0.0, -d_coupling);  // -iD
    Complex z1(0.0), z2(0.0);               // history integrals at the current node

    for (std::size_t n = 0; n < n_steps; ++n) {
        const Complex f1_n = coupl * y.c2[n] - z1;
        const Complex f2_n = coupl * y.c1[n] - z2;

        // Euler predictor
        const Complex c1p = y.c1[n] + h * f1_n;
        const Complex c2p = y.c2[n] + h * f2_n;

        // history part of the convolution at node n+1 (endpoint excluded):
        // sum_{j=1}^{n} F[n+1-j] y[j]
        Complex hist1 = 0.5 * f[n + 1] * y.c1[0];
        Complex hist2 = 0.5 * f[n + 1] * y.c2[0];
        if (n >= 1) {
            hist1 += ops.dot_reversed(f.data() + 1, y.c1.data() + 1, n);
            hist2 += ops.dot_reversed(f.data() + 1, y.c2.data() + 1, n);
        }

        const Complex z1p = h * (hist1 + 0.5 * f[0] * c1p);
        const Complex z2p = h * (hist2 + 0.5 * f[0] * c2p);
        const Complex f1_p = coupl * c2p - z1p;
        const Complex f2_p = coupl * c1p - z2p;

        y.c1[n + 1] = y.c1[n] + 0.5 * h * (f1_n + f1_p);
        y.c2[n + 1] = y.c2[n] + 0.5 * h * (f2_n + f2_p);

        z1 = h * (hist1 + 0.5 * f[0] * y.c1[n + 1]);
        z2 = h * (hist2 + 0.5 * f[0] * y.c2[n + 1]);
    }
    return y;
}

}  // namespace

AmplitudeTrajectory solve_volterra(const SystemParams& p, const InitialState& init,
                                   const TimeGrid& grid) {
    const SystemParams params = validate_params(p);
    validate_grid(grid);
    const KernelSpec kernel = kernel_from_params(params);
    const double h = grid.step();

    // local error probe: first ten steps at h vs h/2
    {
        const std::size_t probe = std::min<std::size_t>(10, grid.n_steps);
        const State coarse = integrate(kernel, params.d_coupling, init, probe, h);
        const State fine = integrate(kernel, params.d_coupling, init, 2 * probe, h / 2.0);
        double err = 0.0;
        for (std::size_t i = 0; i <= probe; ++i) {
            err = std::max(err, std::abs(coarse.c1[i] - fine.c1[2 * i]));
            err = std::max(err, std::abs(coarse.c2[i] - fine.c2[2 * i]));
        }
        if (err > 1e-4) {
            std::ostringstream msg;
            msg << "solve_volterra: step size h=" << h
                << " rejected, local error estimate " << err << " exceeds 1e-4";
            throw SolverError(msg.str());
        }
    }

    const State y = integrate(kernel, params.d_coupling, init, grid.n_steps, h);

    AmplitudeTrajectory traj;
    traj.t.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        traj.t[i] = grid.time(i);
    }
    traj.c1 = std::move(y.c1);
    traj.c2 = std::move(y.c2);
    return traj;
}

}  // namespace qb
