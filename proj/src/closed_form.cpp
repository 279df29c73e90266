#include "qbattery/closed_form.hpp"

#include <cmath>

#include "qbattery/params.hpp"

namespace qb {

Complex m_kernel(const BranchRoots& br, double t) {
    Complex m(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        m += br.residues[i] * std::exp(br.roots[i] * t);
    }
    return 2.0 * m;
}

Complex m_kernel_levi_civita(const BranchRoots& br, double t) {
    const auto& q = br.roots;
    Complex denom(1.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
            denom *= q[i] - q[j];
        }
    }
    auto quad = [&](Complex qi) {
        const Complex u = qi + br.b;
        return u * u - br.a * br.a;
    };
    Complex m(0.0, 0.0);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                if (i == j || j == k || i == k) continue;
                // eps_{ijk}: +1 for even permutations of (0,1,2)
                const int eps = ((j - i + 3) % 3 == 1) ? 1 : -1;
                m += static_cast<double>(eps) * std::exp(q[i] * t) * (q[j] - q[k]) * quad(q[i]);
            }
        }
    }
    return m / denom;
}

AmplitudeTrajectory amplitudes(const SystemParams& p, const InitialState& init,
                               const TimeGrid& grid) {
    const SystemParams params = validate_params(p);
    const KernelSpec kernel = kernel_from_params(params);

    const BranchRoots minus = branch_roots(kernel, params.d_coupling, -1);

    AmplitudeTrajectory traj;
    traj.t.resize(grid.size());
    traj.c1.resize(grid.size());
    traj.c2.resize(grid.size());
    traj.degenerate_root_perturbed = minus.perturbed;

    if (params.solution_mode == SolutionMode::TwoBranchExact) {
        const BranchRoots plus = branch_roots(kernel, params.d_coupling, +1);
        traj.degenerate_root_perturbed = minus.perturbed || plus.perturbed;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.time(i);
            const Complex mm = m_kernel(minus, t);
            const Complex mp = m_kernel(plus, t);
            traj.t[i] = t;
            traj.c1[i] = 0.25 * (init.c1 * (mm + mp) - init.c2 * (mm - mp));
            traj.c2[i] = 0.25 * (init.c2 * (mm + mp) - init.c1 * (mm - mp));
        }
    } else {
        const Complex im(0.0, 1.0);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double t = grid.time(i);
            const Complex mm = m_kernel(minus, t);
            traj.t[i] = t;
            traj.c1[i] = 0.5 * (init.c1 * mm.real() - im * init.c2 * mm.imag());
            traj.c2[i] = 0.5 * (init.c2 * mm.real() - im * init.c1 * mm.imag());
        }
    }
    return traj;
}

}  // namespace qb
