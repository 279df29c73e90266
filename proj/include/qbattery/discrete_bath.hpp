#pragma once

#include <cstddef>
#include <vector>

#include "qbattery/types.hpp"

namespace qb {

/// Finite sampling of the two identical Lorentzian reservoirs.
///
/// Mode frequencies sit on a uniform midpoint grid centered on omega0 - delta;
/// the coupling weights are g_k^2 = J(omega_k) * d_omega with J the Lorentzian
/// spectral density. Both reservoirs share the same frequencies and weights.
struct DiscreteBath {
    std::size_t n_modes = 0;
    std::vector<double> omega;      ///< mode frequencies, lambda units
    std::vector<double> g;          ///< couplings sqrt(J * d_omega), >= 0
    double gamma_cavity = 40.0;     ///< cavity transit delay, lambda-time units
    double coverage = 0.0;          ///< sum g^2 over the full spectral weight gamma/2
    std::vector<Complex> d_init;    ///< initial mode amplitudes, reservoir A (empty = vacuum)
    std::vector<Complex> dp_init;   ///< initial mode amplitudes, reservoir B
};

/// Samples the Lorentzian over [center - window, center + window]. The default
/// window of 50 spectral widths captures ~98.7% of the total weight.
///
/// Finite uniform sampling makes the bath quasi-periodic: the squared shape
/// function revives at delays tau ~ |2*Gamma - m*pi*n_modes/window|. Size the
/// bath (or pick Gamma) so no revival falls inside the simulated horizon, or
/// the reduced dynamics will show a spurious kernel echo there.
DiscreteBath make_discrete_bath(const SystemParams& p, std::size_t n_modes, double gamma_cavity,
                                double window = 50.0);

/// Fixed-step RK4 on the full single-excitation amplitude system (two qubits
/// plus both reservoirs) with the moving-qubit shape function applied to every
/// qubit-mode coupling. Intended for scaled-down omega0 (<= ~100) so the mode
/// oscillations are resolvable; steps are internally subdivided to track the
/// fastest interaction-picture phase.
///
/// Throws SolverError if total excitation drifts by more than 1e-4.
AmplitudeTrajectory solve_discrete_modes(const SystemParams& p, const DiscreteBath& bath,
                                         const InitialState& init, const TimeGrid& grid);

}  // namespace qb
