#pragma once

#include "qbattery/roots.hpp"
#include "qbattery/types.hpp"

namespace qb {

/// Branch kernel M(t) = 2 * sum_i w_i * exp(q_i t). Satisfies M(0) = 2.
Complex m_kernel(const BranchRoots& br, double t);

/// The same kernel evaluated through the explicit Levi-Civita triple sum
///   sum_{ijk} eps_{ijk} e^{q_i t} (q_j - q_k) ((q_i+b)^2 - a^2) / prod_{i<j} (q_i - q_j),
/// algebraically equal to the residue form; kept as an independent check.
Complex m_kernel_levi_civita(const BranchRoots& br, double t);

/// Closed-form amplitudes on a grid via the Laplace branch kernels.
///
/// TwoBranchExact combines the minus and plus branch kernels,
///   c1 = (1/4) [c1(0)(M- + M+) - c2(0)(M- - M+)]   (and symmetrically c2);
/// PaperLiteral recombines Re/Im of the minus branch only.
AmplitudeTrajectory amplitudes(const SystemParams& p, const InitialState& init,
                               const TimeGrid& grid);

}  // namespace qb
