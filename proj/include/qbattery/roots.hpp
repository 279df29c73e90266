#pragma once

#include <array>

#include "qbattery/types.hpp"

namespace qb {

/// Poles and residue weights of one Laplace branch 1/(s + F(s) +- iD).
///
/// The branch denominator clears to the monic cubic
///   P(s) = (s + branch_sign*iD) * ((s+b)^2 - a^2) + g0 * (s+b),
/// a monic quadratic over it yields residues
///   w_i = ((q_i+b)^2 - a^2) / prod_{j != i} (q_i - q_j),
/// which always satisfy sum_i w_i = 1.
struct BranchRoots {
    int branch_sign = -1;                 ///< sign of iD in the branch factor
    std::array<Complex, 3> roots{};       ///< sorted by (Re, Im) ascending
    std::array<Complex, 3> residues{};
    Complex a;                            ///< kernel rates the residues were built with
    Complex b;
    bool perturbed = false;               ///< near-degenerate cubic was nudged
};

/// Monic coefficients [1, c2, c1, c0] of the branch cubic in s.
std::array<Complex, 4> branch_cubic(const KernelSpec& k, double d_coupling, int branch_sign);

/// All three roots of a monic complex cubic, sorted by (Re, Im) ascending.
/// Cardano evaluation followed by Newton polishing; throws SolverError with
/// the residuals if polishing cannot reach 1e-12 * max(1, |q|^3).
std::array<Complex, 3> solve_cubic(const std::array<Complex, 4>& coeffs);

/// Roots + residues for one branch. Picks a shifted evaluation when the decay
/// rate dwarfs the other coefficients (AsPrinted mode at optical frequencies)
/// and nudges the constant coefficient when two roots nearly coincide.
BranchRoots branch_roots(const KernelSpec& k, double d_coupling, int branch_sign);

}  // namespace qb
