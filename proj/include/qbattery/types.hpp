#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qb {

using Complex = std::complex<double>;

/// Raised when an input value or configuration violates a model invariant.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a numerical routine cannot reach its accuracy target.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Which decay rate the reduced memory kernel uses.
///
/// Consistent keeps the frequency-domain kernel an exact Laplace transform of
/// the time-domain one (decay rate 1 - i*Delta). AsPrinted substitutes the
/// complex shifted width 1 + i*(omega0 - Delta) instead, which freezes the
/// dissipative dynamics at optical transition frequencies; it is kept for
/// comparison runs only.
enum class KernelMode { Consistent, AsPrinted };

/// How the amplitudes are reconstructed from the two branch kernels.
///
/// TwoBranchExact inverts both Laplace branches and is the mode checked
/// against the brute-force integrators. PaperLiteral recombines the real and
/// imaginary parts of the single minus branch, which is exact only when the
/// two branches are complex conjugates of each other.
enum class SolutionMode { TwoBranchExact, PaperLiteral };

/// Physical rates of the charger/battery pair, all in units of the reservoir
/// spectral width (lambda = 1 internally; time is reported as lambda*t).
struct SystemParams {
    double omega0 = 1.5e9;    ///< qubit transition frequency / lambda
    double gamma = 0.1;       ///< qubit-reservoir coupling strength / lambda
    double d_coupling = 0.3;  ///< dipole-dipole coupling between the qubits / lambda
    double delta = 0.0;       ///< detuning from the cavity central frequency / lambda
    double beta = 0.0;        ///< qubit speed as a fraction of c
    KernelMode kernel_mode = KernelMode::Consistent;
    SolutionMode solution_mode = SolutionMode::TwoBranchExact;
};

/// Reduced memory kernel F(tau) = g0 * cosh(a*tau) * exp(-b*tau).
/// Both the closed-form solver and the direct integrators consume this.
struct KernelSpec {
    double g0 = 0.0;  ///< kernel strength gamma/4, lambda^2 units
    Complex a;        ///< hyperbolic rate beta*(1 + i(omega0 - delta))
    Complex b;        ///< exponential decay rate, Re(b) > 0
    KernelMode mode = KernelMode::Consistent;
};

/// Excited-state amplitudes of |e_A, g_B> (charger) and |g_A, e_B> (battery).
struct InitialState {
    Complex c1;
    Complex c2;
};

/// Uniform time grid over [0, t_max] in lambda*t with n_steps intervals.
struct TimeGrid {
    double t_max = 30.0;
    std::size_t n_steps = 6000;

    double step() const { return t_max / static_cast<double>(n_steps); }
    std::size_t size() const { return n_steps + 1; }
    double time(std::size_t i) const { return static_cast<double>(i) * step(); }
};

/// Complex amplitude pair sampled on a time grid.
struct AmplitudeTrajectory {
    std::vector<double> t;
    std::vector<Complex> c1;
    std::vector<Complex> c2;
    /// Set when a near-degenerate branch cubic had to be nudged; the residue
    /// expansion then carries large cancelling weights.
    bool degenerate_root_perturbed = false;
    /// Largest deviation of the total excitation from its initial value,
    /// filled in by the mode-resolved solver (zero for the reduced solvers,
    /// whose excitation genuinely leaks).
    double excitation_drift = 0.0;
};

}  // namespace qb
