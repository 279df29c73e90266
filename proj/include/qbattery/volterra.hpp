#pragma once

#include "qbattery/types.hpp"

namespace qb {

/// Time-domain memory kernel F(tau) = g0 * cosh(a*tau) * exp(-b*tau), tau >= 0.
Complex kernel_time_domain(const KernelSpec& k, double tau);

/// Direct integration of the coupled integro-differential pair
///   dc1/dt = -i D c2 - int_0^t F(t - t') c1(t') dt'
///   dc2/dt = -i D c1 - int_0^t F(t - t') c2(t') dt'
/// with a second-order product-trapezoidal scheme and one predictor-corrector
/// pass per step. Serves as ground truth for the closed-form solver.
///
/// Throws SolverError when an h-vs-h/2 comparison over the first ten steps
/// shows a local error above 1e-4 (step size too coarse for the dynamics).
AmplitudeTrajectory solve_volterra(const SystemParams& p, const InitialState& init,
                                   const TimeGrid& grid);

}  // namespace qb
