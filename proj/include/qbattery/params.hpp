#pragma once

#include "qbattery/types.hpp"

namespace qb {

/// Checks every SystemParams invariant and returns the value unchanged.
/// Throws ConfigError naming the offending field.
SystemParams validate_params(const SystemParams& raw);

/// Builds the reduced kernel triple from validated parameters.
/// g0 = gamma/4; a = beta*(1 + i(omega0 - delta)); b depends on kernel_mode.
KernelSpec kernel_from_params(const SystemParams& p);

/// Rescales (c1_0, c2_0) to unit norm, preserving relative phase.
/// Throws ConfigError on the zero vector.
InitialState normalize_initial(Complex c1_0, Complex c2_0);

/// Validates a time grid (t_max > 0, n_steps >= 2).
TimeGrid validate_grid(const TimeGrid& grid);

}  // namespace qb
