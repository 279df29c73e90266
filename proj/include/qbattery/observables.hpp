#pragma once

#include <optional>
#include <span>
#include <vector>

#include "qbattery/types.hpp"

namespace qb {

/// Figures of merit at one time point. Energies are reported in units of the
/// qubit transition frequency omega0, so everything lives in [-1, 1].
struct ObservablePoint {
    double p_charger = 0.0;      ///< |c1|^2
    double p_battery = 0.0;      ///< |c2|^2
    double dE_A = 0.0;           ///< charger energy change
    double dE_B = 0.0;           ///< battery stored energy
    double ergotropy = 0.0;      ///< extractable work W
    std::optional<double> eta;   ///< efficiency W / dE_B, absent where undefined
};

struct ObservableTrajectory {
    std::vector<double> t;
    std::vector<ObservablePoint> points;
};

/// Energy change of a qubit between excited-state probabilities p_0 and p_t.
double stored_energy(double p_t, double p_0);

/// Ergotropy of a diagonal qubit state: (2p - 1) * Theta(p - 1/2), with
/// Theta = 0 below threshold, 1/2 at it, 1 above.
double ergotropy_qubit(double p_excited);

/// Ergotropy of a d-level state diagonal in the energy eigenbasis:
/// Tr(rho H) minus the passive energy, where the passive state pairs the
/// populations sorted descending with the energies sorted ascending.
///
/// Populations must sum to 1 within 1e-9, energies must be strictly ascending.
double ergotropy_general(std::span<const double> populations, std::span<const double> energies);

/// W / dE_B when the stored energy is meaningfully positive, otherwise absent.
std::optional<double> efficiency(double ergotropy, double dE_B);

/// Maps an amplitude trajectory to the figures of merit, relative to the
/// populations of the (normalized) initial state.
ObservableTrajectory observables_from_trajectory(const AmplitudeTrajectory& traj,
                                                 const InitialState& init);

}  // namespace qb
