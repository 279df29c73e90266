#include "qbattery/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qb {

double stored_energy(double p_t, double p_0) {
    return p_t - p_0;
}

double ergotropy_qubit(double p_excited) {
    double theta;
    if (p_excited > 0.5) {
        theta = 1.0;
    } else if (p_excited == 0.5) {
        theta = 0.5;
    } else {
        theta = 0.0;
    }
    const double w = (2.0 * p_excited - 1.0) * theta;
    return w == 0.0 ? 0.0 : w;  // normalize -0 for passive states
}

double ergotropy_general(std::span<const double> populations, std::span<const double> energies) {
    if (populations.size() != energies.size() || populations.empty()) {
        throw ConfigError("ergotropy_general: populations and energies must match in size");
    }
    const double total = std::accumulate(populations.begin(), populations.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "ergotropy_general: populations sum to " << total << ", expected 1 within 1e-9";
        throw ConfigError(msg.str());
    }
    for (std::size_t i = 1; i < energies.size(); ++i) {
        if (!(energies[i] > energies[i - 1])) {
            throw ConfigError("ergotropy_general: energies must be strictly ascending");
        }
    }

    std::vector<double> passive(populations.begin(), populations.end());
    std::sort(passive.begin(), passive.end(), std::greater<double>());

    double current = 0.0;
    double minimum = 0.0;
    for (std::size_t i = 0; i < energies.size(); ++i) {
        current += populations[i] * energies[i];
        minimum += passive[i] * energies[i];
    }
    return current - minimum;
}

std::optional<double> efficiency(double ergotropy, double dE_B) {
    if (dE_B > 1e-12) {
        return ergotropy / dE_B;
    }
    return std::nullopt;
}

ObservableTrajectory observables_from_trajectory(const AmplitudeTrajectory& traj,
                                                 const InitialState& init) {
    const double p1_0 = std::norm(init.c1);
    const double p2_0 = std::norm(init.c2);

    ObservableTrajectory out;
    out.t = traj.t;
    out.points.resize(traj.t.size());
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        ObservablePoint& pt = out.points[i];
        pt.p_charger = std::norm(traj.c1[i]);
        pt.p_battery = std::norm(traj.c2[i]);
        pt.dE_A = stored_energy(pt.p_charger, p1_0);
        pt.dE_B = stored_energy(pt.p_battery, p2_0);
        pt.ergotropy = ergotropy_qubit(pt.p_battery);
        pt.eta = efficiency(pt.ergotropy, pt.dE_B);
    }
    return out;
}

}  // namespace qb
