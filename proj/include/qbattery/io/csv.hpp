#pragma once

#include <string>

#include "qbattery/observables.hpp"
#include "qbattery/types.hpp"

namespace qb {

/// Locale-independent decimal formatting with 17 significant digits
/// (full round-trip precision for double).
std::string format_double(double v);

/// Shortest representation that round-trips; used for labels and file names.
std::string format_double_short(double v);

/// Renders a run as CSV with the fixed column set
/// t_lambda,re_c1,im_c1,re_c2,im_c2,p_charger,p_battery,dE_A,dE_B,W,eta
/// (eta is the empty string where undefined). Byte-deterministic.
std::string trajectory_csv(const AmplitudeTrajectory& traj, const ObservableTrajectory& obs);

/// Writes text to a file, replacing any existing content.
void write_file(const std::string& path, const std::string& content);

}  // namespace qb
