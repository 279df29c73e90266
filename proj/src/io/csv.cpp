#include "qbattery/io/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <stdexcept>

namespace qb {

std::string format_double(double v) {
    std::array<char, 40> buf;
    const auto res =
        std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string format_double_short(double v) {
    std::array<char, 40> buf;
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string trajectory_csv(const AmplitudeTrajectory& traj, const ObservableTrajectory& obs) {
    std::string out = "t_lambda,re_c1,im_c1,re_c2,im_c2,p_charger,p_battery,dE_A,dE_B,W,eta\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const ObservablePoint& pt = obs.points[i];
        out += format_double(traj.t[i]);
        out += ',';
        out += format_double(traj.c1[i].real());
        out += ',';
        out += format_double(traj.c1[i].imag());
        out += ',';
        out += format_double(traj.c2[i].real());
        out += ',';
        out += format_double(traj.c2[i].imag());
        out += ',';
        out += format_double(pt.p_charger);
        out += ',';
        out += format_double(pt.p_battery);
        out += ',';
        out += format_double(pt.dE_A);
        out += ',';
        out += format_double(pt.dE_B);
        out += ',';
        out += format_double(pt.ergotropy);
        out += ',';
        if (pt.eta) {
            out += format_double(*pt.eta);
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace qb
