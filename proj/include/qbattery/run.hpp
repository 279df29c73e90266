#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qbattery/io/config.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/types.hpp"

namespace qb {

/// Command-line overrides applied on top of a loaded config.
struct ModeOverrides {
    std::optional<KernelMode> kernel;
    std::optional<SolutionMode> solution;
};

/// A computed single run: closed-form amplitudes plus figures of merit.
struct RunResult {
    RunConfig cfg;
    InitialState init;
    AmplitudeTrajectory traj;
    ObservableTrajectory obs;
};

RunResult compute_run(const RunConfig& cfg);

/// Loads a config, runs the closed-form solver, writes the trajectory CSV to
/// out_path and a provenance manifest to out_path + ".manifest.json".
void run_single(const std::string& config_path, const std::string& out_path,
                const ModeOverrides& overrides = {});

/// One swept parameter: a config key with an explicit value list.
struct SweepParameter {
    std::string name;
    std::vector<double> values;
};

/// Base config plus one or two swept parameters (cartesian product).
/// Parameter order follows the order written in the sweep file.
struct SweepSpec {
    nlohmann::json base;
    std::vector<SweepParameter> parameters;
};

SweepSpec parse_sweep(const nlohmann::ordered_json& j);
SweepSpec load_sweep(const std::string& path);

/// Runs every sweep point (concurrently; output order fixed by the order
/// written in the sweep file), writing one trajectory CSV per point plus
/// index.csv with late-time means of dE_B, W and eta, plus manifest.json.
void run_sweep(const std::string& sweep_path, const std::string& out_dir,
               const ModeOverrides& overrides = {});

/// Cross-solver verification outcome.
struct VerifyReport {
    double linf_c1 = 0.0, linf_c2 = 0.0;  ///< closed-form vs Volterra, on |c|
    double rms_c1 = 0.0, rms_c2 = 0.0;
    double tolerance = 1e-3;
    bool pass = false;
    double paper_literal_linf = 0.0;  ///< PaperLiteral vs TwoBranchExact (reported only)
    bool discrete_ran = false;
    double discrete_linf_p1 = 0.0, discrete_linf_p2 = 0.0;

    struct Offender {
        double t;
        const char* component;
        double closed_abs;
        double volterra_abs;
        double diff;
    };
    std::vector<Offender> worst;  ///< populated on tolerance breach
};

/// Runs the closed-form solver (TwoBranchExact) against the direct Volterra
/// integrator, and additionally against the discrete-mode bath when
/// omega0 <= 100. Gate: Linf on |c1|, |c2| within 1e-3.
VerifyReport run_verify(const std::string& config_path, const ModeOverrides& overrides = {},
                        std::size_t bath_modes = 800, double bath_gamma_cavity = 40.0);
VerifyReport verify_config(const RunConfig& cfg, std::size_t bath_modes = 800,
                           double bath_gamma_cavity = 40.0);

void print_verify_report(const VerifyReport& report, std::ostream& os);

struct FigureOptions {
    bool delta_fig2_caption = false;  ///< switch the stored-energy figure to Delta = 0.3
    ModeOverrides overrides;
};

/// Regenerates one of the standard figure datasets (fig2a..fig5b): one CSV per
/// velocity curve plus an SVG line plot. Throws ConfigError on unknown ids.
void run_figure(const std::string& figure_id, const std::string& out_dir,
                const FigureOptions& opts = {});

/// Velocity sets used by the figure datasets.
const std::vector<double>& figure_beta_set();        ///< stored energy / ergotropy / efficiency
const std::vector<double>& figure_beta_set_transfer();  ///< charger-vs-battery transfer figure

/// Runs fn(0..count-1) on a small worker pool. Worker count is capped by the
/// QBATTERY_THREADS environment variable (0 or unset = hardware concurrency).
/// Rethrows the first task exception after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace qb
