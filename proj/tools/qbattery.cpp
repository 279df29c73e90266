// qbattery: charging dynamics of an open two-qubit quantum battery.
//
// Subcommands:
//   solve   -- single closed-form run to CSV
//   sweep   -- parameter sweep, one CSV per point plus an index
//   verify  -- closed-form vs brute-force integrator cross-check
//   figure  -- regenerate a standard figure dataset (CSV + SVG)
//
// Exit codes: 0 success, 2 config error, 3 solver error, 4 verification failure.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qbattery/run.hpp"

namespace {

qb::ModeOverrides make_overrides(const std::string& mode, const std::string& kernel) {
    qb::ModeOverrides o;
    if (mode == "two_branch") {
        o.solution = qb::SolutionMode::TwoBranchExact;
    } else if (mode == "paper_literal") {
        o.solution = qb::SolutionMode::PaperLiteral;
    } else if (!mode.empty()) {
        throw qb::ConfigError("--mode must be two_branch or paper_literal");
    }
    if (kernel == "consistent") {
        o.kernel = qb::KernelMode::Consistent;
    } else if (kernel == "as_printed") {
        o.kernel = qb::KernelMode::AsPrinted;
    } else if (!kernel.empty()) {
        throw qb::ConfigError("--kernel must be consistent or as_printed");
    }
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"open quantum battery charging simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path, mode, kernel, figure_id;
    std::size_t bath_modes = 800;
    double bath_gamma_cavity = 40.0;
    bool delta_fig2_caption = false;

    auto add_mode_flags = [&](CLI::App* cmd) {
        cmd->add_option("--mode", mode, "solution mode: two_branch|paper_literal");
        cmd->add_option("--kernel", kernel, "kernel convention: consistent|as_printed");
    };

    CLI::App* solve = app.add_subcommand("solve", "run a single configuration to CSV");
    solve->add_option("--config", config_path, "JSON config path")->required();
    solve->add_option("--out", out_path, "output CSV path")->required();
    add_mode_flags(solve);

    CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep");
    sweep->add_option("--config", config_path, "JSON sweep file path")->required();
    sweep->add_option("--out", out_path, "output directory")->required();
    add_mode_flags(sweep);

    CLI::App* verify = app.add_subcommand("verify", "cross-check the closed form "
                                          "against the direct integrators");
    verify->add_option("--config", config_path, "JSON config path")->required();
    verify->add_option("--bath-modes", bath_modes, "discrete bath size (default 800)");
    verify->add_option("--bath-gamma-cavity", bath_gamma_cavity,
                       "cavity transit delay for the discrete bath (default 40)");
    add_mode_flags(verify);

    CLI::App* figure = app.add_subcommand("figure", "regenerate a figure dataset");
    figure->add_option("id", figure_id, "figure id: fig2a|fig2b|fig3a|fig3b|fig4a|fig4b|fig5a|fig5b")
        ->required();
    figure->add_option("--out", out_path, "output directory")->required();
    figure->add_flag("--delta-fig2-caption", delta_fig2_caption,
                     "use the caption detuning 0.3 for the stored-energy figure");
    add_mode_flags(figure);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const qb::ModeOverrides overrides = make_overrides(mode, kernel);
        if (solve->parsed()) {
            qb::run_single(config_path, out_path, overrides);
            std::cout << "wrote " << out_path << "\n";
        } else if (sweep->parsed()) {
            qb::run_sweep(config_path, out_path, overrides);
            std::cout << "wrote sweep to " << out_path << "\n";
        } else if (verify->parsed()) {
            const qb::VerifyReport rep =
                qb::run_verify(config_path, overrides, bath_modes, bath_gamma_cavity);
            qb::print_verify_report(rep, std::cout);
            if (!rep.pass) {
                return 4;
            }
        } else if (figure->parsed()) {
            qb::FigureOptions opts;
            opts.delta_fig2_caption = delta_fig2_caption;
            opts.overrides = overrides;
            qb::run_figure(figure_id, out_path, opts);
            std::cout << "wrote " << figure_id << " dataset to " << out_path << "\n";
        }
    } catch (const qb::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const qb::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
