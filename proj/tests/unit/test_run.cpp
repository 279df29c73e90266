#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "qbattery/run.hpp"

using namespace qb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json base_config(double gamma = 0.1, double beta = 0.0, double t_max = 10.0, int n_steps = 2000) {
    return json{
        {"omega0_over_lambda", 1.5e9},
        {"gamma_over_lambda", gamma},
        {"D_over_lambda", 0.3},
        {"Delta_over_lambda", 0.0},
        {"beta", beta},
        {"kernel_mode", "consistent"},
        {"solution_mode", "two_branch"},
        {"c1_0", {{"re", 1.0}, {"im", 0.0}}},
        {"c2_0", {{"re", 0.0}, {"im", 0.0}}},
        {"t_max_lambda", t_max},
        {"n_steps", n_steps},
    };
}

fs::path temp_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("qbattery_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    f << j.dump(2);
    return path.string();
}

std::string slurp(const fs::path& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(QB_TOOL_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("run_single writes a deterministic CSV and a manifest") {
    const fs::path dir = temp_dir("single");
    const std::string cfg = write_json(dir / "cfg.json", base_config());

    run_single(cfg, (dir / "one.csv").string());
    run_single(cfg, (dir / "two.csv").string());
    const std::string one = slurp(dir / "one.csv");
    CHECK(one == slurp(dir / "two.csv"));
    CHECK(one.rfind("t_lambda,", 0) == 0);
    CHECK(std::count(one.begin(), one.end(), '\n') == 2002);  // header + 2001 grid points

    const json manifest = json::parse(slurp(dir / "one.csv.manifest.json"));
    CHECK(manifest.at("tool_version") == kToolVersion);
    CHECK(manifest.at("config_digest").get<std::string>().rfind("fnv1a64:", 0) == 0);
    CHECK(manifest.at("grid").at("n_steps") == 2000);
    fs::remove_all(dir);
}

TEST_CASE("run_single rejects an invalid grid as a config error") {
    const fs::path dir = temp_dir("badgrid");
    json j = base_config();
    j["t_max_lambda"] = 0.0;
    const std::string cfg = write_json(dir / "cfg.json", j);
    CHECK_THROWS_AS(run_single(cfg, (dir / "out.csv").string()), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("a single-point sweep reproduces run_single byte for byte") {
    const fs::path dir = temp_dir("sweep1");
    const json sweep = {{"base", base_config()}, {"sweep", {{"beta", {0.0}}}}};
    run_sweep(write_json(dir / "sweep.json", sweep), (dir / "out").string());
    run_single(write_json(dir / "cfg.json", base_config()), (dir / "single.csv").string());
    CHECK(slurp(dir / "out" / "beta_0.csv") == slurp(dir / "single.csv"));
    CHECK(fs::exists(dir / "out" / "index.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));
    fs::remove_all(dir);
}

TEST_CASE("velocity sweep: late-time stored energy rises with speed") {
    const fs::path dir = temp_dir("sweepbeta");
    const json sweep = {{"base", base_config(0.1, 0.0, 30.0, 3000)},
                        {"sweep", {{"beta", {0.0, 5e-10, 7e-10}}}}};
    run_sweep(write_json(dir / "sweep.json", sweep), (dir / "out").string());

    const std::string index = slurp(dir / "out" / "index.csv");
    std::vector<double> means;
    std::istringstream lines(index);
    std::string line;
    std::getline(lines, line);  // header
    CHECK(line == "beta,file,dE_B_late_mean,W_late_mean,eta_late_mean");
    while (std::getline(lines, line)) {
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        const auto c3 = line.find(',', c2 + 1);
        means.push_back(std::stod(line.substr(c2 + 1, c3 - c2 - 1)));
    }
    REQUIRE(means.size() == 3);
    CHECK(means[0] < means[1]);
    CHECK(means[1] < means[2]);
    fs::remove_all(dir);
}

TEST_CASE("two-parameter sweep covers the cartesian grid in authored order") {
    const fs::path dir = temp_dir("sweep2");
    // write the sweep file by hand so gamma precedes beta on disk
    const fs::path sweep_path = dir / "sweep.json";
    {
        std::ofstream f(sweep_path);
        f << "{\"base\": " << base_config(0.1, 0.0, 5.0, 500).dump()
          << ", \"sweep\": {\"gamma_over_lambda\": [0.1, 20.0], \"beta\": [0.0, 5e-10]}}";
    }
    run_sweep(sweep_path.string(), (dir / "out").string());
    CHECK(fs::exists(dir / "out" / "gamma_over_lambda_0.1__beta_0.csv"));
    CHECK(fs::exists(dir / "out" / "gamma_over_lambda_20__beta_5e-10.csv"));
    const std::string index = slurp(dir / "out" / "index.csv");
    CHECK(index.find("gamma_over_lambda,beta,file,") == 0);
    fs::remove_all(dir);
}

TEST_CASE("sweep validation") {
    using ojson = nlohmann::ordered_json;
    const ojson base = ojson::parse(base_config().dump());
    CHECK_THROWS_WITH_AS(parse_sweep(ojson{{"base", base}, {"sweep", ojson::object()}}),
                         doctest::Contains("one or two"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse_sweep(ojson{{"base", base}, {"sweep", {{"n_steps", {10}}}}}),
        doctest::Contains("sweepable"), ConfigError);
    CHECK_THROWS_AS(
        parse_sweep(ojson{{"base", base}, {"sweep", {{"beta", ojson::array()}}}}),
        ConfigError);
}

TEST_CASE("markovian charging beats non-markovian charging at matched speed") {
    // gamma sweep counterpart: compare peak stored energy across regimes
    json cfg = base_config(0.1, 5e-10, 10.0, 2000);
    const RunResult markov = compute_run(parse_config(cfg));
    cfg["gamma_over_lambda"] = 20.0;
    const RunResult strong = compute_run(parse_config(cfg));
    auto peak = [](const RunResult& r) {
        double m = 0.0;
        for (const auto& pt : r.obs.points) {
            m = std::max(m, pt.dE_B);
        }
        return m;
    };
    CHECK(peak(markov) > peak(strong));
}

TEST_CASE("verify passes on a verification grid point and reports the literal mode") {
    const fs::path dir = temp_dir("verify");
    const std::string cfg =
        write_json(dir / "cfg.json", base_config(0.1, 5e-10, 30.0, 6000));
    const VerifyReport rep = run_verify(cfg);
    CHECK(rep.pass);
    CHECK(rep.linf_c1 <= 1e-3);
    CHECK(rep.linf_c2 <= 1e-3);
    CHECK(rep.paper_literal_linf >= 0.0);
    CHECK_FALSE(rep.discrete_ran);  // omega0 is optical here
    fs::remove_all(dir);
}

TEST_CASE("verify runs all three solvers at a scaled-down frequency") {
    // analytic corner: D = 0, beta = 0 is the exponential-kernel decay.
    // 800 modes keep the finite-bath recurrence echo beyond the horizon.
    const fs::path dir = temp_dir("verify3");
    json j = base_config(0.1, 0.0, 10.0, 2000);
    j["omega0_over_lambda"] = 50.0;
    j["D_over_lambda"] = 0.0;
    const VerifyReport rep = run_verify(write_json(dir / "cfg.json", j), {}, 800, 40.0);
    CHECK(rep.pass);
    CHECK(rep.discrete_ran);
    CHECK(rep.discrete_linf_p1 <= 2e-3);

    std::ostringstream os;
    print_verify_report(rep, os);
    CHECK(os.str().find("PASS") != std::string::npos);
    CHECK(os.str().find("discrete-mode bath") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("figure datasets regenerate identically and encode the expected physics") {
    const fs::path dir = temp_dir("figure");
    run_figure("fig4b", (dir / "one").string());
    run_figure("fig4b", (dir / "two").string());

    // byte-identical regeneration
    for (const auto& entry : fs::directory_iterator(dir / "one")) {
        const fs::path rel = entry.path().filename();
        CHECK(slurp(entry.path()) == slurp(dir / "two" / rel));
    }

    // resting qubits in the strong-coupling regime extract no work
    const std::string resting = slurp(dir / "one" / "fig4b_beta_0.csv");
    std::istringstream lines(resting);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
        const auto last_comma = line.rfind(',');
        const auto prev_comma = line.rfind(',', last_comma - 1);
        const double w = std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1));
        CHECK(w == 0.0);
    }

    // the fastest curve does extract work
    const std::string fast = slurp(dir / "one" / "fig4b_beta_8e-09.csv");
    double peak_w = 0.0;
    std::istringstream fl(fast);
    std::getline(fl, line);
    while (std::getline(fl, line)) {
        const auto last_comma = line.rfind(',');
        const auto prev_comma = line.rfind(',', last_comma - 1);
        peak_w = std::max(peak_w,
                          std::stod(line.substr(prev_comma + 1, last_comma - prev_comma - 1)));
    }
    CHECK(peak_w > 0.0);
    fs::remove_all(dir);
}

TEST_CASE("stored-energy panels share the y axis for comparability") {
    const fs::path dir = temp_dir("figpair");
    run_figure("fig2a", dir.string());
    run_figure("fig2b", dir.string());
    const std::string a = slurp(dir / "fig2a.svg");
    const std::string b = slurp(dir / "fig2b.svg");
    auto y_ticks = [](const std::string& svg) {
        // grab everything rendered as y tick labels (text-anchor="end")
        std::vector<std::string> ticks;
        for (std::size_t pos = svg.find("text-anchor=\"end\""); pos != std::string::npos;
             pos = svg.find("text-anchor=\"end\"", pos + 1)) {
            const auto start = svg.find('>', pos) + 1;
            ticks.push_back(svg.substr(start, svg.find('<', start) - start));
        }
        return ticks;
    };
    CHECK(y_ticks(a) == y_ticks(b));
    CHECK(a.find("λt") != std::string::npos);

    // the caption-detuning variant changes the dataset
    FigureOptions opts;
    opts.delta_fig2_caption = true;
    run_figure("fig2a", (dir / "caption").string(), opts);
    CHECK(slurp(dir / "caption" / "fig2a_beta_0.csv") != slurp(dir / "fig2a_beta_0.csv"));
    fs::remove_all(dir);
}

TEST_CASE("unknown figure ids are rejected") {
    CHECK_THROWS_WITH_AS(run_figure("fig9z", "/tmp/qbattery_nonexistent"),
                         doctest::Contains("unknown figure id"), ConfigError);
}

TEST_CASE("mode overrides replace the configured kernel and solution modes") {
    const fs::path dir = temp_dir("override");
    const std::string cfg = write_json(dir / "cfg.json", base_config(0.1, 5e-10, 10.0, 1000));

    run_single(cfg, (dir / "default.csv").string());
    ModeOverrides literal;
    literal.solution = SolutionMode::PaperLiteral;
    run_single(cfg, (dir / "literal.csv").string(), literal);
    ModeOverrides printed;
    printed.kernel = KernelMode::AsPrinted;
    run_single(cfg, (dir / "printed.csv").string(), printed);

    const std::string d = slurp(dir / "default.csv");
    // on resonance the literal recombination is numerically indistinguishable,
    // but the as-printed kernel changes the dynamics wholesale
    CHECK(d != slurp(dir / "printed.csv"));

    const json manifest = json::parse(slurp(dir / "printed.csv.manifest.json"));
    CHECK(manifest.at("params").at("kernel_mode") == "as_printed");
    fs::remove_all(dir);
}

TEST_CASE("sweep results are identical no matter the worker cap") {
    const fs::path dir = temp_dir("threads");
    const json sweep = {{"base", base_config(0.1, 0.0, 5.0, 500)},
                        {"sweep", {{"beta", {0.0, 3e-10, 5e-10, 8e-10}}}}};
    const std::string path = write_json(dir / "sweep.json", sweep);

    setenv("QBATTERY_THREADS", "1", 1);
    run_sweep(path, (dir / "serial").string());
    setenv("QBATTERY_THREADS", "4", 1);
    run_sweep(path, (dir / "pool").string());
    unsetenv("QBATTERY_THREADS");

    for (const auto& entry : fs::directory_iterator(dir / "serial")) {
        CHECK(slurp(entry.path()) == slurp(dir / "pool" / entry.path().filename()));
    }
    fs::remove_all(dir);
}

TEST_CASE("transfer figure carries battery and charger curves per velocity") {
    const fs::path dir = temp_dir("fig3");
    run_figure("fig3b", dir.string());
    const std::string svg = slurp(dir / "fig3b.svg");
    CHECK(svg.find("ΔE_B, β=0") != std::string::npos);
    CHECK(svg.find("|ΔE_A|, β=0") != std::string::npos);
    CHECK(svg.find("ΔE_B, β=7e-10") != std::string::npos);
    CHECK(svg.find("|ΔE_A|, β=7e-09") != std::string::npos);
    CHECK(fs::exists(dir / "fig3b_beta_7e-10.csv"));
    fs::remove_all(dir);
}

TEST_CASE("breach reports list the worst offending time points") {
    VerifyReport rep;
    rep.linf_c1 = 0.02;
    rep.linf_c2 = 0.01;
    rep.pass = false;
    rep.worst.push_back({12.5, "c1", 0.52, 0.50, 0.02});
    rep.worst.push_back({13.0, "c2", 0.41, 0.40, 0.01});
    std::ostringstream os;
    print_verify_report(rep, os);
    CHECK(os.str().find("FAIL") != std::string::npos);
    CHECK(os.str().find("worst time points") != std::string::npos);
    CHECK(os.str().find("t=12.5 c1") != std::string::npos);
}

TEST_CASE("command-line exit codes: 0 ok, 2 config, 3 solver, 4 verification") {
    const fs::path dir = temp_dir("cli");
    const std::string good = write_json(dir / "good.json", base_config(0.1, 0.0, 5.0, 1000));

    CHECK(run_tool("solve --config " + good + " --out " + (dir / "a.csv").string()) == 0);
    CHECK(fs::exists(dir / "a.csv"));

    // mode flags are accepted end to end
    CHECK(run_tool("solve --config " + good + " --out " + (dir / "m.csv").string() +
                   " --kernel as_printed --mode paper_literal") == 0);
    CHECK(run_tool("solve --config " + good + " --out " + (dir / "n.csv").string() +
                   " --kernel sideways") == 2);

    // sweep subcommand end to end
    const json sweep = {{"base", base_config(0.1, 0.0, 5.0, 500)},
                        {"sweep", {{"beta", {0.0, 5e-10}}}}};
    CHECK(run_tool("sweep --config " + write_json(dir / "sw.json", sweep) + " --out " +
                   (dir / "sw_out").string()) == 0);
    CHECK(fs::exists(dir / "sw_out" / "index.csv"));

    // figure subcommand end to end
    CHECK(run_tool("figure fig4b --out " + (dir / "figs").string()) == 0);
    CHECK(fs::exists(dir / "figs" / "fig4b.svg"));
    CHECK(run_tool("figure fig9q --out " + (dir / "figs").string()) == 2);

    // malformed config
    {
        std::ofstream f(dir / "broken.json");
        f << "{ not json";
    }
    CHECK(run_tool("solve --config " + (dir / "broken.json").string() + " --out " +
                   (dir / "b.csv").string()) == 2);

    json bad = base_config();
    bad["gamma_over_lambda"] = -1.0;
    CHECK(run_tool("solve --config " + write_json(dir / "bad.json", bad) + " --out " +
                   (dir / "c.csv").string()) == 2);

    // a grid far too coarse for the strong-coupling dynamics: solver rejection
    json coarse = base_config(20.0, 0.0, 30.0, 30);
    CHECK(run_tool("verify --config " + write_json(dir / "coarse.json", coarse)) == 3);

    // unknown subcommand / missing args are usage errors
    CHECK(run_tool("frobnicate") == 2);

    // determinism through the CLI
    CHECK(run_tool("solve --config " + good + " --out " + (dir / "d1.csv").string()) == 0);
    CHECK(run_tool("solve --config " + good + " --out " + (dir / "d2.csv").string()) == 0);
    CHECK(slurp(dir / "d1.csv") == slurp(dir / "d2.csv"));
    fs::remove_all(dir);
}
