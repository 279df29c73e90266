#include <doctest.h>

#include <cmath>
#include <random>

#include "qbattery/params.hpp"

using namespace qb;

TEST_CASE("validate_params accepts the standard operating point") {
    SystemParams p;
    p.gamma = 0.1;
    p.beta = 0.0;
    p.omega0 = 1.5e9;
    p.d_coupling = 0.3;
    p.delta = 0.0;
    CHECK_NOTHROW(validate_params(p));
}

TEST_CASE("validate_params rejects out-of-range fields by name") {
    SystemParams p;

    p.beta = 1.0;  // must be subluminal
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("beta"), ConfigError);

    p = SystemParams{};
    p.gamma = -1.0;
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("gamma"), ConfigError);

    p = SystemParams{};
    p.omega0 = 0.0;
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("omega0"), ConfigError);

    p = SystemParams{};
    p.d_coupling = -0.1;
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("d_coupling"), ConfigError);

    p = SystemParams{};
    p.delta = std::nan("");
    CHECK_THROWS_WITH_AS(validate_params(p), doctest::Contains("delta"), ConfigError);
}

TEST_CASE("kernel_from_params: resting qubits kill the hyperbolic rate") {
    SystemParams p;
    p.gamma = 0.1;
    p.beta = 0.0;
    p.delta = 0.0;
    const KernelSpec k = kernel_from_params(p);
    CHECK(k.g0 == doctest::Approx(0.025));
    CHECK(std::abs(k.a) == 0.0);
    CHECK(k.b.real() == doctest::Approx(1.0));
    CHECK(k.b.imag() == doctest::Approx(0.0));
}

TEST_CASE("kernel_from_params: moving qubits at optical frequency") {
    SystemParams p;
    p.gamma = 20.0;
    p.beta = 1e-9;
    p.omega0 = 1.5e9;
    p.delta = 0.0;
    const KernelSpec k = kernel_from_params(p);
    CHECK(k.g0 == doctest::Approx(5.0));
    CHECK(k.a.real() == doctest::Approx(1e-9));
    CHECK(k.a.imag() == doctest::Approx(1.5));
    CHECK(k.b == Complex(1.0, 0.0));
}

TEST_CASE("kernel_from_params: as-printed decay rate tracks the shifted width") {
    SystemParams p;
    p.gamma = 0.1;
    p.beta = 0.0;
    p.omega0 = 1.5e9;
    p.delta = 0.0;
    p.kernel_mode = KernelMode::AsPrinted;
    const KernelSpec k = kernel_from_params(p);
    CHECK(k.g0 == doctest::Approx(0.025));
    CHECK(std::abs(k.a) == 0.0);
    CHECK(k.b.real() == doctest::Approx(1.0));
    CHECK(k.b.imag() == doctest::Approx(1.5e9));
}

TEST_CASE("kernel_from_params properties over random parameters") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> uni(0.01, 10.0);
    for (int trial = 0; trial < 200; ++trial) {
        SystemParams p;
        p.gamma = uni(rng);
        p.omega0 = uni(rng) * 1e8;
        p.delta = uni(rng) - 5.0;
        p.beta = uni(rng) / 20.0;

        // doubling gamma doubles g0 and changes nothing else
        SystemParams p2 = p;
        p2.gamma = 2.0 * p.gamma;
        const KernelSpec k = kernel_from_params(p);
        const KernelSpec k2 = kernel_from_params(p2);
        CHECK(k2.g0 == doctest::Approx(2.0 * k.g0));
        CHECK(k2.a == k.a);
        CHECK(k2.b == k.b);

        // consistent-mode decay is independent of omega0
        SystemParams pw = p;
        pw.omega0 = p.omega0 * 3.7;
        CHECK(kernel_from_params(pw).b == k.b);

        // as-printed decay picks up omega0 - delta
        pw.kernel_mode = KernelMode::AsPrinted;
        CHECK(kernel_from_params(pw).b.imag() == doctest::Approx(pw.omega0 - pw.delta));

        // beta = 0 kills the hyperbolic rate in both modes
        SystemParams pr = p;
        pr.beta = 0.0;
        CHECK(std::abs(kernel_from_params(pr).a) == 0.0);
        pr.kernel_mode = KernelMode::AsPrinted;
        CHECK(std::abs(kernel_from_params(pr).a) == 0.0);
    }
}

TEST_CASE("normalize_initial") {
    const InitialState a = normalize_initial(Complex(0.0), Complex(1.0));
    CHECK(a.c1 == Complex(0.0));
    CHECK(a.c2 == Complex(1.0));

    const InitialState b = normalize_initial(Complex(1.0), Complex(1.0));
    CHECK(b.c1.real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.c2.real() == doctest::Approx(1.0 / std::sqrt(2.0)));

    // phase is preserved
    const InitialState c = normalize_initial(Complex(0.0, 2.0), Complex(0.0));
    CHECK(c.c1.real() == doctest::Approx(0.0));
    CHECK(c.c1.imag() == doctest::Approx(1.0));

    CHECK_THROWS_AS(normalize_initial(Complex(0.0), Complex(0.0)), ConfigError);

    // unit norm within 1e-12
    const InitialState d = normalize_initial(Complex(0.3, -0.4), Complex(-1.2, 0.9));
    CHECK(std::norm(d.c1) + std::norm(d.c2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("time grid validation") {
    CHECK_THROWS_WITH_AS(validate_grid(TimeGrid{0.0, 100}), doctest::Contains("invalid grid"),
                         ConfigError);
    CHECK_THROWS_AS(validate_grid(TimeGrid{-2.0, 100}), ConfigError);
    CHECK_THROWS_AS(validate_grid(TimeGrid{10.0, 1}), ConfigError);
    CHECK_NOTHROW(validate_grid(TimeGrid{10.0, 2}));

    const TimeGrid g{30.0, 6000};
    CHECK(g.size() == 6001);
    CHECK(g.step() == doctest::Approx(0.005));
    CHECK(g.time(0) == 0.0);
    CHECK(g.time(6000) == doctest::Approx(30.0));
}
