#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qbattery/closed_form.hpp"
#include "qbattery/observables.hpp"
#include "qbattery/params.hpp"

using namespace qb;

TEST_CASE("stored_energy is a plain population difference") {
    CHECK(stored_energy(0.8, 0.0) == 0.8);
    CHECK(stored_energy(0.3, 1.0) == doctest::Approx(-0.7));
    CHECK(stored_energy(0.42, 0.42) == 0.0);
}

TEST_CASE("qubit ergotropy with the threshold convention") {
    CHECK(ergotropy_qubit(0.75) == doctest::Approx(0.5));
    CHECK(ergotropy_qubit(0.5) == 0.0);   // (2p-1) vanishes regardless of Theta = 1/2
    CHECK(ergotropy_qubit(0.2) == 0.0);   // passive state
    CHECK(ergotropy_qubit(1.0) == 1.0);
    CHECK(ergotropy_qubit(0.0) == 0.0);
}

TEST_CASE("general ergotropy on explicit states") {
    const double e01[] = {0.0, 1.0};

    const double p1[] = {0.25, 0.75};
    CHECK(ergotropy_general(p1, e01) == doctest::Approx(0.5));

    const double p2[] = {0.75, 0.25};  // already passive
    CHECK(ergotropy_general(p2, e01) == 0.0);

    const double p3[] = {0.1, 0.3, 0.6};
    const double e3[] = {0.0, 1.0, 2.0};
    // Tr(rho H) = 1.5, passive energy = 0.6*0 + 0.3*1 + 0.1*2 = 0.5
    CHECK(ergotropy_general(p3, e3) == doctest::Approx(1.0));
}

TEST_CASE("general ergotropy rejects bad input") {
    const double e01[] = {0.0, 1.0};
    const double bad_sum[] = {0.3, 0.3};
    CHECK_THROWS_WITH_AS(ergotropy_general(bad_sum, e01), doctest::Contains("sum"), ConfigError);
    const double p[] = {0.5, 0.5};
    const double descending[] = {1.0, 0.0};
    CHECK_THROWS_AS(ergotropy_general(p, descending), ConfigError);
}

TEST_CASE("general ergotropy reduces to the qubit formula on two levels") {
    const double e01[] = {0.0, 1.0};
    for (int i = 0; i <= 1000; ++i) {
        const double p = static_cast<double>(i) / 1000.0;
        const double pops[] = {1.0 - p, p};
        CHECK(ergotropy_general(pops, e01) == doctest::Approx(ergotropy_qubit(p)).epsilon(1e-12));
    }
}

TEST_CASE("general ergotropy equals the brute-force permutation minimum") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + static_cast<int>(rng() % 4);  // 2..5 levels
        std::vector<double> pops(d), energies(d);
        double total = 0.0;
        for (int i = 0; i < d; ++i) {
            pops[i] = uni(rng) + 1e-6;
            total += pops[i];
        }
        for (auto& p : pops) {
            p /= total;
        }
        energies[0] = uni(rng);
        for (int i = 1; i < d; ++i) {
            energies[i] = energies[i - 1] + uni(rng) + 1e-3;
        }

        const double current =
            std::inner_product(pops.begin(), pops.end(), energies.begin(), 0.0);
        std::vector<double> perm = pops;
        std::sort(perm.begin(), perm.end());
        double minimum = INFINITY;
        do {
            double e = 0.0;
            for (int i = 0; i < d; ++i) {
                e += perm[i] * energies[i];
            }
            minimum = std::min(minimum, e);
        } while (std::next_permutation(perm.begin(), perm.end()));

        CHECK(ergotropy_general(pops, energies) == current - minimum);

        // the passive energy is blind to the order the populations arrive in
        std::vector<double> shuffled = pops;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const double shuffled_current =
            std::inner_product(shuffled.begin(), shuffled.end(), energies.begin(), 0.0);
        const double passive = current - ergotropy_general(pops, energies);
        const double shuffled_passive =
            shuffled_current - ergotropy_general(shuffled, energies);
        CHECK(passive == doctest::Approx(shuffled_passive).epsilon(1e-12));
    }
}

TEST_CASE("efficiency is undefined until the battery holds energy") {
    CHECK(*efficiency(0.5, 0.75) == doctest::Approx(2.0 / 3.0));
    CHECK(*efficiency(0.0, 0.3) == 0.0);
    CHECK_FALSE(efficiency(0.0, 0.0).has_value());
    CHECK_FALSE(efficiency(0.1, -0.2).has_value());
}

TEST_CASE("observables at the initial point of a full battery") {
    AmplitudeTrajectory traj;
    traj.t = {0.0};
    traj.c1 = {Complex(0.0)};
    traj.c2 = {Complex(1.0)};
    const InitialState init{Complex(0.0), Complex(1.0)};
    const ObservableTrajectory obs = observables_from_trajectory(traj, init);
    CHECK(obs.points[0].dE_B == 0.0);
    CHECK(obs.points[0].dE_A == 0.0);
    CHECK(obs.points[0].ergotropy == doctest::Approx(1.0));  // fully charged battery
    CHECK_FALSE(obs.points[0].eta.has_value());              // no energy was stored yet
}

TEST_CASE("energy bookkeeping along a charging trajectory") {
    SystemParams p;
    p.gamma = 0.1;
    p.beta = 5e-10;
    p.omega0 = 1.5e9;
    p.d_coupling = 0.3;
    const InitialState init{Complex(1.0), Complex(0.0)};
    const TimeGrid grid{30.0, 1500};
    const AmplitudeTrajectory traj = amplitudes(p, init, grid);
    const ObservableTrajectory obs = observables_from_trajectory(traj, init);

    for (std::size_t i = 0; i < obs.points.size(); ++i) {
        const ObservablePoint& pt = obs.points[i];
        // charger only loses energy from a full start
        CHECK(pt.dE_A <= 1e-12);
        CHECK(std::abs(pt.dE_A) == doctest::Approx(1.0 - pt.p_charger).epsilon(1e-12));
        // leak identity: dE_B - |dE_A| equals the total population change
        const double leak = pt.dE_B - std::abs(pt.dE_A);
        CHECK(leak == doctest::Approx((pt.p_charger + pt.p_battery) - 1.0).epsilon(1e-12));
        CHECK(leak <= 1e-9);
        // ergotropy never exceeds the energy above the ground state
        CHECK(pt.ergotropy <= pt.dE_B + std::norm(init.c2) + 1e-12);
        if (pt.eta) {
            CHECK(*pt.eta >= 0.0);
            CHECK(*pt.eta <= 1.0 + 1e-9);
        }
    }
}
