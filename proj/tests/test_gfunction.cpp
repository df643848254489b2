#include <cmath>
#include <vector>

#include "doctest.h"
#include "moran/gfunction.hpp"
#include "moran/random.hpp"

using namespace moran;

namespace {

const Atom kThreeChild{{0.25, 0.0625, 0.0625}, {0.5, 0.25, 0.25}};

// The three cyclic permutations of the probabilities, equally weighted.
ParamDistribution three_child_mixture() {
    std::vector<Atom> atoms{kThreeChild, Atom{kThreeChild.ratios, {0.25, 0.5, 0.25}},
                            Atom{kThreeChild.ratios, {0.25, 0.25, 0.5}}};
    return ParamDistribution::finite_mixture({1.0 / 3.0, 1.0 / 3.0, 1.0 - 2.0 / 3.0}, atoms);
}

}  // namespace

TEST_CASE("atom_yz picks the first child of the three-child atom past one half") {
    const LogPair yz = atom_yz(kThreeChild, 0.6, Selection::max);
    CHECK(yz.log_prob == doctest::Approx(std::log(0.5)));
    CHECK(yz.log_ratio == doctest::Approx(std::log(0.25)));
}

TEST_CASE("atom_yz on a symmetric atom breaks ties toward index zero") {
    const Atom sym{{0.3, 0.3}, {0.5, 0.5}};
    for (double theta : {0.0, 0.5, 3.0}) {
        CHECK(select_child(sym, theta, Selection::max) == 0);
        CHECK(select_child(sym, theta, Selection::min) == 1);
        const LogPair yz = atom_yz(sym, theta, Selection::max);
        CHECK(yz.log_prob == doctest::Approx(std::log(0.5)));
        CHECK(yz.log_ratio == doctest::Approx(std::log(0.3)));
    }
}

TEST_CASE("at theta zero the child with the smallest probability wins") {
    const Atom atom{{0.25, 0.5}, {0.25, 0.75}};
    const LogPair yz = atom_yz(atom, 0.0, Selection::max);
    CHECK(yz.log_prob == doctest::Approx(std::log(0.25)));
    CHECK(yz.log_ratio == doctest::Approx(std::log(0.25)));
    CHECK(select_child(atom, 0.0, Selection::min) == 1);
}

TEST_CASE("two-child selections are complementary at the threshold") {
    // p = a^theta / (a^theta + b^theta) exactly at theta = 1 for a = 1/4, b = 1/2, p = 1/3.
    const Atom atom{{0.25, 0.5}, {1.0 / 3.0, 2.0 / 3.0}};
    CHECK(select_child(atom, 1.0, Selection::max) == 0);
    CHECK(select_child(atom, 1.0, Selection::min) == 1);
}

TEST_CASE("three-child mixture is 3/4 below one half and 5/6 above") {
    const auto dist = three_child_mixture();
    CHECK(g_analytic(dist, 0.4, Selection::max).value == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(g_analytic(dist, 0.7, Selection::max).value == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(g_analytic(dist, 0.5, Selection::max).value == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("symmetric point mass gives a constant G") {
    const double a = 0.3;
    const auto dist = ParamDistribution::point_mass(Atom{{a, a}, {0.5, 0.5}});
    for (double theta : {0.0, 0.3, 1.0, 4.0}) {
        CHECK(g_analytic(dist, theta, Selection::max).value == doctest::Approx(std::log(2.0) / -std::log(a)));
        CHECK(g_analytic(dist, theta, Selection::min).value == doctest::Approx(std::log(2.0) / -std::log(a)));
    }
    const GLimits lim = g_limits(dist, Selection::max);
    CHECK(lim.at_zero == doctest::Approx(std::log(2.0) / -std::log(a)));
    CHECK(lim.at_infinity == doctest::Approx(std::log(2.0) / -std::log(a)));
}

TEST_CASE("mixture G is the ratio of weighted per-atom averages") {
    RandomStream rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<Atom> atoms;
        std::vector<double> w;
        for (int i = 0; i < 4; ++i) {
            const double p = 0.05 + 0.9 * rng.uniform01();
            atoms.push_back(Atom{{0.05 + 0.4 * rng.uniform01(), 0.05 + 0.4 * rng.uniform01()}, {p, 1.0 - p}});
            w.push_back(0.25);
        }
        const auto dist = ParamDistribution::finite_mixture(w, atoms);
        const double theta = 3.0 * rng.uniform01();
        for (Selection mode : {Selection::max, Selection::min}) {
            double ey = 0.0, ez = 0.0;
            for (std::size_t i = 0; i < atoms.size(); ++i) {
                const LogPair yz = atom_yz(atoms[i], theta, mode);
                ey += w[i] * yz.log_prob;
                ez += w[i] * yz.log_ratio;
            }
            const GEvaluation g = g_analytic(dist, theta, mode);
            CHECK(g.ey == doctest::Approx(ey).epsilon(1e-13));
            CHECK(g.ez == doctest::Approx(ez).epsilon(1e-13));
            CHECK(g.ez < 0.0);
            CHECK(g.value >= 0.0);
        }
    }
}

TEST_CASE("uniform p with equal ratios is constant") {
    const double a = 0.3;
    const auto dist = ParamDistribution::uniform_p(a, a);
    const double expected = (-std::log(2.0) - 1.0) / std::log(a);
    for (double theta : {0.0, 0.25, 1.0, 2.5, 7.0})
        CHECK(g_analytic(dist, theta, Selection::max).value == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uniform p crosses the diagonal where a^theta + b^theta = 1/e") {
    const double theta = std::log((std::sqrt(1.0 + 4.0 / std::exp(1.0)) - 1.0) / 2.0) / std::log(0.5);
    const auto g = g_analytic(ParamDistribution::uniform_p(0.25, 0.5), theta, Selection::max);
    CHECK(g.value == doctest::Approx(theta).epsilon(1e-12));
}

TEST_CASE("Monte Carlo agrees with the analytic upper G for uniform p") {
    const auto dist = ParamDistribution::uniform_p(0.25, 0.5);
    const GEvaluation exact = g_analytic(dist, 1.0, Selection::max);
    const GEvaluation mc = g_monte_carlo(dist, 1.0, Selection::max, 1000000, 17);
    REQUIRE(mc.std_error.has_value());
    CHECK(mc.method == GMethod::monte_carlo);
    CHECK(*mc.n_samples == 1000000);
    CHECK(std::abs(mc.value - exact.value) <= 4.0 * *mc.std_error);
}

TEST_CASE("Monte Carlo validates the primed closed form for uniform p") {
    const auto dist = ParamDistribution::uniform_p(0.25, 0.5);
    for (double theta : {0.0, 0.7, 1.5, 3.0}) {
        const GEvaluation exact = g_analytic(dist, theta, Selection::min);
        const GEvaluation mc = g_monte_carlo(dist, theta, Selection::min, 400000, 1000 + static_cast<int>(theta * 10));
        CHECK(std::abs(mc.value - exact.value) <= 5.0 * *mc.std_error);
        CHECK(mc.ey == doctest::Approx(exact.ey).epsilon(5e-3));
    }
}

TEST_CASE("primed and unprimed expected log-probabilities sum to -2 for uniform p") {
    const auto dist = ParamDistribution::uniform_p(0.2, 0.6);
    for (double theta : {0.0, 0.4, 1.3}) {
        const double sum = g_analytic(dist, theta, Selection::max).ey + g_analytic(dist, theta, Selection::min).ey;
        CHECK(sum == doctest::Approx(-2.0).epsilon(1e-12));
    }
}

TEST_CASE("Monte Carlo on the three-child mixture") {
    const GEvaluation mc = g_monte_carlo(three_child_mixture(), 0.7, Selection::max, 100000, 3);
    CHECK(std::abs(mc.value - 5.0 / 6.0) <= 4.0 * *mc.std_error);
}

TEST_CASE("Monte Carlo on a point mass is exact") {
    const auto dist = ParamDistribution::point_mass(Atom{{0.25, 0.5}, {0.3, 0.7}});
    for (double theta : {0.0, 1.0, 2.0}) {
        const GEvaluation mc = g_monte_carlo(dist, theta, Selection::max, 1000, 1);
        CHECK(mc.value == doctest::Approx(g_analytic(dist, theta, Selection::max).value).epsilon(1e-14));
        CHECK(*mc.std_error == doctest::Approx(0.0));
    }
}

TEST_CASE("Monte Carlo is deterministic per seed") {
    const auto dist = ParamDistribution::uniform_p(0.25, 0.5);
    CHECK(g_monte_carlo(dist, 1.0, Selection::max, 5000, 8).value ==
          g_monte_carlo(dist, 1.0, Selection::max, 5000, 8).value);
}

TEST_CASE("Monte Carlo agrees with analytic G across random mixtures") {
    RandomStream rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Atom> atoms;
        for (int i = 0; i < 3; ++i) {
            const double p = 0.05 + 0.9 * rng.uniform01();
            atoms.push_back(Atom{{0.05 + 0.4 * rng.uniform01(), 0.05 + 0.4 * rng.uniform01()}, {p, 1.0 - p}});
        }
        const auto dist = ParamDistribution::finite_mixture({0.2, 0.3, 0.5}, atoms);
        const double theta = 2.0 * rng.uniform01();
        for (Selection mode : {Selection::max, Selection::min}) {
            const GEvaluation mc = g_monte_carlo(dist, theta, mode, 50000, 500 + trial);
            const double exact = g_analytic(dist, theta, mode).value;
            CHECK(std::abs(mc.value - exact) <= 5.0 * *mc.std_error + 1e-12);
        }
    }
}

TEST_CASE("limits for uniform p") {
    const double a = 0.25, b = 0.5;
    const auto dist = ParamDistribution::uniform_p(a, b);
    const GLimits lim = g_limits(dist, Selection::max);
    CHECK(lim.at_infinity == doctest::Approx(-1.0 / std::log(b)).epsilon(1e-12));
    CHECK(lim.at_zero == doctest::Approx(g_analytic(dist, 0.0, Selection::max).value).epsilon(1e-14));
    // Far out the closed form approaches the limit.
    CHECK(g_analytic(dist, 60.0, Selection::max).value == doctest::Approx(lim.at_infinity).epsilon(1e-9));
    const GLimits lim_min = g_limits(dist, Selection::min);
    CHECK(g_analytic(dist, 60.0, Selection::min).value == doctest::Approx(lim_min.at_infinity).epsilon(1e-9));
}

TEST_CASE("limits for the three-child mixture") {
    const GLimits lim = g_limits(three_child_mixture(), Selection::max);
    CHECK(lim.at_infinity == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    CHECK(lim.at_zero == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("limits of a discrete mixture match large theta") {
    RandomStream rng(19);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Atom> atoms;
        for (int i = 0; i < 3; ++i) {
            const double p = 0.05 + 0.9 * rng.uniform01();
            atoms.push_back(Atom{{0.05 + 0.4 * rng.uniform01(), 0.05 + 0.4 * rng.uniform01()}, {p, 1.0 - p}});
        }
        const auto dist = ParamDistribution::finite_mixture({0.2, 0.3, 0.5}, atoms);
        for (Selection mode : {Selection::max, Selection::min})
            CHECK(g_limits(dist, mode).at_infinity ==
                  doctest::Approx(g_analytic(dist, 1e9, mode).value).epsilon(1e-12));
    }
}

TEST_CASE("selection is piecewise constant in theta with few breakpoints") {
    RandomStream rng(2);
    std::vector<Atom> atoms{kThreeChild};
    for (int i = 0; i < 20; ++i) {
        const double p = 0.05 + 0.9 * rng.uniform01();
        atoms.push_back(Atom{{0.05 + 0.4 * rng.uniform01(), 0.05 + 0.4 * rng.uniform01()}, {p, 1.0 - p}});
    }
    for (const Atom& atom : atoms) {
        const std::size_t k = atom.children();
        for (Selection mode : {Selection::max, Selection::min}) {
            std::size_t changes = 0;
            std::size_t prev = select_child(atom, 0.0, mode);
            for (int i = 1; i <= 5000; ++i) {
                const std::size_t cur = select_child(atom, i * 1e-3, mode);
                if (cur != prev) ++changes;
                prev = cur;
            }
            // Each pair of children swaps order at most once in theta.
            CHECK(changes <= k * (k - 1) / 2);
        }
    }
}
