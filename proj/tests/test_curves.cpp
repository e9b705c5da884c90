#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "szego/curve.hpp"

using namespace szego;

namespace {
const truncation_policy pol;
const riemann_matrix tau_i = riemann_matrix_g1({0.0, 1.0});
} // namespace

TEST_CASE("weierstrass p_rel basic properties at tau = i")
{
    SECTION("even and periodic")
    {
        std::mt19937_64 gen(3);
        auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
        for (int round = 0; round < 25; ++round) {
            cdouble u(unit(), unit());
            if (lattice_distance(u, tau_i) < 0.1) continue;
            const cdouble p = weierstrass_p_rel(u, tau_i, pol);
            REQUIRE(std::abs(weierstrass_p_rel(-u, tau_i, pol) - p) < 1e-10);
            REQUIRE(std::abs(weierstrass_p_rel(u + 1.0, tau_i, pol) - p) < 1e-10);
            REQUIRE(std::abs(weierstrass_p_rel(u + tau_i.at(0, 0), tau_i, pol) - p) < 1e-9);
        }
    }

    SECTION("frozen fixture at u = 0.3")
    {
        const cdouble p = weierstrass_p_rel(0.3, tau_i, pol);
        REQUIRE(p.real() == Catch::Approx(oracle::p_rel_03_tau_i).epsilon(1e-12));
        REQUIRE(std::abs(p.imag()) < 1e-12);
    }

    SECTION("pole on the lattice is reported")
    {
        REQUIRE_THROWS_AS(weierstrass_p_rel(0.0, tau_i, pol), pole_at_lattice_point);
        REQUIRE_THROWS_AS(weierstrass_p_rel(cdouble(1.0, 1.0), tau_i, pol), pole_at_lattice_point);
    }
}

TEST_CASE("weierstrass p_prime_rel")
{
    SECTION("odd; vanishes at the half period")
    {
        std::mt19937_64 gen(4);
        auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
        for (int round = 0; round < 25; ++round) {
            cdouble u(unit(), unit());
            if (lattice_distance(u, tau_i) < 0.1 || lattice_distance(2.0 * u, tau_i) < 0.05) continue;
            REQUIRE(std::abs(weierstrass_p_prime_rel(-u, tau_i, pol) + weierstrass_p_prime_rel(u, tau_i, pol)) <
                    1e-10);
        }
        REQUIRE(std::abs(weierstrass_p_prime_rel(0.5, tau_i, pol)) < 1e-9);
    }

    SECTION("frozen fixture at u = 0.3")
    {
        const cdouble p = weierstrass_p_prime_rel(0.3, tau_i, pol);
        REQUIRE(p.real() == Catch::Approx(oracle::p_prime_rel_03_tau_i).epsilon(1e-12));
        REQUIRE(std::abs(p.imag()) < 1e-11);
    }

    SECTION("p_prime_rel is the derivative of p_rel (finite differences)")
    {
        const cdouble u(0.31, 0.17);
        const double h = 1e-5;
        const cdouble fd =
            (weierstrass_p_rel(u + h, tau_i, pol) - weierstrass_p_rel(u - h, tau_i, pol)) / (2 * h);
        REQUIRE(std::abs(fd - weierstrass_p_prime_rel(u, tau_i, pol)) < 1e-6);
    }
}

TEST_CASE("test function zero fibers")
{
    const curve_model sphere = curve_model::sphere();
    const curve_model torus = curve_model::torus(tau_i);

    SECTION("sphere coordinate: single zero at the origin with df = 1")
    {
        const auto zeros = zeros_and_df(test_function::sphere_coordinate(), sphere, pol);
        REQUIRE(zeros.size() == 1);
        REQUIRE(zeros[0].alpha.coord == cdouble(0, 0));
        REQUIRE(zeros[0].df == cdouble(1, 0));
    }

    SECTION("weierstrass shift a = 0.3: zeros at +-a with opposite df")
    {
        const auto zeros = zeros_and_df(test_function::weierstrass_shifted(0.3), torus, pol);
        REQUIRE(zeros.size() == 2);
        REQUIRE(zeros[0].alpha.coord == cdouble(0.3, 0));
        REQUIRE(zeros[1].alpha.coord == cdouble(-0.3, 0));
        REQUIRE(std::abs(zeros[0].df + zeros[1].df) < 1e-10);
    }

    SECTION("random admissible shifts: f vanishes at both zeros, df values are opposite")
    {
        std::mt19937_64 gen(6);
        auto unit = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
        int done = 0;
        while (done < 20) {
            const cdouble a(unit(), unit());
            if (lattice_distance(a, tau_i) < 0.1 || lattice_distance(2.0 * a, tau_i) < 0.1) continue;
            const test_function f = test_function::weierstrass_shifted(a);
            const auto zeros = zeros_and_df(f, torus, pol);
            for (const auto& zd : zeros) {
                REQUIRE(std::abs(f.value(zd.alpha, torus, pol)) < 1e-10);
            }
            REQUIRE(std::abs(zeros[0].df + zeros[1].df) < 1e-10);
            ++done;
        }
    }

    SECTION("2-torsion shift degenerates the fiber")
    {
        REQUIRE_THROWS_AS(zeros_and_df(test_function::weierstrass_shifted(0.5), torus, pol), degenerate_fiber);
        const cdouble half_tau = 0.5 * tau_i.at(0, 0);
        REQUIRE_THROWS_AS(zeros_and_df(test_function::weierstrass_shifted(half_tau), torus, pol),
                          degenerate_fiber);
    }
}

TEST_CASE("lattice geometry helpers")
{
    REQUIRE(lattice_distance(cdouble(0, 0), tau_i) == 0.0);
    REQUIRE(lattice_distance(cdouble(3.0, 2.0), tau_i) < 1e-12);
    REQUIRE(lattice_distance(cdouble(0.5, 0.5), tau_i) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
    REQUIRE(lattice_injectivity_scale(tau_i) == Catch::Approx(1.0));
    const riemann_matrix squat = riemann_matrix_g1({0.5, 0.5});
    REQUIRE(lattice_injectivity_scale(squat) == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("curve model validation")
{
    REQUIRE_THROWS_AS(curve_model::sphere().tau(), invalid_spec);
    REQUIRE_THROWS_AS(point_on_curve(cdouble(std::nan(""), 0)), non_finite);
    REQUIRE_THROWS_AS(decomposable_bundle(std::vector<bundle_point>{}), invalid_spec);
}
