#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "oracle.hpp"
#include "szego/kernels.hpp"

using namespace szego;

namespace {
const truncation_policy pol;
const riemann_matrix tau_i = riemann_matrix_g1({0.0, 1.0});
const curve_model torus = curve_model::torus(tau_i);
const curve_model sphere = curve_model::sphere();

cdouble dlog_theta_z_probe(const bundle_point& L)
{
    return theta_g1(L.z, tau_i, pol, 1) / theta_g1(L.z, tau_i, pol);
}

struct torus_sampler {
    std::mt19937_64 gen;
    explicit torus_sampler(std::uint64_t seed) : gen(seed) {}
    double unit() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }
    cdouble point() { return unit() + unit() * tau_i.at(0, 0); }
    cdouble off_divisor()
    {
        while (true) {
            const cdouble z = point();
            if (std::abs(theta_g1(z, tau_i, pol)) > 0.05) return z;
        }
    }
};
} // namespace

TEST_CASE("prime form")
{
    SECTION("vanishes on the diagonal")
    {
        REQUIRE(prime_form(cdouble(0.2, 0.1), cdouble(0.2, 0.1), torus, pol) == cdouble(0, 0));
        REQUIRE(prime_form(0.7, 0.7, sphere, pol) == cdouble(0, 0));
    }

    SECTION("antisymmetric on random torus points")
    {
        torus_sampler s(11);
        for (int round = 0; round < 30; ++round) {
            const cdouble x = s.point(), y = s.point();
            REQUIRE(std::abs(prime_form(x, y, torus, pol) + prime_form(y, x, torus, pol)) < 1e-11);
        }
    }

    SECTION("first-order vanishing: E(x, y)/(y - x) -> 1")
    {
        const cdouble x(0.31, 0.12);
        const double h = 1e-4;
        for (const cdouble dir : {cdouble(1, 0), cdouble(0, 1), cdouble(0.6, -0.8)}) {
            const cdouble y = x + h * dir;
            REQUIRE(std::abs(prime_form(x, y, torus, pol) / (y - x) - 1.0) < 1e-7);
        }
    }

    SECTION("sphere prime form is the coordinate difference")
    {
        REQUIRE(prime_form(cdouble(0.2, 0), cdouble(1.4, -0.3), sphere, pol) == cdouble(1.2, -0.3));
    }
}

TEST_CASE("line-bundle Szegő kernel")
{
    SECTION("sphere: 1/(y - x) and the stated unit value")
    {
        REQUIRE(szego_line(0.0, 1.0, bundle_point(0.0), sphere, pol) == cdouble(1, 0));
        REQUIRE(szego_line(cdouble(0.4, 0.1), cdouble(-0.6, 0.1), bundle_point(0.0), sphere, pol) ==
                cdouble(-1.0, 0));
    }

    SECTION("torus fixture value")
    {
        const cdouble s = szego_line(0.1, 0.45, bundle_point({0.37, 0.21}), torus, pol);
        REQUIRE(s.real() == Catch::Approx(oracle::szego_sample_re).epsilon(1e-13));
        REQUIRE(s.imag() == Catch::Approx(oracle::szego_sample_im).epsilon(1e-13));
    }

    SECTION("residue normalization: (y - x) s -> 1 as y -> x")
    {
        // two-sided step to cancel the O(h) connection term c0 * (y - x)
        const bundle_point L({0.37, 0.21});
        const cdouble x(0.23, 0.11);
        const double h = 1e-4;
        const cdouble plus = h * szego_line(x, x + h, L, torus, pol);
        const cdouble minus = -h * szego_line(x, x - h, L, torus, pol);
        REQUIRE(std::abs(0.5 * (plus + minus) - 1.0) < 1e-7);
        // a one-sided step sees exactly the connection coefficient at first order
        REQUIRE(std::abs((plus - 1.0) / h - dlog_theta_z_probe(L)) < 1e-3);
    }

    SECTION("diagonal requests are rejected")
    {
        REQUIRE_THROWS_AS(szego_line(0.3, 0.3, bundle_point({0.37, 0.21}), torus, pol), diagonal_pole);
        // equal mod lattice as well
        REQUIRE_THROWS_AS(szego_line(0.3, cdouble(1.3, 1.0), bundle_point({0.37, 0.21}), torus, pol),
                          diagonal_pole);
        REQUIRE_THROWS_AS(szego_line(0.5, 0.5, bundle_point(0.0), sphere, pol), diagonal_pole);
    }

    SECTION("bundles on the theta divisor are rejected")
    {
        const cdouble on_divisor = 0.5 * (1.0 + tau_i.at(0, 0));
        REQUIRE_THROWS_AS(szego_line(0.1, 0.4, bundle_point(on_divisor), torus, pol), on_theta_divisor);
    }

    SECTION("transpose duality s_z(x,y) = -s_{-z}(y,x)")
    {
        torus_sampler smp(31);
        for (int round = 0; round < 30; ++round) {
            const bundle_point L(smp.off_divisor());
            const cdouble x = smp.point(), y = smp.point();
            if (lattice_distance(y - x, tau_i) < 0.05) continue;
            const cdouble a = szego_line(x, y, L, torus, pol);
            const cdouble b = szego_line(y, x, bundle_point(-L.z), torus, pol);
            REQUIRE(std::abs(a + b) / (1.0 + std::abs(a)) < 1e-10);
        }
    }

    SECTION("translation invariance")
    {
        torus_sampler smp(41);
        for (int round = 0; round < 20; ++round) {
            const bundle_point L(smp.off_divisor());
            const cdouble x = smp.point(), y = smp.point(), c = smp.point();
            if (lattice_distance(y - x, tau_i) < 0.05) continue;
            const cdouble a = szego_line(x, y, L, torus, pol);
            const cdouble b = szego_line(x + c, y + c, L, torus, pol);
            REQUIRE(std::abs(a - b) / (1.0 + std::abs(a)) < 1e-9);
        }
    }
}

TEST_CASE("matrix kernel for decomposable bundles")
{
    torus_sampler smp(51);

    SECTION("rank 1 reduces to the scalar kernel")
    {
        const bundle_point L(smp.off_divisor());
        const cdouble x = smp.point(), y = smp.point();
        const cmatrix m = szego_matrix(x, y, decomposable_bundle({L}), torus, pol);
        REQUIRE(m(0, 0) == szego_line(x, y, L, torus, pol));
    }

    SECTION("residue matrix tends to the identity")
    {
        const decomposable_bundle E({bundle_point({0.37, 0.21}), bundle_point({-0.12, 0.4}),
                                     bundle_point({0.05, -0.3})});
        const cdouble x(0.23, 0.11);
        const double h = 1e-4;
        const cmatrix mp = szego_matrix(x, x + h, E, torus, pol);
        const cmatrix mm = szego_matrix(x, x - h, E, torus, pol);
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                const cdouble want = (i == j) ? cdouble(1, 0) : cdouble(0, 0);
                const cdouble sym = 0.5 * (h * mp(i, j) - h * mm(i, j));
                REQUIRE(std::abs(sym - want) < 1e-7);
            }
        }
    }

    SECTION("equal bundle points give a scalar multiple of the identity")
    {
        const bundle_point L(smp.off_divisor());
        const cdouble x = smp.point(), y = smp.point();
        const cmatrix m = szego_matrix(x, y, decomposable_bundle({L, L}), torus, pol);
        REQUIRE(m(0, 0) == m(1, 1));
        REQUIRE(m(0, 1) == cdouble(0, 0));
        REQUIRE(m(1, 0) == cdouble(0, 0));
    }

    SECTION("divisor failures name the component")
    {
        const cdouble on_divisor = 0.5 * (1.0 + tau_i.at(0, 0));
        const decomposable_bundle E({bundle_point(smp.off_divisor()), bundle_point(on_divisor)});
        REQUIRE_THROWS_WITH(szego_matrix(0.1, 0.4, E, torus, pol), Catch::Matchers::ContainsSubstring("component 1"));
    }
}

TEST_CASE("normalized kernel")
{
    torus_sampler smp(61);

    SECTION("equals s * theta(z) off the divisor")
    {
        for (int round = 0; round < 20; ++round) {
            const bundle_point L(smp.off_divisor());
            const cdouble x = smp.point(), y = smp.point();
            if (lattice_distance(y - x, tau_i) < 0.05) continue;
            const cdouble lhs = normalized_szego(x, y, L, torus, pol);
            const cdouble rhs = szego_line(x, y, L, torus, pol) * theta_g1(L.z, tau_i, pol);
            REQUIRE(std::abs(lhs - rhs) / (1.0 + std::abs(rhs)) < 1e-11);
        }
    }

    SECTION("finite on the divisor, with vanishing diagonal residue")
    {
        const cdouble zstar = 0.5 * (1.0 + tau_i.at(0, 0)); // theta((1+tau)/2) = 0
        REQUIRE(std::abs(theta_g1(zstar, tau_i, pol)) < 1e-13);
        const cdouble x(0.21, 0.05);
        const cdouble v = normalized_szego(x, x.real() + cdouble(0.35, 0.17), bundle_point(zstar), torus, pol);
        REQUIRE(is_finite(v));
        // (y - x) * s_bar -> theta(z*) = 0 along the diagonal
        const cdouble u(1e-6, 0);
        const cdouble near_diag = u * normalized_szego(x, x + u, bundle_point(zstar), torus, pol);
        REQUIRE(std::abs(near_diag) < 1e-5);
    }
}

TEST_CASE("determinant against the theta pullback")
{
    torus_sampler smp(71);

    SECTION("rank 1 is the same expression")
    {
        const bundle_point L(smp.off_divisor());
        const auto cmp = det_szego_vs_theta_pullback(0.1, cdouble(0.45, 0.3), decomposable_bundle({L}), torus, pol);
        REQUIRE(std::abs(cmp.lhs - cmp.rhs) < 1e-13 * std::abs(cmp.rhs));
    }

    SECTION("ranks 2 and 3 on random bundles at two moduli")
    {
        for (const cdouble tv : {cdouble(0, 1), cdouble(0.5, 1)}) {
            const riemann_matrix tm = riemann_matrix_g1(tv);
            const curve_model tc = curve_model::torus(tm);
            torus_sampler local(81);
            for (int round = 0; round < 25; ++round) {
                for (int rank : {2, 3}) {
                    std::vector<bundle_point> pts;
                    for (int k = 0; k < rank; ++k) {
                        cdouble z;
                        do {
                            z = local.unit() + local.unit() * tv;
                        } while (std::abs(theta_g1(z, tm, pol)) <= 0.05);
                        pts.emplace_back(z);
                    }
                    cdouble x = local.point(), y = local.point();
                    if (lattice_distance(y - x, tm) < 0.05) continue;
                    const auto cmp =
                        det_szego_vs_theta_pullback(x, y, decomposable_bundle(pts), tc, pol);
                    REQUIRE(std::abs(cmp.lhs - cmp.rhs) / (1.0 + std::abs(cmp.rhs)) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("LU determinant sanity")
{
    cmatrix m(3);
    m(0, 0) = {2, 0}; m(0, 1) = {1, 1}; m(0, 2) = {0, 0};
    m(1, 0) = {0, 1}; m(1, 1) = {3, 0}; m(1, 2) = {1, 0};
    m(2, 0) = {1, 0}; m(2, 1) = {0, 0}; m(2, 2) = {1, -1};
    // det = 2*(3*(1-i) - 1*0) - (1+i)*((i)*(1-i) - 1*1) + 0 = ...
    const cdouble direct = 2.0 * (cdouble(3, 0) * cdouble(1, -1)) -
                           cdouble(1, 1) * (cdouble(0, 1) * cdouble(1, -1) - cdouble(1, 0)) ;
    REQUIRE(std::abs(det(m) - direct) < 1e-14);
}
