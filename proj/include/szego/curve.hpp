#ifndef SZEGO_CURVE_HPP
#define SZEGO_CURVE_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "szego/algebra.hpp"
#include "szego/errors.hpp"
#include "szego/theta.hpp"

namespace szego {

// Scale below which a point counts as lying on the theta divisor or on the
// lattice. One global constant so that error behavior is uniform.
inline constexpr double divisor_epsilon = 1e-8;

// Residual allowed when checking that a claimed zero actually vanishes.
inline constexpr double residual_tolerance = 1e-9;

/// The curve: either the Riemann sphere in its affine chart, or the torus
/// C/(Z + tau*Z). Omega is trivialized by dz and Omega^{1/2} by a fixed
/// branch of sqrt(dz); kernel values below are reported in that frame.
class curve_model {
public:
    enum class kind { sphere, torus };

    static curve_model sphere() { return curve_model(kind::sphere, std::nullopt); }
    static curve_model torus(riemann_matrix tau)
    {
        if (tau.genus() != 1) throw invalid_spec("curve_model::torus: genus-1 modulus required");
        return curve_model(kind::torus, std::move(tau));
    }

    kind variant() const { return kind_; }
    bool is_torus() const { return kind_ == kind::torus; }

    const riemann_matrix& tau() const
    {
        if (!tau_) throw invalid_spec("curve_model: the sphere carries no modulus");
        return *tau_;
    }

private:
    curve_model(kind k, std::optional<riemann_matrix> tau) : kind_(k), tau_(std::move(tau)) {}

    kind kind_;
    std::optional<riemann_matrix> tau_;
};

/// A point in the evaluation domain: affine coordinate on the sphere, or a
/// torus coordinate understood mod Z + tau*Z (never reduced implicitly).
struct point_on_curve {
    cdouble coord;

    point_on_curve(cdouble c = cdouble(0, 0)) : coord(c)
    {
        if (!is_finite(coord)) throw non_finite("point_on_curve: non-finite coordinate");
    }
    point_on_curve(double c) : point_on_curve(cdouble(c, 0)) {}
};

/// A degree-zero line bundle on the torus as a point z of the Jacobian,
/// in coordinates where the theta divisor is {theta(z) = 0}.
struct bundle_point {
    cdouble z;

    bundle_point(cdouble z_ = cdouble(0, 0)) : z(z_)
    {
        if (!is_finite(z)) throw non_finite("bundle_point: non-finite coordinate");
    }
    bundle_point(double z_) : bundle_point(cdouble(z_, 0)) {}
};

/// Rank-n bundle E = L_1 + ... + L_n (direct sum of line bundles).
struct decomposable_bundle {
    std::vector<bundle_point> points;

    explicit decomposable_bundle(std::vector<bundle_point> pts) : points(std::move(pts))
    {
        if (points.empty()) throw invalid_spec("decomposable_bundle: rank must be >= 1");
    }

    int rank() const { return static_cast<int>(points.size()); }
};

/// Distance from w to the lattice Z + tau*Z.
inline double lattice_distance(cdouble w, const riemann_matrix& tau)
{
    const cdouble t = tau.at(0, 0);
    const double m_star = w.imag() / t.imag();
    const double n_star = w.real() - m_star * t.real();
    double best = std::abs(w);
    for (long dm = -1; dm <= 1; ++dm) {
        for (long dn = -1; dn <= 1; ++dn) {
            const double m = std::floor(m_star) + static_cast<double>(dm);
            const double n = std::floor(n_star) + static_cast<double>(dn);
            best = std::min(best, std::abs(w - (n + m * t)));
        }
    }
    return best;
}

/// Shortest nonzero lattice vector length (the injectivity scale of the torus).
inline double lattice_injectivity_scale(const riemann_matrix& tau)
{
    const cdouble t = tau.at(0, 0);
    double best = std::abs(t);
    for (long m = -2; m <= 2; ++m) {
        for (long n = -2; n <= 2; ++n) {
            if (m == 0 && n == 0) continue;
            best = std::min(best, std::abs(static_cast<double>(n) + static_cast<double>(m) * t));
        }
    }
    return best;
}

/// p_rel(u) = -d^2/du^2 log theta1(u): equal to the Weierstrass p-function of
/// the lattice Z + tau*Z up to a u-independent constant (which cancels in
/// every test function built from differences).
inline cdouble weierstrass_p_rel(point_on_curve u, const riemann_matrix& tau, const truncation_policy& policy)
{
    const cdouble t0 = theta1(u.coord, tau, policy);
    if (std::abs(t0) <= divisor_epsilon) {
        throw pole_at_lattice_point("weierstrass_p_rel: u is on the lattice");
    }
    const cdouble t1 = theta1(u.coord, tau, policy, 1);
    const cdouble t2 = theta1(u.coord, tau, policy, 2);
    const cdouble r = t1 / t0;
    return r * r - t2 / t0;
}

/// p'_rel(u) = -d^3/du^3 log theta1(u) = p_rel'(u); odd, elliptic.
inline cdouble weierstrass_p_prime_rel(point_on_curve u, const riemann_matrix& tau, const truncation_policy& policy)
{
    const cdouble t0 = theta1(u.coord, tau, policy);
    if (std::abs(t0) <= divisor_epsilon) {
        throw pole_at_lattice_point("weierstrass_p_prime_rel: u is on the lattice");
    }
    const cdouble t1 = theta1(u.coord, tau, policy, 1);
    const cdouble t2 = theta1(u.coord, tau, policy, 2);
    const cdouble t3 = theta1(u.coord, tau, policy, 3);
    const cdouble r = t1 / t0;
    return -(t3 / t0 - 3.0 * t2 * t1 / (t0 * t0) + 2.0 * r * r * r);
}

/// Meromorphic test function with reduced zero fiber: the sphere coordinate
/// f(zeta) = zeta, or f(u) = p_rel(u) - p_rel(a) on the torus.
class test_function {
public:
    enum class kind { sphere_coordinate, weierstrass_shifted };

    static test_function sphere_coordinate() { return test_function(kind::sphere_coordinate, point_on_curve{}); }
    static test_function weierstrass_shifted(point_on_curve a) { return test_function(kind::weierstrass_shifted, a); }

    kind variant() const { return kind_; }
    point_on_curve shift() const { return a_; }

    cdouble value(point_on_curve p, const curve_model& curve, const truncation_policy& policy) const
    {
        if (kind_ == kind::sphere_coordinate) return p.coord;
        const riemann_matrix& tau = curve.tau();
        return weierstrass_p_rel(p, tau, policy) - weierstrass_p_rel(a_, tau, policy);
    }

    cdouble derivative(point_on_curve p, const curve_model& curve, const truncation_policy& policy) const
    {
        if (kind_ == kind::sphere_coordinate) return 1.0;
        return weierstrass_p_prime_rel(p, curve.tau(), policy);
    }

private:
    test_function(kind k, point_on_curve a) : kind_(k), a_(a) {}

    kind kind_;
    point_on_curve a_;
};

struct zero_with_df {
    point_on_curve alpha;
    cdouble df;
};

/// The fiber f^{-1}(0) together with df at each zero. Sphere: {(0, 1)}.
/// Torus: {(a, p'(a)), (-a, -p'(a))}, valid only when a is not 2-torsion.
inline std::vector<zero_with_df> zeros_and_df(const test_function& f, const curve_model& curve,
                                              const truncation_policy& policy)
{
    if (f.variant() == test_function::kind::sphere_coordinate) {
        return {zero_with_df{point_on_curve(0.0), 1.0}};
    }
    if (!curve.is_torus()) throw invalid_spec("zeros_and_df: Weierstrass test function needs a torus");
    const riemann_matrix& tau = curve.tau();
    const point_on_curve a = f.shift();

    // 2-torsion collapses the fiber: the zeros a, -a collide mod lattice.
    if (std::abs(theta1(2.0 * a.coord, tau, policy)) <= divisor_epsilon) {
        throw degenerate_fiber("zeros_and_df: shift is 2-torsion, fiber not reduced");
    }

    const cdouble dfa = weierstrass_p_prime_rel(a, tau, policy);
    std::vector<zero_with_df> zeros{
        zero_with_df{a, dfa},
        zero_with_df{point_on_curve(-a.coord), -dfa},
    };
    for (const zero_with_df& zd : zeros) {
        if (std::abs(f.value(zd.alpha, curve, policy)) >= residual_tolerance) {
            throw degenerate_fiber("zeros_and_df: claimed zero does not vanish");
        }
        if (std::abs(zd.df) <= divisor_epsilon) {
            throw degenerate_fiber("zeros_and_df: df vanishes at a zero");
        }
    }
    return zeros;
}

} // namespace szego

#endif
