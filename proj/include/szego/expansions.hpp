#ifndef SZEGO_EXPANSIONS_HPP
#define SZEGO_EXPANSIONS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

#include "szego/algebra.hpp"
#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/kernels.hpp"
#include "szego/theta.hpp"

namespace szego {

inline constexpr double default_ring_radius = 1e-2;
inline constexpr int default_contour_samples = 64;

/// Laurent data of the Szegő kernel at the diagonal, in the (dz, sqrt(dz))
/// frame: s(x, x+u) = c_minus1/u + c0 + c1*u + O(u^2). c0 is a one-form
/// coefficient, c1 a quadratic-differential coefficient.
struct diagonal_expansion {
    cdouble c_minus1;
    cdouble c0;
    cdouble c1;
    cdouble base_point; // x
    cdouble bundle_z;   // z
};

namespace detail {

// Coefficients c_{-1}, c_0, c_1 of a function with a simple pole at u = 0,
// via equispaced samples on |u| = ring_radius:
//   c_k = (1/N) * sum_j s(u_j) u_j^{-k}.
// Exact for truncated Laurent series up to aliasing by the N-th neighbors.
template <typename F>
std::array<cdouble, 3> contour_coefficients(F&& s_of_u, double ring_radius, int samples)
{
    std::array<cdouble, 3> c{cdouble(0, 0), cdouble(0, 0), cdouble(0, 0)};
    const double step = 2.0 * std::numbers::pi / samples;
    for (int j = 0; j < samples; ++j) {
        const double phi = step * j;
        const cdouble u = ring_radius * cdouble(std::cos(phi), std::sin(phi));
        const cdouble sv = s_of_u(u);
        c[0] += sv * u;        // k = -1
        c[1] += sv;            // k = 0
        c[2] += sv / u;        // k = +1
    }
    for (auto& v : c) v /= static_cast<double>(samples);
    return c;
}

inline void check_ring_radius(double ring_radius, const curve_model& curve)
{
    if (!(ring_radius > 0.0)) throw invalid_spec("diagonal expansion: ring_radius must be > 0");
    const double scale = curve.is_torus() ? lattice_injectivity_scale(curve.tau()) : 1.0;
    if (!(ring_radius < 0.1 * scale)) {
        throw invalid_spec("diagonal expansion: ring_radius must stay below 0.1 * injectivity scale");
    }
}

} // namespace detail

/// Extract (c_{-1}, c_0, c_1) of szego_line at the diagonal by discrete
/// contour integration; doubling the sample count guards against aliasing.
inline diagonal_expansion expand_diagonal(point_on_curve x, const bundle_point& L, const curve_model& curve,
                                          const truncation_policy& policy,
                                          double ring_radius = default_ring_radius,
                                          int samples = default_contour_samples)
{
    detail::check_ring_radius(ring_radius, curve);
    if (samples < 8) throw invalid_spec("diagonal expansion: need at least 8 samples");
    if (curve.is_torus()) {
        detail::require_off_divisor(detail::theta_of_bundle(L, curve.tau(), policy), "diagonal_expansion");
    }

    auto s_of_u = [&](cdouble u) {
        return szego_line(x, point_on_curve(x.coord + u), L, curve, policy);
    };
    const auto coarse = detail::contour_coefficients(s_of_u, ring_radius, samples);
    const auto fine = detail::contour_coefficients(s_of_u, ring_radius, 2 * samples);
    for (int k = 0; k < 3; ++k) {
        const double change = std::abs(fine[static_cast<std::size_t>(k)] - coarse[static_cast<std::size_t>(k)]);
        if (change > 1e-8 * (1.0 + std::abs(fine[static_cast<std::size_t>(k)]))) {
            throw aliasing_detected("diagonal_expansion: coefficients not stable under sample doubling");
        }
    }
    return diagonal_expansion{fine[0], fine[1], fine[2], x.coord, L.z};
}

/// Matrix Laurent data for a decomposable bundle: diagonal in each order,
/// off-diagonal entries exactly zero.
struct matrix_diagonal_expansion {
    cmatrix c_minus1;
    cmatrix c0;
    cmatrix c1;
};

inline matrix_diagonal_expansion expand_diagonal(point_on_curve x, const decomposable_bundle& E,
                                                 const curve_model& curve, const truncation_policy& policy,
                                                 double ring_radius = default_ring_radius,
                                                 int samples = default_contour_samples)
{
    matrix_diagonal_expansion out{cmatrix(E.rank()), cmatrix(E.rank()), cmatrix(E.rank())};
    for (int i = 0; i < E.rank(); ++i) {
        const diagonal_expansion d =
            expand_diagonal(x, E.points[static_cast<std::size_t>(i)], curve, policy, ring_radius, samples);
        out.c_minus1(i, i) = d.c_minus1;
        out.c0(i, i) = d.c0;
        out.c1(i, i) = d.c1;
    }
    return out;
}

/// d/dz log theta at the bundle point, by term-wise differentiation.
inline cdouble dlog_theta_z(const bundle_point& L, const riemann_matrix& tau, const truncation_policy& policy)
{
    const cdouble t0 = theta_g1(L.z, tau, policy);
    detail::require_off_divisor(t0, "dlog_theta_z");
    return theta_g1(L.z, tau, policy, 1) / t0;
}

/// d/dtau log theta at the bundle point (genus 1), term-wise.
inline cdouble dlog_theta_tau(const bundle_point& L, const riemann_matrix& tau, const truncation_policy& policy)
{
    const cdouble t0 = theta_g1(L.z, tau, policy);
    detail::require_off_divisor(t0, "dlog_theta_tau");
    return theta_g1_dtau(L.z, tau, policy) / t0;
}

/// The z-independent offset in c1: c1 = 2*pi*i*dlog_theta_tau + offset with
/// offset = -(1/6) theta1'''(0)/theta1'(0), by the heat equation.
inline cdouble c1_offset(const riemann_matrix& tau, const truncation_policy& policy)
{
    return -theta1(0.0, tau, policy, 3) / (6.0 * theta1(0.0, tau, policy, 1));
}

/// Newton iteration for a simple zero of theta(., tau) near `guess`.
inline cdouble find_theta_zero(const riemann_matrix& tau, cdouble guess, const truncation_policy& policy)
{
    cdouble z = guess;
    for (int it = 0; it < 80; ++it) {
        const cdouble f = theta_g1(z, tau, policy);
        const cdouble df = theta_g1(z, tau, policy, 1);
        if (std::abs(df) < 1e-6) throw zero_not_simple("find_theta_zero: derivative vanishes near the zero");
        const cdouble step = f / df;
        z -= step;
        if (std::abs(step) < 1e-14 && std::abs(theta_g1(z, tau, policy)) < 1e-12) return z;
    }
    throw zero_not_simple("find_theta_zero: Newton iteration did not converge");
}

/// Zero of the characteristic-(0,0) theta in the fundamental cell.
inline cdouble standard_theta_zero(const riemann_matrix& tau, const truncation_policy& policy)
{
    return find_theta_zero(tau, 0.5 * (1.0 + tau.at(0, 0)), policy);
}

struct pole_scan {
    cdouble zero;                                   // located z*
    cdouble residue;                                // extrapolated limit of (z - z*) * c0(z)
    std::vector<std::pair<double, cdouble>> steps;  // (delta, (z - z*) * c0(z* + delta*dir))
};

/// Approach a simple theta zero along z* + delta * direction and estimate the
/// residue of c0 = s|_{2Delta}, which carries the log-pole of the kernel
/// along the theta divisor.
inline pole_scan log_pole_scan(const riemann_matrix& tau, cdouble zero_guess, cdouble direction, int steps,
                               const truncation_policy& policy, double ring_radius = default_ring_radius,
                               int samples = default_contour_samples)
{
    if (steps < 3) throw invalid_spec("log_pole_scan: need at least 3 steps");
    if (std::abs(direction) == 0.0) throw invalid_spec("log_pole_scan: zero direction");
    const cdouble zstar = find_theta_zero(tau, zero_guess, policy);
    const cdouble dir = direction / std::abs(direction);
    const curve_model torus = curve_model::torus(tau);
    const point_on_curve base(0.317); // c0 does not depend on the base point

    pole_scan out;
    out.zero = zstar;
    double delta = 1e-2;
    for (int k = 0; k < steps; ++k, delta *= 0.5) {
        const cdouble z = zstar + delta * dir;
        const diagonal_expansion d = expand_diagonal(base, bundle_point(z), torus, policy, ring_radius, samples);
        out.steps.emplace_back(delta, (z - zstar) * d.c0);
    }
    // Richardson step assuming r(delta) = L + A*delta + O(delta^2) and halving steps.
    const cdouble r_last = out.steps[out.steps.size() - 1].second;
    const cdouble r_prev = out.steps[out.steps.size() - 2].second;
    out.residue = 2.0 * r_last - r_prev;
    return out;
}

} // namespace szego

#endif
