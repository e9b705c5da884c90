#ifndef SZEGO_THETA_HPP
#define SZEGO_THETA_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "szego/algebra.hpp"
#include "szego/errors.hpp"

namespace szego {

// Series convention used throughout:
//
//   theta[a,b](z, tau) = sum over n in Z^g of
//       exp( pi*i*(n+a)^T tau (n+a) + 2*pi*i*(n+a)^T (z+b) )
//
// Derivatives are taken term-wise. A z-derivative in direction j multiplies a
// term by 2*pi*i*(n+a)_j; the tau-derivative in the (j,k) entry of the
// symmetric matrix multiplies by pi*i*(n+a)_j^2 for j == k and by
// 2*pi*i*(n+a)_j*(n+a)_k for j != k (both symmetric entries move together).
// With this convention the genus-1 heat equation reads d2theta/dz2 = 4*pi*i*dtheta/dtau.

/// One theta evaluation: point, modulus, characteristic, optional term-wise
/// derivatives (z multi-index of total order <= 3, at most one tau index).
struct theta_request {
    std::vector<cdouble> z;
    riemann_matrix tau;
    theta_char chi;
    std::vector<int> deriv_z;                       // empty means no z-derivative
    std::optional<std::pair<int, int>> deriv_tau;   // (j, k) with j <= k
    truncation_policy policy;

    theta_request(std::vector<cdouble> z_, riemann_matrix tau_)
        : z(std::move(z_)), tau(std::move(tau_)), chi(theta_char::zero(tau.genus()))
    {}

    theta_request(std::vector<cdouble> z_, riemann_matrix tau_, theta_char chi_)
        : z(std::move(z_)), tau(std::move(tau_)), chi(std::move(chi_))
    {}

    int genus() const { return tau.genus(); }

    void validate() const
    {
        const int g = tau.genus();
        if (static_cast<int>(z.size()) != g) throw invalid_spec("theta_request: z must have g components");
        if (chi.genus() != g) throw invalid_spec("theta_request: characteristic genus mismatch");
        for (const cdouble& v : z) {
            if (!is_finite(v)) throw non_finite("theta_request: non-finite z");
        }
        if (!deriv_z.empty()) {
            if (static_cast<int>(deriv_z.size()) != g) throw invalid_spec("theta_request: deriv_z must have g entries");
            int total = 0;
            for (int d : deriv_z) {
                if (d < 0) throw invalid_spec("theta_request: negative derivative order");
                total += d;
            }
            if (total > 3) throw invalid_spec("theta_request: z-derivative order capped at 3");
        }
        if (deriv_tau) {
            const auto [j, k] = *deriv_tau;
            if (j < 0 || k < 0 || j >= g || k >= g || j > k) {
                throw invalid_spec("theta_request: deriv_tau index must satisfy 0 <= j <= k < g");
            }
        }
        policy.validate();
    }
};

namespace detail {

struct sum_geometry {
    int radius = 0;
    std::vector<long> center;       // integer center of the enumeration box
    double lambda_min = 0.0;
    double log_prefactor = 0.0;     // pi * y^T Y^{-1} y
};

// Radius selection from a closed-form Gaussian tail overestimate.
//
// Terms with ||n - center||_inf = k have magnitude at most
//   P * D(k) * exp(-pi*lambda_min*(k - 1/2)^2)
// and there are fewer than 2g(2k+1)^{g-1} of them; beyond k = R+1 consecutive
// shells decay at least geometrically, which closes the bound.
inline int choose_radius(int g, double lambda_min, double log_prefactor, double center_offset_inf,
                         int z_order, int tau_order, const truncation_policy& policy)
{
    const double pi = std::numbers::pi;
    const int poly_pow = z_order + 2 * tau_order;
    auto shell_bound = [&](int k) {
        const double reach = static_cast<double>(k) + 0.5 + center_offset_inf;
        double b = std::log(2.0 * g) + (g - 1) * std::log(2.0 * k + 1.0);
        b += poly_pow * std::log(2.0 * pi * std::max(reach, 1.0));
        b += -pi * lambda_min * (k - 0.5) * (k - 0.5);
        return b; // log of the shell overestimate
    };
    const double log_target = std::log(policy.target_tolerance);
    for (int radius = 1; radius <= policy.max_radius; ++radius) {
        const double log_ratio = (g - 1 + poly_pow) * std::log(2.0) - 2.0 * pi * lambda_min * (radius + 1);
        if (log_ratio >= 0.0) continue; // shells not yet geometrically decaying
        const double log_tail = log_prefactor + shell_bound(radius + 1) - std::log1p(-std::exp(log_ratio));
        if (log_tail <= log_target) return radius;
    }
    throw truncation_budget_exceeded("theta: required lattice radius exceeds max_radius");
}

inline sum_geometry plan_sum(const theta_request& req)
{
    const int g = req.genus();
    const std::vector<double> im_tau = req.tau.imag_part();
    std::vector<double> lower;
    if (!cholesky(g, im_tau, lower)) {
        throw im_not_positive_definite("theta: Im(tau) not positive definite");
    }
    std::vector<double> y(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) y[static_cast<std::size_t>(j)] = req.z[static_cast<std::size_t>(j)].imag();
    const std::vector<double> c = cholesky_solve(g, lower, y);

    sum_geometry geom;
    geom.lambda_min = min_eigenvalue_sym(g, im_tau);
    double ytc = 0.0;
    for (int j = 0; j < g; ++j) ytc += y[static_cast<std::size_t>(j)] * c[static_cast<std::size_t>(j)];
    geom.log_prefactor = std::numbers::pi * ytc;

    double cmax = 0.0;
    geom.center.resize(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) {
        const double w = req.chi.a[static_cast<std::size_t>(j)] + c[static_cast<std::size_t>(j)];
        geom.center[static_cast<std::size_t>(j)] = std::lround(-w);
        cmax = std::max(cmax, std::abs(c[static_cast<std::size_t>(j)]));
    }

    int z_order = 0;
    for (int d : req.deriv_z) z_order += d;
    geom.radius = choose_radius(g, geom.lambda_min, geom.log_prefactor, cmax,
                                z_order, req.deriv_tau ? 1 : 0, req.policy);
    return geom;
}

template <typename Real>
std::complex<Real> lattice_sum(const theta_request& req, const std::vector<long>& center, int radius)
{
    using C = std::complex<Real>;
    const Real pi = std::numbers::pi_v<Real>;
    const C two_pi_i(0, 2 * pi);
    const C pi_i(0, pi);
    const int g = req.genus();

    std::vector<C> tau(static_cast<std::size_t>(g) * g);
    for (int j = 0; j < g; ++j)
        for (int k = 0; k < g; ++k)
            tau[static_cast<std::size_t>(j) * g + k] =
                C(static_cast<Real>(req.tau.at(j, k).real()), static_cast<Real>(req.tau.at(j, k).imag()));
    std::vector<C> zb(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j)
        zb[static_cast<std::size_t>(j)] = C(static_cast<Real>(req.z[static_cast<std::size_t>(j)].real() + req.chi.b[static_cast<std::size_t>(j)]),
                                            static_cast<Real>(req.z[static_cast<std::size_t>(j)].imag()));

    std::vector<long> n(static_cast<std::size_t>(g));
    for (int j = 0; j < g; ++j) n[static_cast<std::size_t>(j)] = center[static_cast<std::size_t>(j)] - radius;
    std::vector<Real> v(static_cast<std::size_t>(g));

    C total(0, 0);
    while (true) {
        for (int j = 0; j < g; ++j)
            v[static_cast<std::size_t>(j)] = static_cast<Real>(n[static_cast<std::size_t>(j)]) +
                                             static_cast<Real>(req.chi.a[static_cast<std::size_t>(j)]);

        C quad(0, 0), lin(0, 0);
        for (int j = 0; j < g; ++j) {
            C rowt(0, 0);
            for (int k = 0; k < g; ++k) rowt += tau[static_cast<std::size_t>(j) * g + k] * v[static_cast<std::size_t>(k)];
            quad += v[static_cast<std::size_t>(j)] * rowt;
            lin += v[static_cast<std::size_t>(j)] * zb[static_cast<std::size_t>(j)];
        }

        C factor(1, 0);
        if (!req.deriv_z.empty()) {
            for (int j = 0; j < g; ++j) {
                for (int d = 0; d < req.deriv_z[static_cast<std::size_t>(j)]; ++d) {
                    factor *= two_pi_i * v[static_cast<std::size_t>(j)];
                }
            }
        }
        if (req.deriv_tau) {
            const auto [j, k] = *req.deriv_tau;
            if (j == k) {
                factor *= pi_i * v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
            } else {
                factor *= two_pi_i * v[static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(k)];
            }
        }

        total += factor * std::exp(pi_i * quad + two_pi_i * lin);

        int j = 0;
        for (; j < g; ++j) {
            if (++n[static_cast<std::size_t>(j)] <= center[static_cast<std::size_t>(j)] + radius) break;
            n[static_cast<std::size_t>(j)] = center[static_cast<std::size_t>(j)] - radius;
        }
        if (j == g) break;
    }
    return total;
}

} // namespace detail

/// Riemann theta function with characteristics (term-wise derivatives included
/// per the request), truncated so the absolute tail is below the policy target.
inline cdouble theta(const theta_request& req)
{
    req.validate();
    const detail::sum_geometry geom = detail::plan_sum(req);
    const std::complex<double> value = detail::lattice_sum<double>(req, geom.center, geom.radius);
    if (!is_finite(value)) throw non_finite("theta: sum is not finite");
    return value;
}

/// Lattice radius the engine would use for this request.
inline int planned_radius(const theta_request& req)
{
    req.validate();
    return detail::plan_sum(req).radius;
}

/// Oracle mode used to freeze fixtures: extended-precision accumulation at a
/// multiple of the radius dictated by a 1e-30 tail target.
inline std::complex<long double> theta_highprec(const theta_request& req, int radius_multiplier = 10)
{
    req.validate();
    theta_request tight = req;
    tight.policy.target_tolerance = std::min(req.policy.target_tolerance, 1e-30);
    const detail::sum_geometry geom = detail::plan_sum(tight);
    const int radius = geom.radius * std::max(radius_multiplier, 1);
    return detail::lattice_sum<long double>(req, geom.center, radius);
}

/// Automorphy factor for characteristic (0,0):
/// theta(z + tau*m + n) = exp(-pi*i*m^T tau m - 2*pi*i*m^T z) * theta(z).
inline cdouble theta_quasi_period_factor(const std::vector<cdouble>& z, const std::vector<long>& m,
                                         const std::vector<long>& n, const riemann_matrix& tau)
{
    const int g = tau.genus();
    if (static_cast<int>(z.size()) != g || static_cast<int>(m.size()) != g || static_cast<int>(n.size()) != g) {
        throw invalid_spec("theta_quasi_period_factor: dimension mismatch");
    }
    cdouble quad(0, 0), lin(0, 0);
    for (int j = 0; j < g; ++j) {
        for (int k = 0; k < g; ++k) {
            quad += static_cast<double>(m[static_cast<std::size_t>(j)]) * tau.at(j, k) *
                    static_cast<double>(m[static_cast<std::size_t>(k)]);
        }
        lin += static_cast<double>(m[static_cast<std::size_t>(j)]) * z[static_cast<std::size_t>(j)];
    }
    const cdouble i_pi(0, std::numbers::pi);
    return std::exp(-i_pi * quad - 2.0 * i_pi * lin);
}

// Genus-1 conveniences. theta_g1 evaluates the characteristic-(0,0) series,
// optionally with a z-derivative of order <= 3.

inline cdouble theta_g1(cdouble z, const riemann_matrix& tau, const truncation_policy& policy, int dz = 0)
{
    if (tau.genus() != 1) throw invalid_spec("theta_g1: genus-1 modulus required");
    theta_request req({z}, tau);
    if (dz > 0) req.deriv_z = {dz};
    req.policy = policy;
    return theta(req);
}

inline cdouble theta_g1_dtau(cdouble z, const riemann_matrix& tau, const truncation_policy& policy)
{
    if (tau.genus() != 1) throw invalid_spec("theta_g1_dtau: genus-1 modulus required");
    theta_request req({z}, tau);
    req.deriv_tau = std::make_pair(0, 0);
    req.policy = policy;
    return theta(req);
}

/// theta_1(u) = -theta[1/2,1/2](u): the odd genus-1 theta function, with a
/// simple zero at every lattice point; `dz` requests d^dz/du^dz, term-wise.
inline cdouble theta1(cdouble u, const riemann_matrix& tau, const truncation_policy& policy, int dz = 0)
{
    if (tau.genus() != 1) throw invalid_spec("theta1: genus-1 modulus required");
    theta_request req({u}, tau, theta_char({0.5}, {0.5}));
    if (dz > 0) req.deriv_z = {dz};
    req.policy = policy;
    return -theta(req);
}

} // namespace szego

#endif
