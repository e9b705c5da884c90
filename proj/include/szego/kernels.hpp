#ifndef SZEGO_KERNELS_HPP
#define SZEGO_KERNELS_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "szego/algebra.hpp"
#include "szego/curve.hpp"
#include "szego/errors.hpp"
#include "szego/theta.hpp"

namespace szego {

/// Dense n x n complex matrix, row-major. Used for the matrix-valued kernels
/// of decomposable bundles (n <= a few).
class cmatrix {
public:
    explicit cmatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, cdouble(0, 0))
    {
        if (n < 1) throw invalid_spec("cmatrix: dimension must be >= 1");
    }

    static cmatrix identity(int n)
    {
        cmatrix m(n);
        for (int j = 0; j < n; ++j) m(j, j) = 1.0;
        return m;
    }

    int dim() const { return n_; }
    cdouble& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
    const cdouble& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }

private:
    int n_;
    std::vector<cdouble> a_;
};

/// Determinant by LU with partial pivoting.
inline cdouble det(cmatrix m)
{
    const int n = m.dim();
    cdouble d = 1.0;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
        }
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(m(piv, c), m(col, c));
            d = -d;
        }
        const cdouble p = m(col, col);
        if (p == cdouble(0, 0)) return 0.0;
        d *= p;
        for (int r = col + 1; r < n; ++r) {
            const cdouble f = m(r, col) / p;
            for (int c = col; c < n; ++c) m(r, c) -= f * m(col, c);
        }
    }
    return d;
}

/// Prime form in the coordinate trivialization: (y - x) on the sphere,
/// theta1(y - x)/theta1'(0) on the torus. Antisymmetric; vanishes to first
/// order exactly on the diagonal (mod lattice).
inline cdouble prime_form(point_on_curve x, point_on_curve y, const curve_model& curve,
                          const truncation_policy& policy)
{
    if (!curve.is_torus()) return y.coord - x.coord;
    if (x.coord == y.coord) return 0.0; // exact diagonal
    const riemann_matrix& tau = curve.tau();
    return theta1(y.coord - x.coord, tau, policy) / theta1(0.0, tau, policy, 1);
}

namespace detail {

inline cdouble theta_of_bundle(const bundle_point& L, const riemann_matrix& tau, const truncation_policy& policy)
{
    return theta_g1(L.z, tau, policy);
}

inline void require_off_divisor(cdouble theta_value, const std::string& who)
{
    if (std::abs(theta_value) <= divisor_epsilon) {
        throw on_theta_divisor(who + ": bundle lies on the theta divisor");
    }
}

inline void require_off_diagonal(point_on_curve x, point_on_curve y, const curve_model& curve,
                                 const truncation_policy& policy, const std::string& who)
{
    if (curve.is_torus()) {
        if (x.coord == y.coord ||
            std::abs(theta1(y.coord - x.coord, curve.tau(), policy)) <= divisor_epsilon) {
            throw diagonal_pole(who + ": x = y (mod lattice) requested");
        }
    } else if (x.coord == y.coord) {
        throw diagonal_pole(who + ": x = y requested");
    }
}

} // namespace detail

/// Abelian Szegő kernel in the coordinate trivialization.
/// Sphere (trivializing the Omega^{1/2} twist): 1/(y - x).
/// Torus: theta(z + (y - x)) / (theta(z) * E(x, y)).
inline cdouble szego_line(point_on_curve x, point_on_curve y, const bundle_point& L,
                          const curve_model& curve, const truncation_policy& policy)
{
    detail::require_off_diagonal(x, y, curve, policy, "szego_line");
    if (!curve.is_torus()) return 1.0 / (y.coord - x.coord);
    const riemann_matrix& tau = curve.tau();
    const cdouble theta_z = detail::theta_of_bundle(L, tau, policy);
    detail::require_off_divisor(theta_z, "szego_line");
    const cdouble num = theta_g1(L.z + (y.coord - x.coord), tau, policy);
    return num / (theta_z * prime_form(x, y, curve, policy));
}

/// Szegő kernel of a decomposable bundle: diag(szego_line(x, y, L_i)).
/// Uniqueness of the kernel with identity residue makes this *the* kernel.
inline cmatrix szego_matrix(point_on_curve x, point_on_curve y, const decomposable_bundle& E,
                            const curve_model& curve, const truncation_policy& policy)
{
    cmatrix m(E.rank());
    for (int i = 0; i < E.rank(); ++i) {
        try {
            m(i, i) = szego_line(x, y, E.points[static_cast<std::size_t>(i)], curve, policy);
        } catch (const on_theta_divisor&) {
            throw on_theta_divisor("szego_matrix: component " + std::to_string(i) + " lies on the theta divisor");
        }
    }
    return m;
}

/// Normalized kernel s_bar = s * theta(z) = theta(z + (y - x)) / E(x, y);
/// finite for every bundle point, including on the theta divisor.
inline cdouble normalized_szego(point_on_curve x, point_on_curve y, const bundle_point& L,
                                const curve_model& curve, const truncation_policy& policy)
{
    if (!curve.is_torus()) throw invalid_spec("normalized_szego: torus bundles only");
    detail::require_off_diagonal(x, y, curve, policy, "normalized_szego");
    const riemann_matrix& tau = curve.tau();
    return theta_g1(L.z + (y.coord - x.coord), tau, policy) / prime_form(x, y, curve, policy);
}

struct det_comparison {
    cdouble lhs; // det of the matrix kernel
    cdouble rhs; // pullback of theta over theta(E), in the prime-form frame
};

/// Both sides of the determinant identity
///   det s_E(x,y)  =  prod_i theta(z_i + (y-x)) / (prod_i theta(z_i) * E(x,y)^n),
/// evaluated independently: lhs through the matrix kernel and an LU
/// determinant, rhs through the displayed product formula.
inline det_comparison det_szego_vs_theta_pullback(point_on_curve x, point_on_curve y,
                                                  const decomposable_bundle& E, const curve_model& curve,
                                                  const truncation_policy& policy)
{
    if (!curve.is_torus()) throw invalid_spec("det_szego_vs_theta_pullback: torus bundles only");
    const riemann_matrix& tau = curve.tau();

    const cdouble lhs = det(szego_matrix(x, y, E, curve, policy));

    cdouble num = 1.0, den = 1.0;
    for (const bundle_point& L : E.points) {
        const cdouble tz = detail::theta_of_bundle(L, tau, policy);
        detail::require_off_divisor(tz, "det_szego_vs_theta_pullback");
        num *= theta_g1(L.z + (y.coord - x.coord), tau, policy);
        den *= tz;
    }
    const cdouble Exy = prime_form(x, y, curve, policy);
    cdouble prime_pow = 1.0;
    for (int i = 0; i < E.rank(); ++i) prime_pow *= Exy;
    return det_comparison{lhs, num / (den * prime_pow)};
}

} // namespace szego

#endif
