#ifndef SZEGO_ALGEBRA_HPP
#define SZEGO_ALGEBRA_HPP

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "szego/errors.hpp"

namespace szego {

using cdouble = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(const cdouble& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); }

namespace detail {

// Cholesky factorization of a symmetric g x g matrix stored row-major.
// Returns false when the matrix is not (numerically) positive definite.
// On success `lower` holds L with A = L L^T.
inline bool cholesky(int g, const std::vector<double>& a, std::vector<double>& lower)
{
    lower.assign(static_cast<std::size_t>(g) * g, 0.0);
    for (int j = 0; j < g; ++j) {
        double d = a[static_cast<std::size_t>(j) * g + j];
        for (int k = 0; k < j; ++k) {
            const double ljk = lower[static_cast<std::size_t>(j) * g + k];
            d -= ljk * ljk;
        }
        if (!(d > 0.0) || !std::isfinite(d)) {
            return false;
        }
        const double ljj = std::sqrt(d);
        lower[static_cast<std::size_t>(j) * g + j] = ljj;
        for (int i = j + 1; i < g; ++i) {
            double s = a[static_cast<std::size_t>(i) * g + j];
            for (int k = 0; k < j; ++k) {
                s -= lower[static_cast<std::size_t>(i) * g + k] * lower[static_cast<std::size_t>(j) * g + k];
            }
            lower[static_cast<std::size_t>(i) * g + j] = s / ljj;
        }
    }
    return true;
}

// Solve A x = b given the Cholesky factor L of A.
inline std::vector<double> cholesky_solve(int g, const std::vector<double>& lower, const std::vector<double>& b)
{
    std::vector<double> x(b);
    for (int i = 0; i < g; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k) s -= lower[static_cast<std::size_t>(i) * g + k] * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / lower[static_cast<std::size_t>(i) * g + i];
    }
    for (int i = g - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < g; ++k) s -= lower[static_cast<std::size_t>(k) * g + i] * x[static_cast<std::size_t>(k)];
        x[static_cast<std::size_t>(i)] = s / lower[static_cast<std::size_t>(i) * g + i];
    }
    return x;
}

// Smallest eigenvalue of a symmetric matrix via cyclic Jacobi rotations.
// The matrices here are tiny (g <= 6), so convergence is immediate.
inline double min_eigenvalue_sym(int g, std::vector<double> a)
{
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < g; ++p)
            for (int q = p + 1; q < g; ++q) off += std::abs(a[static_cast<std::size_t>(p) * g + q]);
        if (off < 1e-15) break;
        for (int p = 0; p < g; ++p) {
            for (int q = p + 1; q < g; ++q) {
                const double apq = a[static_cast<std::size_t>(p) * g + q];
                if (std::abs(apq) < 1e-18) continue;
                const double app = a[static_cast<std::size_t>(p) * g + p];
                const double aqq = a[static_cast<std::size_t>(q) * g + q];
                const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(phi), s = std::sin(phi);
                for (int k = 0; k < g; ++k) {
                    const double akp = a[static_cast<std::size_t>(k) * g + p];
                    const double akq = a[static_cast<std::size_t>(k) * g + q];
                    a[static_cast<std::size_t>(k) * g + p] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k) * g + q] = s * akp + c * akq;
                }
                for (int k = 0; k < g; ++k) {
                    const double apk = a[static_cast<std::size_t>(p) * g + k];
                    const double aqk = a[static_cast<std::size_t>(q) * g + k];
                    a[static_cast<std::size_t>(p) * g + k] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q) * g + k] = s * apk + c * aqk;
                }
            }
        }
    }
    double mn = a[0];
    for (int k = 1; k < g; ++k) mn = std::min(mn, a[static_cast<std::size_t>(k) * g + k]);
    return mn;
}

} // namespace detail

/// A genus-g period matrix: symmetric, with positive definite imaginary part.
/// Symmetry is checked exactly on the stored values (inputs must arrive
/// pre-symmetrized); positive definiteness is decided by Cholesky success.
class riemann_matrix {
public:
    riemann_matrix(int genus, std::vector<cdouble> entries)
        : g_(genus), e_(std::move(entries))
    {
        if (g_ < 1 || e_.size() != static_cast<std::size_t>(g_) * g_) {
            throw invalid_spec("riemann_matrix: entries must form a g x g matrix, g >= 1");
        }
        for (const cdouble& v : e_) {
            if (!is_finite(v)) throw non_finite("riemann_matrix: non-finite entry");
        }
        for (int j = 0; j < g_; ++j) {
            for (int k = j + 1; k < g_; ++k) {
                if (e_[static_cast<std::size_t>(j) * g_ + k] != e_[static_cast<std::size_t>(k) * g_ + j]) {
                    throw not_symmetric("riemann_matrix: tau[j][k] != tau[k][j]");
                }
            }
        }
        std::vector<double> im(static_cast<std::size_t>(g_) * g_);
        for (std::size_t i = 0; i < im.size(); ++i) im[i] = e_[i].imag();
        std::vector<double> lower;
        if (!detail::cholesky(g_, im, lower)) {
            throw im_not_positive_definite("riemann_matrix: Im(tau) is not positive definite");
        }
    }

    int genus() const { return g_; }
    const cdouble& at(int j, int k) const { return e_[static_cast<std::size_t>(j) * g_ + k]; }
    const std::vector<cdouble>& entries() const { return e_; }

    std::vector<double> imag_part() const
    {
        std::vector<double> im(e_.size());
        for (std::size_t i = 0; i < im.size(); ++i) im[i] = e_[i].imag();
        return im;
    }

    friend bool operator==(const riemann_matrix& a, const riemann_matrix& b)
    {
        return a.g_ == b.g_ && a.e_ == b.e_;
    }

private:
    int g_;
    std::vector<cdouble> e_;
};

/// Validate a square complex matrix as a period matrix.
inline riemann_matrix validate_riemann_matrix(int genus, std::vector<cdouble> entries)
{
    return riemann_matrix(genus, std::move(entries));
}

/// Genus-1 shorthand.
inline riemann_matrix riemann_matrix_g1(cdouble tau)
{
    return riemann_matrix(1, {tau});
}

enum class char_parity { even, odd };

/// A half-integer theta characteristic: shift vectors a, b with entries in {0, 1/2}.
struct theta_char {
    std::vector<double> a;
    std::vector<double> b;

    theta_char(std::vector<double> a_, std::vector<double> b_)
        : a(std::move(a_)), b(std::move(b_))
    {
        if (a.size() != b.size() || a.empty()) {
            throw invalid_spec("theta_char: a and b must be nonempty g-vectors");
        }
        for (double v : a) {
            if (v != 0.0 && v != 0.5) throw invalid_spec("theta_char: entries must be 0 or 1/2");
        }
        for (double v : b) {
            if (v != 0.0 && v != 0.5) throw invalid_spec("theta_char: entries must be 0 or 1/2");
        }
    }

    static theta_char zero(int g) { return theta_char(std::vector<double>(g, 0.0), std::vector<double>(g, 0.0)); }

    int genus() const { return static_cast<int>(a.size()); }

    friend bool operator==(const theta_char& x, const theta_char& y) { return x.a == y.a && x.b == y.b; }
};

/// Parity of a characteristic: (4 a.b) mod 2.
inline char_parity parity(const theta_char& chi)
{
    double dot = 0.0;
    for (std::size_t j = 0; j < chi.a.size(); ++j) dot += chi.a[j] * chi.b[j];
    const long n = std::lround(4.0 * dot); // exact: each a_j b_j is 0 or 1/4
    return (n % 2 == 0) ? char_parity::even : char_parity::odd;
}

inline constexpr int max_enumeration_genus = 6;

/// All 4^g characteristics of genus g, in a fixed lexicographic order.
inline std::vector<theta_char> enumerate_characteristics(int g, int genus_cap = max_enumeration_genus)
{
    if (g < 1 || g > genus_cap) {
        throw invalid_spec("enumerate_characteristics: genus out of configured range");
    }
    std::vector<theta_char> out;
    out.reserve(static_cast<std::size_t>(1) << (2 * g));
    const unsigned total = 1u << (2 * g);
    for (unsigned code = 0; code < total; ++code) {
        std::vector<double> a(g), b(g);
        for (int j = 0; j < g; ++j) {
            a[static_cast<std::size_t>(j)] = ((code >> j) & 1u) ? 0.5 : 0.0;
            b[static_cast<std::size_t>(j)] = ((code >> (g + j)) & 1u) ? 0.5 : 0.0;
        }
        out.emplace_back(std::move(a), std::move(b));
    }
    return out;
}

/// Controls lattice-sum truncation: absolute tail target and a hard radius cap.
struct truncation_policy {
    double target_tolerance = 1e-12;
    int max_radius = 60;

    void validate() const
    {
        if (!(target_tolerance > 0.0)) throw invalid_spec("truncation_policy: target_tolerance must be > 0");
        if (max_radius < 1) throw invalid_spec("truncation_policy: max_radius must be >= 1");
    }
};

} // namespace szego

#endif
