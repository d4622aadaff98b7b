#pragma once

// Probabilist's Hermite polynomials, the rescaled family P_d = h_d / d!, and
// absolute Gaussian moments E|p(Z)| for Z ~ N(0,1).
//
// Numerical evaluation always goes through the orthonormal recurrence
// hn_{k+1}(t) = (t hn_k(t) - sqrt(k) hn_{k-1}(t)) / sqrt(k+1), hn_k = h_k / sqrt(k!),
// which stays well scaled where the monomial form cancels catastrophically.

#include "cube/error.hpp"
#include "cube/polynomial.hpp"
#include "cube/rational.hpp"

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace cube {

inline constexpr int kMaxExactHermiteDegree = 200;
inline constexpr int kMaxNumericHermiteDegree = 60;

/// h_d with h_0 = 1, h_1 = t, h_{n+1} = t h_n - n h_{n-1}.
inline RationalPolynomial hermite_poly(int d) {
    detail::require_guard(d >= 0 && d <= kMaxExactHermiteDegree, "hermite_poly: need 0 <= d <= 200");
    RationalPolynomial prev = RationalPolynomial::constant(1);
    if (d == 0) return prev;
    RationalPolynomial cur = RationalPolynomial::monomial(1);
    for (int n = 1; n < d; ++n) {
        RationalPolynomial next = cur.shifted() - prev * Rational(n);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

/// P_0, ..., P_d from P_d = t^d/d! - sum_{k=1}^{floor(d/2)} P_{d-2k} / (k! 2^k).
inline std::vector<RationalPolynomial> p_polys_up_to(int d) {
    detail::require_guard(d >= 0 && d <= kMaxExactHermiteDegree, "p_poly: need 0 <= d <= 200");
    std::vector<RationalPolynomial> p;
    p.reserve(static_cast<std::size_t>(d) + 1);
    p.push_back(RationalPolynomial::constant(1));
    if (d >= 1) p.push_back(RationalPolynomial::monomial(1));
    for (int n = 2; n <= d; ++n) {
        RationalPolynomial cur = RationalPolynomial::monomial(static_cast<std::size_t>(n), Rational(BigInt(1), factorial(n)));
        for (int k = 1; 2 * k <= n; ++k) {
            cur -= p[static_cast<std::size_t>(n - 2 * k)] / Rational(factorial(k) * pow2(static_cast<unsigned>(k)));
        }
        p.push_back(std::move(cur));
    }
    return p;
}

inline RationalPolynomial p_poly(int d) { return p_polys_up_to(d).back(); }

/// Coefficients b with p = sum_k b_k h_k, from
/// t^n = sum_k n! / (k! 2^k (n-2k)!) h_{n-2k}.
inline std::vector<Rational> hermite_expansion(const RationalPolynomial& p) {
    std::vector<Rational> b(p.coeffs().size(), Rational(0));
    for (std::size_t n = 0; n < p.coeffs().size(); ++n) {
        const Rational& a = p.coeffs()[n];
        if (a == 0) continue;
        const BigInt nf = factorial(static_cast<unsigned>(n));
        for (std::size_t k = 0; 2 * k <= n; ++k) {
            const BigInt den = factorial(static_cast<unsigned>(k)) * pow2(static_cast<unsigned>(k)) *
                               factorial(static_cast<unsigned>(n - 2 * k));
            b[n - 2 * k] += a * Rational(nf, den);
        }
    }
    return b;
}

namespace detail {

/// hn_d(t) by the orthonormal recurrence.
inline double orthonormal_hermite(int d, double t) {
    if (d == 0) return 1.0;
    double prev = 1.0;
    double cur = t;
    for (int k = 1; k < d; ++k) {
        const double next = (t * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

/// sum_k c[k] hn_k(t) with a single forward sweep.
inline double orthonormal_series(const std::vector<double>& c, double t) {
    if (c.empty()) return 0.0;
    double prev = 1.0;
    double cur = t;
    double acc = c[0];
    if (c.size() > 1) acc += c[1] * t;
    for (std::size_t k = 1; k + 1 < c.size(); ++k) {
        const double next = (t * cur - std::sqrt(static_cast<double>(k)) * prev) / std::sqrt(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
        acc += c[k + 1] * cur;
    }
    return acc;
}

inline double orthonormal_series_derivative(const std::vector<double>& c, double t) {
    // hn_k' = sqrt(k) hn_{k-1}
    std::vector<double> dc(c.size() > 1 ? c.size() - 1 : 0);
    for (std::size_t k = 1; k < c.size(); ++k) dc[k - 1] = c[k] * std::sqrt(static_cast<double>(k));
    return orthonormal_series(dc, t);
}

inline int sign_of(double v) { return (v > 0) - (v < 0); }

/// Root of f in (lo, hi) given opposite signs at the ends.
template <class F>
double bisect(F&& f, double lo, double hi) {
    int slo = sign_of(f(lo));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const int sm = sign_of(f(mid));
        if (sm == 0) return mid;
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

/// Real roots of h_d in increasing order. Roots of h_{n-1} bracket those of
/// h_n, so each level is found by bisection inside the previous level's gaps.
inline std::vector<double> hermite_roots(int d) {
    detail::require_guard(d >= 1 && d <= kMaxNumericHermiteDegree, "hermite_roots: need 1 <= d <= 60");
    std::vector<double> roots{0.0};
    for (int n = 2; n <= d; ++n) {
        const double bound = std::sqrt(4.0 * n + 2.0) + 1.0;
        std::vector<double> edges;
        edges.reserve(roots.size() + 2);
        edges.push_back(-bound);
        edges.insert(edges.end(), roots.begin(), roots.end());
        edges.push_back(bound);
        std::vector<double> next;
        next.reserve(static_cast<std::size_t>(n));
        auto f = [n](double t) { return detail::orthonormal_hermite(n, t); };
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) next.push_back(detail::bisect(f, edges[i], edges[i + 1]));
        roots = std::move(next);
    }
    return roots;
}

namespace detail {

/// E|q(Z)| for q = sum c_k hn_k, with q's real roots and its monomial
/// coefficients (used only for the Gaussian tails beyond +-cutoff).
inline double abs_gaussian_moment_impl(const std::vector<double>& ortho, const std::vector<double>& roots,
                                       const std::vector<double>& monomial, double tol) {
    using boost::math::constants::one_div_root_two_pi;
    const double max_root = roots.empty() ? 0.0 : std::max(std::abs(roots.front()), std::abs(roots.back()));
    const double cutoff = std::max(12.0, max_root + 8.0);

    std::vector<double> edges{-cutoff};
    for (double r : roots) {
        if (r > edges.back() && r < cutoff) edges.push_back(r);
    }
    edges.push_back(cutoff);

    auto integrand = [&](double t) {
        return std::abs(orthonormal_series(ortho, t)) * std::exp(-0.5 * t * t) * one_div_root_two_pi<double>();
    };
    // Neumaier summation in fixed interval order.
    double sum = 0.0;
    double comp = 0.0;
    auto add = [&](double v) {
        const double t = sum + v;
        comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    };
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        double err = 0.0;
        add(boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, edges[i], edges[i + 1], 20, tol,
                                                                         &err));
    }

    // Upper incomplete moments M_k = int_T^inf t^k phi(t) dt.
    const double phi = std::exp(-0.5 * cutoff * cutoff) * one_div_root_two_pi<double>();
    std::vector<double> m(monomial.size() + 1, 0.0);
    m[0] = 0.5 * std::erfc(cutoff / std::sqrt(2.0));
    if (m.size() > 1) m[1] = phi;
    for (std::size_t k = 2; k < m.size(); ++k) m[k] = std::pow(cutoff, static_cast<double>(k - 1)) * phi + (k - 1) * m[k - 2];
    double right = 0.0;
    double left = 0.0;
    for (std::size_t k = 0; k < monomial.size(); ++k) {
        right += monomial[k] * m[k];
        left += (k % 2 ? -monomial[k] : monomial[k]) * m[k];
    }
    add(std::abs(right));
    add(std::abs(left));
    return sum + comp;
}

/// b * sqrt(k!) as a double, via logs to survive tiny b and huge k!.
inline double scaled_coefficient(const Rational& b, int k) {
    if (b == 0) return 0.0;
    const double mag = std::exp(log_abs(b) + 0.5 * std::lgamma(k + 1.0));
    return b < 0 ? -mag : mag;
}

inline std::vector<double> real_roots(const RationalPolynomial& p, const std::vector<double>& ortho) {
    const int deg = p.degree();
    std::vector<double> out;
    if (deg < 1) return out;
    std::vector<double> a(p.coeffs().size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = to_double(p.coeffs()[i]);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -a[static_cast<std::size_t>(i)] / a.back();
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (int i = 0; i < deg; ++i) {
        const auto z = es.eigenvalues()[i];
        if (std::abs(z.imag()) > 1e-7 * (1.0 + std::abs(z.real()))) continue;
        double t = z.real();
        for (int it = 0; it < 8; ++it) {
            const double dv = orthonormal_series_derivative(ortho, t);
            if (dv == 0.0) break;
            const double step = orthonormal_series(ortho, t) / dv;
            t -= step;
            if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
        }
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) < 1e-12; }),
              out.end());
    return out;
}

}  // namespace detail

/// E|p(Z)|, Z standard normal. The integrand is split at the real roots of p
/// (where |p| has kinks), each smooth piece is integrated adaptively, and the
/// Gaussian tails beyond max(12, max|root| + 8) use closed-form moments.
inline double abs_gaussian_moment(const RationalPolynomial& p, double tol = 1e-11) {
    detail::require_domain(tol >= 1e-13, "abs_gaussian_moment: tol must be >= 1e-13");
    if (p.is_zero()) return 0.0;
    const auto b = hermite_expansion(p);
    std::vector<double> ortho(b.size());
    int nonzero = 0;
    int single = 0;
    for (std::size_t k = 0; k < b.size(); ++k) {
        ortho[k] = detail::scaled_coefficient(b[k], static_cast<int>(k));
        if (b[k] != 0) {
            ++nonzero;
            single = static_cast<int>(k);
        }
    }
    std::vector<double> roots;
    if (nonzero == 1 && single >= 1 && single <= kMaxNumericHermiteDegree) {
        roots = hermite_roots(single);
    } else {
        roots = detail::real_roots(p, ortho);
    }
    std::vector<double> mono(p.coeffs().size());
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = to_double(p.coeffs()[i]);
    return detail::abs_gaussian_moment_impl(ortho, roots, mono, tol);
}

/// lim_N lambda(B_{=d}^N) / N^{d/2} = E|P_d(Z)|.
inline double limit_constant(int d) {
    detail::require_guard(d >= 1 && d <= kMaxNumericHermiteDegree, "limit_constant: need 1 <= d <= 60");
    return abs_gaussian_moment(p_poly(d), 1e-11);
}

/// E|h_d(Z)| / sqrt(d!), evaluated directly in the orthonormal basis.
inline double limit_constant_normalized(int d) {
    detail::require_guard(d >= 1 && d <= kMaxNumericHermiteDegree, "limit_constant: need 1 <= d <= 60");
    std::vector<double> ortho(static_cast<std::size_t>(d) + 1, 0.0);
    ortho.back() = 1.0;
    const auto h = hermite_poly(d);
    const double scale = std::exp(-0.5 * std::lgamma(d + 1.0));
    std::vector<double> mono(h.coeffs().size());
    for (std::size_t i = 0; i < mono.size(); ++i) mono[i] = to_double(h.coeffs()[i]) * scale;
    return detail::abs_gaussian_moment_impl(ortho, hermite_roots(d), mono, 1e-11);
}

/// Normalized limit constant divided by its asymptotic form 2^{7/4} pi^{-5/4} d^{-1/4}.
inline double larsson_cohn_ratio(int d) {
    detail::require_guard(d >= 1 && d <= kMaxNumericHermiteDegree, "larsson_cohn_ratio: need 1 <= d <= 60");
    using boost::math::constants::pi;
    return limit_constant_normalized(d) * std::pow(static_cast<double>(d), 0.25) * std::pow(pi<double>(), 1.25) /
           std::pow(2.0, 1.75);
}

}  // namespace cube
