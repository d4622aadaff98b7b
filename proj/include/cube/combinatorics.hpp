#pragma once

// Multi-indices, the coefficients C_{d,k,N} that rewrite the tetrahedral
// power sum, and the Hermite expansion of the normalized level sum.

#include "cube/error.hpp"
#include "cube/rational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace cube {

struct MultiIndex {
    std::vector<int> entries;

    int order() const { return std::accumulate(entries.begin(), entries.end(), 0); }
    bool tetrahedral() const {
        return std::all_of(entries.begin(), entries.end(), [](int a) { return a == 0 || a == 1; });
    }
    bool even() const {
        return std::all_of(entries.begin(), entries.end(), [](int a) { return a % 2 == 0; });
    }
};

/// |[alpha]| = |alpha|! / alpha!.
inline BigInt class_size(const MultiIndex& alpha) {
    BigInt den = 1;
    for (int a : alpha.entries) {
        detail::require_domain(a >= 0, "class_size: negative entry");
        den *= factorial(static_cast<unsigned>(a));
    }
    return factorial(static_cast<unsigned>(alpha.order())) / den;
}

inline constexpr int kMaxCoefficientDegree = 10;
inline constexpr int kMaxCoefficientDimension = 50;

namespace detail {

inline void check_c_args(int d, int k, int n) {
    require_domain(d >= 1 && k >= 1 && 2 * k <= d && d <= n, "c_coefficient: need 1 <= k <= d/2 and d <= N");
}

/// sum over beta in Lambda(k, N) of d! / (alpha_T + 2 beta)!, with alpha_T
/// given by its 0/1 pattern `tet`.
inline std::uint64_t c_enumerate(int d, int k, const std::vector<int>& tet) {
    std::vector<std::uint64_t> fact(static_cast<std::size_t>(d) + 1, 1);
    for (int i = 1; i <= d; ++i) fact[static_cast<std::size_t>(i)] = fact[static_cast<std::size_t>(i) - 1] * static_cast<std::uint64_t>(i);
    const std::uint64_t df = fact.back();
    const int n = static_cast<int>(tet.size());
    std::uint64_t total = 0;
    // den accumulates prod (tet_i + 2 beta_i)! over coordinates already fixed,
    // untouched tetrahedral coordinates still contribute 1! = 1.
    auto rec = [&](auto&& self, int i, int left, std::uint64_t den) -> void {
        if (left == 0) {
            total += df / den;
            return;
        }
        if (i == n) return;
        for (int b = 0; b <= left; ++b) {
            const int a = tet[static_cast<std::size_t>(i)] + 2 * b;
            self(self, i + 1, left - b, den * fact[static_cast<std::size_t>(a)]);
        }
    };
    rec(rec, 0, k, 1);
    return total;
}

}  // namespace detail

/// C_{d,k,N} = sum over even alpha_E of order 2k of |[alpha_T + alpha_E]|, for
/// a tetrahedral alpha_T of order d-2k. Enumerated with alpha_T on the first
/// d-2k coordinates, then re-enumerated with alpha_T on every other coordinate
/// from the end; a mismatch raises NumericError.
inline BigInt c_coefficient(int d, int k, int n) {
    detail::check_c_args(d, k, n);
    detail::require_guard(d <= kMaxCoefficientDegree && n <= kMaxCoefficientDimension,
                          "c_coefficient: need d <= 10 and N <= 50");
    const int t = d - 2 * k;
    std::vector<int> first(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < t; ++i) first[static_cast<std::size_t>(i)] = 1;
    std::vector<int> spread(static_cast<std::size_t>(n), 0);
    int placed = 0;
    for (int pos = n - 1; pos >= 0 && placed < t; pos -= 2, ++placed) spread[static_cast<std::size_t>(pos)] = 1;
    for (int pos = n - 1; pos >= 0 && placed < t; --pos) {
        if (!spread[static_cast<std::size_t>(pos)]) {
            spread[static_cast<std::size_t>(pos)] = 1;
            ++placed;
        }
    }
    const auto a = detail::c_enumerate(d, k, first);
    const auto b = detail::c_enumerate(d, k, spread);
    if (a != b) throw NumericError("c_coefficient: value depends on the representative");
    return BigInt(a);
}

/// Same quantity from d! [z^k] A(z)^{d-2k} B(z)^{N-d+2k} with
/// A = sum z^j/(2j+1)!, B = sum z^j/(2j)!. Usable for large N.
inline BigInt c_coefficient_series(int d, int k, int n) {
    detail::check_c_args(d, k, n);
    detail::require_guard(d <= 60 && n <= 100000, "c_coefficient_series: need d <= 60 and N <= 100000");
    const auto len = static_cast<std::size_t>(k) + 1;
    std::vector<Rational> a(len), b(len);
    for (std::size_t j = 0; j < len; ++j) {
        a[j] = Rational(BigInt(1), factorial(static_cast<unsigned>(2 * j + 1)));
        b[j] = Rational(BigInt(1), factorial(static_cast<unsigned>(2 * j)));
    }
    auto mul = [len](const std::vector<Rational>& x, const std::vector<Rational>& y) {
        std::vector<Rational> z(len, Rational(0));
        for (std::size_t i = 0; i < len; ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; i + j < len; ++j) z[i + j] += x[i] * y[j];
        }
        return z;
    };
    auto power = [&](std::vector<Rational> base, int e) {
        std::vector<Rational> acc(len, Rational(0));
        acc[0] = 1;
        while (e > 0) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    };
    const auto prod = mul(power(a, d - 2 * k), power(b, n - d + 2 * k));
    const Rational v = prod[static_cast<std::size_t>(k)] * Rational(factorial(static_cast<unsigned>(d)));
    if (denominator(v) != 1) throw NumericError("c_coefficient_series: non-integral result");
    return numerator(v);
}

/// sum_{|S|=d} x^S at any point with m coordinates equal to +1.
inline BigInt level_sum_at(int n, int d, int m) {
    detail::require_domain(n >= 0 && d >= 0 && d <= n && m >= 0 && m <= n, "level_sum_at: need 0 <= d, m <= N");
    BigInt acc = 0;
    for (int j = std::max(0, d - (n - m)); j <= std::min(d, m); ++j) {
        BigInt term = binomial(m, j) * binomial(n - m, d - j);
        if ((d - j) % 2) {
            acc -= term;
        } else {
            acc += term;
        }
    }
    return acc;
}

struct PowerIdentityReport {
    int d = 0;
    int n = 0;
    std::uint64_t points = 0;
    BigInt max_discrepancy = 0;
    bool pass = false;
};

/// Checks d! e_d(x) = (sum x)^d - sum_k C_{d,k,N} e_{d-2k}(x) at every cube point.
inline PowerIdentityReport verify_power_identity(int d, int n) {
    detail::require_domain(d >= 1 && d <= n, "verify_power_identity: need 1 <= d <= N");
    detail::require_guard(d <= 6 && n <= 14, "verify_power_identity: need d <= 6 and N <= 14");
    std::vector<std::int64_t> c(static_cast<std::size_t>(d / 2) + 1, 0);
    for (int k = 1; 2 * k <= d; ++k) c[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(c_coefficient(d, k, n));
    std::int64_t dfact = 1;
    for (int i = 2; i <= d; ++i) dfact *= i;

    PowerIdentityReport rep{d, n, 0, 0, true};
    std::int64_t worst = 0;
    std::vector<std::int64_t> e(static_cast<std::size_t>(d) + 1);
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t x = 0; x < count; ++x) {
        std::fill(e.begin(), e.end(), 0);
        e[0] = 1;
        std::int64_t sum = 0;
        for (int i = 0; i < n; ++i) {
            const std::int64_t xi = ((x >> i) & 1U) ? -1 : 1;
            sum += xi;
            for (int j = d; j >= 1; --j) e[static_cast<std::size_t>(j)] += xi * e[static_cast<std::size_t>(j) - 1];
        }
        std::int64_t rhs = 1;
        for (int i = 0; i < d; ++i) rhs *= sum;
        for (int k = 1; 2 * k <= d; ++k) rhs -= c[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(d - 2 * k)];
        const std::int64_t gap = std::abs(dfact * e[static_cast<std::size_t>(d)] - rhs);
        worst = std::max(worst, gap);
        ++rep.points;
    }
    rep.max_discrepancy = worst;
    rep.pass = worst == 0;
    return rep;
}

struct BecknerFit {
    int d = 0;
    int n = 0;
    std::vector<double> a;  // a[k-1] = a_{d,k,N}
    std::vector<double> hermite_coeffs;  // coefficient of h_{d-2k}, k = 0..d/2
    double residual = 0.0;
};

inline constexpr double kBecknerResidualLimit = 1e-8;

/// Fits N^{-d/2} sum_{|S|=d} x^S = sum_k c_k h_{d-2k}(s), s = (2m-N)/sqrt(N),
/// over the N+1 attainable s. a_{d,k,N} = c_k d! N. The residual is measured
/// relative to max(1, max |target|).
inline BecknerFit beckner_coefficients(int d, int n) {
    detail::require_guard(d >= 2 && d <= 10 && n >= d && n <= 200, "beckner_coefficients: need 2 <= d <= 10, d <= N <= 200");
    const int cols = d / 2 + 1;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double scale = std::pow(static_cast<double>(n), -0.5 * d);
    Eigen::MatrixXd basis(n + 1, cols);
    Eigen::VectorXd target(n + 1);
    for (int m = 0; m <= n; ++m) {
        const double s = (2.0 * m - n) / sqrt_n;
        // h_j(s) up to j = d
        std::vector<double> h(static_cast<std::size_t>(d) + 1);
        h[0] = 1.0;
        h[1] = s;
        for (int j = 1; j < d; ++j) h[static_cast<std::size_t>(j) + 1] = s * h[static_cast<std::size_t>(j)] - j * h[static_cast<std::size_t>(j) - 1];
        for (int k = 0; k < cols; ++k) basis(m, k) = h[static_cast<std::size_t>(d - 2 * k)];
        target(m) = to_double(Rational(level_sum_at(n, d, m))) * scale;
    }
    const Eigen::VectorXd c = basis.colPivHouseholderQr().solve(target);
    const double ref = std::max(1.0, target.cwiseAbs().maxCoeff());
    const double residual = (basis * c - target).cwiseAbs().maxCoeff() / ref;
    if (!(residual < kBecknerResidualLimit)) throw NumericError("beckner_coefficients: fit residual too large");

    BecknerFit fit{d, n, {}, {}, residual};
    const double dfact = std::tgamma(d + 1.0);
    for (int k = 0; k < cols; ++k) {
        fit.hermite_coeffs.push_back(c(k));
        if (k > 0) fit.a.push_back(c(k) * dfact * n);
    }
    return fit;
}

}  // namespace cube
