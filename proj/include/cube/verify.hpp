#pragma once

// Numeric checks of the range, hypercontractive, McKay, Desigforo and Klimek
// bounds. Every check returns a BoundsReport with pass <=> lhs <= rhs.

#include "cube/core.hpp"
#include "cube/error.hpp"
#include "cube/projection.hpp"
#include "cube/rational.hpp"
#include "cube/rng.hpp"
#include "cube/walsh.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cube {

inline constexpr double kRelativeSlack = 1e-12;
inline constexpr double kEskenazisIvanisvili = 2.69076;

struct BoundsReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    std::optional<std::string> lhs_exact;
    std::optional<std::string> rhs_exact;
    bool pass = false;
    std::map<std::string, std::string> context;
};

namespace detail {

inline bool float_leq(double lhs, double rhs) { return lhs <= rhs + kRelativeSlack * std::abs(rhs); }

inline BoundsReport float_report(std::string name, double lhs, double rhs, std::map<std::string, std::string> ctx) {
    BoundsReport r{std::move(name), lhs, rhs, std::nullopt, std::nullopt, float_leq(lhs, rhs), std::move(ctx)};
    return r;
}

inline std::string mode_name(LevelMode mode) { return mode == LevelMode::exact_degree ? "homogeneous" : "upto"; }

}  // namespace detail

/// Kadets-Snobar range, the hypercontractive lower bound and the (N/d)^{d/2}
/// sandwich for lambda(B_{=d}^N) or lambda(B_{<=d}^N).
inline std::vector<BoundsReport> check_range_bounds(int n, int d, LevelMode mode) {
    const Rational lambda = lambda_level_exact(n, d, mode);
    BigInt size = 0;
    if (mode == LevelMode::exact_degree) {
        size = binomial(n, d);
    } else {
        for (int k = 0; k <= d; ++k) size += binomial(n, k);
    }
    const std::map<std::string, std::string> ctx{
        {"N", std::to_string(n)}, {"d", std::to_string(d)}, {"mode", detail::mode_name(mode)}};
    const double lam = to_double(lambda);
    const double root = std::sqrt(to_double(Rational(size)));
    const double hyper = mode == LevelMode::exact_degree ? std::exp(0.5 * d) : std::pow(kEskenazisIvanisvili, d);
    const double ratio_pow = std::pow(static_cast<double>(n) / d, 0.5 * d);

    std::vector<BoundsReport> out;
    // exact: 1 <= lambda and lambda^2 <= |S|
    out.push_back({"kadets_snobar_lower", 1.0, lam, "1", lambda.str(), lambda >= 1, ctx});
    out.push_back({"kadets_snobar_upper", lam, root, lambda.str(), "sqrt(" + size.str() + ")", lambda * lambda <= Rational(size), ctx});
    out.push_back(detail::float_report("hypercontractive_lower", root / hyper, lam, ctx));
    out.push_back(detail::float_report("dimension_sandwich_lower", ratio_pow / hyper, lam, ctx));
    out.push_back(detail::float_report("dimension_sandwich_upper", lam, std::exp(0.5 * d) * ratio_pow, ctx));
    return out;
}

/// Y(x) = e^{x^2/2} int_x^inf e^{-t^2/2} dt.
inline double y_function(double x) {
    detail::require_domain(x >= 0 && std::isfinite(x), "y_function: need finite x >= 0");
    using boost::math::constants::half_pi;
    if (x < 5.0) return std::sqrt(half_pi<double>()) * std::exp(0.5 * x * x) * std::erfc(x / std::sqrt(2.0));
    // Mills ratio continued fraction 1/(x+1/(x+2/(x+3/(x+...))))
    double tail = x;
    for (int k = 200; k >= 1; --k) tail = x + k / tail;
    return 1.0 / tail;
}

inline std::vector<BoundsReport> check_szarek(double x) {
    const double y = y_function(x);
    const std::map<std::string, std::string> ctx{{"x", std::to_string(x)}};
    return {detail::float_report("szarek_lower", 2.0 / (x + std::sqrt(x * x + 4.0)), y, ctx),
            detail::float_report("szarek_upper", y, 4.0 / (3.0 * x + std::sqrt(x * x + 8.0)), ctx)};
}

inline constexpr int kMaxMcKayDimension = 4001;

namespace detail {

inline BoundsReport mckay_from_row(int n, int alpha, const std::vector<BigInt>& prefix) {
    require_domain(alpha >= 0 && alpha < n, "mckay: need 0 <= alpha < N");
    require_domain((n - alpha) % 2 == 1, "mckay: N - alpha must be odd");
    const int k = (n - alpha - 1) / 2;
    const BigInt& lhs = prefix[static_cast<std::size_t>(k)];
    const BigInt mid = binomial(n - 1, k);
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double ratio = to_double(Rational(lhs, mid));
    const double c = sqrt_n * std::log(ratio / (sqrt_n * y_function((alpha + 1) / sqrt_n)));
    const double cap = std::sqrt(boost::math::constants::half_pi<double>());
    BoundsReport r;
    r.name = "mckay_constant";
    r.lhs = c;
    r.rhs = cap;
    r.pass = c >= 0.0 && float_leq(c, cap);
    r.context = {{"N", std::to_string(n)}, {"alpha", std::to_string(alpha)}};
    return r;
}

/// Partial sums sum_{j<=k} C(n, j) for k = 0..n.
inline std::vector<BigInt> binomial_prefix(int n) {
    auto row = binomial_row(n);
    for (std::size_t i = 1; i < row.size(); ++i) row[i] += row[i - 1];
    return row;
}

}  // namespace detail

/// c_{alpha,N} from McKay's formula; pass <=> 0 <= c <= sqrt(pi/2).
inline BoundsReport mckay_constant(int n, int alpha) {
    detail::require_guard(n >= 1 && n <= kMaxMcKayDimension, "mckay: need 1 <= N <= 4001");
    detail::require_domain(alpha >= 0 && alpha < n, "mckay: need 0 <= alpha < N");
    detail::require_domain((n - alpha) % 2 == 1, "mckay: N - alpha must be odd");
    return detail::mckay_from_row(n, alpha, detail::binomial_prefix(n));
}

/// All admissible (N, alpha) with N <= max_n and alpha in `alphas`.
inline std::vector<BoundsReport> mckay_sweep(int max_n, const std::vector<int>& alphas) {
    detail::require_guard(max_n <= kMaxMcKayDimension, "mckay: need N <= 4001");
    std::vector<BoundsReport> out;
    for (int n = 1; n <= max_n; ++n) {
        std::vector<int> todo;
        for (int a : alphas) {
            if (a >= 0 && a < n && (n - a) % 2 == 1) todo.push_back(a);
        }
        if (todo.empty()) continue;
        const auto prefix = detail::binomial_prefix(n);
        for (int a : todo) out.push_back(detail::mckay_from_row(n, a, prefix));
    }
    return out;
}

/// sum_{k<=d} C(N,k) <= C(N,d) (N-d+1)/(N-2d+1), compared exactly.
inline BoundsReport check_desigforo(int n, int d) {
    detail::require_domain(d >= 0 && 2 * d - 1 < n, "desigforo: need 2d - 1 < N");
    BigInt lhs = 0;
    for (int k = 0; k <= d; ++k) lhs += binomial(n, k);
    const Rational rhs = Rational(binomial(n, d) * (n - d + 1), BigInt(n - 2 * d + 1));
    BoundsReport r;
    r.name = "desigforo";
    r.lhs = to_double(Rational(lhs));
    r.rhs = to_double(rhs);
    r.lhs_exact = lhs.str();
    r.rhs_exact = rhs.str();
    r.pass = Rational(lhs) <= rhs;
    r.context = {{"N", std::to_string(n)}, {"d", std::to_string(d)}};
    return r;
}

inline constexpr int kMaxKlimekDimension = 14;

/// max over trials and k <= d of ||f_k||_inf / ||f||_inf for random f of
/// degree <= d, against (1 + sqrt 2)^d.
inline BoundsReport check_klimek(int n, int d, int trials, std::uint64_t seed) {
    detail::require_guard(n >= 1 && n <= kMaxKlimekDimension, "klimek: need 1 <= N <= 14");
    detail::require_domain(d >= 0 && d <= n && trials >= 1, "klimek: need 0 <= d <= N and trials >= 1");
    const std::size_t len = std::size_t{1} << n;
    std::vector<std::uint64_t> members;
    for (std::uint64_t s = 0; s < len; ++s) {
        if (std::popcount(s) <= d) members.push_back(s);
    }
    double worst = 0.0;
    std::vector<double> coeffs(len), values(len), part(len);
    for (int t = 0; t < trials; ++t) {
        const CounterRng rng(seed, static_cast<std::uint64_t>(t));
        std::fill(coeffs.begin(), coeffs.end(), 0.0);
        for (std::size_t i = 0; i < members.size(); ++i) coeffs[members[i]] = rng.symmetric(i);
        values = coeffs;
        hadamard_butterfly<double>(values);
        double sup = 0.0;
        for (double v : values) sup = std::max(sup, std::abs(v));
        if (sup == 0.0) continue;
        for (int k = 0; k <= d; ++k) {
            for (std::uint64_t s = 0; s < len; ++s) part[s] = std::popcount(s) == k ? coeffs[s] : 0.0;
            hadamard_butterfly<double>(part);
            double sk = 0.0;
            for (double v : part) sk = std::max(sk, std::abs(v));
            worst = std::max(worst, sk / sup);
        }
    }
    return detail::float_report("klimek", worst, std::pow(1.0 + std::sqrt(2.0), d),
                                {{"N", std::to_string(n)},
                                 {"d", std::to_string(d)},
                                 {"trials", std::to_string(trials)},
                                 {"seed", std::to_string(seed)}});
}

/// lambda(B_{=d}^N) <= (1 + sqrt 2)^d lambda(B_{<=d}^N).
inline BoundsReport check_homog_vs_upto(int n, int d) {
    const Rational homog = lambda_level_exact(n, d, LevelMode::exact_degree);
    const Rational upto = lambda_level_exact(n, d, LevelMode::up_to_degree);
    BoundsReport r = detail::float_report("homog_vs_upto", to_double(homog),
                                          std::pow(1.0 + std::sqrt(2.0), d) * to_double(upto),
                                          {{"N", std::to_string(n)}, {"d", std::to_string(d)}});
    r.lhs_exact = homog.str();
    r.rhs_exact = "(1+sqrt(2))^" + std::to_string(d) + " * " + upto.str();
    return r;
}

}  // namespace cube
