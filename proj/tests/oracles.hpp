#pragma once

// Slow independent reference computations used by the unit and acceptance
// tests. Nothing here shares code paths with the kernels it checks.

#include "cube/core.hpp"
#include "cube/rational.hpp"

#include <Eigen/Dense>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace cube::oracle {

/// E|sum_S chi_S| by evaluating every character at every point.
inline Rational brute_lambda(const SupportFamily& family) {
    const int n = family.dimension();
    BigInt total = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        long long v = 0;
        for (const auto& s : family.sets()) v += std::popcount(s.bits() & x) % 2 == 0 ? 1 : -1;
        total += v < 0 ? -v : v;
    }
    return Rational(total, pow2(static_cast<unsigned>(n)));
}

/// Every subset of [n], the empty set included.
inline SupportFamily all_subsets(int n) {
    std::vector<SubsetMask> sets;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) sets.emplace_back(s, n);
    return {n, std::move(sets)};
}

inline SupportFamily singletons(int n) {
    std::vector<SubsetMask> sets;
    for (int i = 0; i < n; ++i) sets.emplace_back(std::uint64_t{1} << i, n);
    return {n, std::move(sets)};
}

/// max sum|a_S| over {a : |sum_S a_S chi_S(x)| <= 1 for all x}, by listing
/// every vertex of the polytope: pick k independent constraint rows, pick a
/// sign for each right hand side, solve, keep the feasible solutions.
inline double sidon_vertices(const SupportFamily& family) {
    const int n = family.dimension();
    const int k = static_cast<int>(family.size());
    std::vector<Eigen::VectorXd> rows;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        Eigen::VectorXd r(k);
        for (int j = 0; j < k; ++j) r(j) = std::popcount(family.sets()[static_cast<std::size_t>(j)].bits() & x) % 2 == 0 ? 1.0 : -1.0;
        bool seen = false;
        for (const auto& q : rows) seen = seen || (q - r).cwiseAbs().maxCoeff() == 0.0 || (q + r).cwiseAbs().maxCoeff() == 0.0;
        if (!seen) rows.push_back(r);
    }
    const int m = static_cast<int>(rows.size());
    double best = 0.0;
    std::vector<int> pick(static_cast<std::size_t>(k));
    auto visit = [&]() {
        Eigen::MatrixXd a(k, k);
        for (int i = 0; i < k; ++i) a.row(i) = rows[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])].transpose();
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (lu.rank() < k) return;
        // the polytope is symmetric, so the first sign can stay +1
        for (std::uint64_t signs = 0; signs < (std::uint64_t{1} << (k - 1)); ++signs) {
            Eigen::VectorXd b(k);
            b(0) = 1.0;
            for (int i = 1; i < k; ++i) b(i) = (signs >> (i - 1)) & 1U ? -1.0 : 1.0;
            const Eigen::VectorXd sol = lu.solve(b);
            bool ok = true;
            for (const auto& r : rows) ok = ok && std::abs(r.dot(sol)) <= 1.0 + 1e-9;
            if (ok) best = std::max(best, sol.cwiseAbs().sum());
        }
    };
    auto rec = [&](auto&& self, int depth, int start) -> void {
        if (depth == k) {
            visit();
            return;
        }
        for (int i = start; i < m; ++i) {
            pick[static_cast<std::size_t>(depth)] = i;
            self(self, depth + 1, i + 1);
        }
    };
    rec(rec, 0, 0);
    return best;
}

/// Every family of 1..max_size distinct subsets of [n].
template <class Visit>
void for_each_small_family(int n, int max_size, Visit&& visit) {
    const int total = 1 << n;
    std::vector<int> pick;
    auto rec = [&](auto&& self, int start) -> void {
        if (!pick.empty()) {
            std::vector<SubsetMask> sets;
            for (int s : pick) sets.emplace_back(static_cast<std::uint64_t>(s), n);
            visit(SupportFamily(n, std::move(sets)));
        }
        if (static_cast<int>(pick.size()) == max_size) return;
        for (int s = start; s < total; ++s) {
            pick.push_back(s);
            self(self, s + 1);
            pick.pop_back();
        }
    };
    rec(rec, 0);
}

struct GaussianMoment {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Sample mean of |h_d(Z)| / sqrt(d!) with h_d from the three-term
/// recurrence, Z drawn by the standard library.
inline GaussianMoment gaussian_abs_hermite(int d, std::uint64_t samples, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    const double scale = std::exp(-0.5 * std::lgamma(d + 1.0));
    double sum = 0.0;
    double sq = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        const double z = normal(gen);
        double prev = 1.0;
        double cur = z;
        for (int j = 1; j < d; ++j) {
            const double next = z * cur - j * prev;
            prev = cur;
            cur = next;
        }
        const double v = std::abs(d == 0 ? 1.0 : cur) * scale;
        sum += v;
        sq += v * v;
    }
    const double mean = sum / static_cast<double>(samples);
    const double var = sq / static_cast<double>(samples) - mean * mean;
    return {mean, std::sqrt(std::max(0.0, var) / static_cast<double>(samples))};
}

}  // namespace cube::oracle
