#pragma once

// Projection constants lambda(B_S^N) = E|sum_{S in family} chi_S|.
//
// Exact route: the integrand is an integer at every cube point, so sums are
// accumulated in integers and divided by 2^N once. Two enumeration kernels
// are provided (Gray-code walk with per-coordinate buckets, and a dense
// Hadamard butterfly); both are exact and agree bit for bit.

#include "cube/core.hpp"
#include "cube/gray.hpp"
#include "cube/parallel.hpp"
#include "cube/rational.hpp"
#include "cube/rng.hpp"
#include "cube/walsh.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace cube {

enum class ExactKernel { automatic, gray, transform };

struct ExactOptions {
    Parallelism parallelism{};
    int max_dimension = kMaxEnumerationDimension;
    ExactKernel kernel = ExactKernel::automatic;
};

struct McEstimate {
    double mean = 0;
    double std_error = 0;
    double ci95_lo = 0;
    double ci95_hi = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

/// Family members re-expressed on the active coordinates only; unused
/// coordinates do not change the integrand.
struct CompressedFamily {
    int n = 0;
    std::vector<std::uint64_t> masks;
};

inline CompressedFamily compress(const SupportFamily& family) {
    const std::uint64_t active = family.active_coordinates();
    std::vector<int> slot(64, -1);
    int n = 0;
    for (std::uint64_t r = active; r != 0; r &= r - 1) slot[std::countr_zero(r)] = n++;
    CompressedFamily out;
    out.n = n;
    out.masks.reserve(family.size());
    for (const auto& s : family.sets()) {
        std::uint64_t b = 0;
        for (std::uint64_t r = s.bits(); r != 0; r &= r - 1) b |= std::uint64_t{1} << slot[std::countr_zero(r)];
        out.masks.push_back(b);
    }
    return out;
}

inline std::uint64_t abs_sum_transform(const CompressedFamily& fam) {
    std::vector<std::int64_t> table(std::size_t{1} << fam.n, 0);
    for (auto m : fam.masks) table[m] += 1;
    hadamard_butterfly(std::span<std::int64_t>(table));
    std::uint64_t total = 0;
    for (auto v : table) total += static_cast<std::uint64_t>(v < 0 ? -v : v);
    return total;
}

inline std::uint64_t abs_sum_gray(const CompressedFamily& fam, Parallelism par) {
    const int n = fam.n;
    // Low Gray-code bits flip most often; give them the smallest buckets.
    std::vector<std::size_t> load(static_cast<std::size_t>(n), 0);
    for (auto m : fam.masks) {
        for (std::uint64_t r = m; r != 0; r &= r - 1) ++load[static_cast<std::size_t>(std::countr_zero(r))];
    }
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return load[static_cast<std::size_t>(a)] < load[static_cast<std::size_t>(b)];
    });
    std::vector<int> new_pos(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) new_pos[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    std::vector<std::uint64_t> masks;
    masks.reserve(fam.masks.size());
    std::vector<std::vector<std::uint64_t>> buckets(static_cast<std::size_t>(n));
    for (auto m : fam.masks) {
        std::uint64_t b = 0;
        for (std::uint64_t r = m; r != 0; r &= r - 1) {
            b |= std::uint64_t{1} << new_pos[static_cast<std::size_t>(std::countr_zero(r))];
        }
        masks.push_back(b);
        for (std::uint64_t r = b; r != 0; r &= r - 1) buckets[static_cast<std::size_t>(std::countr_zero(r))].push_back(b);
    }

    int fixed = 0;
    while (fixed < n - 1 && (1U << fixed) < 4 * par.threads && par.threads > 1) ++fixed;
    const std::size_t blocks = std::size_t{1} << fixed;

    auto partials = map_blocks<std::uint64_t>(blocks, par, [&](std::size_t block) {
        std::int64_t g = 0;
        std::uint64_t acc = 0;
        gray_walk_block(n, fixed, block, [&](std::uint64_t x, int flip) {
            if (flip < 0) {
                for (auto s : masks) g += character_sign(s, x);
            } else {
                const auto& bucket = buckets[static_cast<std::size_t>(flip)];
                std::int64_t odd = 0;
                for (auto s : bucket) odd += std::popcount(s & x) & 1;
                // bucket sum at the new point is |bucket| - 2*odd; the old sum is its negative
                g += 2 * (static_cast<std::int64_t>(bucket.size()) - 2 * odd);
            }
            acc += static_cast<std::uint64_t>(g < 0 ? -g : g);
        });
        return acc;
    });
    return std::accumulate(partials.begin(), partials.end(), std::uint64_t{0});
}

inline BigInt to_bigint(unsigned __int128 v) {
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    return (hi << 64) | BigInt(static_cast<std::uint64_t>(v));
}

/// Mean, standard error and 95% interval from exact integer moments.
inline McEstimate finish_estimate(unsigned __int128 abs_sum, unsigned __int128 sq_sum, std::uint64_t samples,
                                  std::uint64_t seed) {
    McEstimate est;
    est.samples = samples;
    est.seed = seed;
    const BigInt n = samples;
    const BigInt s1 = to_bigint(abs_sum);
    est.mean = to_double(Rational(s1, n));
    const Rational var(n * to_bigint(sq_sum) - s1 * s1, n * (n - 1));
    est.std_error = std::sqrt(to_double(var) / static_cast<double>(samples));
    est.ci95_lo = est.mean - 1.96 * est.std_error;
    est.ci95_hi = est.mean + 1.96 * est.std_error;
    return est;
}

}  // namespace detail

/// lambda(B_S^N) exactly, as 2^{-N} sum_x |sum_S x^S|.
inline Rational lambda_exact(const SupportFamily& family, const ExactOptions& opts = {}) {
    const auto fam = detail::compress(family);
    if (fam.n == 0) return 1;  // family {emptyset}
    if (fam.n > opts.max_dimension) {
        throw GuardError("lambda_exact: " + std::to_string(fam.n) + " active coordinates exceed cap " +
                         std::to_string(opts.max_dimension));
    }
    ExactKernel kernel = opts.kernel;
    if (kernel == ExactKernel::automatic) {
        std::uint64_t incidences = 0;
        for (auto m : fam.masks) incidences += static_cast<std::uint64_t>(std::popcount(m));
        const auto n = static_cast<std::uint64_t>(fam.n);
        kernel = (fam.n <= 22 && incidences > n * n) ? ExactKernel::transform : ExactKernel::gray;
    }
    std::uint64_t total = 0;
    if (kernel == ExactKernel::transform) {
        if (fam.n > kMaxTransformDimension) throw GuardError("transform kernel needs at most 24 active coordinates");
        total = detail::abs_sum_transform(fam);
    } else {
        total = detail::abs_sum_gray(fam, opts.parallelism);
    }
    return Rational(BigInt(total), pow2(static_cast<unsigned>(fam.n)));
}

enum class LevelMode { exact_degree, up_to_degree };

inline constexpr int kMaxLevelDimension = 100000;

/// lambda of the full degree-d family (homogeneous or up to degree d) via
/// the symmetric reduction: the integrand only depends on the number m of
/// +1 coordinates.
inline Rational lambda_level_exact(int n, int d, LevelMode mode) {
    detail::require_domain(n >= 1, "lambda_level_exact: N must be >= 1");
    detail::require_domain(d >= 1 && d <= n, "lambda_level_exact: need 1 <= d <= N");
    detail::require_guard(n <= kMaxLevelDimension, "lambda_level_exact: N exceeds 100000");
    const auto du = static_cast<std::size_t>(d);
    BigInt weight = 1;  // C(N, m)
    BigInt total = 0;
    std::vector<BigInt> plus(du + 1), minus(du + 1);
    for (int m = 0; m <= n; ++m) {
        // plus[j] = C(m, j), minus[i] = C(N-m, i)
        plus[0] = 1;
        minus[0] = 1;
        for (int j = 1; j <= d; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            plus[ju] = j > m ? BigInt(0) : plus[ju - 1] * (m - j + 1) / j;
            minus[ju] = j > n - m ? BigInt(0) : minus[ju - 1] * (n - m - j + 1) / j;
        }
        BigInt t = 0;
        const int k_lo = mode == LevelMode::exact_degree ? d : 0;
        for (int k = k_lo; k <= d; ++k) {
            for (int j = 0; j <= k; ++j) {
                BigInt term = plus[static_cast<std::size_t>(j)] * minus[static_cast<std::size_t>(k - j)];
                if ((k - j) & 1) {
                    t -= term;
                } else {
                    t += term;
                }
            }
        }
        total += weight * boost::multiprecision::abs(t);
        weight = weight * (n - m) / (m + 1);
    }
    return Rational(total, pow2(static_cast<unsigned>(n)));
}

/// Monte Carlo estimate of lambda(B_S^N) from i.i.d. uniform cube points.
inline McEstimate lambda_mc(const SupportFamily& family, std::uint64_t samples, std::uint64_t seed,
                            Parallelism par = {}) {
    detail::require_domain(samples >= 100, "lambda_mc: need at least 100 samples");
    const auto masks = family.masks();
    const std::uint64_t mask = detail::low_mask(family.dimension());
    const CounterRng rng(seed);
    constexpr std::uint64_t kBlock = 4096;
    const std::size_t blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
    struct Sums {
        unsigned __int128 abs_sum = 0;
        unsigned __int128 sq_sum = 0;
    };
    auto parts = map_blocks<Sums>(blocks, par, [&](std::size_t b) {
        Sums s;
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(samples, lo + kBlock);
        for (std::uint64_t i = lo; i < hi; ++i) {
            const std::uint64_t x = rng.bits(i) & mask;
            std::int64_t g = 0;
            for (auto m : masks) g += character_sign(m, x);
            const auto a = static_cast<std::uint64_t>(g < 0 ? -g : g);
            s.abs_sum += a;
            s.sq_sum += static_cast<unsigned __int128>(a) * a;
        }
        return s;
    });
    Sums tot;
    for (const auto& p : parts) {
        tot.abs_sum += p.abs_sum;
        tot.sq_sum += p.sq_sum;
    }
    return detail::finish_estimate(tot.abs_sum, tot.sq_sum, samples, seed);
}

struct ClosedForms {
    double lambda_l1 = 0;
    double lambda_l2 = 0;
};

/// Real projection constants of l_2^n (Gamma formula) and l_1^n.
inline double lambda_l2(int n) {
    detail::require_domain(n >= 1, "lambda_l2: n must be >= 1");
    const double a = (n + 2) / 2.0;
    const double b = (n + 1) / 2.0;
    return 2.0 / std::sqrt(boost::math::constants::pi<double>()) * boost::math::tgamma_ratio(a, b);
}

inline ClosedForms lambda_closed_forms(int n) {
    detail::require_domain(n >= 1, "lambda_closed_forms: n must be >= 1");
    ClosedForms out;
    out.lambda_l2 = lambda_l2(n);
    out.lambda_l1 = (n % 2 == 1) ? out.lambda_l2 : lambda_l2(n - 1);
    return out;
}

inline constexpr int kMaxHaagerupTerms = 10000;

/// E|x_1 + ... + x_n| = 2^{-n} sum_k C(n,k)|n - 2k|, the closed form of the
/// Rademacher-average integral (2/pi) int t^{-2}(1 - cos^n t) dt.
inline Rational haagerup_lambda(int n) {
    detail::require_domain(n >= 1 && n <= kMaxHaagerupTerms, "haagerup_lambda: need 1 <= n <= 10000");
    const auto row = binomial_row(n);
    BigInt total = 0;
    for (int k = 0; k <= n; ++k) total += row[static_cast<std::size_t>(k)] * std::abs(n - 2 * k);
    return Rational(total, pow2(static_cast<unsigned>(n)));
}

struct PrimeSingletonReport {
    int n = 0;
    int prime_count = 0;
    Rational lambda;
    double ratio = 0;  // lambda / sqrt(N / log N)
};

inline PrimeSingletonReport prime_singleton_report(int n) {
    detail::require_domain(n >= 3, "prime_singleton_report: need N >= 3");
    PrimeSingletonReport r;
    r.n = n;
    r.prime_count = static_cast<int>(primes_up_to(n).size());
    detail::require_guard(r.prime_count <= kMaxHaagerupTerms, "prime_singleton_report: too many primes");
    r.lambda = haagerup_lambda(r.prime_count);
    r.ratio = to_double(r.lambda) / std::sqrt(n / std::log(static_cast<double>(n)));
    return r;
}

struct SquareFreeReport {
    int n = 0;
    std::size_t family_size = 0;  // number of square-free integers <= N
    McEstimate estimate;
    double ratio = 0;             // mean / (sqrt N / (log log N)^{1/4})
    std::optional<Rational> exact;
};

/// Monte Carlo of E|sum_{n <= N square-free} prod_{p | n} eps_p|.
inline SquareFreeReport squarefree_mc(int n, std::uint64_t samples, std::uint64_t seed, Parallelism par = {}) {
    detail::require_domain(n >= 16, "squarefree_mc: need N >= 16");
    detail::require_domain(samples >= 1000, "squarefree_mc: need at least 1000 samples");
    detail::require_guard(n <= 10000000, "squarefree_mc: N exceeds 10^7");
    const auto primes = primes_up_to(n);
    const auto spf = smallest_prime_factors(n);
    std::vector<int> prime_index(static_cast<std::size_t>(n) + 1, -1);
    for (std::size_t i = 0; i < primes.size(); ++i) prime_index[static_cast<std::size_t>(primes[i])] = static_cast<int>(i);
    const std::size_t words = (primes.size() + 63) / 64;

    SquareFreeReport rep;
    rep.n = n;
    for (int k = 1; k <= n; ++k) {
        int m = k;
        bool sf = true;
        while (m > 1 && sf) {
            const int p = spf[static_cast<std::size_t>(m)];
            m /= p;
            if (m % p == 0) sf = false;
        }
        rep.family_size += sf ? 1 : 0;
    }

    std::vector<CounterRng> rngs;
    for (std::size_t w = 0; w < words; ++w) rngs.emplace_back(seed, w + 1);
    constexpr std::uint64_t kBlock = 256;
    const std::size_t blocks = static_cast<std::size_t>((samples + kBlock - 1) / kBlock);
    struct Sums {
        unsigned __int128 abs_sum = 0;
        unsigned __int128 sq_sum = 0;
    };
    auto parts = map_blocks<Sums>(blocks, par, [&](std::size_t b) {
        Sums s;
        std::vector<std::uint64_t> sign_bits(words);
        std::vector<signed char> f(static_cast<std::size_t>(n) + 1, 0);
        const std::uint64_t lo = b * kBlock;
        const std::uint64_t hi = std::min(samples, lo + kBlock);
        for (std::uint64_t i = lo; i < hi; ++i) {
            for (std::size_t w = 0; w < words; ++w) sign_bits[w] = rngs[w].bits(i);
            f[1] = 1;
            std::int64_t total = 1;
            for (int k = 2; k <= n; ++k) {
                const int p = spf[static_cast<std::size_t>(k)];
                const int rest = k / p;
                if (rest % p == 0) {
                    f[static_cast<std::size_t>(k)] = 0;
                    continue;
                }
                const auto pi = static_cast<std::size_t>(prime_index[static_cast<std::size_t>(p)]);
                const int eps = ((sign_bits[pi / 64] >> (pi % 64)) & 1U) ? -1 : 1;
                f[static_cast<std::size_t>(k)] = static_cast<signed char>(eps * f[static_cast<std::size_t>(rest)]);
                total += f[static_cast<std::size_t>(k)];
            }
            const auto a = static_cast<std::uint64_t>(total < 0 ? -total : total);
            s.abs_sum += a;
            s.sq_sum += static_cast<unsigned __int128>(a) * a;
        }
        return s;
    });
    unsigned __int128 abs_sum = 0, sq_sum = 0;
    for (const auto& p : parts) {
        abs_sum += p.abs_sum;
        sq_sum += p.sq_sum;
    }
    rep.estimate = detail::finish_estimate(abs_sum, sq_sum, samples, seed);
    const auto& est = rep.estimate;
    const double nn = n;
    rep.ratio = est.mean / (std::sqrt(nn) / std::pow(std::log(std::log(nn)), 0.25));
    if (n <= kMaxDimension && primes.size() <= 24) {
        rep.exact = lambda_exact(make_family(FamilySpec::square_free(n)));
    }
    return rep;
}

}  // namespace cube
