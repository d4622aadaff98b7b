#pragma once

// Sidon constants sid(S) = sup { sum |a_S| : |sum a_S x^S| <= 1 on the cube }.
// The sup of a convex function over a polytope sits at a vertex, and inside a
// fixed sign orthant sigma the problem is the LP  max sigma.a. Translating by
// y in the cube maps sigma to (y^S sigma_S), so only one pattern per coset of
// that group (together with global negation) has to be solved.

#include "cube/core.hpp"
#include "cube/error.hpp"
#include "cube/lp.hpp"
#include "cube/parallel.hpp"
#include "cube/projection.hpp"
#include "cube/rational.hpp"
#include "cube/rng.hpp"
#include "cube/walsh.hpp"

#include <Eigen/Dense>
#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <unordered_set>
#include <vector>

namespace cube {

inline constexpr int kMaxSidonDimension = 12;
inline constexpr int kMaxSidonFamily = 32;
inline constexpr std::uint64_t kDefaultMaxOrthants = std::uint64_t{1} << 21;

struct SidonOptions {
    double tol = 1e-9;
    std::uint64_t max_orthants = kDefaultMaxOrthants;
    Parallelism parallelism{};
};

struct SidonResult {
    double value = 0.0;
    WalshPolynomial<double> witness;
    std::uint64_t orthants_solved = 0;  // LPs after symmetry reduction
    double tol = 0.0;
    double witness_sup = 0.0;       // exact sup norm of the witness, rounded
    double certified_lower = 0.0;   // sum |witness| / max(1, witness_sup)
};

namespace detail {

/// Distinct character rows (chi_S(x))_S up to sign, as bit patterns over the
/// family index (bit j set means chi_{S_j}(x) = -1).
inline std::vector<std::uint64_t> character_rows(const SupportFamily& family) {
    const auto masks = family.masks();
    const int n = family.dimension();
    std::unordered_set<std::uint64_t> seen;
    std::vector<std::uint64_t> rows;
    const std::uint64_t all = low_mask(static_cast<int>(masks.size()));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        std::uint64_t r = 0;
        for (std::size_t j = 0; j < masks.size(); ++j) {
            if (std::popcount(masks[j] & x) & 1) r |= std::uint64_t{1} << j;
        }
        if (r & 1U) r ^= all;
        if (seen.insert(r).second) rows.push_back(r);
    }
    std::sort(rows.begin(), rows.end());
    return rows;
}

/// Constraint matrix with rows +-chi(x) over distinct rows.
inline Eigen::MatrixXd sidon_constraints(const std::vector<std::uint64_t>& rows, int k) {
    Eigen::MatrixXd a(2 * static_cast<Eigen::Index>(rows.size()), k);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int j = 0; j < k; ++j) {
            const double v = ((rows[r] >> j) & 1U) ? -1.0 : 1.0;
            a(static_cast<Eigen::Index>(2 * r), j) = v;
            a(static_cast<Eigen::Index>(2 * r + 1), j) = -v;
        }
    }
    return a;
}

/// Translation images and the all-ones vector span a subspace G of GF(2)^k.
/// Kept in reduced echelon form: patterns with a 0 (sign +1) at every pivot
/// hit each coset of G exactly once, so only the free coordinates vary.
struct SignSymmetry {
    std::vector<std::uint64_t> basis;
    std::vector<int> free;

    std::uint64_t reduce(std::uint64_t v) const {
        for (auto b : basis) {
            if ((v >> std::countr_zero(b)) & 1U) v ^= b;
        }
        return v;
    }
    std::uint64_t expand(std::uint64_t code) const {
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < free.size(); ++i) {
            if ((code >> i) & 1U) v |= std::uint64_t{1} << free[i];
        }
        return v;
    }
    std::uint64_t compress(std::uint64_t v) const {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < free.size(); ++i) {
            if ((v >> free[i]) & 1U) code |= std::uint64_t{1} << i;
        }
        return code;
    }
};

inline SignSymmetry sign_symmetry(const SupportFamily& family) {
    const auto masks = family.masks();
    const int k = static_cast<int>(masks.size());
    std::vector<std::uint64_t> gens;
    for (int i = 0; i < family.dimension(); ++i) {
        std::uint64_t g = 0;
        for (int j = 0; j < k; ++j) {
            if ((masks[static_cast<std::size_t>(j)] >> i) & 1U) g |= std::uint64_t{1} << j;
        }
        gens.push_back(g);
    }
    gens.push_back(low_mask(k));
    SignSymmetry sym;
    std::vector<bool> pivot(static_cast<std::size_t>(k), false);
    for (auto g : gens) {
        g = sym.reduce(g);
        if (g == 0) continue;
        const int lead = std::countr_zero(g);
        for (auto& b : sym.basis) {
            if ((b >> lead) & 1U) b ^= g;
        }
        sym.basis.push_back(g);
        pivot[static_cast<std::size_t>(lead)] = true;
    }
    for (int j = 0; j < k; ++j) {
        if (!pivot[static_cast<std::size_t>(j)]) sym.free.push_back(j);
    }
    return sym;
}

/// Coordinate transpositions mapping the family onto itself, as permutations
/// of the family index.
inline std::vector<std::vector<int>> family_transpositions(const SupportFamily& family) {
    const auto masks = family.masks();
    std::vector<std::vector<int>> out;
    const int n = family.dimension();
    for (int i = 0; i < n; ++i) {
        for (int l = i + 1; l < n; ++l) {
            std::vector<int> tau;
            tau.reserve(masks.size());
            for (auto m : masks) {
                const std::uint64_t bi = (m >> i) & 1U;
                const std::uint64_t bl = (m >> l) & 1U;
                std::uint64_t img = m;
                if (bi != bl) img ^= (std::uint64_t{1} << i) | (std::uint64_t{1} << l);
                const auto it = std::lower_bound(masks.begin(), masks.end(), img);
                if (it == masks.end() || *it != img) break;
                tau.push_back(static_cast<int>(it - masks.begin()));
            }
            if (tau.size() == masks.size()) out.push_back(std::move(tau));
        }
    }
    return out;
}

/// Orbit representatives (smallest code) of the sign patterns under the
/// transpositions, each pattern already reduced modulo translations.
inline std::vector<std::uint64_t> orbit_representatives(const SignSymmetry& sym,
                                                        const std::vector<std::vector<int>>& perms) {
    const std::uint64_t total = std::uint64_t{1} << sym.free.size();
    std::vector<std::uint32_t> parent(total);
    for (std::uint64_t c = 0; c < total; ++c) parent[c] = static_cast<std::uint32_t>(c);
    auto find = [&](std::uint32_t c) {
        while (parent[c] != c) {
            parent[c] = parent[parent[c]];
            c = parent[c];
        }
        return c;
    };
    for (std::uint64_t c = 0; c < total && !perms.empty(); ++c) {
        const std::uint64_t v = sym.expand(c);
        for (const auto& tau : perms) {
            std::uint64_t w = 0;
            for (std::uint64_t r = v; r != 0; r &= r - 1) w |= std::uint64_t{1} << tau[static_cast<std::size_t>(std::countr_zero(r))];
            const auto a = find(static_cast<std::uint32_t>(c));
            const auto b = find(static_cast<std::uint32_t>(sym.compress(sym.reduce(w))));
            if (a != b) parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::vector<std::uint64_t> reps;
    for (std::uint64_t c = 0; c < total; ++c) {
        if (find(static_cast<std::uint32_t>(c)) == c) reps.push_back(c);
    }
    return reps;
}

inline Eigen::VectorXd sign_vector(int k, const std::vector<int>& free, std::uint64_t code) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(k);
    for (std::size_t i = 0; i < free.size(); ++i) {
        if ((code >> i) & 1U) s(free[i]) = -1.0;
    }
    return s;
}

/// Exact sup over the cube of |sum a_j chi_{S_j}|, via the distinct rows.
inline Rational exact_sup(const std::vector<std::uint64_t>& rows, const std::vector<Rational>& a) {
    Rational best = 0;
    for (auto r : rows) {
        Rational v = 0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            if ((r >> j) & 1U) {
                v -= a[j];
            } else {
                v += a[j];
            }
        }
        if (v < 0) v = -v;
        if (v > best) best = v;
    }
    return best;
}

}  // namespace detail

/// Number of sign patterns sidon_exact would solve for this family.
inline std::uint64_t sidon_orthant_count(const SupportFamily& family) {
    detail::require_guard(family.size() <= static_cast<std::size_t>(kMaxSidonFamily), "sidon: family larger than 32 sets");
    return std::uint64_t{1} << detail::sign_symmetry(family).free.size();
}

inline SidonResult sidon_exact(const SupportFamily& family, const SidonOptions& opts = {}) {
    detail::require_guard(family.dimension() <= kMaxSidonDimension, "sidon: need N <= 12");
    detail::require_guard(family.size() <= static_cast<std::size_t>(kMaxSidonFamily), "sidon: family larger than 32 sets");
    detail::require_domain(opts.tol > 0 && opts.tol <= 1e-3, "sidon: tol must lie in (0, 1e-3]");
    const int k = static_cast<int>(family.size());
    const auto sym = detail::sign_symmetry(family);
    const auto& free = sym.free;
    const std::uint64_t total = std::uint64_t{1} << free.size();
    detail::require_guard(total <= opts.max_orthants, "sidon: orthant count exceeds max_orthants");
    const auto reps = detail::orbit_representatives(sym, detail::family_transpositions(family));

    const auto rows = detail::character_rows(family);
    const Eigen::MatrixXd a = detail::sidon_constraints(rows, k);
    const Eigen::VectorXd b = Eigen::VectorXd::Ones(a.rows());

    // Fixed-size chunks of representatives, each warm-started from its own
    // first solve, so the outcome does not depend on the worker count.
    constexpr std::size_t chunk = 64;
    const std::size_t blocks = (reps.size() + chunk - 1) / chunk;

    struct Best {
        double value = -1.0;
        std::uint64_t code = 0;
    };
    auto parts = map_blocks<Best>(blocks, opts.parallelism, [&](std::size_t block) {
        DualFormSimplex lp(a, b, opts.tol);
        Best best;
        const std::size_t end = std::min(reps.size(), (block + 1) * chunk);
        for (std::size_t i = block * chunk; i < end; ++i) {
            const auto sigma = detail::sign_vector(k, free, reps[i]);
            if (i == block * chunk) {
                lp.solve_cold(sigma);
            } else {
                lp.solve_warm(sigma);
            }
            const double v = lp.optimum();
            if (v > best.value) best = {v, reps[i]};
        }
        return best;
    });
    Best best = parts.front();
    for (const auto& p : parts) {
        if (p.value > best.value) best = p;
    }

    DualFormSimplex lp(a, b, opts.tol);
    lp.solve_cold(detail::sign_vector(k, free, best.code));
    const auto sol = lp.solution();

    std::vector<Rational> exact(sol.size());
    Rational l1 = 0;
    for (std::size_t j = 0; j < sol.size(); ++j) {
        exact[j] = from_double(sol[j]);
        l1 += exact[j] < 0 ? Rational(-exact[j]) : exact[j];
    }
    const Rational sup = detail::exact_sup(rows, exact);
    if (sup > Rational(1) + from_double(10 * opts.tol)) throw NumericError("sidon: witness violates the sup-norm constraint");

    return SidonResult{lp.optimum(),
                       WalshPolynomial<double>(family, sol),
                       reps.size(),
                       opts.tol,
                       to_double(sup),
                       to_double(l1 / (sup > 1 ? sup : Rational(1)))};
}

/// (prod_p sinc(pi/p))^{-1} over all primes. The tail beyond P is bounded by
/// sum_{n>P} (pi/n)^2/6 (times a factor covering the higher Taylor terms),
/// and P is picked so the induced error on the product stays below tol.
inline double kappa_constant(double tol = 1e-6) {
    detail::require_domain(tol >= 1e-7 && tol <= 1e-3, "kappa_constant: tol must lie in [1e-7, 1e-3]");
    using boost::math::constants::pi;
    const double tail_coeff = 1.001 * pi<double>() * pi<double>() / 6.0;
    // kappa < 2.3, and exp(t) - 1 < 1.01 t for the tiny tails involved
    const auto cutoff = static_cast<int>(std::ceil(2.3 * 1.01 * tail_coeff / tol)) + 1;
    double sum = 0.0;
    double comp = 0.0;
    for (int p : primes_up_to(cutoff)) {
        const double u = pi<double>() / p;
        const double term = -std::log(std::sin(u) / u);
        const double y = term - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return std::exp(sum);
}

struct BoundCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// sid(B_{=d}^N) <= e^d (2d) kappa^d 2^{d-1} lambda(B_{=d-1}^N).
inline BoundCheck check_sidon_projection_bound(int n, int d, const SidonOptions& opts = {}) {
    detail::require_guard(d >= 2 && d <= 3 && n <= 8, "sidon projection bound: need 2 <= d <= 3 and N <= 8");
    detail::require_domain(d <= n, "sidon projection bound: need d <= N");
    const double lhs = sidon_exact(make_family(FamilySpec::homogeneous(n, d)), opts).value;
    const double kappa = kappa_constant(1e-6);
    const double c = std::exp(static_cast<double>(d)) * 2.0 * d * std::pow(kappa, d) * std::pow(2.0, d - 1);
    const double rhs = c * to_double(lambda_level_exact(n, d - 1, LevelMode::exact_degree));
    return {lhs, rhs, lhs <= rhs};
}

namespace detail {

/// Values of f on the whole cube through the inverse transform.
inline std::vector<double> cube_values(const WalshPolynomial<double>& f) {
    const int n = f.dimension();
    require_guard(n <= kMaxTransformDimension, "sup norm: need N <= 24");
    std::vector<double> dense(std::size_t{1} << n, 0.0);
    const auto& sets = f.family.sets();
    for (std::size_t i = 0; i < sets.size(); ++i) dense[sets[i].bits()] += f.coeffs[i];
    hadamard_butterfly<double>(dense);
    return dense;
}

inline double sup_norm(const WalshPolynomial<double>& f) {
    double s = 0.0;
    for (double v : cube_values(f)) s = std::max(s, std::abs(v));
    return s;
}

}  // namespace detail

/// (sum |f^(S)|^{2d/(d+1)})^{(d+1)/(2d)} / ||f||_inf.
inline double bh_functional(const WalshPolynomial<double>& f, int d) {
    detail::require_domain(d >= 1, "bh_functional: need d >= 1");
    detail::require_domain(f.family.max_degree() <= d, "bh_functional: f has degree above d");
    const double p = 2.0 * d / (d + 1.0);
    double acc = 0.0;
    for (double c : f.coeffs) acc += std::pow(std::abs(c), p);
    const double sup = detail::sup_norm(f);
    if (sup == 0.0) throw DomainError("bh_functional: f vanishes identically");
    return std::pow(acc, 1.0 / p) / sup;
}

struct KszResult {
    std::vector<int> signs;
    double supnorm = 0.0;
    double bound = 0.0;
    bool pass = false;
    int trials = 0;
};

inline double ksz_bound(int n, std::size_t family_size) {
    return 6.0 * std::sqrt(std::log(2.0)) * std::sqrt(static_cast<double>(n)) * std::sqrt(static_cast<double>(family_size));
}

/// Random search for signs with small sup norm; keeps the best draw.
inline KszResult ksz_signs(const SupportFamily& family, int trials, std::uint64_t seed) {
    detail::require_guard(family.dimension() <= kMaxTransformDimension, "ksz_signs: need N <= 24");
    detail::require_domain(trials >= 1, "ksz_signs: need trials >= 1");
    KszResult out;
    out.bound = ksz_bound(family.dimension(), family.size());
    out.trials = trials;
    out.supnorm = std::numeric_limits<double>::infinity();
    const CounterRng rng(seed, 0x4B535AULL);
    for (int t = 0; t < trials; ++t) {
        std::vector<double> c(family.size());
        std::vector<int> s(family.size());
        for (std::size_t j = 0; j < c.size(); ++j) {
            const auto bit = rng.bits(static_cast<std::uint64_t>(t) * family.size() + j) >> 63;
            s[j] = bit ? -1 : 1;
            c[j] = s[j];
        }
        const double sup = detail::sup_norm(WalshPolynomial<double>(family, c));
        if (sup < out.supnorm) {
            out.supnorm = sup;
            out.signs = s;
        }
    }
    out.pass = out.supnorm <= out.bound;
    return out;
}

struct SidonDensityReport {
    double pivot = 0.0;             // sqrt(|S|) / sqrt(N)
    double lower_certificate = 0.0; // sqrt(|S|) / (6 sqrt(log 2) sqrt(N))
    bool precondition = false;      // (N/d)^{d/2} <= |S|
    std::optional<double> exact;
    std::optional<bool> certificate_holds;
};

inline SidonDensityReport sidon_density_bounds(const SupportFamily& family, int d, const SidonOptions& opts = {}) {
    detail::require_domain(d >= 1 && family.max_degree() <= d, "sidon_density_bounds: family has sets larger than d");
    const double n = family.dimension();
    const double size = static_cast<double>(family.size());
    SidonDensityReport rep;
    rep.pivot = std::sqrt(size) / std::sqrt(n);
    rep.lower_certificate = std::sqrt(size) / (6.0 * std::sqrt(std::log(2.0)) * std::sqrt(n));
    rep.precondition = std::pow(n / d, d / 2.0) <= size;
    if (family.dimension() <= kMaxSidonDimension && family.size() <= static_cast<std::size_t>(kMaxSidonFamily) &&
        sidon_orthant_count(family) <= opts.max_orthants) {
        rep.exact = sidon_exact(family, opts).value;
        rep.certificate_holds = *rep.exact >= rep.lower_certificate;
    }
    return rep;
}

}  // namespace cube
