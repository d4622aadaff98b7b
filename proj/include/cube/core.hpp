#pragma once

// Boolean cube {-1,+1}^N, Walsh characters and the support families B_S^N
// is spanned by.
//
// Encoding: bit i of a CubePoint is set iff coordinate i+1 equals -1, bit i
// of a SubsetMask is set iff i+1 belongs to the subset. A character value is
// then the parity of (S AND x).

#include "cube/error.hpp"
#include "cube/rational.hpp"

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace cube {

inline constexpr int kMaxDimension = 63;

namespace detail {

inline std::uint64_t low_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

inline void check_dimension(int n) {
    if (n < 1 || n > kMaxDimension) {
        throw GuardError("cube dimension must lie in [1, 63], got " + std::to_string(n));
    }
}

inline void check_fits(std::uint64_t bits, int n) {
    if ((bits & ~low_mask(n)) != 0) {
        throw DimensionError("bit pattern has set bits beyond dimension " + std::to_string(n));
    }
}

}  // namespace detail

/// A point of {-1,+1}^n.
class CubePoint {
public:
    CubePoint(std::uint64_t bits, int n) : bits_(bits), n_(n) {
        detail::check_dimension(n);
        detail::check_fits(bits, n);
    }

    /// The all +1 point.
    static CubePoint ones(int n) { return {0, n}; }

    /// Point from explicit signs; entries must be +1 or -1.
    static CubePoint from_signs(const std::vector<int>& signs) {
        std::uint64_t bits = 0;
        for (std::size_t i = 0; i < signs.size(); ++i) {
            if (signs[i] != 1 && signs[i] != -1) throw DomainError("cube coordinates must be +1 or -1");
            if (signs[i] == -1) bits |= std::uint64_t{1} << i;
        }
        return {bits, static_cast<int>(signs.size())};
    }

    std::uint64_t bits() const { return bits_; }
    int dimension() const { return n_; }
    int coordinate(int i) const { return ((bits_ >> i) & 1U) ? -1 : 1; }

    friend bool operator==(const CubePoint&, const CubePoint&) = default;

private:
    std::uint64_t bits_;
    int n_;
};

/// A subset S of [n].
class SubsetMask {
public:
    SubsetMask(std::uint64_t bits, int n) : bits_(bits), n_(n) {
        detail::check_dimension(n);
        detail::check_fits(bits, n);
    }

    /// Subset from 1-based indices.
    static SubsetMask from_indices(const std::vector<int>& indices, int n) {
        std::uint64_t bits = 0;
        for (int idx : indices) {
            if (idx < 1 || idx > n) {
                throw DomainError("subset index " + std::to_string(idx) + " outside [1, " + std::to_string(n) + "]");
            }
            const std::uint64_t b = std::uint64_t{1} << (idx - 1);
            if (bits & b) throw DomainError("subset index " + std::to_string(idx) + " repeated");
            bits |= b;
        }
        return {bits, n};
    }

    std::uint64_t bits() const { return bits_; }
    int dimension() const { return n_; }
    int size() const { return std::popcount(bits_); }
    bool contains(int i) const { return (bits_ >> i) & 1U; }

    /// 1-based indices in increasing order.
    std::vector<int> indices() const {
        std::vector<int> out;
        for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
        return out;
    }

    friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
    friend auto operator<=>(const SubsetMask& a, const SubsetMask& b) {
        if (auto c = a.n_ <=> b.n_; c != 0) return c;
        return a.bits_ <=> b.bits_;
    }

private:
    std::uint64_t bits_;
    int n_;
};

/// chi_S(x) in {-1,+1}.
inline int character_eval(const SubsetMask& s, const CubePoint& x) {
    if (s.dimension() != x.dimension()) {
        throw DimensionError("character and point dimensions differ: " + std::to_string(s.dimension()) + " vs " +
                             std::to_string(x.dimension()));
    }
    return (std::popcount(s.bits() & x.bits()) & 1) ? -1 : 1;
}

/// Unchecked character value on raw masks.
inline int character_sign(std::uint64_t s, std::uint64_t x) { return 1 - 2 * (std::popcount(s & x) & 1); }

enum class FamilyKind { explicit_list, homogeneous, up_to, prime_singletons, square_free };

inline std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::explicit_list: return "explicit";
        case FamilyKind::homogeneous: return "homogeneous";
        case FamilyKind::up_to: return "upto";
        case FamilyKind::prime_singletons: return "prime-singletons";
        case FamilyKind::square_free: return "squarefree";
    }
    return "unknown";
}

/// Recipe for a support family, independent of its materialization.
struct FamilySpec {
    FamilyKind kind = FamilyKind::explicit_list;
    int n = 0;
    int d = 0;                                // degree kinds only
    std::vector<std::vector<int>> sets;       // explicit kind only, 1-based

    static FamilySpec explicit_sets(int n, std::vector<std::vector<int>> sets) {
        return {FamilyKind::explicit_list, n, 0, std::move(sets)};
    }
    static FamilySpec homogeneous(int n, int d) { return {FamilyKind::homogeneous, n, d, {}}; }
    static FamilySpec up_to(int n, int d) { return {FamilyKind::up_to, n, d, {}}; }
    static FamilySpec prime_singletons(int n) { return {FamilyKind::prime_singletons, n, 0, {}}; }
    static FamilySpec square_free(int n) { return {FamilyKind::square_free, n, 0, {}}; }

    friend bool operator==(const FamilySpec&, const FamilySpec&) = default;
};

/// A nonempty, strictly sorted family of subsets of [n].
class SupportFamily {
public:
    SupportFamily(int n, std::vector<SubsetMask> sets, FamilyKind kind = FamilyKind::explicit_list, int degree = 0)
        : n_(n), sets_(std::move(sets)), kind_(kind), degree_(degree) {
        detail::check_dimension(n);
        if (sets_.empty()) throw DomainError("support family must be nonempty");
        for (const auto& s : sets_) {
            if (s.dimension() != n) throw DimensionError("family member dimension differs from family dimension");
        }
        std::sort(sets_.begin(), sets_.end());
        if (std::adjacent_find(sets_.begin(), sets_.end()) != sets_.end()) {
            throw DomainError("support family contains a duplicate subset");
        }
    }

    int dimension() const { return n_; }
    std::size_t size() const { return sets_.size(); }
    const std::vector<SubsetMask>& sets() const { return sets_; }
    FamilyKind kind() const { return kind_; }
    int degree() const { return degree_; }

    std::vector<std::uint64_t> masks() const {
        std::vector<std::uint64_t> out;
        out.reserve(sets_.size());
        for (const auto& s : sets_) out.push_back(s.bits());
        return out;
    }

    /// Union of all members.
    std::uint64_t active_coordinates() const {
        std::uint64_t u = 0;
        for (const auto& s : sets_) u |= s.bits();
        return u;
    }

    int max_degree() const {
        int m = 0;
        for (const auto& s : sets_) m = std::max(m, s.size());
        return m;
    }

    /// Same family with coordinates relabelled: coordinate i goes to perm[i].
    SupportFamily permuted(const std::vector<int>& perm) const {
        if (static_cast<int>(perm.size()) != n_) throw DimensionError("permutation length differs from dimension");
        std::vector<SubsetMask> out;
        out.reserve(sets_.size());
        for (const auto& s : sets_) {
            std::uint64_t b = 0;
            for (std::uint64_t r = s.bits(); r != 0; r &= r - 1) b |= std::uint64_t{1} << perm[std::countr_zero(r)];
            out.emplace_back(b, n_);
        }
        return {n_, std::move(out), FamilyKind::explicit_list, 0};
    }

    friend bool operator==(const SupportFamily& a, const SupportFamily& b) {
        return a.n_ == b.n_ && a.sets_ == b.sets_;
    }

private:
    int n_;
    std::vector<SubsetMask> sets_;
    FamilyKind kind_;
    int degree_;
};

/// f = sum_S coeff[S] chi_S over a support family.
template <class Scalar>
struct WalshPolynomial {
    SupportFamily family;
    std::vector<Scalar> coeffs;

    WalshPolynomial(SupportFamily fam, std::vector<Scalar> c) : family(std::move(fam)), coeffs(std::move(c)) {
        if (coeffs.size() != family.size()) {
            throw DimensionError("coefficient count differs from family size");
        }
    }

    int dimension() const { return family.dimension(); }

    /// Coefficients all equal to one.
    static WalshPolynomial indicator(SupportFamily fam) {
        std::vector<Scalar> c(fam.size(), Scalar(1));
        return {std::move(fam), std::move(c)};
    }
};

template <class Scalar>
Scalar evaluate(const WalshPolynomial<Scalar>& f, const CubePoint& x) {
    if (f.dimension() != x.dimension()) throw DimensionError("polynomial and point dimensions differ");
    Scalar acc(0);
    const auto& sets = f.family.sets();
    for (std::size_t i = 0; i < sets.size(); ++i) {
        if (character_sign(sets[i].bits(), x.bits()) > 0) {
            acc += f.coeffs[i];
        } else {
            acc -= f.coeffs[i];
        }
    }
    return acc;
}

/// Primes p <= n by the sieve of Eratosthenes.
inline std::vector<int> primes_up_to(int n) {
    std::vector<int> out;
    if (n < 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(n) + 1, false);
    for (int p = 2; p <= n; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        out.push_back(p);
        for (long long q = static_cast<long long>(p) * p; q <= n; q += p) composite[static_cast<std::size_t>(q)] = true;
    }
    return out;
}

/// Smallest prime factor table spf[0..n] (spf[0] = spf[1] = 0).
inline std::vector<int> smallest_prime_factors(int n) {
    std::vector<int> spf(static_cast<std::size_t>(std::max(n, 1)) + 1, 0);
    for (int p = 2; p <= n; ++p) {
        if (spf[static_cast<std::size_t>(p)] != 0) continue;
        for (long long q = p; q <= n; q += p) {
            if (spf[static_cast<std::size_t>(q)] == 0) spf[static_cast<std::size_t>(q)] = p;
        }
    }
    return spf;
}

namespace detail {

inline void for_each_combination(int n, int k, std::uint64_t prefix, int start, std::vector<std::uint64_t>& out) {
    if (k == 0) {
        out.push_back(prefix);
        return;
    }
    for (int i = start; i <= n - k; ++i) for_each_combination(n, k - 1, prefix | (std::uint64_t{1} << i), i + 1, out);
}

inline void square_free_dfs(const std::vector<int>& primes, std::size_t start, long long product, int n,
                            std::uint64_t mask, std::vector<std::uint64_t>& out) {
    out.push_back(mask);
    for (std::size_t i = start; i < primes.size(); ++i) {
        const long long next = product * primes[i];
        if (next > n) break;
        square_free_dfs(primes, i + 1, next, n, mask | (std::uint64_t{1} << (primes[i] - 1)), out);
    }
}

}  // namespace detail

/// All k-subsets of [n] as raw masks.
inline std::vector<std::uint64_t> subsets_of_size(int n, int k) {
    std::vector<std::uint64_t> out;
    if (k < 0 || k > n) return out;
    detail::for_each_combination(n, k, 0, 0, out);
    return out;
}

inline SupportFamily make_family(const FamilySpec& spec) {
    const int n = spec.n;
    if (n < 1) throw DomainError("family dimension N must be at least 1");
    detail::check_dimension(n);
    std::vector<SubsetMask> sets;
    int degree = 0;
    switch (spec.kind) {
        case FamilyKind::explicit_list: {
            for (const auto& s : spec.sets) {
                if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
                    throw DomainError("explicit family sets must be strictly increasing index arrays");
                }
                sets.push_back(SubsetMask::from_indices(s, n));
            }
            break;
        }
        case FamilyKind::homogeneous:
        case FamilyKind::up_to: {
            degree = spec.d;
            if (spec.d < 1 || spec.d > n) {
                throw DomainError("degree d must satisfy 1 <= d <= N (d=" + std::to_string(spec.d) +
                                  ", N=" + std::to_string(n) + ")");
            }
            const int lo = spec.kind == FamilyKind::homogeneous ? spec.d : 0;
            for (int k = lo; k <= spec.d; ++k) {
                for (auto b : subsets_of_size(n, k)) sets.emplace_back(b, n);
            }
            break;
        }
        case FamilyKind::prime_singletons: {
            for (int p : primes_up_to(n)) sets.emplace_back(std::uint64_t{1} << (p - 1), n);
            if (sets.empty()) throw DomainError("no primes <= " + std::to_string(n));
            break;
        }
        case FamilyKind::square_free: {
            std::vector<std::uint64_t> masks;
            detail::square_free_dfs(primes_up_to(n), 0, 1, n, 0, masks);
            for (auto b : masks) sets.emplace_back(b, n);
            break;
        }
    }
    return {n, std::move(sets), spec.kind, degree};
}

/// Product of the primes in a square-free family member (bit p-1 <-> prime p).
inline long long mask_product(std::uint64_t mask) {
    long long p = 1;
    for (std::uint64_t r = mask; r != 0; r &= r - 1) p *= std::countr_zero(r) + 1;
    return p;
}

}  // namespace cube
