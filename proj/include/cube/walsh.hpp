#pragma once

// Fast Walsh-Hadamard transform. Arrays are indexed by bit masks, so entry x
// of a value table is f at the cube point with bits x, and entry S of a
// coefficient table is f^(S).

#include "cube/core.hpp"

#include <bit>
#include <span>
#include <vector>

namespace cube {

inline constexpr int kMaxTransformDimension = 24;

namespace detail {

inline int transform_dimension(std::size_t len) {
    if (len == 0 || !std::has_single_bit(len)) throw DomainError("transform length must be a power of two");
    const int n = std::countr_zero(len);
    if (n > kMaxTransformDimension) {
        throw GuardError("transform dimension " + std::to_string(n) + " exceeds cap 24");
    }
    return n;
}

}  // namespace detail

/// Unnormalized butterfly: out[y] = sum_x in[x] (-1)^{popcount(x & y)}.
/// It maps coefficients to values directly and values to 2^N times the
/// coefficients.
template <class T>
void hadamard_butterfly(std::span<T> a) {
    detail::transform_dimension(a.size());
    for (std::size_t h = 1; h < a.size(); h <<= 1) {
        for (std::size_t i = 0; i < a.size(); i += h << 1) {
            for (std::size_t j = i; j < i + h; ++j) {
                T u = a[j];
                T v = a[j + h];
                a[j] = u + v;
                a[j + h] = u - v;
            }
        }
    }
}

/// Fourier-Walsh coefficients f^(S) = 2^{-N} sum_x f(x) chi_S(x).
template <class T>
std::vector<T> walsh_transform(std::span<const T> values) {
    const int n = detail::transform_dimension(values.size());
    std::vector<T> out(values.begin(), values.end());
    hadamard_butterfly(std::span<T>(out));
    if constexpr (std::is_same_v<T, Rational>) {
        const Rational scale(BigInt(1), pow2(static_cast<unsigned>(n)));
        for (auto& v : out) v *= scale;
    } else {
        const T scale = T(1) / static_cast<T>(std::uint64_t{1} << n);
        for (auto& v : out) v *= scale;
    }
    return out;
}

/// Values f(x) from coefficients.
template <class T>
std::vector<T> inverse_walsh_transform(std::span<const T> coeffs) {
    detail::transform_dimension(coeffs.size());
    std::vector<T> out(coeffs.begin(), coeffs.end());
    hadamard_butterfly(std::span<T>(out));
    return out;
}

/// Dense coefficient table of a Walsh polynomial (length 2^N).
template <class Scalar>
std::vector<Scalar> dense_coefficients(const WalshPolynomial<Scalar>& f) {
    const int n = f.dimension();
    if (n > kMaxTransformDimension) throw GuardError("dense table needs N <= 24");
    std::vector<Scalar> table(std::size_t{1} << n, Scalar(0));
    const auto& sets = f.family.sets();
    for (std::size_t i = 0; i < sets.size(); ++i) table[sets[i].bits()] = f.coeffs[i];
    return table;
}

/// All values f(x), indexed by point bits.
template <class Scalar>
std::vector<Scalar> value_table(const WalshPolynomial<Scalar>& f) {
    auto table = dense_coefficients(f);
    hadamard_butterfly(std::span<Scalar>(table));
    return table;
}

}  // namespace cube
