#pragma once

// Reflected Gray-code walks over the cube. Consecutive points differ in one
// coordinate, which lets callers update running sums incrementally.

#include "cube/core.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <vector>

namespace cube {

inline constexpr int kMaxEnumerationDimension = 30;

struct GrayStep {
    CubePoint point;
    std::optional<int> flipped;  // 0-based coordinate; empty for the first point
};

namespace detail {

inline void check_enumeration_dimension(int n) {
    if (n < 1) throw DomainError("enumeration dimension must be positive");
    if (n > kMaxEnumerationDimension) {
        throw GuardError("enumeration dimension " + std::to_string(n) + " exceeds cap 30");
    }
}

}  // namespace detail

/// Walk the sub-cube whose top `fixed_bits` coordinates equal `block`,
/// calling visit(bits, flipped) with flipped == -1 on the first point.
/// Coordinates below n - fixed_bits follow the reflected Gray code.
template <class Visit>
void gray_walk_block(int n, int fixed_bits, std::uint64_t block, Visit&& visit) {
    const int free_bits = n - fixed_bits;
    std::uint64_t x = block << free_bits;
    visit(x, -1);
    const std::uint64_t count = std::uint64_t{1} << free_bits;
    for (std::uint64_t i = 1; i < count; ++i) {
        const int j = std::countr_zero(i);
        x ^= std::uint64_t{1} << j;
        visit(x, j);
    }
}

/// Walk all of {-1,+1}^n starting at the all +1 point.
template <class Visit>
void gray_walk(int n, Visit&& visit) {
    detail::check_enumeration_dimension(n);
    gray_walk_block(n, 0, 0, std::forward<Visit>(visit));
}

/// Materialized walk; intended for small n and for tests.
inline std::vector<GrayStep> gray_iterate(int n) {
    detail::check_enumeration_dimension(n);
    std::vector<GrayStep> out;
    out.reserve(std::size_t{1} << n);
    gray_walk(n, [&](std::uint64_t bits, int flip) {
        out.push_back({CubePoint(bits, n), flip < 0 ? std::nullopt : std::optional<int>(flip)});
    });
    return out;
}

}  // namespace cube
