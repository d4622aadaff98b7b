#pragma once

// Exact scalars: arbitrary-precision integers and rationals plus the handful
// of combinatorial helpers every module needs.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace cube {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& q) { return boost::multiprecision::numerator(q); }
inline BigInt denominator(const Rational& q) { return boost::multiprecision::denominator(q); }

inline BigInt pow2(unsigned k) {
    BigInt r = 1;
    r <<= k;
    return r;
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

/// C(n, k); zero outside 0 <= k <= n.
inline BigInt binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

/// Row C(n, 0..n).
inline std::vector<BigInt> binomial_row(std::int64_t n) {
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    for (std::int64_t k = 0; k < n; ++k) {
        row[static_cast<std::size_t>(k) + 1] = row[static_cast<std::size_t>(k)] * (n - k) / (k + 1);
    }
    return row;
}

/// Natural log of |x| for x != 0, accurate for integers far beyond double range.
inline double log_abs(const BigInt& x) {
    BigInt a = boost::multiprecision::abs(x);
    const auto bits = static_cast<long>(boost::multiprecision::msb(a)) + 1;
    if (bits <= 60) return std::log(a.convert_to<double>());
    const long shift = bits - 60;
    a >>= static_cast<unsigned>(shift);
    return std::log(a.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

inline double log_abs(const Rational& q) { return log_abs(numerator(q)) - log_abs(denominator(q)); }

/// Nearest double to q, without overflow when numerator and denominator
/// individually exceed the double range.
inline double to_double(const Rational& q) {
    const BigInt& num = numerator(q);
    const BigInt& den = denominator(q);
    if (num == 0) return 0.0;
    BigInt a = boost::multiprecision::abs(num);
    BigInt b = den;
    const long na = static_cast<long>(boost::multiprecision::msb(a));
    const long nb = static_cast<long>(boost::multiprecision::msb(b));
    // Scale so the integer quotient carries 64 significant bits.
    const long shift = 64 - (na - nb);
    if (shift > 0) {
        a <<= static_cast<unsigned>(shift);
    } else {
        b <<= static_cast<unsigned>(-shift);
    }
    BigInt quo = a / b;
    if (quo * b != a) quo |= 1;  // sticky bit for correct rounding
    const double mant = quo.convert_to<double>();
    const double v = std::ldexp(mant, static_cast<int>(-shift));
    return num < 0 ? -v : v;
}

/// Exact value of a finite double.
inline Rational from_double(double v) {
    int exp = 0;
    const double mant = std::frexp(v, &exp);
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r = BigInt(scaled);
    if (exp >= 0) {
        r *= Rational(pow2(static_cast<unsigned>(exp)));
    } else {
        r /= Rational(pow2(static_cast<unsigned>(-exp)));
    }
    return r;
}

inline std::string to_string(const BigInt& x) { return x.str(); }

}  // namespace cube
