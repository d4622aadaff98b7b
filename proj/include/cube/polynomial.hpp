#pragma once

#include "cube/rational.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace cube {

/// Dense univariate polynomial with exact rational coefficients, lowest
/// degree first. The zero polynomial has no coefficients.
class RationalPolynomial {
public:
    RationalPolynomial() = default;
    explicit RationalPolynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

    static RationalPolynomial constant(const Rational& v) { return RationalPolynomial({v}); }

    static RationalPolynomial monomial(std::size_t k, const Rational& v = 1) {
        std::vector<Rational> c(k + 1, Rational(0));
        c[k] = v;
        return RationalPolynomial(std::move(c));
    }

    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(std::size_t k) const { return k < c_.size() ? c_[k] : Rational(0); }

    Rational operator()(const Rational& t) const {
        Rational acc = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
        return acc;
    }

    RationalPolynomial& operator+=(const RationalPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }

    RationalPolynomial& operator-=(const RationalPolynomial& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rational(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }

    RationalPolynomial& operator*=(const Rational& s) {
        for (auto& v : c_) v *= s;
        trim();
        return *this;
    }

    RationalPolynomial& operator/=(const Rational& s) {
        for (auto& v : c_) v /= s;
        return *this;
    }

    friend RationalPolynomial operator+(RationalPolynomial a, const RationalPolynomial& b) { return a += b; }
    friend RationalPolynomial operator-(RationalPolynomial a, const RationalPolynomial& b) { return a -= b; }
    friend RationalPolynomial operator*(RationalPolynomial a, const Rational& s) { return a *= s; }
    friend RationalPolynomial operator*(const Rational& s, RationalPolynomial a) { return a *= s; }
    friend RationalPolynomial operator/(RationalPolynomial a, const Rational& s) { return a /= s; }

    friend RationalPolynomial operator*(const RationalPolynomial& a, const RationalPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> c(a.c_.size() + b.c_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return RationalPolynomial(std::move(c));
    }

    /// Multiply by t.
    RationalPolynomial shifted() const {
        if (is_zero()) return {};
        std::vector<Rational> c(c_.size() + 1, Rational(0));
        std::copy(c_.begin(), c_.end(), c.begin() + 1);
        return RationalPolynomial(std::move(c));
    }

    friend bool operator==(const RationalPolynomial&, const RationalPolynomial&) = default;

    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c_[i].str() + ")";
            if (i > 0) out += "*t^" + std::to_string(i);
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }

    std::vector<Rational> c_;
};

}  // namespace cube
