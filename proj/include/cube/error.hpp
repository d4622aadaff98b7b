#pragma once

#include <stdexcept>
#include <string>

namespace cube {

/// Operands live on cubes of different dimension.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A size guard (dimension cap, enumeration budget) was exceeded.
class GuardError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Parameters outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A floating-point procedure failed its own accuracy certificate.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_domain(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

inline void require_guard(bool ok, const std::string& what) {
    if (!ok) throw GuardError(what);
}

}  // namespace detail
}  // namespace cube
