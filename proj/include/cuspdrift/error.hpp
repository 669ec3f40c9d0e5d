#pragma once

#include <complex>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace cuspdrift {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation (Im z <= 0, s = 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation at (or numerically at) a pole. Carries the pole location.
class PoleError : public DomainError {
public:
    PoleError(const std::string& what, std::complex<double> where)
        : DomainError(what), location_(where) {}
    std::complex<double> location() const noexcept { return location_; }

private:
    std::complex<double> location_;
};

/// A series tail, quadrature or extrapolation could not meet its tolerance.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Requested combination is valid mathematically but not implemented here.
class CapabilityError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. line() is 1-based, 0 when not tied to a line.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

template <class... Args>
std::string concat(const Args&... args) {
    std::ostringstream os;
    os.precision(17);
    (os << ... << args);
    return os.str();
}

}  // namespace detail
}  // namespace cuspdrift
