#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csf {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Violated PlanarCurve / RadialEndSpec invariant.
class CurveError : public Error {
public:
    using Error::Error;
};

/// Adjacent tangent directions too far apart to lift continuously (under-resolved curve).
class UnwrapError : public Error {
public:
    UnwrapError(std::size_t node, double jump)
        : Error("tangent unwrap failed at node " + std::to_string(node) + " (jump " + std::to_string(jump) +
                " rad); curve is under-resolved"),
          node_(node), jump_(jump) {}
    [[nodiscard]] std::size_t node() const noexcept { return node_; }
    [[nodiscard]] double jump() const noexcept { return jump_; }

private:
    std::size_t node_;
    double jump_;
};

class NotEmbeddedError : public Error {
public:
    NotEmbeddedError(std::size_t first, std::size_t second)
        : Error("curve is not embedded: segments " + std::to_string(first) + " and " + std::to_string(second) +
                " intersect"),
          first_(first), second_(second) {}
    [[nodiscard]] std::size_t first_segment() const noexcept { return first_; }
    [[nodiscard]] std::size_t second_segment() const noexcept { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Arguments outside the domain of an operation (e.g. v > w, oval past extinction).
class DomainError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A time step could not be completed.
class StepError : public Error {
public:
    using Error::Error;
};

/// Expander profile construction failed (bracketing or cross-validation).
class ProfileError : public Error {
public:
    using Error::Error;
};

}  // namespace csf
