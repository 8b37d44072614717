#pragma once

#include <stdexcept>
#include <string>

namespace bidomain {

/// Invalid geometry, resolution, or config-file input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Conductivity tensor fails the symmetric-positive-definite ellipticity check.
struct EllipticityError : std::runtime_error {
    explicit EllipticityError(const std::string& what) : std::runtime_error(what) {}
};

/// Boundary-adjacent tensor does not map the boundary normal to a multiple of itself.
struct FiberError : std::runtime_error {
    explicit FiberError(const std::string& what) : std::runtime_error(what) {}
};

/// Right-hand side of a mean-constrained solve is not mean-free.
struct CompatibilityError : std::runtime_error {
    explicit CompatibilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Spectral truncation level out of range.
struct LevelError : std::runtime_error {
    explicit LevelError(const std::string& what) : std::runtime_error(what) {}
};

/// Scalar argument outside its admissible range.
struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& what) : std::runtime_error(what) {}
};

/// Eigensolver or factorization breakdown.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Trajectory left the ball on which the Lipschitz constant was certified.
struct BallExitError : std::runtime_error {
    BallExitError(const std::string& what, double t)
        : std::runtime_error(what), exit_time(t) {}
    double exit_time;
};

/// Periodic iterate left the radius the contraction certificates refer to.
struct CertificateScopeError : std::runtime_error {
    explicit CertificateScopeError(const std::string& what) : std::runtime_error(what) {}
};

/// Initial-condition sequence cannot be covered by a finite ball family.
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace bidomain
