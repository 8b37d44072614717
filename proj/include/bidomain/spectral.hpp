#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bidomain/operator.hpp"

namespace bidomain {

/// Shift and exponent parameters of the fractional calculus. alpha0 must lie
/// strictly inside (3/4, 1); the rate bounds degenerate at alpha0 = 1.
struct FractionalParams {
    double a1 = 1.0;
    double alpha0 = 0.8;
    double T = 1.0;
    int m = 0;

    void validate() const;
};

/// A state z = (u, w) as coefficient vectors in a shared eigenbasis.
/// The Z norm is max of the two Euclidean norms; the alpha norm weights
/// mode i by sqrt(1 + lambda_i^(2 alpha)), with 0^(2 alpha) = 0.
struct SpectralPair {
    Vec U, W;
    std::shared_ptr<const EigenBasis> basis;

    SpectralPair() = default;
    SpectralPair(Vec u, Vec w, std::shared_ptr<const EigenBasis> b);

    int level() const { return static_cast<int>(U.size()) - 1; }

    double znorm() const;
    double alpha_norm(double alpha) const;

    static SpectralPair zero(int level, std::shared_ptr<const EigenBasis> b);
};

SpectralPair operator+(const SpectralPair& a, const SpectralPair& b);
SpectralPair operator-(const SpectralPair& a, const SpectralPair& b);
SpectralPair operator*(double s, const SpectralPair& a);

/// Truncation to the first m+1 modes. Throws LevelError when m exceeds the
/// input level.
SpectralPair project_Pm(const SpectralPair& z, int m);

/// Components m+1..level of z as a pair at the same level (zero head); the
/// directly computable form of (P_level - P_m) z.
SpectralPair tail_from(const SpectralPair& z, int m);

/// max over the two components of sqrt(sum (1 + lambda_i^(2 alpha)) c_i^2).
double fractional_norm(const SpectralPair& z, double alpha);

/// e^{-t A_cal}: U_i *= exp(-(a1 + lambda_i) t), W_i *= exp(-a1 t).
SpectralPair apply_semigroup(const SpectralPair& z, double t, const FractionalParams& p);

/// Periodic resolvent kernel R(t, tau) applied per mode:
/// exp(-mu delta) / (1 - exp(-mu T)) with delta = t - tau, or t + T - tau on
/// the wrapped branch.
SpectralPair apply_periodic_resolvent(const SpectralPair& z, double t, double tau,
                                      const FractionalParams& p);

/// Time-sampled coefficient path on a uniform grid including both endpoints.
struct SpectralPath {
    Vec times;
    std::vector<SpectralPair> states;

    int level() const { return states.empty() ? -1 : states.front().level(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

    /// Throws ParameterError unless the grid is uniform.
    void validate_uniform() const;
};

/// Periodic integral operator g(t) = integral over [0, T] of R(t, tau) f(tau):
/// the unique T-periodic solution of dz/dt = -A_cal z + f for the
/// piecewise-linear interpolant of f, integrated mode by mode with the exact
/// exponential-times-polynomial antiderivative. g(0) = g(T) holds exactly.
SpectralPath lp_apply(const SpectralPath& f, const FractionalParams& p,
                      Exec exec = Exec::parallel);

/// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, series-guarded
/// near zero.
double phi1(double z);
double phi2(double z);

/// Lemma-style norm constant of the periodic integral operator:
/// 2 (1/a1 + T^(1-alpha0) / ((1-alpha0)(1 - e^{-a1 T}))).
double lp_norm_constant(const FractionalParams& p);

}  // namespace bidomain
