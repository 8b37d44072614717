#pragma once

#include <vector>

#include "bidomain/ivp.hpp"

namespace bidomain {

/// T-periodic problem data: forcing sampler (periodic and mean-compatible at
/// every sample), calculus parameters, the ball radius the contraction
/// certificates refer to, and the sampling resolution of one period.
struct PeriodicProblem {
    ForcingFn forcing;
    FractionalParams params;
    double r0 = 1.0;               // alpha0-ball radius for the certificates
    int samples_per_period = 256;
    const NonlinearProjector* F = nullptr;
    Exec exec = Exec::parallel;
};

/// Left sides and verdicts of the paper-style contraction conditions:
///   invariance: (L r0 + ||F(0)|| + S_hat) * c <= r0 / 2
///   contraction: c * L * r0 < 1/2
///   premise:    c < 1/2
/// with c = 1/a1 + T^(1-alpha0) / ((1-alpha0)(1 - e^{-a1 T})). The certified
/// iteration factor is 2 c L r0.
struct ContractionCertificates {
    double invariance_lhs = 0.0;
    double contraction_lhs = 0.0;
    double premise_lhs = 0.0;
    bool invariance_ok = false;
    bool contraction_ok = false;
    bool premise_ok = false;
    double certified_factor = 0.0;
};

ContractionCertificates contraction_certificates(double lipschitz, double r0, double F0_norm,
                                                 double S_hat, const FractionalParams& params);

/// Unique T-periodic solution of the linear equation dz/dt = -A_cal z + P_m S.
SpectralPath linear_periodic_solution(const PeriodicProblem& problem);

/// One fixed-point sweep: L_p applied to P_m(F(z) + S) along the path.
/// Throws CertificateScopeError when the input path leaves the r0 ball.
SpectralPath kp_apply(const SpectralPath& z_path, const PeriodicProblem& problem);

struct FixedPointReport {
    SpectralPath solution;
    std::vector<double> update_norms;  // C^alpha0_T distance per iteration
    std::vector<double> ratios;        // successive update-norm quotients
    ContractionCertificates certificates;
    bool converged = false;
    bool diverged = false;
    int iterations = 0;
    double periodic_defect = 0.0;      // alpha0-norm of z(0) - z(T)
    double ratio_estimate = 0.0;       // geometric estimate from the last ratios
};

/// Picard iteration of kp_apply from z_init (defaults to the linear periodic
/// solution when z_init is empty). Stops at update norm <= tol, reports
/// divergence after five consecutive growing updates, and always evaluates
/// the certificates, converged or not.
FixedPointReport fixed_point_solve(const PeriodicProblem& problem, const SpectralPath& z_init,
                                   double tol = 1e-10, int max_iter = 200);

/// sup-t alpha0 distance between two same-grid paths, the C^alpha0_T metric.
double path_distance(const SpectralPath& a, const SpectralPath& b, double alpha0);

}  // namespace bidomain
