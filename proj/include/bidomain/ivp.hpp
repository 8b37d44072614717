#pragma once

#include <functional>
#include <vector>

#include "bidomain/ionic.hpp"
#include "bidomain/spectral.hpp"

namespace bidomain {

/// Spectral forcing sampler S(t) = (s(t)-coefficients, 0) at a fixed level.
using ForcingFn = std::function<SpectralPair(double)>;

ForcingFn zero_forcing(int level, std::shared_ptr<const EigenBasis> basis);
ForcingFn constant_forcing(SpectralPair s);
/// profile(t) * base on the U block.
ForcingFn separable_forcing(std::function<double(double)> profile, SpectralPair base);

/// Time-sampled Galerkin solution with integrator metadata.
struct Trajectory {
    SpectralPath path;
    double dt = 0.0;
    int method_order = 2;

    int level() const { return path.level(); }
};

struct IvpOptions {
    double t1 = 1.0;
    double dt = 1e-3;
    /// Pointwise sup-norm radius of the ball the Lipschitz constant was
    /// certified on; 0 disables the containment check. Leaving the ball is a
    /// hard BallExitError, never a clamp.
    double ball_radius = 0.0;
    Exec exec = Exec::parallel;
};

/// Exponential two-stage (ETD2RK) integrator for
/// dz/dt = -A_cal z + P_m F(z) + P_m S(t): the diagonal linear part is
/// integrated exactly, the nonlinearity by a second-order predictor/corrector
/// with phi-function weights.
Trajectory solve_ivp(const SpectralPair& z0, const NonlinearProjector& F, const ForcingFn& S,
                     const FractionalParams& params, const IvpOptions& opt);

/// Sup over grid times of the Z-norm defect between the stored states and
/// the Duhamel reconstruction, with F + S interpolated piecewise-linearly
/// between the stored samples and integrated exactly per mode.
double mild_residual(const Trajectory& traj, const NonlinearProjector& F, const ForcingFn& S,
                     const FractionalParams& params);

/// One row of the Cauchy-sequence diagnostics between levels m < n.
struct GapEntry {
    int m = 0, n = 0;
    double gap = 0.0;             // sup_t alpha0-norm of z_m - z_n
    double bound = 0.0;           // rate-bound right side, vector-tail form
    double contraction_q = 0.0;   // L t1^(1-alpha0) / (1-alpha0)
    bool hypotheses_hold = false; // contraction_q < 1
    bool within_bound = false;
};

/// Measures the gap between two same-grid trajectories (n-level embedding of
/// the m-level run) and evaluates the rate bound with the directly computed
/// projector tails of S and F(z_n) along the reference trajectory.
GapEntry cauchy_gap(const Trajectory& traj_m, const Trajectory& traj_n,
                    const NonlinearProjector& F_n, const ForcingFn& S_n, double lipschitz,
                    const FractionalParams& params);

/// Finite ball family covering a convergent initial-condition sequence:
/// tail elements share the delta/2 ball around the limit, head elements get
/// individual balls. Throws CertificationError when the tail gaps do not
/// decrease.
struct CbCertificate {
    double delta = 0.0;
    int m0 = 0;
    std::vector<SpectralPair> centers;
};
CbCertificate cb_certificate(const std::vector<SpectralPair>& z0_sequence, double alpha0,
                             double delta_floor = 1e-3);

/// Largest horizon with L t1^(1-alpha0) / (1-alpha0) <= q_target.
double contraction_horizon(double lipschitz, double alpha0, double q_target = 0.5);

}  // namespace bidomain
