#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "bidomain/assembly.hpp"

namespace bidomain {

/// Factorization of the mean-constrained coupled conductivity problem
///
///   K_full * W + mu * heart_mean = r,   heart_mean . W = 0,
///
/// as one saddle-point system with a single Lagrange multiplier. The
/// multiplier equals (integral of r) / |heart| and doubles as a
/// compatibility monitor.
class CoupledEllipticSolver {
public:
    explicit CoupledEllipticSolver(const FormAssembly& forms);

    /// Solve with a heart functional (zero-extended to the full domain).
    /// Throws CompatibilityError when |r.sum()| exceeds tol * ||r||_1.
    Vec solve(const Vec& r_heart, double compat_tol = 1e-8) const;

    /// Solve with a full-domain functional; same constraint and checks.
    Vec solve_full(const Vec& r_full, double compat_tol = 1e-8) const;

    /// Multi right-hand-side variant of solve_full, one column per load,
    /// optionally solved in parallel against the shared factorization.
    /// Skips the compatibility check; intended for operator assembly where
    /// the columns are mean-free by construction.
    Eigen::MatrixXd solve_full_multi(const Eigen::MatrixXd& rhs_full,
                                     Exec exec = Exec::parallel) const;

    double last_multiplier() const { return last_mu_; }
    const FormAssembly& forms() const { return *forms_; }

private:
    const FormAssembly* forms_;
    Eigen::SparseLU<SpMat> lu_;
    mutable double last_mu_ = 0.0;
};

}  // namespace bidomain
