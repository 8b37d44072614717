#pragma once

#include <memory>

#include <Eigen/Dense>

#include "bidomain/elliptic.hpp"
#include "bidomain/exec.hpp"

namespace bidomain {

/// Mass-orthonormal eigenpairs of the discrete bidomain operator:
/// (a-form matrix) psi = lambda * M_H * psi, ascending, lambda_0 = 0 with a
/// constant first eigenvector. Immutable after construction.
struct EigenBasis {
    Vec lambdas;          // m_max + 1 ascending eigenvalues, clamped at 0
    Eigen::MatrixXd Psi;  // heart-nodal coefficients, one eigenvector per column
    double heart_area = 0.0;

    int m_max() const { return static_cast<int>(lambdas.size()) - 1; }
    int heart_dim() const { return static_cast<int>(Psi.rows()); }

    /// Coefficients (v, psi_i) of a heart L2 functional vector (load form):
    /// load.dot(psi_i) for i = 0..m_max.
    Vec project_load(const Vec& heart_load) const { return Psi.transpose() * heart_load; }

    /// Nodal representation of sum_i c_i psi_i.
    Vec synthesize(const Vec& coeffs) const { return Psi.leftCols(coeffs.size()) * coeffs; }
};

/// The nonlocal coupled operator: dense bilinear-form matrix built one
/// coupled solve per heart basis function, its eigenbasis, the endocardial
/// forcing map, and extracellular/torso potential recovery.
class BidomainOperator {
public:
    BidomainOperator(const FormAssembly& forms, Exec exec = Exec::parallel);

    /// a(u, v) = abar(J u, J v) where J subtracts the heart mean.
    double bilinear_a(const Vec& u, const Vec& v) const;

    /// J u = u - (mean of u over the heart).
    Vec apply_J(const Vec& u) const;

    /// Dense symmetric a-form matrix (annihilates constants).
    const Eigen::MatrixXd& aform_matrix() const { return A_; }

    /// Generalized eigensolve of (A, M_H); requires m_max + 1 <= heart dofs.
    std::shared_ptr<const EigenBasis> compute_eigenbasis(int m_max) const;

    /// Spatial forcing from endocardial samples: the L2 representative of
    /// J*(-A_i R_H (A_i+A_e)^{-1} R_H* s_e) via one mass solve, plus the load
    /// form l with l.dot(v) = (forcing, v).
    struct Forcing {
        Vec nodal;  // L2 representative on the heart
        Vec load;   // functional form; coefficients are Psi^T * load
    };
    Forcing compute_forcing(const Vec& s_endo_vals) const;

    /// Full-domain extracellular/torso potential for a given membrane state
    /// and endocardial load (Vec::Zero-sized load means no activation).
    Vec recover_extracellular(const Vec& u_m, const Vec& endo_load) const;

    const CoupledEllipticSolver& elliptic() const { return solver_; }
    const FormAssembly& forms() const { return *forms_; }

private:
    const FormAssembly* forms_;
    CoupledEllipticSolver solver_;
    Eigen::MatrixXd A_;
    Eigen::SimplicialLDLT<SpMat> mass_ldlt_;
};

}  // namespace bidomain
