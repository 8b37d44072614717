#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "bidomain/conductivity.hpp"
#include "bidomain/exec.hpp"
#include "bidomain/mesh.hpp"

namespace bidomain {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// Stiffness/mass matrices and boundary functionals of the coupled strip.
///
/// Heart matrices act on the heart node prefix [0, num_heart_nodes); K_full
/// acts on the whole domain with sigma_i + sigma_e on heart elements and
/// sigma_t on torso elements. heart_mean realizes the functional
/// v -> integral of v over the heart; endo quadrature realizes
/// v -> integral of s_e * v over the endocardial face.
struct FormAssembly {
    const CoupledMesh* mesh = nullptr;
    ConductivityField cond;

    SpMat K_i;       // heart, sigma_i
    SpMat K_e;       // heart, sigma_e
    SpMat K_full;    // full domain, sigma_i + sigma_e | sigma_t
    SpMat M_H;       // heart mass
    SpMat K_h1;      // heart, unit tensor (H1 seminorm)
    SpMat K_h1full;  // full domain, unit tensor

    Vec heart_mean;  // full-domain vector h with h.dot(v) = integral_heart v

    int heart_dim() const { return mesh->num_heart_nodes; }
    int full_dim() const { return mesh->num_nodes; }

    /// Zero-extends a heart functional/vector to the full domain.
    Vec extend_by_zero(const Vec& heart_vec) const;
    /// Restricts a full-domain vector to the heart prefix.
    Vec restrict_heart(const Vec& full_vec) const;
};

/// Assembles all forms. Validates the conductivity field first.
FormAssembly assemble_forms(const CoupledMesh& mesh, const ConductivityField& cond,
                            Exec exec = Exec::parallel);

/// Gauss points on the endocardial edges, ordered edge by edge. Sample the
/// activation trace here before calling assemble_endo_load.
struct EndoQuadrature {
    std::vector<double> y;  // quadrature ordinates
    std::vector<double> w;  // quadrature weights
};
EndoQuadrature endo_quadrature(const CoupledMesh& mesh);

/// Heart load vector l with l.dot(v) ~ integral over the endocardium of
/// s_e * v, for s_e sampled at the endo_quadrature points.
Vec assemble_endo_load(const CoupledMesh& mesh, const Vec& s_vals);

struct CompatibilityCheck {
    double defect;  // |integral of s_e over the endocardium|
    bool ok;
};

/// Zero-mean check for the endocardial activation; tolerance is
/// tol * y_period * max|s_e|.
CompatibilityCheck check_compatibility(const CoupledMesh& mesh, const Vec& s_vals,
                                       double tol = 1e-10);

}  // namespace bidomain
