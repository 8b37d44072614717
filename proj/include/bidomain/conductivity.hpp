#pragma once

#include <vector>

#include "bidomain/mesh.hpp"

namespace bidomain {

/// Symmetric 2x2 tensor stored as (xx, yy, xy).
struct Tensor2 {
    double xx = 1.0, yy = 1.0, xy = 0.0;

    double eig_min() const;
    double eig_max() const;
};

/// Piecewise-constant conductivities with global ellipticity bounds.
/// Region-constant tensors by default; the per-element tables override them
/// when non-empty (heart table indexed by heart element, torso table by
/// torso element, in mesh element order). All tensors must have eigenvalues
/// inside [m_ell, M_ell].
struct ConductivityField {
    Tensor2 sigma_i{1.0, 1.0, 0.0};
    Tensor2 sigma_e{2.0, 2.0, 0.0};
    Tensor2 sigma_t{1.5, 1.5, 0.0};
    std::vector<Tensor2> sigma_i_elem;
    std::vector<Tensor2> sigma_e_elem;
    std::vector<Tensor2> sigma_t_elem;
    double m_ell = 1.0;
    double M_ell = 2.0;

    Tensor2 heart_i(int heart_elem) const {
        return sigma_i_elem.empty() ? sigma_i : sigma_i_elem[heart_elem];
    }
    Tensor2 heart_e(int heart_elem) const {
        return sigma_e_elem.empty() ? sigma_e : sigma_e_elem[heart_elem];
    }
    Tensor2 torso(int torso_elem) const {
        return sigma_t_elem.empty() ? sigma_t : sigma_t_elem[torso_elem];
    }
};

/// SPD bounds for every element tensor, and the boundary-normal alignment of
/// the heart tensors on elements touching the endo or epi faces (axis-aligned
/// normals: the xy coupling must vanish there and the normal coefficient must
/// stay >= m_ell). Throws EllipticityError or FiberError.
void validate_conductivity(const CoupledMesh& mesh, const ConductivityField& cond);

}  // namespace bidomain
