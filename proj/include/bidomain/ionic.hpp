#pragma once

#include <memory>

#include "bidomain/exec.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/spectral.hpp"

namespace bidomain {

/// Reaction terms of the membrane model. The evolution splits the shifted
/// linear part off, so the projected nonlinearity is
///
///   F(u, w) = (a1 u - f(u, w),  a1 w - g(u, w)),
///
/// with f(u, w) = u (u - a)(u - 1) + w and g(u, w) = -eps (u - gamma w) for
/// the FitzHugh-Nagumo kind. The affine kind f = beta_u u + beta_w w keeps
/// the same g and exists for closed-form checks; the zero kind has F = 0.
struct IonicModel {
    enum class Kind { fhn, linear_test, zero };
    Kind kind = Kind::fhn;

    double a = 0.1;       // threshold, 0 < a < 1
    double eps = 0.01;    // gate rate, > 0
    double gamma = 0.5;   // gate decay, >= 0
    double a1 = 1.0;      // shift shared with FractionalParams
    double beta_u = 1.0;  // linear_test: f = beta_u u + beta_w w
    double beta_w = 0.0;

    void validate() const;

    double f(double u, double w) const;
    double g(double u, double w) const;
};

struct FValue {
    double u, w;
};

/// F(u, w) per the shifted sign convention above.
FValue evaluate_F(double u, double w, const IonicModel& model);

/// Certified upper bound for the Lipschitz constant of F on the sup-norm
/// ball max(|u|, |w|) <= r: grid maximum of the Jacobian max-row-sum plus a
/// derivative-bound remainder. Nondecreasing in r.
double lipschitz_on_ball(const IonicModel& model, double r, int grid = 4096);

/// Tensor-Gauss quadrature for the nonlinearity projection.
struct QuadratureSpec {
    int points_per_axis = 4;
};

/// L2 projection of F onto the eigenbasis:
/// component i of the output is the element-quadrature value of
/// integral over the heart of F(u_m(x), w_m(x)) psi_i(x) dx.
class NonlinearProjector {
public:
    NonlinearProjector(const CoupledMesh& mesh, std::shared_ptr<const EigenBasis> basis,
                       IonicModel model, QuadratureSpec quad = {});

    /// True when the quadrature cannot integrate the cubic against the basis
    /// exactly on rectangles (fewer than 3 points per axis).
    bool aliasing_warning() const { return quad_.points_per_axis < 3; }

    SpectralPair apply(const SpectralPair& z, Exec exec = Exec::parallel) const;

    /// Discrete sup-norm embedding constant: max over nodes of
    /// sqrt(sum_i psi_i(x)^2 / (1 + lambda_i^(2 alpha0))) for modes <= m.
    double embedding_constant(double alpha0, int m) const;

    /// Nodal sup norm max(|u_m|_inf, |w_m|_inf) of a spectral state; exact
    /// for bilinear elements.
    double sup_norm(const SpectralPair& z) const;

    const IonicModel& model() const { return model_; }
    const std::shared_ptr<const EigenBasis>& basis() const { return basis_; }
    const CoupledMesh& mesh() const { return *mesh_; }

private:
    const CoupledMesh* mesh_;
    std::shared_ptr<const EigenBasis> basis_;
    IonicModel model_;
    QuadratureSpec quad_;

    // quadrature tables on the reference square
    std::vector<double> qw_;                    // weights
    std::vector<std::array<double, 4>> qN_;     // shape values per point
};

}  // namespace bidomain
