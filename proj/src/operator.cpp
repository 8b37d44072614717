#include "bidomain/operator.hpp"

#include <cmath>
#include <string>

#include "bidomain/errors.hpp"

namespace bidomain {

BidomainOperator::BidomainOperator(const FormAssembly& forms, Exec exec)
    : forms_(&forms), solver_(forms) {
    const int n_h = forms.heart_dim();
    const int n_f = forms.full_dim();
    const bool par = exec == Exec::parallel;

    // One coupled solve per heart basis function: W_j solves
    // (A_i + A_e) W_j = R_H* A_i e_j with zero heart mean.
    Eigen::MatrixXd Ki_dense = Eigen::MatrixXd(forms.K_i);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n_f, n_h);
    rhs.topRows(n_h) = Ki_dense;
    Eigen::MatrixXd W = solver_.solve_full_multi(rhs, exec);

    A_.resize(n_h, n_h);
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < n_h; ++j)
        A_.col(j) = Ki_dense.col(j) - forms.K_i * W.col(j).head(n_h);

    // The exact matrix is symmetric; remove solver roundoff so the
    // generalized eigensolve sees a symmetric pencil.
    A_ = 0.5 * (A_ + A_.transpose()).eval();

    mass_ldlt_.compute(forms.M_H);
    if (mass_ldlt_.info() != Eigen::Success)
        throw NumericalError("BidomainOperator: mass factorization failed");
}

Vec BidomainOperator::apply_J(const Vec& u) const {
    const int n_h = forms_->heart_dim();
    const double mean = forms_->heart_mean.head(n_h).dot(u) / forms_->mesh->heart_area;
    return u.array() - mean;
}

double BidomainOperator::bilinear_a(const Vec& u, const Vec& v) const {
    return apply_J(v).dot(A_ * apply_J(u));
}

std::shared_ptr<const EigenBasis> BidomainOperator::compute_eigenbasis(int m_max) const {
    const int n_h = forms_->heart_dim();
    if (m_max < 0 || m_max + 1 > n_h)
        throw ParameterError("compute_eigenbasis: need m_max + 1 <= heart dofs, got m_max = " +
                             std::to_string(m_max) + " with " + std::to_string(n_h) + " dofs");

    Eigen::MatrixXd M_dense = Eigen::MatrixXd(forms_->M_H);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A_, M_dense);
    if (ges.info() != Eigen::Success)
        throw NumericalError("compute_eigenbasis: generalized eigensolve failed");

    auto basis = std::make_shared<EigenBasis>();
    basis->heart_area = forms_->mesh->heart_area;
    basis->lambdas = ges.eigenvalues().head(m_max + 1);
    basis->Psi = ges.eigenvectors().leftCols(m_max + 1);

    if (basis->lambdas[0] < -1e-9)
        throw NumericalError("compute_eigenbasis: negative leading eigenvalue " +
                             std::to_string(basis->lambdas[0]));
    for (int i = 0; i <= m_max; ++i) {
        if (basis->lambdas[i] < 0.0) basis->lambdas[i] = 0.0;
        // Deterministic orientation: first significant coefficient positive.
        const double thresh = 1e-8 * basis->Psi.col(i).cwiseAbs().maxCoeff();
        for (int r = 0; r < n_h; ++r) {
            const double c = basis->Psi(r, i);
            if (std::abs(c) > thresh) {
                if (c < 0.0) basis->Psi.col(i) = -basis->Psi.col(i);
                break;
            }
        }
    }
    return basis;
}

BidomainOperator::Forcing BidomainOperator::compute_forcing(const Vec& s_endo_vals) const {
    const auto compat = check_compatibility(*forms_->mesh, s_endo_vals);
    if (!compat.ok)
        throw CompatibilityError("compute_forcing: endocardial activation is not mean-free, defect " +
                                 std::to_string(compat.defect));
    const Vec load_endo = assemble_endo_load(*forms_->mesh, s_endo_vals);
    const Vec W = solver_.solve(load_endo);
    Forcing f;
    f.load = -(forms_->K_i * W.head(forms_->heart_dim()));
    f.nodal = mass_ldlt_.solve(f.load);
    return f;
}

Vec BidomainOperator::recover_extracellular(const Vec& u_m, const Vec& endo_load) const {
    Vec r = -(forms_->K_i * apply_J(u_m));
    if (endo_load.size() != 0) r += endo_load;
    return solver_.solve(r);
}

}  // namespace bidomain
