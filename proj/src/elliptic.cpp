#include "bidomain/elliptic.hpp"

#include <cmath>
#include <vector>

#include "bidomain/errors.hpp"

namespace bidomain {

CoupledEllipticSolver::CoupledEllipticSolver(const FormAssembly& forms) : forms_(&forms) {
    const int n = forms.full_dim();
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(forms.K_full.nonZeros() + 2 * n);
    for (int k = 0; k < forms.K_full.outerSize(); ++k)
        for (SpMat::InnerIterator it(forms.K_full, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int i = 0; i < n; ++i) {
        if (forms.heart_mean[i] != 0.0) {
            trips.emplace_back(i, n, forms.heart_mean[i]);
            trips.emplace_back(n, i, forms.heart_mean[i]);
        }
    }
    SpMat saddle(n + 1, n + 1);
    saddle.setFromTriplets(trips.begin(), trips.end());
    lu_.compute(saddle);
    if (lu_.info() != Eigen::Success)
        throw NumericalError("CoupledEllipticSolver: saddle factorization failed");
}

Vec CoupledEllipticSolver::solve(const Vec& r_heart, double compat_tol) const {
    return solve_full(forms_->extend_by_zero(r_heart), compat_tol);
}

Vec CoupledEllipticSolver::solve_full(const Vec& r_full, double compat_tol) const {
    const double total = r_full.sum();
    const double scale = r_full.cwiseAbs().sum();
    if (std::abs(total) > compat_tol * scale && scale > 0.0)
        throw CompatibilityError("coupled solve: right-hand side is not mean-free");

    const int n = forms_->full_dim();
    Vec rhs = Vec::Zero(n + 1);
    rhs.head(n) = r_full;
    Vec x = lu_.solve(rhs);
    last_mu_ = x[n];
    return x.head(n);
}

Eigen::MatrixXd CoupledEllipticSolver::solve_full_multi(const Eigen::MatrixXd& rhs_full,
                                                        Exec exec) const {
    const int n = forms_->full_dim();
    const int cols = static_cast<int>(rhs_full.cols());
    Eigen::MatrixXd out(n, cols);
    const bool par = exec == Exec::parallel;
    // SparseLU::solve on a const factorization is reentrant; each column is
    // an independent task.
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < cols; ++j) {
        Vec rhs = Vec::Zero(n + 1);
        rhs.head(n) = rhs_full.col(j);
        const Vec x = lu_.solve(rhs);
        out.col(j) = x.head(n);
    }
    return out;
}

}  // namespace bidomain
