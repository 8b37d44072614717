#include "bidomain/ionic.hpp"

#include <cmath>

#include "bidomain/errors.hpp"

namespace bidomain {

void IonicModel::validate() const {
    if (eps <= 0.0) throw ParameterError("IonicModel: eps must be positive");
    if (!(a > 0.0 && a < 1.0)) throw ParameterError("IonicModel: a must lie in (0, 1)");
    if (gamma < 0.0) throw ParameterError("IonicModel: gamma must be non-negative");
    if (a1 <= 0.0) throw ParameterError("IonicModel: a1 must be positive");
}

double IonicModel::f(double u, double w) const {
    switch (kind) {
        case Kind::fhn: return u * (u - a) * (u - 1.0) + w;
        case Kind::linear_test: return beta_u * u + beta_w * w;
        case Kind::zero: return a1 * u;  // cancels the shift so F = 0
    }
    return 0.0;
}

double IonicModel::g(double u, double w) const {
    if (kind == Kind::zero) return a1 * w;
    return -eps * (u - gamma * w);
}

FValue evaluate_F(double u, double w, const IonicModel& model) {
    model.validate();
    return {model.a1 * u - model.f(u, w), model.a1 * w - model.g(u, w)};
}

double lipschitz_on_ball(const IonicModel& model, double r, int grid) {
    model.validate();
    if (r <= 0.0) throw ParameterError("lipschitz_on_ball: radius must be positive");
    if (model.kind == IonicModel::Kind::zero) return 0.0;

    // Row 2 of the Jacobian of F is constant: |dFw/du| + |dFw/dw|.
    const double row2 = model.eps + std::abs(model.a1 - model.eps * model.gamma);

    if (model.kind == IonicModel::Kind::linear_test) {
        const double row1 = std::abs(model.a1 - model.beta_u) + std::abs(model.beta_w);
        return std::max(row1, row2);
    }

    // FHN: row 1 = |a1 - f_u(u)| + 1 with f_u = 3u^2 - 2(1+a)u + a; maximize
    // on a grid over [-r, r] and add the certified remainder from
    // |d/du row1| <= 6r + 2(1+a).
    double row1_max = 0.0;
    const double h = 2.0 * r / grid;
    for (int k = 0; k <= grid; ++k) {
        const double u = -r + k * h;
        const double fu = 3.0 * u * u - 2.0 * (1.0 + model.a) * u + model.a;
        row1_max = std::max(row1_max, std::abs(model.a1 - fu) + 1.0);
    }
    const double remainder = (6.0 * r + 2.0 * (1.0 + model.a)) * h / 2.0;
    return std::max(row1_max + remainder, row2);
}

namespace {

inline std::array<double, 4> shape(double u, double v) {
    return {(1 - u) * (1 - v), u * (1 - v), u * v, (1 - u) * v};
}

std::vector<double> gauss_nodes(int n);
std::vector<double> gauss_weights(int n);

// Gauss-Legendre rules on [0, 1] up to 8 points; coefficients from the
// standard [-1, 1] tables.
const double kGaussX[8][8] = {
    {0.0},
    {-0.5773502691896257, 0.5773502691896257},
    {-0.7745966692414834, 0.0, 0.7745966692414834},
    {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526},
    {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640},
    {-0.9324695142031521, -0.6612093864662645, -0.2386191860831969, 0.2386191860831969,
     0.6612093864662645, 0.9324695142031521},
    {-0.9491079123427585, -0.7415311855993945, -0.4058451513773972, 0.0,
     0.4058451513773972, 0.7415311855993945, 0.9491079123427585},
    {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
     0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363}};
const double kGaussW[8][8] = {
    {2.0},
    {1.0, 1.0},
    {0.5555555555555556, 0.8888888888888888, 0.5555555555555556},
    {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538},
    {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
     0.2369268850561891},
    {0.1713244923791704, 0.3607615730481386, 0.4679139345726910, 0.4679139345726910,
     0.3607615730481386, 0.1713244923791704},
    {0.1294849661688697, 0.2797053914892766, 0.3818300505051189, 0.4179591836734694,
     0.3818300505051189, 0.2797053914892766, 0.1294849661688697},
    {0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
     0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763}};

std::vector<double> gauss_nodes(int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = 0.5 * (1.0 + kGaussX[n - 1][i]);
    return out;
}
std::vector<double> gauss_weights(int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = 0.5 * kGaussW[n - 1][i];
    return out;
}

}  // namespace

NonlinearProjector::NonlinearProjector(const CoupledMesh& mesh,
                                       std::shared_ptr<const EigenBasis> basis,
                                       IonicModel model, QuadratureSpec quad)
    : mesh_(&mesh), basis_(std::move(basis)), model_(model), quad_(quad) {
    model_.validate();
    if (quad_.points_per_axis < 1 || quad_.points_per_axis > 8)
        throw ParameterError("NonlinearProjector: points_per_axis must be in [1, 8]");

    const auto xs = gauss_nodes(quad_.points_per_axis);
    const auto ws = gauss_weights(quad_.points_per_axis);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            qw_.push_back(ws[i] * ws[j]);
            qN_.push_back(shape(xs[i], xs[j]));
        }
    }
}

SpectralPair NonlinearProjector::apply(const SpectralPair& z, Exec exec) const {
    if (z.basis != basis_) throw LevelError("NonlinearProjector: state uses a different basis");
    const int n_h = basis_->heart_dim();
    const Vec u_nodal = basis_->synthesize(z.U);
    const Vec w_nodal = basis_->synthesize(z.W);

    // Phase 1: per-element load contributions, independent per element.
    const int n_heart_el = mesh_->config.nx_heart * mesh_->config.ny;
    const int nq = static_cast<int>(qw_.size());
    Eigen::MatrixXd contrib_u(4, n_heart_el), contrib_w(4, n_heart_el);

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int k = 0; k < n_heart_el; ++k) {
        const Element& e = mesh_->elements[k];
        const double jac = e.hx * e.hy;
        Eigen::Vector4d lu = Eigen::Vector4d::Zero(), lw = Eigen::Vector4d::Zero();
        for (int q = 0; q < nq; ++q) {
            double u = 0.0, w = 0.0;
            for (int a = 0; a < 4; ++a) {
                u += qN_[q][a] * u_nodal[e.nodes[a]];
                w += qN_[q][a] * w_nodal[e.nodes[a]];
            }
            const double Fu = model_.a1 * u - model_.f(u, w);
            const double Fw = model_.a1 * w - model_.g(u, w);
            const double wq = qw_[q] * jac;
            for (int a = 0; a < 4; ++a) {
                lu[a] += wq * Fu * qN_[q][a];
                lw[a] += wq * Fw * qN_[q][a];
            }
        }
        contrib_u.col(k) = lu;
        contrib_w.col(k) = lw;
    }

    // Phase 2: fixed-order scatter, then basis projection.
    Vec load_u = Vec::Zero(n_h), load_w = Vec::Zero(n_h);
    for (int k = 0; k < n_heart_el; ++k) {
        const Element& e = mesh_->elements[k];
        for (int a = 0; a < 4; ++a) {
            load_u[e.nodes[a]] += contrib_u(a, k);
            load_w[e.nodes[a]] += contrib_w(a, k);
        }
    }

    const int m = z.level();
    return SpectralPair(basis_->Psi.leftCols(m + 1).transpose() * load_u,
                        basis_->Psi.leftCols(m + 1).transpose() * load_w, basis_);
}

double NonlinearProjector::embedding_constant(double alpha0, int m) const {
    const int n_h = basis_->heart_dim();
    double best = 0.0;
    for (int r = 0; r < n_h; ++r) {
        double s = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double lam = basis_->lambdas[i];
            const double w = 1.0 + (lam > 0.0 ? std::pow(lam, 2.0 * alpha0) : 0.0);
            s += basis_->Psi(r, i) * basis_->Psi(r, i) / w;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double NonlinearProjector::sup_norm(const SpectralPair& z) const {
    const Vec u = basis_->synthesize(z.U);
    const Vec w = basis_->synthesize(z.W);
    return std::max(u.cwiseAbs().maxCoeff(), w.cwiseAbs().maxCoeff());
}

}  // namespace bidomain
