#include "bidomain/spectral.hpp"

#include <cmath>
#include <string>

#include "bidomain/errors.hpp"

namespace bidomain {

void FractionalParams::validate() const {
    if (a1 <= 0.0) throw ParameterError("FractionalParams: a1 must be positive");
    if (!(alpha0 > 0.75 && alpha0 < 1.0))
        throw ParameterError("FractionalParams: alpha0 must lie in (3/4, 1)");
    if (T <= 0.0) throw ParameterError("FractionalParams: T must be positive");
    if (m < 0) throw ParameterError("FractionalParams: m must be non-negative");
}

SpectralPair::SpectralPair(Vec u, Vec w, std::shared_ptr<const EigenBasis> b)
    : U(std::move(u)), W(std::move(w)), basis(std::move(b)) {
    if (U.size() != W.size())
        throw LevelError("SpectralPair: component levels differ");
    if (!basis || U.size() > basis->lambdas.size())
        throw LevelError("SpectralPair: level exceeds basis size");
}

SpectralPair SpectralPair::zero(int level, std::shared_ptr<const EigenBasis> b) {
    return SpectralPair(Vec::Zero(level + 1), Vec::Zero(level + 1), std::move(b));
}

double SpectralPair::znorm() const { return std::max(U.norm(), W.norm()); }

double SpectralPair::alpha_norm(double alpha) const { return fractional_norm(*this, alpha); }

namespace {

void require_same_frame(const SpectralPair& a, const SpectralPair& b, const char* op) {
    if (a.basis != b.basis)
        throw LevelError(std::string(op) + ": operands use different eigenbases");
    if (a.level() != b.level())
        throw LevelError(std::string(op) + ": operands have different levels");
}

}  // namespace

SpectralPair operator+(const SpectralPair& a, const SpectralPair& b) {
    require_same_frame(a, b, "operator+");
    return SpectralPair(a.U + b.U, a.W + b.W, a.basis);
}

SpectralPair operator-(const SpectralPair& a, const SpectralPair& b) {
    require_same_frame(a, b, "operator-");
    return SpectralPair(a.U - b.U, a.W - b.W, a.basis);
}

SpectralPair operator*(double s, const SpectralPair& a) {
    return SpectralPair(s * a.U, s * a.W, a.basis);
}

SpectralPair project_Pm(const SpectralPair& z, int m) {
    if (m < 0 || m > z.level())
        throw LevelError("project_Pm: target level " + std::to_string(m) +
                         " outside [0, " + std::to_string(z.level()) + "]");
    return SpectralPair(z.U.head(m + 1), z.W.head(m + 1), z.basis);
}

SpectralPair tail_from(const SpectralPair& z, int m) {
    if (m < 0 || m > z.level())
        throw LevelError("tail_from: level out of range");
    SpectralPair out = z;
    out.U.head(m + 1).setZero();
    out.W.head(m + 1).setZero();
    return out;
}

double fractional_norm(const SpectralPair& z, double alpha) {
    if (alpha < 0.0)
        throw ParameterError("fractional_norm: negative exponents are out of scope");
    double su = 0.0, sw = 0.0;
    for (int i = 0; i <= z.level(); ++i) {
        const double lam = z.basis->lambdas[i];
        // 0^(2 alpha) = 0 for alpha > 0 (continuity in lambda); at alpha = 0
        // every mode carries lambda^0 = 1 so the norm is sqrt(2) * Z-norm.
        const double powed = alpha == 0.0 ? 1.0 : (lam > 0.0 ? std::pow(lam, 2.0 * alpha) : 0.0);
        const double w = 1.0 + powed;
        su += w * z.U[i] * z.U[i];
        sw += w * z.W[i] * z.W[i];
    }
    return std::sqrt(std::max(su, sw));
}

SpectralPair apply_semigroup(const SpectralPair& z, double t, const FractionalParams& p) {
    if (t < 0.0) throw ParameterError("apply_semigroup: t must be non-negative");
    SpectralPair out = z;
    for (int i = 0; i <= z.level(); ++i) {
        out.U[i] *= std::exp(-(p.a1 + z.basis->lambdas[i]) * t);
        out.W[i] *= std::exp(-p.a1 * t);
    }
    return out;
}

SpectralPair apply_periodic_resolvent(const SpectralPair& z, double t, double tau,
                                      const FractionalParams& p) {
    if (t < 0.0 || t > p.T || tau < 0.0 || tau > p.T)
        throw ParameterError("apply_periodic_resolvent: arguments must lie in [0, T]");
    const double delta = tau <= t ? t - tau : t + p.T - tau;
    SpectralPair out = z;
    for (int i = 0; i <= z.level(); ++i) {
        const double mu_u = p.a1 + z.basis->lambdas[i];
        out.U[i] *= std::exp(-mu_u * delta) / (1.0 - std::exp(-mu_u * p.T));
        out.W[i] *= std::exp(-p.a1 * delta) / (1.0 - std::exp(-p.a1 * p.T));
    }
    return out;
}

double phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 + z / 2.0 + z * z / 6.0;
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-2) {
        // series through z^4; truncation below 1e-13 relative at |z| = 1e-2
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
    }
    return (std::expm1(z) - z) / (z * z);
}

void SpectralPath::validate_uniform() const {
    if (times.size() < 2 || states.size() != static_cast<std::size_t>(times.size()))
        throw ParameterError("SpectralPath: need matching times and states, at least two samples");
    const double h = times[1] - times[0];
    if (h <= 0.0) throw ParameterError("SpectralPath: times must be increasing");
    for (Eigen::Index k = 1; k < times.size(); ++k)
        if (std::abs(times[k] - times[k - 1] - h) > 1e-9 * std::max(1.0, std::abs(h)))
            throw ParameterError("SpectralPath: non-uniform time grid");
}

namespace {

// Exact convolution segment for one mode with rate mu over a step of size h:
// integral over [0, h] of exp(-mu (h - s)) f(s) ds for f linear between f0
// and f1, expressed with phi1/phi2 at z = -mu h. The right endpoint carries
// the phi2 weight: integral of exp(-mu (h - s)) s/h ds = h phi2.
inline double segment(double f0, double f1, double hphi1, double hphi2) {
    return f0 * (hphi1 - hphi2) + f1 * hphi2;
}

// Periodic response samples for a single mode: y' = -mu y + f, y(0) = y(T).
void periodic_mode(double mu, double h, double T, const double* f, int n_steps, double* y) {
    const double z = -mu * h;
    const double E = std::exp(z);
    const double hphi1 = h * phi1(z);
    const double hphi2 = h * phi2(z);

    double duhamel = 0.0;
    for (int k = 0; k < n_steps; ++k)
        duhamel = E * duhamel + segment(f[k], f[k + 1], hphi1, hphi2);

    const double y0 = duhamel / (-std::expm1(-mu * T));
    y[0] = y0;
    for (int k = 0; k < n_steps; ++k)
        y[k + 1] = E * y[k] + segment(f[k], f[k + 1], hphi1, hphi2);
    y[n_steps] = y0;  // closed-form periodicity; the recurrence reproduces it to roundoff
}

}  // namespace

SpectralPath lp_apply(const SpectralPath& f, const FractionalParams& p, Exec exec) {
    f.validate_uniform();
    const int n_steps = static_cast<int>(f.times.size()) - 1;
    const int level = f.level();
    const double h = f.dt();
    const double T = f.times[n_steps] - f.times[0];
    if (std::abs(T - p.T) > 1e-9 * p.T)
        throw ParameterError("lp_apply: path must span exactly one period");
    const double close = (f.states.front() - f.states.back()).znorm();
    if (close > 1e-9 * (1.0 + f.states.front().znorm()))
        throw ParameterError("lp_apply: forcing path is not periodic");

    const auto& basis = f.states.front().basis;
    // mode-major scratch: row r = time series of one scalar component
    Eigen::MatrixXd fs(2 * (level + 1), n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
        fs.col(k).head(level + 1) = f.states[k].U;
        fs.col(k).tail(level + 1) = f.states[k].W;
    }
    Eigen::MatrixXd ys(2 * (level + 1), n_steps + 1);

    const bool par = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int r = 0; r < 2 * (level + 1); ++r) {
        const double mu = r <= level ? p.a1 + basis->lambdas[r] : p.a1;
        Eigen::RowVectorXd frow = fs.row(r);
        Eigen::RowVectorXd yrow(n_steps + 1);
        periodic_mode(mu, h, T, frow.data(), n_steps, yrow.data());
        ys.row(r) = yrow;
    }

    SpectralPath g;
    g.times = f.times;
    g.states.reserve(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k)
        g.states.emplace_back(ys.col(k).head(level + 1), ys.col(k).tail(level + 1), basis);
    return g;
}

double lp_norm_constant(const FractionalParams& p) {
    return 2.0 * (1.0 / p.a1 +
                  std::pow(p.T, 1.0 - p.alpha0) /
                      ((1.0 - p.alpha0) * (-std::expm1(-p.a1 * p.T))));
}

}  // namespace bidomain
