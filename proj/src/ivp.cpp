#include "bidomain/ivp.hpp"

#include <cmath>
#include <string>

#include "bidomain/errors.hpp"

namespace bidomain {

ForcingFn zero_forcing(int level, std::shared_ptr<const EigenBasis> basis) {
    SpectralPair z = SpectralPair::zero(level, std::move(basis));
    return [z](double) { return z; };
}

ForcingFn constant_forcing(SpectralPair s) {
    return [s = std::move(s)](double) { return s; };
}

ForcingFn separable_forcing(std::function<double(double)> profile, SpectralPair base) {
    return [profile = std::move(profile), base = std::move(base)](double t) {
        SpectralPair out = base;
        out.U *= profile(t);
        out.W.setZero();
        return out;
    };
}

namespace {

struct ModeRates {
    Vec E_u, hphi1_u, hphi2_u;
    double E_w, hphi1_w, hphi2_w;

    ModeRates(const EigenBasis& basis, int level, double a1, double h) {
        E_u.resize(level + 1);
        hphi1_u.resize(level + 1);
        hphi2_u.resize(level + 1);
        for (int i = 0; i <= level; ++i) {
            const double z = -(a1 + basis.lambdas[i]) * h;
            E_u[i] = std::exp(z);
            hphi1_u[i] = h * phi1(z);
            hphi2_u[i] = h * phi2(z);
        }
        const double zw = -a1 * h;
        E_w = std::exp(zw);
        hphi1_w = h * phi1(zw);
        hphi2_w = h * phi2(zw);
    }
};

int step_count(double t1, double dt) {
    if (t1 <= 0.0) throw ParameterError("solve_ivp: t1 must be positive");
    if (dt <= 0.0) throw ParameterError("solve_ivp: dt must be positive");
    const double ratio = t1 / dt;
    const int n = static_cast<int>(std::lround(ratio));
    if (n < 1 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw ParameterError("solve_ivp: dt must divide t1");
    return n;
}

}  // namespace

Trajectory solve_ivp(const SpectralPair& z0, const NonlinearProjector& F, const ForcingFn& S,
                     const FractionalParams& params, const IvpOptions& opt) {
    params.validate();
    if (F.model().a1 != params.a1)
        throw ParameterError("solve_ivp: ionic and fractional a1 shifts disagree");
    const int n = step_count(opt.t1, opt.dt);
    const int level = z0.level();
    const ModeRates rates(*z0.basis, level, params.a1, opt.dt);

    auto check_ball = [&](const SpectralPair& z, double t) {
        if (opt.ball_radius > 0.0 && F.sup_norm(z) > opt.ball_radius)
            throw BallExitError("solve_ivp: state left the certified ball at t = " +
                                    std::to_string(t),
                                t);
    };
    check_ball(z0, 0.0);

    Trajectory traj;
    traj.dt = opt.dt;
    traj.path.times = Vec::LinSpaced(n + 1, 0.0, opt.t1);
    traj.path.states.reserve(n + 1);
    traj.path.states.push_back(z0);

    SpectralPair z = z0;
    for (int k = 0; k < n; ++k) {
        const double t = traj.path.times[k];
        const SpectralPair N0 = F.apply(z, opt.exec) + S(t);
        SpectralPair a = z;
        a.U = rates.E_u.cwiseProduct(z.U) + rates.hphi1_u.cwiseProduct(N0.U);
        a.W = rates.E_w * z.W + rates.hphi1_w * N0.W;
        const SpectralPair N1 = F.apply(a, opt.exec) + S(t + opt.dt);
        SpectralPair znew = a;
        znew.U += rates.hphi2_u.cwiseProduct(N1.U - N0.U);
        znew.W += rates.hphi2_w * (N1.W - N0.W);

        check_ball(znew, traj.path.times[k + 1]);
        traj.path.states.push_back(znew);
        z = znew;
    }
    return traj;
}

double mild_residual(const Trajectory& traj, const NonlinearProjector& F, const ForcingFn& S,
                     const FractionalParams& params) {
    const auto& path = traj.path;
    path.validate_uniform();
    const int n = static_cast<int>(path.times.size()) - 1;
    const int level = path.level();
    const double h = path.dt();
    const ModeRates rates(*path.states.front().basis, level, params.a1, h);

    std::vector<SpectralPair> N;
    N.reserve(n + 1);
    for (int k = 0; k <= n; ++k) N.push_back(F.apply(path.states[k]) + S(path.times[k]));

    // Duhamel reconstruction z_hat(t_k) = e^{-t_k A} z0 + I_k with the same
    // exact piecewise-linear segments the periodic operator uses.
    const SpectralPair& z0 = path.states.front();
    Vec decay_u = Vec::Ones(level + 1);
    double decay_w = 1.0;
    Vec I_u = Vec::Zero(level + 1), I_w = Vec::Zero(level + 1);

    double worst = 0.0;
    for (int k = 1; k <= n; ++k) {
        I_u = rates.E_u.cwiseProduct(I_u) +
              (rates.hphi1_u - rates.hphi2_u).cwiseProduct(N[k - 1].U) +
              rates.hphi2_u.cwiseProduct(N[k].U);
        I_w = rates.E_w * I_w + (rates.hphi1_w - rates.hphi2_w) * N[k - 1].W +
              rates.hphi2_w * N[k].W;
        decay_u = decay_u.cwiseProduct(rates.E_u);
        decay_w *= rates.E_w;

        SpectralPair hat = path.states[k];
        hat.U = decay_u.cwiseProduct(z0.U) + I_u;
        hat.W = decay_w * z0.W + I_w;
        worst = std::max(worst, (path.states[k] - hat).znorm());
    }
    return worst;
}

GapEntry cauchy_gap(const Trajectory& traj_m, const Trajectory& traj_n,
                    const NonlinearProjector& F_n, const ForcingFn& S_n, double lipschitz,
                    const FractionalParams& params) {
    const int m = traj_m.level();
    const int n_level = traj_n.level();
    if (m > n_level) throw LevelError("cauchy_gap: expected m <= n");
    if (traj_m.path.times.size() != traj_n.path.times.size() ||
        (traj_m.path.times - traj_n.path.times).cwiseAbs().maxCoeff() > 1e-12)
        throw ParameterError("cauchy_gap: trajectories use different time grids");

    const int K = static_cast<int>(traj_n.path.times.size());

    GapEntry entry;
    entry.m = m;
    entry.n = n_level;

    double sup_gap = 0.0, sup_s_tail = 0.0, sup_f_tail = 0.0;
    for (int k = 0; k < K; ++k) {
        const SpectralPair& zn = traj_n.path.states[k];
        SpectralPair diff = zn;
        diff.U.head(m + 1) -= traj_m.path.states[k].U;
        diff.W.head(m + 1) -= traj_m.path.states[k].W;
        sup_gap = std::max(sup_gap, diff.alpha_norm(params.alpha0));

        sup_s_tail = std::max(sup_s_tail, tail_from(S_n(traj_n.path.times[k]), m).znorm());
        sup_f_tail = std::max(sup_f_tail, tail_from(F_n.apply(zn), m).znorm());
    }

    const double t1 = traj_n.path.times[K - 1] - traj_n.path.times[0];
    const double kernel_mass = std::pow(t1, 1.0 - params.alpha0) / (1.0 - params.alpha0);
    entry.gap = sup_gap;
    entry.contraction_q = lipschitz * kernel_mass;
    entry.hypotheses_hold = entry.contraction_q < 1.0;

    SpectralPair z0_diff = traj_n.path.states.front();
    z0_diff.U.head(m + 1) -= traj_m.path.states.front().U;
    z0_diff.W.head(m + 1) -= traj_m.path.states.front().W;
    const double head = z0_diff.alpha_norm(params.alpha0);

    if (entry.hypotheses_hold) {
        entry.bound =
            (head + (sup_s_tail + sup_f_tail) * kernel_mass) / (1.0 - entry.contraction_q);
        entry.within_bound = entry.gap <= entry.bound;
    }
    return entry;
}

CbCertificate cb_certificate(const std::vector<SpectralPair>& z0_sequence, double alpha0,
                             double delta_floor) {
    if (z0_sequence.size() < 2)
        throw CertificationError("cb_certificate: need at least two initial conditions");
    const SpectralPair& limit = z0_sequence.back();
    const int top = limit.level();

    std::vector<double> d;
    for (const auto& z : z0_sequence) {
        if (z.level() > top || z.basis != limit.basis)
            throw CertificationError("cb_certificate: sequence elements exceed the limit level");
        SpectralPair diff = limit;
        diff.U.head(z.level() + 1) -= z.U;
        diff.W.head(z.level() + 1) -= z.W;
        d.push_back(diff.alpha_norm(alpha0));
    }

    const double slack = 1e-12 * (1.0 + d.front());
    for (std::size_t k = 1; k < d.size(); ++k)
        if (d[k] > d[k - 1] + slack)
            throw CertificationError("cb_certificate: tail gaps are not decreasing (element " +
                                     std::to_string(k) + ")");

    CbCertificate cert;
    cert.delta = delta_floor;
    int m0 = static_cast<int>(d.size()) - 1;
    while (m0 > 0 && d[m0 - 1] <= cert.delta / 2.0) --m0;
    cert.m0 = m0;
    for (int k = 0; k < m0; ++k) cert.centers.push_back(z0_sequence[k]);
    cert.centers.push_back(limit);
    return cert;
}

double contraction_horizon(double lipschitz, double alpha0, double q_target) {
    if (lipschitz <= 0.0) throw ParameterError("contraction_horizon: lipschitz must be positive");
    return std::pow(q_target * (1.0 - alpha0) / lipschitz, 1.0 / (1.0 - alpha0));
}

}  // namespace bidomain
