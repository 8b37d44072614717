#include "bidomain/periodic.hpp"

#include <cmath>
#include <string>

#include "bidomain/errors.hpp"

namespace bidomain {

ContractionCertificates contraction_certificates(double lipschitz, double r0, double F0_norm,
                                                 double S_hat, const FractionalParams& params) {
    params.validate();
    if (lipschitz < 0.0 || r0 <= 0.0 || F0_norm < 0.0 || S_hat < 0.0)
        throw ParameterError("contraction_certificates: inputs must be non-negative, r0 positive");

    const double c = 0.5 * lp_norm_constant(params);
    ContractionCertificates out;
    out.invariance_lhs = (lipschitz * r0 + F0_norm + S_hat) * c;
    out.contraction_lhs = c * lipschitz * r0;
    out.premise_lhs = c;
    out.invariance_ok = out.invariance_lhs <= r0 / 2.0;
    out.contraction_ok = out.contraction_lhs < 0.5;
    out.premise_ok = out.premise_lhs < 0.5;
    out.certified_factor = 2.0 * out.contraction_lhs;
    return out;
}

namespace {

SpectralPath sample_forcing(const PeriodicProblem& p) {
    const int n = p.samples_per_period;
    if (n < 2) throw ParameterError("PeriodicProblem: need at least two samples per period");
    SpectralPath s;
    s.times = Vec::LinSpaced(n + 1, 0.0, p.params.T);
    s.states.reserve(n + 1);
    for (int k = 0; k <= n; ++k) s.states.push_back(p.forcing(s.times[k]));
    if ((s.states.front() - s.states.back()).znorm() >
        1e-9 * (1.0 + s.states.front().znorm()))
        throw ParameterError("PeriodicProblem: forcing sampler is not T-periodic");
    return s;
}

}  // namespace

SpectralPath linear_periodic_solution(const PeriodicProblem& problem) {
    return lp_apply(sample_forcing(problem), problem.params, problem.exec);
}

SpectralPath kp_apply(const SpectralPath& z_path, const PeriodicProblem& problem) {
    z_path.validate_uniform();
    if (problem.F->model().a1 != problem.params.a1)
        throw ParameterError("kp_apply: ionic and fractional a1 shifts disagree");
    const double alpha0 = problem.params.alpha0;
    SpectralPath rhs;
    rhs.times = z_path.times;
    rhs.states.reserve(z_path.states.size());
    for (std::size_t k = 0; k < z_path.states.size(); ++k) {
        const SpectralPair& z = z_path.states[k];
        if (z.alpha_norm(alpha0) > problem.r0 * (1.0 + 1e-12))
            throw CertificateScopeError(
                "kp_apply: path leaves the certificate ball at sample " + std::to_string(k));
        rhs.states.push_back(problem.F->apply(z, problem.exec) + problem.forcing(z_path.times[k]));
    }
    return lp_apply(rhs, problem.params, problem.exec);
}

double path_distance(const SpectralPath& a, const SpectralPath& b, double alpha0) {
    if (a.states.size() != b.states.size())
        throw ParameterError("path_distance: paths have different sample counts");
    double d = 0.0;
    for (std::size_t k = 0; k < a.states.size(); ++k)
        d = std::max(d, (a.states[k] - b.states[k]).alpha_norm(alpha0));
    return d;
}

FixedPointReport fixed_point_solve(const PeriodicProblem& problem, const SpectralPath& z_init,
                                   double tol, int max_iter) {
    FixedPointReport report;

    SpectralPath z = z_init.states.empty() ? linear_periodic_solution(problem) : z_init;

    // Certificates with the Lipschitz constant certified on the pointwise
    // ball matching the alpha0 ball of radius r0.
    const int m = z.level();
    const double c_inf = problem.F->embedding_constant(problem.params.alpha0, m);
    const double r_pt = c_inf * problem.r0;
    const double lip =
        lipschitz_on_ball(problem.F->model(), r_pt) * c_inf *
        std::sqrt(problem.F->mesh().heart_area);
    const auto F0 = evaluate_F(0.0, 0.0, problem.F->model());
    const double F0_norm =
        std::max(std::abs(F0.u), std::abs(F0.w)) * std::sqrt(problem.F->mesh().heart_area);
    double s_hat = 0.0;
    for (const auto& s : sample_forcing(problem).states) s_hat = std::max(s_hat, s.znorm());
    report.certificates =
        contraction_certificates(lip, problem.r0, F0_norm, s_hat, problem.params);

    int grew = 0;
    for (int it = 1; it <= max_iter; ++it) {
        SpectralPath next = kp_apply(z, problem);
        const double update = path_distance(next, z, problem.params.alpha0);
        if (!report.update_norms.empty()) {
            const double prev = report.update_norms.back();
            report.ratios.push_back(prev > 0.0 ? update / prev : 0.0);
            grew = update > prev ? grew + 1 : 0;
        }
        report.update_norms.push_back(update);
        report.iterations = it;
        z = std::move(next);

        if (update <= tol) {
            report.converged = true;
            break;
        }
        if (grew >= 5) {
            report.diverged = true;
            break;
        }
    }

    report.solution = std::move(z);
    report.periodic_defect = (report.solution.states.front() - report.solution.states.back())
                                 .alpha_norm(problem.params.alpha0);
    if (!report.ratios.empty()) {
        const std::size_t tail = std::min<std::size_t>(5, report.ratios.size());
        double acc = 0.0;
        for (std::size_t k = report.ratios.size() - tail; k < report.ratios.size(); ++k)
            acc += report.ratios[k];
        report.ratio_estimate = acc / tail;
    }
    return report;
}

}  // namespace bidomain
