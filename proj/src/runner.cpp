#include "bidomain/runner.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>

#include "bidomain/csv.hpp"
#include "bidomain/errors.hpp"

namespace bidomain {

Workspace Workspace::build(const HarnessConfig& config, int m, Exec exec) {
    Workspace ws;
    ws.config = config;
    ws.mesh = std::make_unique<CoupledMesh>(build_strip_mesh(config.mesh));
    ws.forms = std::make_unique<FormAssembly>(assemble_forms(*ws.mesh, config.cond, exec));
    ws.op = std::make_unique<BidomainOperator>(*ws.forms, exec);
    ws.basis = ws.op->compute_eigenbasis(m);
    return ws;
}

ForcingFn Workspace::forcing() const {
    // Spatial load is fixed; the time profile scales it. Compatibility of the
    // trace is checked once at unit phase.
    const Vec trace = sample_forcing_trace(*mesh, config.forcing, 1.0);
    const auto compat = check_compatibility(*mesh, trace, config.compat_tol);
    if (!compat.ok && config.forcing.amplitude != 0.0)
        throw CompatibilityError("forcing: endocardial trace is not mean-free");
    const auto f = op->compute_forcing(trace);
    SpectralPair base(basis->project_load(f.load), Vec::Zero(basis->m_max() + 1), basis);
    const ForcingConfig fc = config.forcing;
    const double T = config.spectral.T;
    return separable_forcing([fc, T](double t) { return forcing_time_profile(fc, t, T); },
                             std::move(base));
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    std::filesystem::path p(out_dir);
    std::filesystem::create_directories(p);
    return p;
}

std::string config_text(const HarnessConfig& config) {
    // Canonical reproducibility token: the numbers that drive the run.
    std::ostringstream os;
    os << config.mesh.heart_x0 << ' ' << config.mesh.heart_x1 << ' ' << config.mesh.torso_x1
       << ' ' << config.mesh.y_period << ' ' << config.mesh.nx_heart << ' '
       << config.mesh.nx_torso << ' ' << config.mesh.ny << ' ' << config.cond.sigma_i.xx << ' '
       << config.cond.sigma_e.xx << ' ' << config.cond.sigma_t.xx << ' '
       << static_cast<int>(config.ionic.kind) << ' ' << config.ionic.a << ' ' << config.ionic.eps
       << ' ' << config.ionic.gamma << ' ' << config.spectral.a1 << ' ' << config.spectral.alpha0
       << ' ' << config.spectral.T << ' ' << config.t1 << ' ' << config.dt << ' ' << config.seed;
    return os.str();
}

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

}  // namespace

void write_manifest(const std::string& out_dir, const std::string& text, double wall_seconds) {
    std::ofstream out(std::filesystem::path(out_dir) / "manifest.txt");
    out << "config_hash: " << std::hex << config_hash(text) << std::dec << "\n"
        << "version: bidomain 1.0.0\n"
        << "compiler: " << __VERSION__ << "\n"
        << "eigen: " << EIGEN_WORLD_VERSION << '.' << EIGEN_MAJOR_VERSION << '.'
        << EIGEN_MINOR_VERSION << "\n"
        << "wall_seconds: " << wall_seconds << "\n";
}

int run_eigen(const HarnessConfig& config, int m, const std::string& out_dir, std::ostream& log) {
    Timer timer;
    const auto dir = prepare_out_dir(out_dir);
    Workspace ws = Workspace::build(config, m);

    write_eigenbasis((dir / "eigenbasis.csv").string(), *ws.basis);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= ws.basis->m_max(); ++i)
        rows.push_back({static_cast<double>(i), ws.basis->lambdas[i]});
    write_table((dir / "lambdas.csv").string(), {"i", "lambda"}, rows);
    write_mesh_nodes((dir / "mesh_nodes.csv").string(), *ws.mesh);
    write_matrix_coord((dir / "mass.csv").string(), ws.forms->M_H);

    write_manifest(out_dir, config_text(config), timer.seconds());
    log << "eigen: wrote " << (ws.basis->m_max() + 1) << " modes to " << out_dir << "\n";
    return 0;
}

int run_ivp(const HarnessConfig& config, int m, double t1, double dt, const std::string& out_dir,
            std::ostream& log) {
    Timer timer;
    const auto dir = prepare_out_dir(out_dir);
    Workspace ws = Workspace::build(config, m);

    NonlinearProjector F(*ws.mesh, ws.basis, ws.config.ionic);
    const ForcingFn S = ws.forcing();
    SpectralPair z0 = SpectralPair::zero(m, ws.basis);

    IvpOptions opt;
    opt.t1 = t1;
    opt.dt = dt;
    opt.ball_radius = config.ball_radius;
    Trajectory traj = solve_ivp(z0, F, S, config.spectral, opt);
    const double residual = mild_residual(traj, F, S, config.spectral);

    write_path((dir / "trajectory.csv").string(), traj.path);
    write_table((dir / "diagnostics.csv").string(), {"mild_residual", "dt", "order"},
                {{residual, dt, 2.0}});
    write_manifest(out_dir, config_text(config), timer.seconds());
    log << "ivp: m = " << m << ", steps = " << (traj.path.times.size() - 1)
        << ", mild residual = " << residual << "\n";
    return 0;
}

int run_converge(const HarnessConfig& config, const std::vector<int>& levels, int reference,
                 const std::string& out_dir, std::ostream& log) {
    Timer timer;
    const auto dir = prepare_out_dir(out_dir);
    Workspace ws = Workspace::build(config, reference);

    NonlinearProjector F_ref(*ws.mesh, ws.basis, ws.config.ionic);
    const ForcingFn S = ws.forcing();

    const double c_inf = F_ref.embedding_constant(config.spectral.alpha0, reference);
    const double r_pt = config.r0 > 0.0 ? c_inf * config.r0 : 1.0;
    const double lip = lipschitz_on_ball(config.ionic, r_pt) * c_inf *
                       std::sqrt(ws.mesh->heart_area);

    IvpOptions opt;
    opt.t1 = config.t1;
    opt.dt = config.dt;

    auto run_level = [&](int m) {
        SpectralPair z0 = SpectralPair::zero(m, ws.basis);
        ForcingFn S_m = [&S, m](double t) { return project_Pm(S(t), m); };
        return solve_ivp(z0, F_ref, S_m, config.spectral, opt);
    };

    Trajectory ref = run_level(reference);
    std::vector<std::vector<double>> rows;
    for (int m : levels) {
        if (m >= reference)
            throw ConfigError("converge: levels must be below the reference level");
        Trajectory traj = run_level(m);
        GapEntry e = cauchy_gap(traj, ref, F_ref, S, lip, config.spectral);
        rows.push_back({static_cast<double>(e.m), static_cast<double>(e.n), e.gap, e.bound,
                        e.within_bound && e.hypotheses_hold ? 1.0 : 0.0});
        log << "converge: m = " << e.m << " gap = " << e.gap << " bound = " << e.bound
            << (e.hypotheses_hold ? "" : " (hypotheses fail)") << "\n";
    }
    write_table((dir / "convergence.csv").string(), {"m", "n", "gap", "bound", "certified"},
                rows);
    write_manifest(out_dir, config_text(config), timer.seconds());
    return 0;
}

int run_periodic(const HarnessConfig& config, int m, double tol, int max_iter,
                 const std::string& out_dir, std::ostream& log) {
    Timer timer;
    const auto dir = prepare_out_dir(out_dir);
    Workspace ws = Workspace::build(config, m);

    NonlinearProjector F(*ws.mesh, ws.basis, ws.config.ionic);

    PeriodicProblem problem;
    problem.forcing = ws.forcing();
    problem.params = config.spectral;
    problem.params.m = m;
    problem.r0 = config.r0;
    problem.samples_per_period = config.samples_per_period;
    problem.F = &F;

    FixedPointReport report = fixed_point_solve(problem, SpectralPath{}, tol, max_iter);

    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < report.update_norms.size(); ++k)
        rows.push_back({static_cast<double>(k + 1), report.update_norms[k],
                        k > 0 ? report.ratios[k - 1] : 0.0, report.periodic_defect});
    write_table((dir / "iterations.csv").string(),
                {"iter", "update_norm", "ratio", "periodic_defect"}, rows);
    write_path((dir / "periodic_path.csv").string(), report.solution);
    write_table((dir / "certificates.csv").string(),
                {"invariance_lhs", "contraction_lhs", "premise_lhs", "invariance_ok",
                 "contraction_ok", "premise_ok", "certified_factor"},
                {{report.certificates.invariance_lhs, report.certificates.contraction_lhs,
                  report.certificates.premise_lhs, report.certificates.invariance_ok ? 1.0 : 0.0,
                  report.certificates.contraction_ok ? 1.0 : 0.0,
                  report.certificates.premise_ok ? 1.0 : 0.0,
                  report.certificates.certified_factor}});
    write_manifest(out_dir, config_text(config), timer.seconds());

    log << "periodic: " << (report.converged ? "converged" : report.diverged ? "diverged"
                                                                             : "max-iter")
        << " in " << report.iterations << " iterations, defect = " << report.periodic_defect
        << ", ratio = " << report.ratio_estimate << "\n";
    return report.converged ? 0 : 1;
}

int run_check_conditions(const HarnessConfig& config, std::ostream& log) {
    Workspace ws = Workspace::build(config, config.spectral.m);
    NonlinearProjector F(*ws.mesh, ws.basis, ws.config.ionic);

    const double c_inf = F.embedding_constant(config.spectral.alpha0, config.spectral.m);
    const double lip = lipschitz_on_ball(config.ionic, c_inf * config.r0) * c_inf *
                       std::sqrt(ws.mesh->heart_area);
    const auto F0 = evaluate_F(0.0, 0.0, config.ionic);
    const double F0_norm =
        std::max(std::abs(F0.u), std::abs(F0.w)) * std::sqrt(ws.mesh->heart_area);

    double s_hat = 0.0;
    const ForcingFn S = ws.forcing();
    for (int k = 0; k <= config.samples_per_period; ++k)
        s_hat = std::max(
            s_hat, S(config.spectral.T * k / config.samples_per_period).znorm());

    const auto cert = contraction_certificates(lip, config.r0, F0_norm, s_hat, config.spectral);
    log << "lipschitz (certified, embedded): " << lip << "\n"
        << "ball invariance  lhs = " << cert.invariance_lhs << " vs " << config.r0 / 2.0 << "  "
        << (cert.invariance_ok ? "PASS" : "FAIL") << "\n"
        << "contraction      lhs = " << cert.contraction_lhs << " vs 0.5  "
        << (cert.contraction_ok ? "PASS" : "FAIL") << "\n"
        << "theorem premise  lhs = " << cert.premise_lhs << " vs 0.5  "
        << (cert.premise_ok ? "PASS" : "FAIL") << "\n";
    return 0;
}

}  // namespace bidomain
