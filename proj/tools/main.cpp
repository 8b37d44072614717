#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bidomain/errors.hpp"
#include "bidomain/runner.hpp"

namespace {

bidomain::HarnessConfig load_config(const std::string& path) {
    if (path.empty())
        throw bidomain::ConfigError("no config file given (use --config or BIDOMAIN_CONFIG)");
    return bidomain::HarnessConfig::from_file(path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral Galerkin solver for the torso-coupled bidomain strip"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "Config file (INI-style sections)")
        ->envname("BIDOMAIN_CONFIG");

    int m = -1;
    double t1 = -1.0, dt = -1.0, tol = -1.0;
    int max_iter = -1, reference = 64;
    std::vector<int> levels{4, 8, 16, 32};
    std::string out_dir;

    auto* c_eigen = app.add_subcommand("eigen", "Compute and export the operator eigenbasis");
    c_eigen->add_option("--m", m, "Number of modes above the constant one");
    c_eigen->add_option("--out", out_dir, "Output directory");

    auto* c_ivp = app.add_subcommand("ivp", "Integrate the Galerkin initial-value problem");
    c_ivp->add_option("--m", m, "Truncation level");
    c_ivp->add_option("--t1", t1, "Horizon");
    c_ivp->add_option("--dt", dt, "Step size");
    c_ivp->add_option("--out", out_dir, "Output directory");

    auto* c_conv = app.add_subcommand("converge", "Level sweep against a reference level");
    c_conv->add_option("--levels", levels, "Truncation levels to compare")->delimiter(',');
    c_conv->add_option("--reference", reference, "Reference level");
    c_conv->add_option("--out", out_dir, "Output directory");

    auto* c_per = app.add_subcommand("periodic", "Periodic fixed-point iteration");
    c_per->add_option("--m", m, "Truncation level");
    c_per->add_option("--tol", tol, "Update-norm stopping tolerance");
    c_per->add_option("--max-iter", max_iter, "Iteration cap");
    c_per->add_option("--out", out_dir, "Output directory");

    auto* c_chk = app.add_subcommand("check-conditions", "Evaluate the contraction certificates");

    for (auto* sub : {c_eigen, c_ivp, c_conv, c_per, c_chk}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        const bidomain::HarnessConfig config = load_config(config_path);
        const int level = m >= 0 ? m : config.spectral.m;
        const std::string out = out_dir.empty() ? config.out_dir : out_dir;

        if (c_eigen->parsed())
            return bidomain::run_eigen(config, level, out, std::cout);
        if (c_ivp->parsed())
            return bidomain::run_ivp(config, level, t1 > 0 ? t1 : config.t1,
                                     dt > 0 ? dt : config.dt, out, std::cout);
        if (c_conv->parsed())
            return bidomain::run_converge(config, levels, reference, out, std::cout);
        if (c_per->parsed())
            return bidomain::run_periodic(config, level, tol > 0 ? tol : config.fp_tol,
                                          max_iter > 0 ? max_iter : config.fp_max_iter, out,
                                          std::cout);
        if (c_chk->parsed())
            return bidomain::run_check_conditions(config, std::cout);
    } catch (const bidomain::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
