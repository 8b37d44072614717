// Timing comparison of the serial and OpenMP kernel paths. The two paths
// produce bitwise-identical results; this target only reports speedups.

#include <chrono>
#include <cstdio>
#include <functional>

#include <omp.h>

#include "bidomain/ionic.hpp"
#include "bidomain/ivp.hpp"
#include "bidomain/operator.hpp"
#include "bidomain/runner.hpp"

using namespace bidomain;

namespace {

double time_it(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s %10.4fs %10.4fs %8.2fx\n", name, serial, parallel, serial / parallel);
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "openmp", "speedup");

    MeshConfig big;
    big.nx_heart = 48;
    big.nx_torso = 24;
    big.ny = 48;
    const CoupledMesh big_mesh = build_strip_mesh(big);
    const ConductivityField cond;

    report("assemble_forms (48x48+24)",
           time_it([&] { assemble_forms(big_mesh, cond, Exec::serial); }),
           time_it([&] { assemble_forms(big_mesh, cond, Exec::parallel); }));

    const FormAssembly big_forms = assemble_forms(big_mesh, cond);
    report("aform_matrix (48x48+24)",
           time_it([&] { BidomainOperator op(big_forms, Exec::serial); }, 1),
           time_it([&] { BidomainOperator op(big_forms, Exec::parallel); }, 1));

    MeshConfig mc;
    mc.nx_heart = 24;
    mc.nx_torso = 12;
    mc.ny = 24;
    const CoupledMesh mesh = build_strip_mesh(mc);
    const FormAssembly forms = assemble_forms(mesh, cond);
    const BidomainOperator op(forms);
    const int m = 64;
    const auto basis = op.compute_eigenbasis(m);

    IonicModel model;
    const NonlinearProjector F(mesh, basis, model);
    Vec u = Vec::LinSpaced(m + 1, 0.1, 0.9), w = Vec::LinSpaced(m + 1, -0.2, 0.2);
    const SpectralPair z(u, w, basis);
    report("project_nonlinearity x256",
           time_it([&] { for (int k = 0; k < 256; ++k) F.apply(z, Exec::serial); }),
           time_it([&] { for (int k = 0; k < 256; ++k) F.apply(z, Exec::parallel); }));

    FractionalParams params;
    params.m = m;
    SpectralPath path;
    const int samples = 4096;
    path.times = Vec::LinSpaced(samples + 1, 0.0, params.T);
    path.states.reserve(samples + 1);
    for (int k = 0; k <= samples; ++k) {
        const double c = std::sin(2.0 * M_PI * path.times[k]);
        path.states.emplace_back(c * u, c * w, basis);
    }
    path.states.back() = path.states.front();
    report("lp_apply (4096 samples)",
           time_it([&] { lp_apply(path, params, Exec::serial); }),
           time_it([&] { lp_apply(path, params, Exec::parallel); }));

    return 0;
}
