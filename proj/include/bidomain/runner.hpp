#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "bidomain/config.hpp"
#include "bidomain/periodic.hpp"

namespace bidomain {

/// Shared per-run state: mesh, forms, operator, basis at the requested level.
/// Heap members keep the internal cross-references stable under moves.
struct Workspace {
    std::unique_ptr<CoupledMesh> mesh;
    std::unique_ptr<FormAssembly> forms;
    std::unique_ptr<BidomainOperator> op;
    std::shared_ptr<const EigenBasis> basis;
    HarnessConfig config;

    static Workspace build(const HarnessConfig& config, int m, Exec exec = Exec::parallel);

    /// Forcing sampler at the basis level from the configured activation.
    ForcingFn forcing() const;
};

/// FNV-1a hash of the raw config text, for the run manifest.
std::uint64_t config_hash(const std::string& text);

/// Writes <out_dir>/manifest.txt with config hash, versions and wall time.
void write_manifest(const std::string& out_dir, const std::string& config_text,
                    double wall_seconds);

int run_eigen(const HarnessConfig& config, int m, const std::string& out_dir, std::ostream& log);
int run_ivp(const HarnessConfig& config, int m, double t1, double dt, const std::string& out_dir,
            std::ostream& log);
int run_converge(const HarnessConfig& config, const std::vector<int>& levels, int reference,
                 const std::string& out_dir, std::ostream& log);
int run_periodic(const HarnessConfig& config, int m, double tol, int max_iter,
                 const std::string& out_dir, std::ostream& log);
int run_check_conditions(const HarnessConfig& config, std::ostream& log);

}  // namespace bidomain
