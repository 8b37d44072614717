#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bidomain/conductivity.hpp"
#include "bidomain/ionic.hpp"
#include "bidomain/mesh.hpp"
#include "bidomain/spectral.hpp"

namespace bidomain {

/// Sectioned key = value text, '#' or ';' comments. Unknown keys are kept;
/// typed getters throw ConfigError with the offending location.
class Ini {
public:
    static Ini parse(const std::string& text, const std::string& origin = "<string>");
    static Ini load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

    const std::string& text() const { return raw_; }

private:
    std::map<std::string, std::map<std::string, std::string>> values_;
    std::map<std::string, int> lines_;
    std::string origin_;
    std::string raw_;
};

/// Weighted transverse cosine harmonic of the endocardial activation.
struct ForcingHarmonic {
    int k = 1;        // cos(2 pi k y / y_period); k >= 1 keeps the trace mean-free
    double weight = 1.0;
};

struct ForcingConfig {
    double amplitude = 1.0;
    std::string time_profile = "sin";  // sin | cos | const (of 2 pi t / T)
    std::vector<ForcingHarmonic> harmonics{{1, 1.0}};
};

/// Everything a run needs, validated before any computation starts.
struct HarnessConfig {
    MeshConfig mesh;
    ConductivityField cond;
    IonicModel ionic;
    FractionalParams spectral;   // a1, alpha0, T; spectral.m is the default level
    ForcingConfig forcing;

    double t1 = 1.0;
    double dt = 1e-3;
    int samples_per_period = 256;

    double fp_tol = 1e-10;
    int fp_max_iter = 200;
    double compat_tol = 1e-10;
    double ball_radius = 0.0;
    double r0 = 1.0;
    double cb_delta_floor = 1e-3;

    std::string out_dir = "out";
    std::uint64_t seed = 12345;

    static HarnessConfig from_ini(const Ini& ini);
    static HarnessConfig from_file(const std::string& path);

    void validate() const;
};

/// Endocardial trace samples for the configured harmonics at given phase
/// factor (the time profile evaluated at t).
Vec sample_forcing_trace(const CoupledMesh& mesh, const ForcingConfig& fc, double time_factor);

/// Time profile value of the configured kind at time t for period T.
double forcing_time_profile(const ForcingConfig& fc, double t, double T);

}  // namespace bidomain
