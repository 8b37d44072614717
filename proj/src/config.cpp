#include "bidomain/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "bidomain/errors.hpp"

namespace bidomain {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

Ini Ini::parse(const std::string& text, const std::string& origin) {
    Ini ini;
    ini.origin_ = origin;
    ini.raw_ = text;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        ini.values_[section][key] = value;
        ini.lines_[section + "." + key] = lineno;
    }
    return ini;
}

Ini Ini::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

bool Ini::has(const std::string& section, const std::string& key) const {
    const auto s = values_.find(section);
    return s != values_.end() && s->second.count(key) > 0;
}

std::string Ini::get_string(const std::string& section, const std::string& key,
                            const std::string& fallback) const {
    const auto s = values_.find(section);
    if (s == values_.end()) return fallback;
    const auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Ini::get_double(const std::string& section, const std::string& key,
                       double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get_string(section, key, "");
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ":" + std::to_string(lines_.at(section + "." + key)) +
                          ": expected a number for " + section + "." + key + ", got '" + v + "'");
    }
}

int Ini::get_int(const std::string& section, const std::string& key, int fallback) const {
    const double x = get_double(section, key, fallback);
    const int i = static_cast<int>(std::lround(x));
    if (std::abs(x - i) > 0.0)
        throw ConfigError(origin_ + ":" + std::to_string(lines_.at(section + "." + key)) +
                          ": expected an integer for " + section + "." + key);
    return i;
}

std::vector<std::string> Ini::get_list(const std::string& section, const std::string& key) const {
    std::vector<std::string> out;
    std::istringstream in(get_string(section, key, ""));
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

namespace {

Tensor2 read_tensor(const Ini& ini, const std::string& key, const Tensor2& fallback) {
    if (!ini.has("conductivity", key)) return fallback;
    const auto toks = ini.get_list("conductivity", key);
    if (toks.size() != 3)
        throw ConfigError("conductivity." + key + ": expected 'xx yy xy'");
    try {
        return Tensor2{std::stod(toks[0]), std::stod(toks[1]), std::stod(toks[2])};
    } catch (const std::exception&) {
        throw ConfigError("conductivity." + key + ": expected three numbers");
    }
}

}  // namespace

HarnessConfig HarnessConfig::from_ini(const Ini& ini) {
    HarnessConfig c;
    c.mesh.heart_x0 = ini.get_double("geometry", "heart_x0", c.mesh.heart_x0);
    c.mesh.heart_x1 = ini.get_double("geometry", "heart_x1", c.mesh.heart_x1);
    c.mesh.torso_x1 = ini.get_double("geometry", "torso_x1", c.mesh.torso_x1);
    c.mesh.y_period = ini.get_double("geometry", "y_period", c.mesh.y_period);
    c.mesh.nx_heart = ini.get_int("geometry", "nx_heart", c.mesh.nx_heart);
    c.mesh.nx_torso = ini.get_int("geometry", "nx_torso", c.mesh.nx_torso);
    c.mesh.ny = ini.get_int("geometry", "ny", c.mesh.ny);

    c.cond.sigma_i = read_tensor(ini, "sigma_i", c.cond.sigma_i);
    c.cond.sigma_e = read_tensor(ini, "sigma_e", c.cond.sigma_e);
    c.cond.sigma_t = read_tensor(ini, "sigma_t", c.cond.sigma_t);
    c.cond.m_ell = ini.get_double("conductivity", "m_ell", c.cond.m_ell);
    c.cond.M_ell = ini.get_double("conductivity", "M_ell", c.cond.M_ell);

    const std::string model = ini.get_string("ionic", "model", "fhn");
    if (model == "fhn") c.ionic.kind = IonicModel::Kind::fhn;
    else if (model == "linear-test") c.ionic.kind = IonicModel::Kind::linear_test;
    else if (model == "zero") c.ionic.kind = IonicModel::Kind::zero;
    else throw ConfigError("ionic.model: unknown model '" + model + "'");
    c.ionic.a = ini.get_double("ionic", "a", c.ionic.a);
    c.ionic.eps = ini.get_double("ionic", "eps", c.ionic.eps);
    c.ionic.gamma = ini.get_double("ionic", "gamma", c.ionic.gamma);
    c.ionic.beta_u = ini.get_double("ionic", "beta_u", c.ionic.beta_u);
    c.ionic.beta_w = ini.get_double("ionic", "beta_w", c.ionic.beta_w);

    c.spectral.m = ini.get_int("spectral", "m", 16);
    c.spectral.a1 = ini.get_double("spectral", "a1", c.spectral.a1);
    c.spectral.alpha0 = ini.get_double("spectral", "alpha0", c.spectral.alpha0);
    c.spectral.T = ini.get_double("time", "period", c.spectral.T);
    c.ionic.a1 = c.spectral.a1;

    c.t1 = ini.get_double("time", "t1", c.t1);
    c.dt = ini.get_double("time", "dt", c.dt);
    c.samples_per_period = ini.get_int("time", "samples_per_period", c.samples_per_period);

    c.forcing.amplitude = ini.get_double("forcing", "amplitude", c.forcing.amplitude);
    c.forcing.time_profile = ini.get_string("forcing", "time_profile", c.forcing.time_profile);
    if (ini.has("forcing", "harmonics")) {
        c.forcing.harmonics.clear();
        for (const std::string& tok : ini.get_list("forcing", "harmonics")) {
            const auto colon = tok.find(':');
            try {
                ForcingHarmonic h;
                h.k = std::stoi(tok.substr(0, colon));
                h.weight = colon == std::string::npos ? 1.0 : std::stod(tok.substr(colon + 1));
                c.forcing.harmonics.push_back(h);
            } catch (const std::exception&) {
                throw ConfigError("forcing.harmonics: expected 'k:weight' tokens, got '" + tok +
                                  "'");
            }
        }
    }

    c.fp_tol = ini.get_double("tolerance", "fixed_point", c.fp_tol);
    c.fp_max_iter = ini.get_int("tolerance", "max_iter", c.fp_max_iter);
    c.compat_tol = ini.get_double("tolerance", "compatibility", c.compat_tol);
    c.ball_radius = ini.get_double("run", "ball_radius", c.ball_radius);
    c.r0 = ini.get_double("run", "r0", c.r0);
    c.cb_delta_floor = ini.get_double("tolerance", "cb_delta_floor", c.cb_delta_floor);

    c.out_dir = ini.get_string("run", "out_dir", c.out_dir);
    c.seed = static_cast<std::uint64_t>(ini.get_double("run", "seed", 12345));

    c.validate();
    return c;
}

HarnessConfig HarnessConfig::from_file(const std::string& path) {
    return from_ini(Ini::load(path));
}

void HarnessConfig::validate() const {
    // Construction checks the geometry; tensor and model checks run in the
    // modules. Validate the pure-number ranges up front.
    spectral.validate();
    ionic.validate();
    if (t1 <= 0.0 || dt <= 0.0) throw ConfigError("time: t1 and dt must be positive");
    if (samples_per_period < 2) throw ConfigError("time: samples_per_period must be >= 2");
    if (fp_max_iter < 1) throw ConfigError("tolerance: max_iter must be >= 1");
    if (fp_tol <= 0.0) throw ConfigError("tolerance: fixed_point must be positive");
    if (r0 <= 0.0) throw ConfigError("run: r0 must be positive");
    if (forcing.time_profile != "sin" && forcing.time_profile != "cos" &&
        forcing.time_profile != "const")
        throw ConfigError("forcing.time_profile: expected sin, cos or const");
    for (const auto& h : forcing.harmonics)
        if (h.k < 1)
            throw ConfigError("forcing.harmonics: k must be >= 1 to keep the trace mean-free");
}

Vec sample_forcing_trace(const CoupledMesh& mesh, const ForcingConfig& fc, double time_factor) {
    const auto q = endo_quadrature(mesh);
    Vec s(q.y.size());
    const double two_pi = 2.0 * M_PI;
    for (std::size_t i = 0; i < q.y.size(); ++i) {
        double v = 0.0;
        for (const auto& h : fc.harmonics)
            v += h.weight * std::cos(two_pi * h.k * q.y[i] / mesh.config.y_period);
        s[static_cast<Eigen::Index>(i)] = fc.amplitude * time_factor * v;
    }
    return s;
}

double forcing_time_profile(const ForcingConfig& fc, double t, double T) {
    const double phase = 2.0 * M_PI * t / T;
    if (fc.time_profile == "sin") return std::sin(phase);
    if (fc.time_profile == "cos") return std::cos(phase);
    return 1.0;
}

}  // namespace bidomain
