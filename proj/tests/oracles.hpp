// Independent reference computations used by the test suites. Everything
// here deliberately avoids the library's solver paths: dense full-pivot
// factorizations, closed-form spectra, brute-force quadrature and a plain
// RK4 integrator.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bidomain/assembly.hpp"
#include "bidomain/operator.hpp"
#include "bidomain/spectral.hpp"

namespace oracles {

using bidomain::Vec;

/// Dense full-pivot solve of the heart-mean-constrained coupled system.
inline Vec dense_constrained_solve(const bidomain::FormAssembly& forms, const Vec& r_full) {
    const int n = forms.full_dim();
    Eigen::MatrixXd saddle = Eigen::MatrixXd::Zero(n + 1, n + 1);
    saddle.topLeftCorner(n, n) = Eigen::MatrixXd(forms.K_full);
    saddle.topRightCorner(n, 1) = forms.heart_mean;
    saddle.bottomLeftCorner(1, n) = forms.heart_mean.transpose();
    Vec rhs = Vec::Zero(n + 1);
    rhs.head(n) = r_full;
    const Vec x = Eigen::FullPivLU<Eigen::MatrixXd>(saddle).solve(rhs);
    return x.head(n);
}

/// Exact spectrum of -(sigma_i sigma_e / (sigma_i + sigma_e)) Laplace on the
/// unit square, Neumann in x and periodic in y: values
/// factor * (k^2 pi^2 + 4 pi^2 l^2) enumerated and sorted.
inline std::vector<double> harmonic_mean_spectrum(double sigma_i, double sigma_e, int count) {
    const double factor = sigma_i * sigma_e / (sigma_i + sigma_e);
    const double pi2 = M_PI * M_PI;
    std::vector<double> vals;
    for (int k = 0; k <= 24; ++k) {
        for (int l = -24; l <= 24; ++l)
            vals.push_back(factor * (k * k * pi2 + 4.0 * pi2 * l * l));
    }
    std::sort(vals.begin(), vals.end());
    vals.resize(count);
    return vals;
}

/// Classic fixed-step RK4 on y' = f(t, y).
inline Vec rk4_solve(const std::function<Vec(double, const Vec&)>& f, Vec y0, double t1,
                     int steps) {
    const double h = t1 / steps;
    Vec y = std::move(y0);
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const Vec k1 = f(t, y);
        const Vec k2 = f(t + h / 2, y + (h / 2) * k1);
        const Vec k3 = f(t + h / 2, y + (h / 2) * k2);
        const Vec k4 = f(t + h, y + h * k3);
        y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return y;
}

/// RK4 with stored states at every step.
inline std::vector<Vec> rk4_path(const std::function<Vec(double, const Vec&)>& f, Vec y0,
                                 double t1, int steps) {
    const double h = t1 / steps;
    std::vector<Vec> out{y0};
    Vec y = std::move(y0);
    for (int k = 0; k < steps; ++k) {
        const double t = k * h;
        const Vec k1 = f(t, y);
        const Vec k2 = f(t + h / 2, y + (h / 2) * k1);
        const Vec k3 = f(t + h / 2, y + (h / 2) * k2);
        const Vec k4 = f(t + h, y + h * k3);
        y += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        out.push_back(y);
    }
    return out;
}

/// Gauss-Legendre quadrature on [a, b] with n up to 64 panels of 4 points.
inline double quad(const std::function<double(double)>& f, double a, double b, int panels = 64) {
    const double x[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                         0.8611363115940526};
    const double w[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                         0.3478548451374538};
    double acc = 0.0;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (int q = 0; q < 4; ++q) acc += 0.5 * h * w[q] * f(mid + 0.5 * h * x[q]);
    }
    return acc;
}

/// Synthetic eigenbasis for coefficient-space tests: given eigenvalues,
/// identity eigenvectors (mass = identity).
inline std::shared_ptr<const bidomain::EigenBasis> synthetic_basis(std::vector<double> lambdas) {
    auto basis = std::make_shared<bidomain::EigenBasis>();
    const int n = static_cast<int>(lambdas.size());
    basis->lambdas = Eigen::Map<Vec>(lambdas.data(), n);
    basis->Psi = Eigen::MatrixXd::Identity(n, n);
    basis->heart_area = 1.0;
    return basis;
}

inline Vec random_vec(std::mt19937_64& rng, int n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = dist(rng);
    return v;
}

/// Observed convergence order from errors at h, h/2.
inline double slope(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

}  // namespace oracles
