#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bidomain/errors.hpp"
#include "bidomain/spectral.hpp"
#include "oracles.hpp"

using namespace bidomain;

namespace {

std::shared_ptr<const EigenBasis> test_basis() {
    return oracles::synthetic_basis({0.0, 1.0, 4.0, 9.0, 25.0, 100.0});
}

SpectralPair random_pair(std::mt19937_64& rng, std::shared_ptr<const EigenBasis> basis,
                         int level) {
    return SpectralPair(oracles::random_vec(rng, level + 1), oracles::random_vec(rng, level + 1),
                        std::move(basis));
}

FractionalParams default_params() {
    FractionalParams p;
    p.a1 = 1.0;
    p.alpha0 = 0.8;
    p.T = 1.0;
    return p;
}

SpectralPath single_mode_path(const std::function<double(double)>& f, int samples, double T,
                              std::shared_ptr<const EigenBasis> basis) {
    SpectralPath path;
    path.times = Vec::LinSpaced(samples + 1, 0.0, T);
    for (int k = 0; k <= samples; ++k) {
        Vec u = Vec::Zero(1), w = Vec::Zero(1);
        u[0] = f(path.times[k]);
        path.states.emplace_back(u, w, basis);
    }
    return path;
}

}  // namespace

TEST_CASE("fractional parameter validation") {
    FractionalParams p = default_params();
    CHECK_NOTHROW(p.validate());
    p.alpha0 = 1.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p.alpha0 = 0.75;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = default_params();
    p.a1 = 0.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
}

TEST_CASE("projection truncates, is idempotent and norm non-increasing") {
    auto basis = test_basis();
    std::mt19937_64 rng(11);

    SUBCASE("basis modes survive or vanish by level") {
        Vec u = Vec::Zero(6), w = Vec::Zero(6);
        u[3] = 2.0;
        const SpectralPair z(u, w, basis);
        const SpectralPair kept = project_Pm(z, 4);
        CHECK(kept.U[3] == 2.0);
        CHECK(kept.level() == 4);
        const SpectralPair dropped = project_Pm(z, 2);
        CHECK(dropped.znorm() == 0.0);
    }
    SUBCASE("levels above the input are rejected") {
        const SpectralPair z = random_pair(rng, basis, 3);
        CHECK_THROWS_AS(project_Pm(z, 4), LevelError);
    }
    SUBCASE("alpha-norm contraction and convergence of the truncation") {
        for (int rep = 0; rep < 20; ++rep) {
            const SpectralPair z = random_pair(rng, basis, 5);
            double prev_gap = -1.0;
            for (int m = 0; m <= 5; ++m) {
                const SpectralPair zm = project_Pm(z, m);
                CHECK(fractional_norm(zm, 0.8) <= fractional_norm(z, 0.8) * (1.0 + 1e-14));
                const double gap = fractional_norm(tail_from(z, m), 0.8);
                if (prev_gap >= 0.0) CHECK(gap <= prev_gap + 1e-14);
                prev_gap = gap;
            }
            CHECK(prev_gap == 0.0);
        }
    }
    SUBCASE("idempotence and bitwise projection stability") {
        const SpectralPair z = random_pair(rng, basis, 5);
        const SpectralPair once = project_Pm(z, 3);
        const SpectralPair twice = project_Pm(once, 3);
        CHECK((once.U - twice.U).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("fractional norm: single modes, alpha = 0, and error paths") {
    auto basis = test_basis();

    Vec u0 = Vec::Zero(6), w0 = Vec::Zero(6);
    u0[0] = -1.5;
    const SpectralPair z0(u0, w0, basis);
    CHECK(fractional_norm(z0, 0.8) == doctest::Approx(1.5).epsilon(1e-15));

    Vec uk = Vec::Zero(6), wk = Vec::Zero(6);
    uk[4] = 1.0;  // lambda = 25
    const SpectralPair zk(uk, wk, basis);
    CHECK(fractional_norm(zk, 0.8) ==
          doctest::Approx(std::sqrt(1.0 + std::pow(25.0, 1.6))).epsilon(1e-14));

    std::mt19937_64 rng(4);
    const SpectralPair z = random_pair(rng, basis, 5);
    CHECK(fractional_norm(z, 0.0) ==
          doctest::Approx(std::sqrt(2.0) * std::max(z.U.norm(), z.W.norm())).epsilon(1e-13));
    CHECK_THROWS_AS(fractional_norm(z, -0.5), ParameterError);
}

TEST_CASE("semigroup: identity, scalar decay, law, contraction") {
    auto basis = test_basis();
    FractionalParams p = default_params();
    std::mt19937_64 rng(8);

    SUBCASE("t = 0 is the identity, bitwise") {
        const SpectralPair z = random_pair(rng, basis, 5);
        const SpectralPair out = apply_semigroup(z, 0.0, p);
        CHECK((out.U - z.U).cwiseAbs().maxCoeff() == 0.0);
        CHECK((out.W - z.W).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("mode with lambda = 1, a1 = 1, t = ln 2 decays by 1/4") {
        Vec u = Vec::Zero(6), w = Vec::Zero(6);
        u[1] = 1.0;  // lambda = 1
        const SpectralPair z(u, w, basis);
        const SpectralPair out = apply_semigroup(z, std::log(2.0), p);
        CHECK(out.U[1] == doctest::Approx(0.25).epsilon(1e-14));
    }
    SUBCASE("negative times are rejected") {
        const SpectralPair z = random_pair(rng, basis, 5);
        CHECK_THROWS_AS(apply_semigroup(z, -1e-9, p), ParameterError);
    }
    SUBCASE("semigroup law to 1e-12") {
        for (int rep = 0; rep < 20; ++rep) {
            const SpectralPair z = random_pair(rng, basis, 5);
            const double s = 0.3 * (rep + 1) / 20.0, t = 0.9 - 0.02 * rep;
            const SpectralPair two = apply_semigroup(apply_semigroup(z, s, p), t, p);
            const SpectralPair one = apply_semigroup(z, s + t, p);
            CHECK((two - one).znorm() <= 1e-12 * z.znorm());
        }
    }
    SUBCASE("Z-norm contraction by e^{-a1 t}") {
        for (int rep = 0; rep < 200; ++rep) {
            const SpectralPair z = random_pair(rng, basis, 5);
            const double t = 2.0 * rep / 200.0;
            CHECK(apply_semigroup(z, t, p).znorm() <=
                  std::exp(-p.a1 * t) * z.znorm() * (1.0 + 1e-13));
        }
    }
    SUBCASE("commutes with the projection, bitwise") {
        const SpectralPair z = random_pair(rng, basis, 5);
        const SpectralPair a = project_Pm(apply_semigroup(z, 0.7, p), 2);
        const SpectralPair b = apply_semigroup(project_Pm(z, 2), 0.7, p);
        CHECK((a.U - b.U).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.W - b.W).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("periodic resolvent: slow-mode factor, branch telescoping, domain checks") {
    auto basis = test_basis();
    FractionalParams p = default_params();

    Vec u = Vec::Zero(6), w = Vec::Zero(6);
    u[0] = 1.0;  // lambda = 0 so mu = a1 = 1
    const SpectralPair z(u, w, basis);

    SUBCASE("tau = t gives 1 / (1 - e^{-T}) on the slowest mode") {
        const SpectralPair out = apply_periodic_resolvent(z, 0.4, 0.4, p);
        CHECK(out.U[0] == doctest::Approx(1.5819767068693265).epsilon(1e-14));
    }
    SUBCASE("unwrapped minus wrapped branch telescopes to the identity") {
        const SpectralPair direct = apply_periodic_resolvent(z, 0.4, 0.4, p);  // delta = 0
        const SpectralPair wrapped = apply_periodic_resolvent(z, 0.4, std::nextafter(0.4, 1.0), p);
        // delta jumps to T across the branch: the factors differ by exactly 1
        CHECK(direct.U[0] - wrapped.U[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("resolvent factor reconstructs against the semigroup") {
        std::mt19937_64 rng(2);
        const SpectralPair zr = random_pair(rng, basis, 5);
        const SpectralPair r = apply_periodic_resolvent(zr, 0.6, 0.6, p);
        const SpectralPair back = zr - (r - apply_semigroup(r, p.T, p));
        CHECK(back.znorm() <= 1e-12 * zr.znorm());
    }
    SUBCASE("arguments outside the period are rejected") {
        CHECK_THROWS_AS(apply_periodic_resolvent(z, 1.2, 0.0, p), ParameterError);
        CHECK_THROWS_AS(apply_periodic_resolvent(z, 0.0, -0.1, p), ParameterError);
    }
}

TEST_CASE("periodic integral operator: stationary forcing, cosine response, exactness") {
    FractionalParams p = default_params();
    auto basis = test_basis();
    std::mt19937_64 rng(6);

    SUBCASE("constant forcing gives the per-mode stationary values") {
        const int samples = 64;
        SpectralPath f;
        f.times = Vec::LinSpaced(samples + 1, 0.0, p.T);
        Vec cu = oracles::random_vec(rng, 6), cw = oracles::random_vec(rng, 6);
        for (int k = 0; k <= samples; ++k) f.states.emplace_back(cu, cw, basis);
        const SpectralPath g = lp_apply(f, p);
        for (int k = 0; k <= samples; ++k) {
            for (int i = 0; i < 6; ++i) {
                CHECK(g.states[k].U[i] ==
                      doctest::Approx(cu[i] / (p.a1 + basis->lambdas[i])).epsilon(1e-12));
                CHECK(g.states[k].W[i] == doctest::Approx(cw[i] / p.a1).epsilon(1e-12));
            }
        }
    }
    SUBCASE("cosine forcing reproduces the closed-form harmonic response") {
        auto mono = oracles::synthetic_basis({0.0});
        const int samples = 2048;
        const SpectralPath f = single_mode_path(
            [](double t) { return std::cos(2.0 * M_PI * t); }, samples, p.T, mono);
        const SpectralPath g = lp_apply(f, p);
        const double denom = 1.0 + 4.0 * M_PI * M_PI;
        double amp = 0.0;
        for (int k = 0; k <= samples; ++k) {
            const double t = g.times[k];
            const double exact =
                (std::cos(2.0 * M_PI * t) + 2.0 * M_PI * std::sin(2.0 * M_PI * t)) / denom;
            CHECK(std::abs(g.states[k].U[0] - exact) < 5e-6);
            amp = std::max(amp, std::abs(g.states[k].U[0]));
        }
        CHECK(amp == doctest::Approx(1.0 / std::sqrt(denom)).epsilon(1e-4));
    }
    SUBCASE("output equals fine quadrature of the piecewise-linear integrand") {
        auto mono = oracles::synthetic_basis({3.0});  // mu = 4
        const int samples = 32;
        const SpectralPath f = single_mode_path(
            [](double t) { return std::sin(2.0 * M_PI * t) + 0.3 * std::cos(4.0 * M_PI * t); },
            samples, p.T, mono);
        const SpectralPath g = lp_apply(f, p);

        auto f_pl = [&](double tau) {
            const double h = p.T / samples;
            const int k = std::min(static_cast<int>(tau / h), samples - 1);
            const double s = (tau - k * h) / h;
            return (1 - s) * f.states[k].U[0] + s * f.states[k + 1].U[0];
        };
        const double mu = 4.0;
        const double h = p.T / samples;
        for (int k : {0, 7, 19, 32}) {
            const double t = g.times[k];
            // quadrature panels aligned with the linear segments
            double front = 0.0, wrap = 0.0;
            for (int j = 0; j < k; ++j)
                front += oracles::quad(
                    [&](double tau) { return std::exp(-mu * (t - tau)) * f_pl(tau); }, j * h,
                    (j + 1) * h, 2);
            for (int j = k; j < samples; ++j)
                wrap += oracles::quad(
                    [&](double tau) { return std::exp(-mu * (t + p.T - tau)) * f_pl(tau); },
                    j * h, (j + 1) * h, 2);
            const double oracle = (front + wrap) / (1.0 - std::exp(-mu * p.T));
            CHECK(g.states[k].U[0] == doctest::Approx(oracle).epsilon(1e-9));
        }
    }
    SUBCASE("periodicity is structural and the operator is linear") {
        const int samples = 128;
        SpectralPath f1, f2;
        f1.times = f2.times = Vec::LinSpaced(samples + 1, 0.0, p.T);
        for (int k = 0; k <= samples; ++k) {
            const double t = f1.times[k];
            const double c1 = std::sin(2.0 * M_PI * t), c2 = std::cos(4.0 * M_PI * t);
            f1.states.emplace_back(c1 * Vec::Ones(6), c1 * Vec::Ones(6), basis);
            f2.states.emplace_back(c2 * Vec::Ones(6), -c2 * Vec::Ones(6), basis);
        }
        f1.states.back() = f1.states.front();
        f2.states.back() = f2.states.front();

        const SpectralPath g1 = lp_apply(f1, p), g2 = lp_apply(f2, p);
        CHECK((g1.states.front() - g1.states.back()).znorm() == 0.0);

        SpectralPath fsum = f1;
        for (int k = 0; k <= samples; ++k)
            fsum.states[k] = f1.states[k] + (-2.0) * f2.states[k];
        const SpectralPath gsum = lp_apply(fsum, p);
        for (int k = 0; k <= samples; ++k) {
            const SpectralPair expect = g1.states[k] + (-2.0) * g2.states[k];
            CHECK((gsum.states[k] - expect).znorm() <= 1e-12 * (1.0 + expect.znorm()));
        }

        SpectralPath zero = f1;
        for (auto& st : zero.states) st = SpectralPair::zero(5, basis);
        const SpectralPath gz = lp_apply(zero, p);
        for (const auto& st : gz.states) CHECK(st.znorm() == 0.0);
    }
    SUBCASE("non-uniform grids and non-periodic forcings are rejected") {
        SpectralPath bad;
        bad.times = Vec(3);
        bad.times << 0.0, 0.4, 1.0;
        for (int k = 0; k < 3; ++k) bad.states.push_back(SpectralPair::zero(5, basis));
        CHECK_THROWS_AS(lp_apply(bad, p), ParameterError);

        SpectralPath open_path;
        const int samples = 16;
        open_path.times = Vec::LinSpaced(samples + 1, 0.0, p.T);
        for (int k = 0; k <= samples; ++k) {
            Vec u = Vec::Constant(6, static_cast<double>(k)), w = Vec::Zero(6);
            open_path.states.emplace_back(u, w, basis);
        }
        CHECK_THROWS_AS(lp_apply(open_path, p), ParameterError);
    }
}

TEST_CASE("norm bound of the periodic integral operator with the quoted constant") {
    FractionalParams p = default_params();
    CHECK(lp_norm_constant(p) == doctest::Approx(17.819767068693264).epsilon(1e-12));

    // Random periodic forcings at a truncation where the weight
    // sqrt(1 + lambda_max^(2 alpha0)) stays below a1 * C; beyond that the
    // W block can exceed the C_T-normed bound.
    auto basis = oracles::synthetic_basis({0.0, 1.0, 4.0, 9.0, 16.0, 25.0});
    const double weight_max = std::sqrt(1.0 + std::pow(25.0, 1.6));
    REQUIRE(weight_max < p.a1 * lp_norm_constant(p));

    std::mt19937_64 rng(13);
    const int samples = 96;
    for (int rep = 0; rep < 50; ++rep) {
        SpectralPath f;
        f.times = Vec::LinSpaced(samples + 1, 0.0, p.T);
        Eigen::MatrixXd cu = Eigen::MatrixXd::Random(6, 3), cw = Eigen::MatrixXd::Random(6, 3);
        for (int k = 0; k <= samples; ++k) {
            const double t = f.times[k];
            Vec u(6), w(6);
            for (int i = 0; i < 6; ++i) {
                u[i] = cu(i, 0) + cu(i, 1) * std::sin(2 * M_PI * t) +
                       cu(i, 2) * std::cos(4 * M_PI * t);
                w[i] = cw(i, 0) + cw(i, 1) * std::cos(2 * M_PI * t) +
                       cw(i, 2) * std::sin(4 * M_PI * t);
            }
            f.states.emplace_back(u, w, basis);
        }
        f.states.back() = f.states.front();

        const SpectralPath g = lp_apply(f, p);
        double f_ct = 0.0, g_alpha = 0.0;
        for (int k = 0; k <= samples; ++k) {
            f_ct = std::max(f_ct, f.states[k].znorm());
            g_alpha = std::max(g_alpha, fractional_norm(g.states[k], p.alpha0));
        }
        CHECK(g_alpha <= lp_norm_constant(p) * f_ct);
    }
}

TEST_CASE("phi functions agree with their defining expressions") {
    for (double z : {-40.0, -3.0, -0.5, -0.011}) {
        CHECK(phi1(z) == doctest::Approx(std::expm1(z) / z).epsilon(1e-12));
        CHECK(phi2(z) == doctest::Approx((std::expm1(z) - z) / (z * z)).epsilon(1e-10));
    }
    CHECK(phi1(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(phi2(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    // continuity across the series/direct switch
    CHECK(phi2(-0.0099) == doctest::Approx(phi2(-0.0101)).epsilon(1e-4));
}
