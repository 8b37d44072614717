#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bidomain/errors.hpp"
#include "bidomain/operator.hpp"
#include "oracles.hpp"

using namespace bidomain;

namespace {

struct Setup {
    CoupledMesh mesh;
    FormAssembly forms;

    explicit Setup(MeshConfig mc, ConductivityField cond = {}) : mesh(build_strip_mesh(mc)) {
        forms = assemble_forms(mesh, cond);
        forms.mesh = &mesh;
    }
};

MeshConfig coupled_cfg(int n = 8) {
    MeshConfig mc;
    mc.nx_heart = n;
    mc.nx_torso = n;
    mc.ny = n;
    return mc;
}

MeshConfig no_torso_cfg(int nx, int ny) {
    MeshConfig mc;
    mc.torso_x1 = mc.heart_x1;
    mc.nx_heart = nx;
    mc.nx_torso = 0;
    mc.ny = ny;
    return mc;
}

}  // namespace

TEST_CASE("coupled elliptic solve honors the constraint and matches the dense oracle") {
    Setup s(coupled_cfg());
    const CoupledEllipticSolver solver(s.forms);
    std::mt19937_64 rng(7);

    SUBCASE("zero load gives the zero solution") {
        const Vec W = solver.solve(Vec::Zero(s.forms.heart_dim()));
        CHECK(W.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("random compatible loads") {
        for (int rep = 0; rep < 5; ++rep) {
            Vec r = oracles::random_vec(rng, s.forms.heart_dim());
            r.array() -= r.sum() / s.forms.heart_dim();  // make it mean-free
            const Vec W = solver.solve(r);

            CHECK(std::abs(s.forms.heart_mean.dot(W)) < 1e-10 * W.norm());
            const Vec resid = s.forms.K_full * W + solver.last_multiplier() * s.forms.heart_mean -
                              s.forms.extend_by_zero(r);
            CHECK(resid.norm() <= 1e-10 * r.norm());

            const Vec W_oracle =
                oracles::dense_constrained_solve(s.forms, s.forms.extend_by_zero(r));
            CHECK((W - W_oracle).norm() <= 1e-9 * W_oracle.norm());
        }
    }
    SUBCASE("solves are deterministic") {
        Vec r = oracles::random_vec(rng, s.forms.heart_dim());
        r.array() -= r.sum() / s.forms.heart_dim();
        const Vec W1 = solver.solve(r);
        const Vec W2 = solver.solve(r);
        CHECK((W1 - W2).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("incompatible loads are rejected") {
        CHECK_THROWS_AS(solver.solve(Vec::Ones(s.forms.heart_dim())), CompatibilityError);
    }
}

TEST_CASE("no-torso isotropic solve reduces to the scalar identity W = psi / 3") {
    Setup s(no_torso_cfg(16, 16));
    const CoupledEllipticSolver solver(s.forms);

    Vec psi(s.forms.heart_dim());
    for (int i = 0; i < s.forms.heart_dim(); ++i) psi[i] = std::cos(M_PI * s.mesh.node_x[i]);

    const Vec r = s.forms.K_i * psi;
    const Vec W = solver.solve(r);
    CHECK((W - psi / 3.0).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("bilinear form is a gauge-invariant symmetric form with the proof constants") {
    ConductivityField cond;  // m = 1, M = 2
    Setup s(coupled_cfg());
    const BidomainOperator op(s.forms);
    std::mt19937_64 rng(21);

    SUBCASE("constants are annihilated") {
        const Vec c = Vec::Constant(s.forms.heart_dim(), 3.7);
        for (int rep = 0; rep < 5; ++rep) {
            const Vec v = oracles::random_vec(rng, s.forms.heart_dim());
            CHECK(std::abs(op.bilinear_a(c, v)) < 1e-10);
        }
    }
    SUBCASE("symmetry") {
        for (int rep = 0; rep < 20; ++rep) {
            const Vec u = oracles::random_vec(rng, s.forms.heart_dim());
            const Vec v = oracles::random_vec(rng, s.forms.heart_dim());
            CHECK(std::abs(op.bilinear_a(u, v) - op.bilinear_a(v, u)) <=
                  1e-12 * u.norm() * v.norm());
        }
    }
    SUBCASE("coercivity and continuity with m = 1, M = 2") {
        const double coercive = (cond.m_ell / 3.0) * (1.0 + cond.m_ell / (2.0 * cond.M_ell));
        const double continuous = cond.M_ell * (1.0 + cond.M_ell / (2.0 * cond.m_ell));
        CHECK(coercive == doctest::Approx(0.4166666667));
        for (int rep = 0; rep < 50; ++rep) {
            const Vec u = oracles::random_vec(rng, s.forms.heart_dim());
            const Vec v = oracles::random_vec(rng, s.forms.heart_dim());
            const double gu2 = u.dot(s.forms.K_h1 * u);
            const double gv2 = v.dot(s.forms.K_h1 * v);
            CHECK(op.bilinear_a(u, u) >= coercive * gu2 * (1.0 - 1e-10));
            CHECK(std::abs(op.bilinear_a(u, v)) <=
                  continuous * std::sqrt(gu2 * gv2) * (1.0 + 1e-10));
        }
    }
    SUBCASE("gauge invariance of the form and the recovery") {
        const Vec u = oracles::random_vec(rng, s.forms.heart_dim());
        const Vec v = oracles::random_vec(rng, s.forms.heart_dim());
        const Vec shifted = u.array() + 11.0;
        CHECK(op.bilinear_a(shifted, v) == doctest::Approx(op.bilinear_a(u, v)).epsilon(1e-9));
        const Vec r1 = op.recover_extracellular(u, Vec());
        const Vec r2 = op.recover_extracellular(shifted, Vec());
        CHECK((r1 - r2).cwiseAbs().maxCoeff() < 1e-9 * (1.0 + r1.norm()));
    }
}

TEST_CASE("eigenbasis: kernel mode, orthonormality, residuals, determinism") {
    Setup s(coupled_cfg());
    const BidomainOperator op(s.forms);
    const int m = 12;
    const auto basis = op.compute_eigenbasis(m);

    SUBCASE("lambda_0 = 0 with the constant eigenvector") {
        CHECK(std::abs(basis->lambdas[0]) < 1e-9);
        const double expected = 1.0 / std::sqrt(s.mesh.heart_area);
        for (int r = 0; r < basis->heart_dim(); ++r)
            CHECK(basis->Psi(r, 0) == doctest::Approx(expected).epsilon(1e-9));
        CHECK(basis->lambdas[1] > 1.0);
    }
    SUBCASE("mass orthonormality and eigen-residuals") {
        const Eigen::MatrixXd G =
            basis->Psi.transpose() * Eigen::MatrixXd(s.forms.M_H) * basis->Psi;
        CHECK((G - Eigen::MatrixXd::Identity(m + 1, m + 1)).cwiseAbs().maxCoeff() < 1e-9);
        for (int i = 0; i <= m; ++i) {
            const Vec resid = op.aform_matrix() * basis->Psi.col(i) -
                              basis->lambdas[i] * (s.forms.M_H * basis->Psi.col(i));
            const double scale = (s.forms.M_H * basis->Psi.col(i)).norm();
            CHECK(resid.norm() <= 1e-9 * scale * (1.0 + basis->lambdas[i]));
        }
    }
    SUBCASE("weak identity a(psi_i, v) = lambda_i (psi_i, v)") {
        std::mt19937_64 rng(5);
        for (int i = 0; i <= m; ++i) {
            const Vec v = oracles::random_vec(rng, s.forms.heart_dim());
            const double lhs = op.bilinear_a(basis->Psi.col(i), v);
            const double rhs = basis->lambdas[i] * basis->Psi.col(i).dot(s.forms.M_H * v);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8));
        }
    }
    SUBCASE("level preconditions") {
        CHECK_THROWS_AS(op.compute_eigenbasis(s.forms.heart_dim()), ParameterError);
    }
    SUBCASE("repeated computation is bitwise identical") {
        const auto again = op.compute_eigenbasis(m);
        CHECK((again->Psi - basis->Psi).cwiseAbs().maxCoeff() == 0.0);
        CHECK((again->lambdas - basis->lambdas).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("no-torso eigenvalues converge to the harmonic-mean spectrum") {
    const auto exact = oracles::harmonic_mean_spectrum(1.0, 2.0, 4);
    CHECK(exact[1] == doctest::Approx(2.0 / 3.0 * M_PI * M_PI));

    auto lambda1 = [&](int n) {
        Setup s(no_torso_cfg(n, n));
        const BidomainOperator op(s.forms);
        return op.compute_eigenbasis(2)->lambdas[1];
    };
    const double e8 = std::abs(lambda1(8) - exact[1]);
    const double e16 = std::abs(lambda1(16) - exact[1]);
    CHECK(e16 < e8 / 3.0);  // second-order trend
    CHECK(lambda1(16) == doctest::Approx(exact[1]).epsilon(0.01));
}

TEST_CASE("self-adjointness transfer on the eigenspan") {
    Setup s(coupled_cfg());
    const BidomainOperator op(s.forms);
    const int m = 10;
    const auto basis = op.compute_eigenbasis(m);
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        const Vec cu = oracles::random_vec(rng, m + 1);
        const Vec cv = oracles::random_vec(rng, m + 1);
        const Vec u = basis->synthesize(cu), v = basis->synthesize(cv);
        // (A u, v) through the eigen-expansion vs the bilinear form
        const double Au_v = (basis->lambdas.array() * cu.array() * cv.array()).sum();
        CHECK(std::abs(op.bilinear_a(u, v) - Au_v) <= 1e-9 * (1.0 + std::abs(Au_v)));
    }
}

TEST_CASE("forcing: zero, incompatible, and the dense composition oracle") {
    Setup s(no_torso_cfg(12, 12));
    const BidomainOperator op(s.forms);
    const auto q = endo_quadrature(s.mesh);
    const int nq = static_cast<int>(q.y.size());

    SUBCASE("zero trace gives zero forcing") {
        const auto f = op.compute_forcing(Vec::Zero(nq));
        CHECK(f.nodal.cwiseAbs().maxCoeff() < 1e-14);
        CHECK(f.load.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("constant trace is incompatible") {
        CHECK_THROWS_AS(op.compute_forcing(Vec::Ones(nq)), CompatibilityError);
    }
    SUBCASE("cosine trace matches the dense composition") {
        Vec svals(nq);
        for (int i = 0; i < nq; ++i) svals[i] = std::cos(2.0 * M_PI * q.y[i]);
        const auto f = op.compute_forcing(svals);

        const Vec endo = assemble_endo_load(s.mesh, svals);
        const Vec W = oracles::dense_constrained_solve(s.forms, s.forms.extend_by_zero(endo));
        const Vec load_oracle = -(s.forms.K_i * W.head(s.forms.heart_dim()));
        const Vec nodal_oracle =
            Eigen::FullPivLU<Eigen::MatrixXd>(Eigen::MatrixXd(s.forms.M_H)).solve(load_oracle);
        CHECK((f.nodal - nodal_oracle).norm() <= 1e-8 * nodal_oracle.norm());
    }
}

TEST_CASE("extracellular recovery solves the variational identity") {
    Setup s(coupled_cfg());
    const BidomainOperator op(s.forms);
    std::mt19937_64 rng(3);

    SUBCASE("zero data gives the zero potential") {
        const Vec u = op.recover_extracellular(Vec::Zero(s.forms.heart_dim()), Vec());
        CHECK(u.cwiseAbs().maxCoeff() < 1e-14);
    }
    SUBCASE("no-torso closed form u_e = -psi / 3") {
        Setup nt(no_torso_cfg(16, 16));
        const BidomainOperator opnt(nt.forms);
        Vec psi(nt.forms.heart_dim());
        for (int i = 0; i < nt.forms.heart_dim(); ++i)
            psi[i] = std::cos(M_PI * nt.mesh.node_x[i]);
        const Vec u = opnt.recover_extracellular(psi, Vec());
        CHECK((u + psi / 3.0).cwiseAbs().maxCoeff() < 1e-11);
    }
    SUBCASE("variational residual for random data") {
        const auto q = endo_quadrature(s.mesh);
        Vec svals(static_cast<int>(q.y.size()));
        for (Eigen::Index i = 0; i < svals.size(); ++i)
            svals[i] = std::cos(2.0 * M_PI * q.y[i]);
        const Vec endo = assemble_endo_load(s.mesh, svals);
        for (int rep = 0; rep < 5; ++rep) {
            const Vec um = oracles::random_vec(rng, s.forms.heart_dim());
            const Vec u = op.recover_extracellular(um, endo);
            const Vec resid = s.forms.K_full * u +
                              s.forms.extend_by_zero(s.forms.K_i * op.apply_J(um) - endo);
            CHECK(resid.norm() <= 1e-10 * (1.0 + um.norm()));
            CHECK(std::abs(s.forms.heart_mean.dot(u)) < 1e-10);
        }
    }
}
