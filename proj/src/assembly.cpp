#include "bidomain/assembly.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "bidomain/errors.hpp"

namespace bidomain {

double Tensor2::eig_min() const {
    const double tr = xx + yy;
    const double d = std::sqrt((xx - yy) * (xx - yy) / 4.0 + xy * xy);
    return tr / 2.0 - d;
}

double Tensor2::eig_max() const {
    const double tr = xx + yy;
    const double d = std::sqrt((xx - yy) * (xx - yy) / 4.0 + xy * xy);
    return tr / 2.0 + d;
}

void validate_conductivity(const CoupledMesh& mesh, const ConductivityField& cond) {
    const double slack = 1e-12;
    const int n_heart_el = mesh.config.nx_heart * mesh.config.ny;
    const int n_torso_el = mesh.config.nx_torso * mesh.config.ny;
    auto size_ok = [](const std::vector<Tensor2>& v, int n) {
        return v.empty() || static_cast<int>(v.size()) == n;
    };
    if (!size_ok(cond.sigma_i_elem, n_heart_el) || !size_ok(cond.sigma_e_elem, n_heart_el) ||
        !size_ok(cond.sigma_t_elem, n_torso_el))
        throw ConfigError("conductivity: per-element table size does not match the mesh");

    auto check_spd = [&](const Tensor2& t, const char* name) {
        if (t.eig_min() < cond.m_ell - slack || t.eig_max() > cond.M_ell + slack)
            throw EllipticityError(std::string("conductivity: eigenvalues of ") + name +
                                   " outside [m_ell, M_ell]");
    };
    // Fiber alignment on elements touching the endo or epi faces: normals are
    // +-e_x there, so the heart tensors may not couple the normal into the
    // tangential direction.
    auto check_fiber = [&](const Tensor2& t, const char* name) {
        if (t.xy != 0.0)
            throw FiberError(std::string("conductivity: ") + name +
                             " must be normal-aligned on the endo/epi faces");
        if (t.xx < cond.m_ell - slack)
            throw FiberError(std::string("conductivity: normal coefficient of ") + name +
                             " below m_ell on the heart boundary");
    };
    const int ny = mesh.config.ny;
    for (int k = 0; k < n_heart_el; ++k) {
        const Tensor2 si = cond.heart_i(k), se = cond.heart_e(k);
        check_spd(si, "sigma_i");
        check_spd(se, "sigma_e");
        const int ix = k / ny;
        if (ix == 0 || ix == mesh.config.nx_heart - 1) {
            check_fiber(si, "sigma_i");
            check_fiber(se, "sigma_e");
        }
    }
    for (int k = 0; k < n_torso_el; ++k) check_spd(cond.torso(k), "sigma_t");
}

Vec FormAssembly::extend_by_zero(const Vec& heart_vec) const {
    Vec out = Vec::Zero(full_dim());
    out.head(heart_dim()) = heart_vec;
    return out;
}

Vec FormAssembly::restrict_heart(const Vec& full_vec) const {
    return full_vec.head(heart_dim());
}

namespace {

struct LocalMats {
    Eigen::Matrix4d K;  // region stiffness
    Eigen::Matrix4d K1; // unit-tensor stiffness
    Eigen::Matrix4d M;
};

// Reference bilinear shape functions on [0,1]^2.
inline std::array<double, 4> shape(double u, double v) {
    return {(1 - u) * (1 - v), u * (1 - v), u * v, (1 - u) * v};
}
inline std::array<std::array<double, 2>, 4> shape_grad(double u, double v) {
    return {{{-(1 - v), -(1 - u)}, {(1 - v), -u}, {v, u}, {-v, (1 - u)}}};
}

LocalMats element_matrices(const Element& e, const Tensor2& sigma) {
    LocalMats loc;
    loc.K.setZero();
    loc.K1.setZero();
    loc.M.setZero();
    // 2x2 Gauss, exact for bilinear stiffness and mass on rectangles.
    const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};
    const double jac = e.hx * e.hy;
    for (double u : gp) {
        for (double v : gp) {
            const auto N = shape(u, v);
            const auto dN = shape_grad(u, v);
            const double w = 0.25 * jac;
            for (int a = 0; a < 4; ++a) {
                const double gax = dN[a][0] / e.hx;
                const double gay = dN[a][1] / e.hy;
                for (int b = 0; b < 4; ++b) {
                    const double gbx = dN[b][0] / e.hx;
                    const double gby = dN[b][1] / e.hy;
                    loc.K(a, b) += w * (gax * (sigma.xx * gbx + sigma.xy * gby) +
                                        gay * (sigma.xy * gbx + sigma.yy * gby));
                    loc.K1(a, b) += w * (gax * gbx + gay * gby);
                    loc.M(a, b) += w * N[a] * N[b];
                }
            }
        }
    }
    return loc;
}

SpMat from_triplets(int n, const std::vector<Eigen::Triplet<double>>& trips) {
    SpMat out(n, n);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace

FormAssembly assemble_forms(const CoupledMesh& mesh, const ConductivityField& cond, Exec exec) {
    validate_conductivity(mesh, cond);

    FormAssembly fa;
    fa.mesh = &mesh;
    fa.cond = cond;

    const int n_el = static_cast<int>(mesh.elements.size());
    const int n_heart_el = mesh.config.nx_heart * mesh.config.ny;
    const bool par = exec == Exec::parallel;

    // Per-element local matrices computed independently, then scattered in
    // fixed element order so the triplet streams do not depend on scheduling.
    struct ElemData {
        LocalMats region;    // sigma_i (heart) or sigma_t (torso)
        LocalMats extra;     // sigma_e (heart only)
        LocalMats sum;       // sigma_i+sigma_e (heart) or sigma_t (torso)
    };
    std::vector<ElemData> data(n_el);

#pragma omp parallel for schedule(static) if (par)
    for (int k = 0; k < n_el; ++k) {
        const Element& e = mesh.elements[k];
        if (e.region == Region::heart) {
            const Tensor2 si = cond.heart_i(k), se = cond.heart_e(k);
            data[k].region = element_matrices(e, si);
            data[k].extra = element_matrices(e, se);
            data[k].sum = element_matrices(e, Tensor2{si.xx + se.xx, si.yy + se.yy,
                                                      si.xy + se.xy});
        } else {
            data[k].region = element_matrices(e, cond.torso(k - n_heart_el));
            data[k].sum = data[k].region;
        }
    }

    const int n_h = mesh.num_heart_nodes;
    const int n_f = mesh.num_nodes;
    std::vector<Eigen::Triplet<double>> t_ki, t_ke, t_kfull, t_mh, t_kh1, t_kh1full;
    for (int k = 0; k < n_el; ++k) {
        const Element& e = mesh.elements[k];
        const bool heart = e.region == Region::heart;
        for (int a = 0; a < 4; ++a) {
            for (int b = 0; b < 4; ++b) {
                const int ga = e.nodes[a], gb = e.nodes[b];
                t_kfull.emplace_back(ga, gb, data[k].sum.K(a, b));
                t_kh1full.emplace_back(ga, gb, data[k].region.K1(a, b));
                if (heart) {
                    t_ki.emplace_back(ga, gb, data[k].region.K(a, b));
                    t_ke.emplace_back(ga, gb, data[k].extra.K(a, b));
                    t_mh.emplace_back(ga, gb, data[k].region.M(a, b));
                    t_kh1.emplace_back(ga, gb, data[k].region.K1(a, b));
                }
            }
        }
    }

    fa.K_i = from_triplets(n_h, t_ki);
    fa.K_e = from_triplets(n_h, t_ke);
    fa.K_full = from_triplets(n_f, t_kfull);
    fa.M_H = from_triplets(n_h, t_mh);
    fa.K_h1 = from_triplets(n_h, t_kh1);
    fa.K_h1full = from_triplets(n_f, t_kh1full);

    fa.heart_mean = Vec::Zero(n_f);
    fa.heart_mean.head(n_h) = fa.M_H * Vec::Ones(n_h);

    return fa;
}

EndoQuadrature endo_quadrature(const CoupledMesh& mesh) {
    EndoQuadrature q;
    const double off = 0.5 / std::sqrt(3.0);
    for (const BoundaryEdge& e : mesh.endo_edges) {
        const double y0 = mesh.node_y[e.n0];
        for (double s : {0.5 - off, 0.5 + off}) {
            q.y.push_back(y0 + s * e.length);
            q.w.push_back(0.5 * e.length);
        }
    }
    return q;
}

Vec assemble_endo_load(const CoupledMesh& mesh, const Vec& s_vals) {
    const auto q = endo_quadrature(mesh);
    if (s_vals.size() != static_cast<Eigen::Index>(q.y.size()))
        throw ParameterError("assemble_endo_load: expected one sample per endo quadrature point");

    Vec load = Vec::Zero(mesh.num_heart_nodes);
    const double off = 0.5 / std::sqrt(3.0);
    int qi = 0;
    for (const BoundaryEdge& e : mesh.endo_edges) {
        for (double s : {0.5 - off, 0.5 + off}) {
            const double w = 0.5 * e.length * s_vals[qi];
            load[e.n0] += w * (1.0 - s);
            load[e.n1] += w * s;
            ++qi;
        }
    }
    return load;
}

CompatibilityCheck check_compatibility(const CoupledMesh& mesh, const Vec& s_vals, double tol) {
    const auto q = endo_quadrature(mesh);
    if (s_vals.size() != static_cast<Eigen::Index>(q.y.size()))
        throw ParameterError("check_compatibility: expected one sample per endo quadrature point");
    double integral = 0.0, s_max = 0.0;
    for (Eigen::Index i = 0; i < s_vals.size(); ++i) {
        integral += q.w[i] * s_vals[i];
        s_max = std::max(s_max, std::abs(s_vals[i]));
    }
    const double defect = std::abs(integral);
    const double threshold = tol * mesh.config.y_period * s_max;
    return {defect, defect <= threshold};
}

}  // namespace bidomain
