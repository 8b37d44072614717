#include "bidomain/mesh.hpp"

#include <cmath>
#include <string>

#include "bidomain/errors.hpp"

namespace bidomain {

CoupledMesh build_strip_mesh(const MeshConfig& cfg) {
    const double heart_w = cfg.heart_x1 - cfg.heart_x0;
    const double torso_w = cfg.torso_x1 - cfg.heart_x1;

    if (cfg.nx_heart < 1) throw ConfigError("build_strip_mesh: nx_heart must be >= 1");
    if (cfg.ny < 1) throw ConfigError("build_strip_mesh: ny must be >= 1");
    if (cfg.nx_torso < 0) throw ConfigError("build_strip_mesh: nx_torso must be >= 0");
    if (heart_w <= 0.0) throw ConfigError("build_strip_mesh: heart extent must be positive");
    if (cfg.y_period <= 0.0) throw ConfigError("build_strip_mesh: y_period must be positive");
    if (torso_w < 0.0) throw ConfigError("build_strip_mesh: torso extent must be non-negative");
    if ((torso_w == 0.0) != (cfg.nx_torso == 0))
        throw ConfigError("build_strip_mesh: zero torso width requires nx_torso == 0 and vice versa");

    CoupledMesh m;
    m.config = cfg;

    const int nx = cfg.nx_heart + cfg.nx_torso;
    const int ny = cfg.ny;
    const double hy = cfg.y_period / ny;
    const double hx_heart = heart_w / cfg.nx_heart;
    const double hx_torso = cfg.nx_torso > 0 ? torso_w / cfg.nx_torso : 0.0;

    m.num_nodes = (nx + 1) * ny;
    m.num_heart_nodes = (cfg.nx_heart + 1) * ny;
    m.heart_area = heart_w * cfg.y_period;

    m.node_x.resize(m.num_nodes);
    m.node_y.resize(m.num_nodes);
    auto node_id = [ny](int ix, int iy) { return ix * ny + (iy % ny); };
    for (int ix = 0; ix <= nx; ++ix) {
        const double x = ix <= cfg.nx_heart
                             ? cfg.heart_x0 + ix * hx_heart
                             : cfg.heart_x1 + (ix - cfg.nx_heart) * hx_torso;
        for (int iy = 0; iy < ny; ++iy) {
            const int id = node_id(ix, iy);
            m.node_x[id] = x;
            m.node_y[id] = iy * hy;
        }
    }

    m.elements.reserve(static_cast<std::size_t>(nx) * ny);
    for (int ix = 0; ix < nx; ++ix) {
        const bool in_heart = ix < cfg.nx_heart;
        for (int iy = 0; iy < ny; ++iy) {
            Element e;
            e.nodes = {node_id(ix, iy), node_id(ix + 1, iy),
                       node_id(ix + 1, iy + 1), node_id(ix, iy + 1)};
            e.region = in_heart ? Region::heart : Region::torso;
            e.hx = in_heart ? hx_heart : hx_torso;
            e.hy = hy;
            m.elements.push_back(e);
        }
    }

    for (int iy = 0; iy < ny; ++iy) m.endo_nodes.push_back(node_id(0, iy));
    for (int iy = 0; iy < ny; ++iy) m.epi_nodes.push_back(node_id(cfg.nx_heart, iy));
    for (int iy = 0; iy < ny; ++iy) m.torso_nodes.push_back(node_id(nx, iy));

    for (int iy = 0; iy < ny; ++iy)
        m.endo_edges.push_back({node_id(0, iy), node_id(0, iy + 1), hy});

    return m;
}

}  // namespace bidomain
