#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace bidomain {

enum class Region : std::uint8_t { heart = 0, torso = 1 };

struct MeshConfig {
    double heart_x0 = 0.0;
    double heart_x1 = 1.0;
    double torso_x1 = 2.0;   // right face of the torso; == heart_x1 in no-torso mode
    double y_period = 1.0;
    int nx_heart = 8;
    int nx_torso = 8;
    int ny = 8;
};

/// One bilinear quadrilateral, nodes in counterclockwise order starting at
/// the lower-left corner. Under the transverse periodic identification the
/// top row of an element can alias the bottom row of the strip.
struct Element {
    std::array<int, 4> nodes;
    Region region;
    double hx, hy;  // axis-aligned edge lengths
};

/// Edge on a tagged boundary face, oriented along +y.
struct BoundaryEdge {
    int n0, n1;     // endpoint node ids (n1 may wrap to the y=0 row)
    double length;
};

/// Discrete heart+torso strip, periodic in y.
///
/// Nodes are numbered column-major in x: id = ix*ny + iy with ix in [0, nx]
/// and iy in [0, ny). The y = y_period row is identified with iy = 0, so the
/// heart degrees of freedom are exactly the prefix [0, num_heart_nodes).
struct CoupledMesh {
    MeshConfig config;

    std::vector<double> node_x, node_y;
    std::vector<Element> elements;

    int num_nodes = 0;        // after periodic identification
    int num_heart_nodes = 0;  // nodes with ix <= nx_heart
    double heart_area = 0.0;

    std::vector<int> endo_nodes;   // x = heart_x0 face
    std::vector<int> epi_nodes;    // x = heart_x1 face (shared heart/torso)
    std::vector<int> torso_nodes;  // x = torso_x1 face (== epi face when no torso)

    std::vector<BoundaryEdge> endo_edges;

    bool no_torso() const { return config.nx_torso == 0; }
};

/// Builds the strip mesh. Throws ConfigError on non-positive extents or
/// resolutions; nx_torso == 0 together with zero torso width selects the
/// officially supported no-torso mode.
CoupledMesh build_strip_mesh(const MeshConfig& config);

}  // namespace bidomain
