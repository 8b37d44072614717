#pragma once

#include <string>
#include <vector>

#include "bidomain/assembly.hpp"
#include "bidomain/operator.hpp"
#include "bidomain/spectral.hpp"

namespace bidomain {

/// Shortest round-trippable decimal form of a double.
std::string format_double(double x);

/// Coordinate-format export: one "row,col,value" line per stored entry.
void write_matrix_coord(const std::string& path, const SpMat& m);

/// Header row with the eigenvalues, then one row per heart node with the
/// eigenvector coefficients.
void write_eigenbasis(const std::string& path, const EigenBasis& basis);

/// Wide path format: t, U_0..U_m, W_0..W_m.
void write_path(const std::string& path, const SpectralPath& p);
SpectralPath read_path(const std::string& path, std::shared_ptr<const EigenBasis> basis);

/// Generic table with a header line.
void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows);

/// Mesh nodes as "id,x,y,region" with region 0 = heart, 1 = torso-only.
void write_mesh_nodes(const std::string& path, const CoupledMesh& mesh);

}  // namespace bidomain
