#include "bidomain/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bidomain/errors.hpp"

namespace bidomain {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    return out;
}

}  // namespace

void write_matrix_coord(const std::string& path, const SpMat& m) {
    auto out = open_out(path);
    out << "row,col,value\n";
    for (int k = 0; k < m.outerSize(); ++k)
        for (SpMat::InnerIterator it(m, k); it; ++it)
            out << it.row() << ',' << it.col() << ',' << format_double(it.value()) << '\n';
}

void write_eigenbasis(const std::string& path, const EigenBasis& basis) {
    auto out = open_out(path);
    for (int i = 0; i <= basis.m_max(); ++i)
        out << (i ? "," : "") << format_double(basis.lambdas[i]);
    out << '\n';
    for (int r = 0; r < basis.heart_dim(); ++r) {
        for (int i = 0; i <= basis.m_max(); ++i)
            out << (i ? "," : "") << format_double(basis.Psi(r, i));
        out << '\n';
    }
}

void write_path(const std::string& path, const SpectralPath& p) {
    auto out = open_out(path);
    const int level = p.level();
    out << "t";
    for (int i = 0; i <= level; ++i) out << ",u" << i;
    for (int i = 0; i <= level; ++i) out << ",w" << i;
    out << '\n';
    for (std::size_t k = 0; k < p.states.size(); ++k) {
        out << format_double(p.times[static_cast<Eigen::Index>(k)]);
        for (int i = 0; i <= level; ++i) out << ',' << format_double(p.states[k].U[i]);
        for (int i = 0; i <= level; ++i) out << ',' << format_double(p.states[k].W[i]);
        out << '\n';
    }
}

SpectralPath read_path(const std::string& path, std::shared_ptr<const EigenBasis> basis) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open path file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("path file is empty: " + path);
    const int cols = 1 + static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (cols < 3 || cols % 2 == 0) throw ConfigError("path file has a malformed header: " + path);
    const int level = (cols - 1) / 2 - 1;

    std::vector<double> times;
    std::vector<SpectralPair> states;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (static_cast<int>(vals.size()) != cols)
            throw ConfigError("path file row width mismatch: " + path);
        times.push_back(vals[0]);
        Vec U(level + 1), W(level + 1);
        for (int i = 0; i <= level; ++i) U[i] = vals[1 + i];
        for (int i = 0; i <= level; ++i) W[i] = vals[2 + level + i];
        states.emplace_back(std::move(U), std::move(W), basis);
    }
    SpectralPath p;
    p.times = Eigen::Map<Vec>(times.data(), static_cast<Eigen::Index>(times.size()));
    p.states = std::move(states);
    return p;
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
}

void write_mesh_nodes(const std::string& path, const CoupledMesh& mesh) {
    auto out = open_out(path);
    out << "id,x,y,region\n";
    for (int i = 0; i < mesh.num_nodes; ++i)
        out << i << ',' << format_double(mesh.node_x[i]) << ',' << format_double(mesh.node_y[i])
            << ',' << (i < mesh.num_heart_nodes ? 0 : 1) << '\n';
}

}  // namespace bidomain
