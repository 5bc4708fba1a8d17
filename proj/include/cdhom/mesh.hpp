#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace cdhom {

// Conforming P1 mesh: interval partitions in 1D, criss-cross triangulations
// of the unit square in 2D. Vertex coordinates are stored interleaved
// (dim doubles per vertex); elements store vertex indices, counterclockwise
// in 2D.
struct Mesh {
    int dim = 1;
    int verts_per_elem = 2;
    std::vector<double> coords;
    std::vector<int> elems;
    std::vector<std::uint8_t> on_boundary;
    std::vector<double> measures;
    // Criss-cross bookkeeping: grid squares per side, 0 for interval meshes.
    int grid_n = 0;

    int n_vertices() const { return (int)coords.size() / dim; }
    int n_elements() const { return (int)elems.size() / verts_per_elem; }
    double x(int v) const { return coords[(std::size_t)dim * v]; }
    double y(int v) const { return coords[(std::size_t)dim * v + 1]; }
    int vertex(int e, int k) const {
        return elems[(std::size_t)verts_per_elem * e + k];
    }
    double total_measure() const;

    // Lexicographic grid vertex (i,j), 0 <= i,j <= grid_n.
    int grid_vertex(int i, int j) const { return j * (grid_n + 1) + i; }
    // Center vertex of square (i,j), 0 <= i,j < grid_n.
    int center_vertex(int i, int j) const {
        return (grid_n + 1) * (grid_n + 1) + j * grid_n + i;
    }

    // Plain text dump: "dim n_vertices n_elements", vertex coordinate lines,
    // then element index lines.
    void dump(std::ostream& os) const;
};

// Equispaced partition of [a,b] into n_cells >= 2 cells.
Mesh build_interval_mesh(int n_cells, double a, double b);

// Criss-cross triangulation of (0,1)^2: n x n squares, each split into four
// triangles through its center. Grid vertices first (lexicographic), then
// the n^2 centers.
Mesh build_crisscross_mesh(int n);

}  // namespace cdhom
