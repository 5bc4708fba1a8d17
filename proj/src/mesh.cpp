#include "cdhom/mesh.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace cdhom {

double Mesh::total_measure() const {
    double s = 0.0;
    for (double m : measures) s += m;
    return s;
}

void Mesh::dump(std::ostream& os) const {
    os << dim << ' ' << n_vertices() << ' ' << n_elements() << '\n';
    os.precision(17);
    for (int v = 0; v < n_vertices(); ++v) {
        os << x(v);
        if (dim == 2) os << ' ' << y(v);
        os << '\n';
    }
    for (int e = 0; e < n_elements(); ++e) {
        for (int k = 0; k < verts_per_elem; ++k)
            os << (k ? " " : "") << vertex(e, k);
        os << '\n';
    }
}

Mesh build_interval_mesh(int n_cells, double a, double b) {
    if (n_cells < 2) throw std::invalid_argument("build_interval_mesh: n_cells < 2");
    if (!(b > a)) throw std::invalid_argument("build_interval_mesh: requires b > a");
    Mesh m;
    m.dim = 1;
    m.verts_per_elem = 2;
    m.coords.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        m.coords[i] = a + (b - a) * ((double)i / n_cells);
    m.coords.front() = a;
    m.coords.back() = b;
    m.elems.resize(2 * (std::size_t)n_cells);
    m.measures.resize(n_cells);
    for (int e = 0; e < n_cells; ++e) {
        m.elems[2 * (std::size_t)e] = e;
        m.elems[2 * (std::size_t)e + 1] = e + 1;
        m.measures[e] = m.coords[e + 1] - m.coords[e];
        if (!(m.measures[e] > 0.0))
            throw std::invalid_argument("build_interval_mesh: degenerate cell");
    }
    m.on_boundary.assign(n_cells + 1, 0);
    m.on_boundary.front() = 1;
    m.on_boundary.back() = 1;
    return m;
}

Mesh build_crisscross_mesh(int n) {
    if (n < 1) throw std::invalid_argument("build_crisscross_mesh: n < 1");
    Mesh m;
    m.dim = 2;
    m.verts_per_elem = 3;
    m.grid_n = n;
    const int ng = (n + 1) * (n + 1);
    const int nv = ng + n * n;
    m.coords.resize(2 * (std::size_t)nv);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) {
            const int v = m.grid_vertex(i, j);
            m.coords[2 * (std::size_t)v] = (double)i / n;
            m.coords[2 * (std::size_t)v + 1] = (double)j / n;
        }
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v = m.center_vertex(i, j);
            m.coords[2 * (std::size_t)v] = (i + 0.5) / n;
            m.coords[2 * (std::size_t)v + 1] = (j + 0.5) / n;
        }
    m.elems.reserve(12 * (std::size_t)n * n);
    m.measures.reserve(4 * (std::size_t)n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const int v00 = m.grid_vertex(i, j);
            const int v10 = m.grid_vertex(i + 1, j);
            const int v11 = m.grid_vertex(i + 1, j + 1);
            const int v01 = m.grid_vertex(i, j + 1);
            const int c = m.center_vertex(i, j);
            const int tris[4][3] = {
                {v00, v10, c}, {v10, v11, c}, {v11, v01, c}, {v01, v00, c}};
            for (const auto& t : tris) {
                m.elems.push_back(t[0]);
                m.elems.push_back(t[1]);
                m.elems.push_back(t[2]);
                const double ax = m.x(t[1]) - m.x(t[0]);
                const double ay = m.y(t[1]) - m.y(t[0]);
                const double bx = m.x(t[2]) - m.x(t[0]);
                const double by = m.y(t[2]) - m.y(t[0]);
                const double twice_area = ax * by - ay * bx;
                if (!(twice_area > 0.0))
                    throw std::invalid_argument(
                        "build_crisscross_mesh: non-positive element area");
                m.measures.push_back(0.5 * twice_area);
            }
        }
    m.on_boundary.assign(nv, 0);
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            if (i == 0 || i == n || j == 0 || j == n)
                m.on_boundary[m.grid_vertex(i, j)] = 1;
    return m;
}

}  // namespace cdhom
