#include "cdhom/fem.hpp"

#include <cmath>
#include <stdexcept>

namespace cdhom {

ElemGeom elem_geom(const Mesh& mesh, int e) {
    ElemGeom g;
    if (mesh.dim == 1) {
        g.nv = 2;
        const int v0 = mesh.vertex(e, 0), v1 = mesh.vertex(e, 1);
        const double h = mesh.x(v1) - mesh.x(v0);
        g.measure = h;
        g.grad[0][0] = -1.0 / h;
        g.grad[1][0] = 1.0 / h;
        g.bary[0] = 0.5 * (mesh.x(v0) + mesh.x(v1));
        return g;
    }
    g.nv = 3;
    const int v0 = mesh.vertex(e, 0), v1 = mesh.vertex(e, 1),
              v2 = mesh.vertex(e, 2);
    const double x0 = mesh.x(v0), y0 = mesh.y(v0);
    const double x1 = mesh.x(v1), y1 = mesh.y(v1);
    const double x2 = mesh.x(v2), y2 = mesh.y(v2);
    const double twice_area = (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0);
    g.measure = 0.5 * twice_area;
    // grad phi_i = rot(opposite edge) / (2|T|), counterclockwise orientation.
    g.grad[0][0] = (y1 - y2) / twice_area;
    g.grad[0][1] = (x2 - x1) / twice_area;
    g.grad[1][0] = (y2 - y0) / twice_area;
    g.grad[1][1] = (x0 - x2) / twice_area;
    g.grad[2][0] = (y0 - y1) / twice_area;
    g.grad[2][1] = (x1 - x0) / twice_area;
    g.bary[0] = (x0 + x1 + x2) / 3.0;
    g.bary[1] = (y0 + y1 + y2) / 3.0;
    return g;
}

SparseMatrix assemble_stiffness(const Mesh& mesh, const ElemCoeffFn& coeff,
                                const std::vector<int>* vmap, int n_unknowns) {
    const int n = vmap ? n_unknowns : mesh.n_vertices();
    if (vmap && n_unknowns <= 0)
        throw std::invalid_argument("assemble_stiffness: bad n_unknowns");
    CooBuilder builder(n, n);
    const int ne = mesh.n_elements();
    for (int e = 0; e < ne; ++e) {
        const ElemGeom g = elem_geom(mesh, e);
        const Mat2 A = coeff(e, g.bary);
        for (int i = 0; i < g.nv; ++i) {
            int gi = mesh.vertex(e, i);
            if (vmap) gi = (*vmap)[gi];
            for (int j = 0; j < g.nv; ++j) {
                int gj = mesh.vertex(e, j);
                if (vmap) gj = (*vmap)[gj];
                double agj[2] = {0.0, 0.0};
                for (int r = 0; r < mesh.dim; ++r)
                    for (int c = 0; c < mesh.dim; ++c)
                        agj[r] += A.m[r][c] * g.grad[j][c];
                double kij = 0.0;
                for (int r = 0; r < mesh.dim; ++r) kij += agj[r] * g.grad[i][r];
                builder.add(gi, gj, g.measure * kij);
            }
        }
    }
    return builder.finalize();
}

Vec assemble_lumped_mass(const Mesh& mesh, const std::vector<int>* vmap,
                         int n_unknowns) {
    const int n = vmap ? n_unknowns : mesh.n_vertices();
    Vec m(n, 0.0);
    const int ne = mesh.n_elements();
    const double share = 1.0 / mesh.verts_per_elem;
    for (int e = 0; e < ne; ++e) {
        const double w = mesh.measures[e] * share;
        for (int k = 0; k < mesh.verts_per_elem; ++k) {
            int v = mesh.vertex(e, k);
            if (vmap) v = (*vmap)[v];
            m[v] += w;
        }
    }
    return m;
}

SparseMatrix assemble_consistent_mass(const Mesh& mesh) {
    const int n = mesh.n_vertices();
    CooBuilder builder(n, n);
    const int ne = mesh.n_elements();
    const int nv = mesh.verts_per_elem;
    // 1D: h/6 [[2,1],[1,2]]; 2D: |T|/12 [[2,1,1],[1,2,1],[1,1,2]].
    const double off = (mesh.dim == 1) ? 1.0 / 6.0 : 1.0 / 12.0;
    for (int e = 0; e < ne; ++e) {
        const double w = mesh.measures[e] * off;
        for (int i = 0; i < nv; ++i)
            for (int j = 0; j < nv; ++j)
                builder.add(mesh.vertex(e, i), mesh.vertex(e, j),
                            (i == j ? 2.0 : 1.0) * w);
    }
    return builder.finalize();
}

double max_element_diameter(const Mesh& mesh) {
    double h = 0.0;
    const int ne = mesh.n_elements();
    for (int e = 0; e < ne; ++e) {
        if (mesh.dim == 1) {
            h = std::max(h, mesh.measures[e]);
        } else {
            for (int k = 0; k < 3; ++k) {
                const int a = mesh.vertex(e, k);
                const int b = mesh.vertex(e, (k + 1) % 3);
                const double dx = mesh.x(a) - mesh.x(b);
                const double dy = mesh.y(a) - mesh.y(b);
                h = std::max(h, std::hypot(dx, dy));
            }
        }
    }
    return h;
}

}  // namespace cdhom
