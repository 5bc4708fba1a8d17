#include "cdhom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace cdhom {

namespace {
constexpr double kDropTol = 1e-300;
}

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> offsets,
                           std::vector<int> col_indices, Vec values)
    : rows_(rows), cols_(cols), offsets_(std::move(offsets)),
      col_idx_(std::move(col_indices)), values_(std::move(values)) {
    if (rows_ < 0 || cols_ < 0 || (int)offsets_.size() != rows_ + 1)
        throw std::invalid_argument("SparseMatrix: malformed row offsets");
    if (col_idx_.size() != values_.size())
        throw std::invalid_argument("SparseMatrix: index/value size mismatch");
    for (int i = 0; i < rows_; ++i) {
        if (offsets_[i] > offsets_[i + 1])
            throw std::invalid_argument("SparseMatrix: offsets not monotone");
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            if (col_idx_[k] < 0 || col_idx_[k] >= cols_)
                throw std::invalid_argument("SparseMatrix: column out of range");
            if (k > offsets_[i] && col_idx_[k] <= col_idx_[k - 1])
                throw std::invalid_argument(
                    "SparseMatrix: columns not strictly increasing in row");
        }
    }
}

SparseMatrix SparseMatrix::identity(int n) {
    std::vector<int> off(n + 1), idx(n);
    Vec val(n, 1.0);
    for (int i = 0; i <= n; ++i) off[i] = i;
    for (int i = 0; i < n; ++i) idx[i] = i;
    return SparseMatrix(n, n, std::move(off), std::move(idx), std::move(val));
}

SparseMatrix SparseMatrix::diagonal(const Vec& d) {
    const int n = (int)d.size();
    CooBuilder b(n, n);
    for (int i = 0; i < n; ++i) b.add(i, i, d[i]);
    return b.finalize();
}

void SparseMatrix::multiply_into(const Vec& x, Vec& y) const {
    if ((int)x.size() != cols_)
        throw std::invalid_argument("spmv: dimension mismatch");
    y.assign(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            s += values_[k] * x[col_idx_[k]];
        y[i] = s;
    }
}

Vec SparseMatrix::multiply(const Vec& x) const {
    Vec y;
    multiply_into(x, y);
    return y;
}

Vec SparseMatrix::diagonal_entries() const {
    Vec d(rows_, 0.0);
    for (int i = 0; i < rows_; ++i)
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            if (col_idx_[k] == i) d[i] = values_[k];
    return d;
}

std::vector<int> SparseMatrix::diagonal_positions() const {
    std::vector<int> pos(rows_, -1);
    for (int i = 0; i < rows_; ++i)
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k)
            if (col_idx_[k] == i) pos[i] = k;
    return pos;
}

double SparseMatrix::max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < rows_; ++i) {
        for (int k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            const int j = col_idx_[k];
            double aji = 0.0;
            if (j < rows_) {
                for (int l = offsets_[j]; l < offsets_[j + 1]; ++l)
                    if (col_idx_[l] == i) { aji = values_[l]; break; }
            }
            worst = std::max(worst, std::abs(values_[k] - aji));
        }
    }
    return worst;
}

CooBuilder::CooBuilder(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("CooBuilder: negative dimensions");
}

void CooBuilder::add(int i, int j, double v) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw std::invalid_argument("CooBuilder: index out of range");
    entries_.push_back({i, j, v});
}

SparseMatrix CooBuilder::finalize() {
    std::stable_sort(entries_.begin(), entries_.end(),
                     [](const Entry& a, const Entry& b) {
                         return a.i != b.i ? a.i < b.i : a.j < b.j;
                     });
    std::vector<int> off(rows_ + 1, 0), idx;
    Vec val;
    idx.reserve(entries_.size());
    val.reserve(entries_.size());
    std::size_t k = 0;
    for (int i = 0; i < rows_; ++i) {
        while (k < entries_.size() && entries_[k].i == i) {
            const int j = entries_[k].j;
            double s = 0.0;
            while (k < entries_.size() && entries_[k].i == i &&
                   entries_[k].j == j)
                s += entries_[k++].v;
            if (std::abs(s) >= kDropTol) {
                idx.push_back(j);
                val.push_back(s);
            }
        }
        off[i + 1] = (int)idx.size();
    }
    return SparseMatrix(rows_, cols_, std::move(off), std::move(idx),
                        std::move(val));
}

SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double ca,
                 double cb) {
    if (A.rows() != B.rows() || A.cols() != B.cols())
        throw std::invalid_argument("add: dimension mismatch");
    const auto& ao = A.row_offsets();
    const auto& ac = A.col_indices();
    const auto& av = A.values();
    const auto& bo = B.row_offsets();
    const auto& bc = B.col_indices();
    const auto& bv = B.values();
    std::vector<int> off(A.rows() + 1, 0), idx;
    Vec val;
    idx.reserve(av.size() + bv.size());
    val.reserve(av.size() + bv.size());
    for (int i = 0; i < A.rows(); ++i) {
        int p = ao[i], q = bo[i];
        while (p < ao[i + 1] || q < bo[i + 1]) {
            int j;
            double s;
            if (q >= bo[i + 1] || (p < ao[i + 1] && ac[p] < bc[q])) {
                j = ac[p];
                s = ca * av[p++];
            } else if (p >= ao[i + 1] || bc[q] < ac[p]) {
                j = bc[q];
                s = cb * bv[q++];
            } else {
                j = ac[p];
                s = ca * av[p++] + cb * bv[q++];
            }
            if (std::abs(s) >= kDropTol) {
                idx.push_back(j);
                val.push_back(s);
            }
        }
        off[i + 1] = (int)idx.size();
    }
    return SparseMatrix(A.rows(), A.cols(), std::move(off), std::move(idx),
                        std::move(val));
}

Vec spmv(const SparseMatrix& A, const Vec& x) { return A.multiply(x); }

double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

namespace {

void remove_mean(Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    const double mean = s / (double)v.size();
    for (double& x : v) x -= mean;
}

}  // namespace

std::pair<Vec, SolveReport> cg_solve(const SparseMatrix& A, const Vec& b,
                                     double tol, int max_iter, Precond precond,
                                     const Vec* x0,
                                     bool project_out_constants) {
    const int n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("cg_solve: matrix not square");
    if ((int)b.size() != n)
        throw std::invalid_argument("cg_solve: rhs size mismatch");
    if (x0 && (int)x0->size() != n)
        throw std::invalid_argument("cg_solve: x0 size mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be > 0");
    if (max_iter < 0) max_iter = 10 * n;

    Vec rhs = b;
    if (project_out_constants) remove_mean(rhs);
    const double bnorm = norm2(rhs);
    SolveReport rep;
    if (bnorm == 0.0) {
        rep.converged = true;
        return {Vec(n, 0.0), rep};
    }

    Vec invdiag;
    if (precond == Precond::jacobi) {
        invdiag = A.diagonal_entries();
        for (double& d : invdiag) d = (d > 0.0) ? 1.0 / d : 1.0;
    }

    Vec x = x0 ? *x0 : Vec(n, 0.0);
    if (project_out_constants) remove_mean(x);
    Vec r(n), z(n), p(n), Ap(n);
    A.multiply_into(x, Ap);
    for (int i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
    if (project_out_constants) remove_mean(r);

    auto apply_precond = [&](const Vec& in, Vec& out) {
        if (precond == Precond::jacobi) {
            for (int i = 0; i < n; ++i) out[i] = invdiag[i] * in[i];
        } else {
            out = in;
        }
    };

    apply_precond(r, z);
    p = z;
    double rz = dot(r, z);
    double rnorm = norm2(r);

    int it = 0;
    while (rnorm > tol * bnorm && it < max_iter) {
        if (project_out_constants) remove_mean(p);
        A.multiply_into(p, Ap);
        const double pAp = dot(p, Ap);
        if (!(pAp > 0.0)) {
            rep.iterations = it;
            rep.rel_residual = rnorm / bnorm;
            throw NumericalError("cg_solve: non-positive curvature (matrix not SPD?)",
                                 rep);
        }
        const double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) x[i] += alpha * p[i];
        for (int i = 0; i < n; ++i) r[i] -= alpha * Ap[i];
        if (project_out_constants) remove_mean(r);
        ++it;
        rnorm = norm2(r);
        if (rnorm <= tol * bnorm) {
            // Recurrence residual can drift; accept only a recomputed one.
            A.multiply_into(x, Ap);
            for (int i = 0; i < n; ++i) r[i] = rhs[i] - Ap[i];
            if (project_out_constants) remove_mean(r);
            rnorm = norm2(r);
            if (rnorm <= tol * bnorm) break;
        }
        apply_precond(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }

    rep.iterations = it;
    rep.rel_residual = rnorm / bnorm;
    rep.converged = rnorm <= tol * bnorm;
    if (!rep.converged)
        throw NumericalError("cg_solve: no convergence within iteration budget",
                             rep);
    return {std::move(x), rep};
}

}  // namespace cdhom
