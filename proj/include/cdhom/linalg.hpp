#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cdhom {

using Vec = std::vector<double>;

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
    bool converged = false;
};

// Thrown when an iterative solve breaks down or exhausts its iteration budget.
struct NumericalError : std::runtime_error {
    SolveReport report;
    explicit NumericalError(const std::string& what, SolveReport rep = {})
        : std::runtime_error(what), report(rep) {}
};

enum class Precond { none, jacobi };

// Compressed sparse row matrix. Column indices are strictly increasing within
// each row and entries below 1e-300 in magnitude are dropped at assembly.
class SparseMatrix {
  public:
    SparseMatrix() = default;
    SparseMatrix(int rows, int cols, std::vector<int> offsets,
                 std::vector<int> col_indices, Vec values);

    static SparseMatrix identity(int n);
    static SparseMatrix diagonal(const Vec& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t nnz() const { return values_.size(); }

    // y = A x with fixed index-ascending summation per row.
    void multiply_into(const Vec& x, Vec& y) const;
    Vec multiply(const Vec& x) const;

    Vec diagonal_entries() const;
    // Position of (i,i) inside values(), or -1 when structurally absent.
    std::vector<int> diagonal_positions() const;
    double max_asymmetry() const;

    const std::vector<int>& row_offsets() const { return offsets_; }
    const std::vector<int>& col_indices() const { return col_idx_; }
    const Vec& values() const { return values_; }
    Vec& values() { return values_; }

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<int> offsets_ = {0};
    std::vector<int> col_idx_;
    Vec values_;
};

// Accumulates (i,j,v) triplets; finalize() sorts, merges duplicates in
// insertion order and drops entries below the 1e-300 magnitude floor.
class CooBuilder {
  public:
    CooBuilder(int rows, int cols);
    void add(int i, int j, double v);
    SparseMatrix finalize();

  private:
    struct Entry {
        int i, j;
        double v;
    };
    int rows_, cols_;
    std::vector<Entry> entries_;
};

// C = ca*A + cb*B on the merged sparsity pattern.
SparseMatrix add(const SparseMatrix& A, const SparseMatrix& B, double ca = 1.0,
                 double cb = 1.0);

Vec spmv(const SparseMatrix& A, const Vec& x);

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);

// Preconditioned conjugate gradients for SPD systems. max_iter < 0 selects
// the default budget of 10*n. x0, when given, seeds the iteration (warm
// start). project_out_constants keeps iterates orthogonal to the constant
// vector, for consistent singular systems whose kernel is spanned by 1.
// On convergence the returned report satisfies ||A x - b|| <= tol * ||b||,
// re-checked against a recomputed residual.
std::pair<Vec, SolveReport> cg_solve(const SparseMatrix& A, const Vec& b,
                                     double tol = 1e-10, int max_iter = -1,
                                     Precond precond = Precond::jacobi,
                                     const Vec* x0 = nullptr,
                                     bool project_out_constants = false);

}  // namespace cdhom
