#pragma once

#include <vector>

namespace paraflat {

/// Tridiagonal matrix stored as three diagonals. sub[i] couples row i+1 to
/// column i, super[i] couples row i to column i+1 (0-based, i < n-1).
struct TridiagonalMatrix {
    std::vector<double> sub, diag, super;

    TridiagonalMatrix() = default;
    explicit TridiagonalMatrix(std::size_t n) : sub(n ? n - 1 : 0), diag(n), super(n ? n - 1 : 0) {}

    std::size_t size() const { return diag.size(); }

    std::vector<double> apply(const std::vector<double>& v) const;
    double norm_inf() const;
    TridiagonalMatrix transpose() const;
};

/// LU factorization of a tridiagonal matrix with partial pivoting (row
/// swaps introduce one extra superdiagonal). Factor once, solve many.
class TridiagonalLU {
  public:
    explicit TridiagonalLU(const TridiagonalMatrix& A, double pivot_floor = 0.0);

    /// Solve A x = b. Throws std::runtime_error when a pivot fell below the
    /// configured floor during factorization.
    std::vector<double> solve(const std::vector<double>& b) const;

    bool singular() const { return singular_; }
    double min_pivot() const { return min_pivot_; }

  private:
    std::size_t n_;
    std::vector<double> du2_, mult_;
    std::vector<double> d_, du_;
    std::vector<int> pivot_;
    bool singular_ = false;
    double min_pivot_ = 0.0;
};

std::vector<double> tridiag_solve(const TridiagonalMatrix& A, const std::vector<double>& b,
                                  double pivot_floor = 1e-14);

/// Eigen-decomposition of a symmetric tridiagonal matrix by the implicit QL
/// method. Returns ascending eigenvalues; when vectors are requested, Q's
/// columns are the orthonormal eigenvectors (Q[i][k] is entry i of vector k,
/// flattened row-major as Q[i*n+k]).
struct SymTriEigen {
    std::vector<double> values;
    std::vector<double> vectors;  // empty when not requested
    std::size_t n = 0;

    double vec(std::size_t i, std::size_t k) const { return vectors[i * n + k]; }
};

SymTriEigen symtri_eigen(std::vector<double> diag, std::vector<double> offdiag,
                         bool want_vectors);

}  // namespace paraflat
