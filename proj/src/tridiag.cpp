#include "paraflat/tridiag.hpp"

#include <cmath>
#include <stdexcept>

namespace paraflat {

std::vector<double> TridiagonalMatrix::apply(const std::vector<double>& v) const
{
    const std::size_t n = size();
    if (v.size() != n) throw std::invalid_argument("tridiag: size mismatch in apply");
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = diag[i] * v[i];
        if (i > 0) acc += sub[i - 1] * v[i - 1];
        if (i + 1 < n) acc += super[i] * v[i + 1];
        out[i] = acc;
    }
    return out;
}

double TridiagonalMatrix::norm_inf() const
{
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double row = std::abs(diag[i]);
        if (i > 0) row += std::abs(sub[i - 1]);
        if (i + 1 < size()) row += std::abs(super[i]);
        m = std::max(m, row);
    }
    return m;
}

TridiagonalMatrix TridiagonalMatrix::transpose() const
{
    TridiagonalMatrix t(size());
    t.diag = diag;
    t.sub = super;
    t.super = sub;
    return t;
}

// Follows the classic dgttrf/dgttrs factor-solve pair.
TridiagonalLU::TridiagonalLU(const TridiagonalMatrix& A, double pivot_floor)
{
    n_ = A.size();
    d_ = A.diag;
    du_ = A.super;
    std::vector<double> dl = A.sub;
    du2_.assign(n_ >= 2 ? n_ - 2 : 0, 0.0);
    mult_.assign(n_ >= 1 ? n_ - 1 : 0, 0.0);
    pivot_.assign(n_ >= 1 ? n_ - 1 : 0, 0);
    min_pivot_ = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i + 1 < n_; ++i) {
        if (std::abs(d_[i]) >= std::abs(dl[i])) {
            pivot_[i] = 0;
            if (d_[i] == 0.0) {
                singular_ = true;
                min_pivot_ = 0.0;
                continue;
            }
            const double m = dl[i] / d_[i];
            mult_[i] = m;
            d_[i + 1] -= m * du_[i];
            if (i + 2 < n_) du2_[i] = 0.0;
        } else {
            pivot_[i] = 1;
            const double m = d_[i] / dl[i];
            mult_[i] = m;
            d_[i] = dl[i];
            const double tmp = d_[i + 1];
            d_[i + 1] = du_[i] - m * tmp;
            du_[i] = tmp;
            if (i + 2 < n_) {
                du2_[i] = du_[i + 1];
                du_[i + 1] = -m * du_[i + 1];
            }
        }
        min_pivot_ = std::min(min_pivot_, std::abs(d_[i]));
    }
    if (n_ > 0) min_pivot_ = std::min(min_pivot_, std::abs(d_[n_ - 1]));
    if (min_pivot_ <= pivot_floor) singular_ = true;
}

std::vector<double> TridiagonalLU::solve(const std::vector<double>& b) const
{
    if (b.size() != n_) throw std::invalid_argument("tridiag: size mismatch in solve");
    if (singular_) throw std::runtime_error("tridiag: matrix is singular to working precision");
    std::vector<double> x = b;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
        if (pivot_[i] == 0) {
            x[i + 1] -= mult_[i] * x[i];
        } else {
            const double tmp = x[i];
            x[i] = x[i + 1];
            x[i + 1] = tmp - mult_[i] * x[i];
        }
    }
    x[n_ - 1] /= d_[n_ - 1];
    if (n_ >= 2) x[n_ - 2] = (x[n_ - 2] - du_[n_ - 2] * x[n_ - 1]) / d_[n_ - 2];
    for (std::size_t ip = n_ - 2; ip-- > 0;) {
        double v = x[ip] - du_[ip] * x[ip + 1];
        if (ip + 2 < n_) v -= du2_[ip] * x[ip + 2];
        x[ip] = v / d_[ip];
    }
    return x;
}

std::vector<double> tridiag_solve(const TridiagonalMatrix& A, const std::vector<double>& b,
                                  double pivot_floor)
{
    return TridiagonalLU(A, pivot_floor).solve(b);
}

// Implicit QL with Wilkinson shifts (tql2 lineage).
SymTriEigen symtri_eigen(std::vector<double> diag, std::vector<double> offdiag, bool want_vectors)
{
    const std::size_t n = diag.size();
    if (offdiag.size() + 1 != n && n != 0)
        throw std::invalid_argument("symtri_eigen: offdiag must have length n-1");

    SymTriEigen out;
    out.n = n;
    if (n == 0) return out;

    std::vector<double> d = std::move(diag);
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) e[i] = offdiag[i];

    std::vector<double>& z = out.vectors;
    if (want_vectors) {
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    }

    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (++iter == 50)
                    throw std::runtime_error("symtri_eigen: QL iteration did not converge");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (want_vectors) {
                        for (std::size_t k = 0; k < n; ++k) {
                            f = z[k * n + i + 1];
                            z[k * n + i + 1] = s * z[k * n + i] + c * f;
                            z[k * n + i] = c * z[k * n + i] - s * f;
                        }
                    }
                }
                if (r == 0.0 && m - l > 1) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }

    // Sort ascending (insertion sort, swapping vector columns along).
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::size_t k = i;
        for (std::size_t j = i + 1; j < n; ++j)
            if (d[j] < d[k]) k = j;
        if (k != i) {
            std::swap(d[i], d[k]);
            if (want_vectors)
                for (std::size_t r = 0; r < n; ++r) std::swap(z[r * n + i], z[r * n + k]);
        }
    }
    out.values = std::move(d);
    return out;
}

}  // namespace paraflat
