#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "paraflat/tridiag.hpp"

using namespace paraflat;

namespace {

std::vector<double> residual(const TridiagonalMatrix& A, const std::vector<double>& x,
                             const std::vector<double>& b)
{
    std::vector<double> r = A.apply(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

TEST_SUITE("tridiag")
{
    TEST_CASE("random systems solve to small residuals")
    {
        std::mt19937 rng(42);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int trial = 0; trial < 20; ++trial) {
            const std::size_t n = 3 + trial;
            TridiagonalMatrix A(n);
            for (std::size_t i = 0; i < n; ++i) A.diag[i] = unif(rng) + 3.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                A.sub[i] = unif(rng);
                A.super[i] = unif(rng);
            }
            std::vector<double> b(n);
            for (double& x : b) x = unif(rng);
            const std::vector<double> x = tridiag_solve(A, b);
            CHECK(max_abs(residual(A, x, b)) <= 1e-12 * (A.norm_inf() * max_abs(x) + max_abs(b)));
        }
    }

    TEST_CASE("row pivoting handles a zero leading pivot")
    {
        // Thomas recursion would divide by zero on the first row here.
        TridiagonalMatrix A(3);
        A.diag = {0.0, 1.0, 2.0};
        A.sub = {1.0, 0.5};
        A.super = {2.0, -1.0};
        const std::vector<double> b = {1.0, 2.0, 3.0};
        const std::vector<double> x = tridiag_solve(A, b);
        CHECK(max_abs(residual(A, x, b)) <= 1e-13 * max_abs(b));
    }

    TEST_CASE("singular systems are reported")
    {
        TridiagonalMatrix A(3);  // all zeros
        const TridiagonalLU lu(A, 1e-14);
        CHECK(lu.singular());
        CHECK_THROWS_AS((void)lu.solve({1.0, 1.0, 1.0}), std::runtime_error);
    }

    TEST_CASE("transpose swaps the off-diagonals")
    {
        TridiagonalMatrix A(3);
        A.diag = {1.0, 2.0, 3.0};
        A.sub = {4.0, 5.0};
        A.super = {6.0, 7.0};
        const TridiagonalMatrix T = A.transpose();
        CHECK(T.sub == A.super);
        CHECK(T.super == A.sub);
        CHECK(T.diag == A.diag);
    }

    TEST_CASE("eigen-decomposition reconstructs a random symmetric tridiagonal")
    {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> unif(-2.0, 2.0);
        const std::size_t n = 40;
        std::vector<double> d(n), e(n - 1);
        for (double& x : d) x = unif(rng);
        for (double& x : e) x = unif(rng);
        const SymTriEigen eig = symtri_eigen(d, e, true);

        // Orthonormal columns.
        for (std::size_t a = 0; a < n; a += 7)
            for (std::size_t b = a; b < n; b += 7) {
                double dot = 0.0;
                for (std::size_t i = 0; i < n; ++i) dot += eig.vec(i, a) * eig.vec(i, b);
                CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10));
            }
        // S q = lambda q for every pair.
        double scale = 0.0;
        for (double x : d) scale = std::max(scale, std::abs(x));
        for (double x : e) scale = std::max(scale, std::abs(x));
        for (std::size_t k = 0; k < n; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = d[i] * eig.vec(i, k);
                if (i > 0) acc += e[i - 1] * eig.vec(i - 1, k);
                if (i + 1 < n) acc += e[i] * eig.vec(i + 1, k);
                CHECK(std::abs(acc - eig.values[k] * eig.vec(i, k)) <= 1e-11 * scale);
            }
        }
        // Ascending order.
        for (std::size_t k = 0; k + 1 < n; ++k) CHECK(eig.values[k] <= eig.values[k + 1]);
    }
}
