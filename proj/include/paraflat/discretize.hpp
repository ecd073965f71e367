#pragma once

#include <functional>
#include <vector>

#include "paraflat/problem.hpp"
#include "paraflat/tridiag.hpp"

namespace paraflat {

/// n-th order finite-difference semi-discretization of a parabolic problem:
/// the interior ODE v' = A v + B f on the grid x_j = j h, h = 1/(n+1).
struct SemiDiscreteSystem {
    int n = 0;
    double h = 0.0;
    TridiagonalMatrix A;
    std::vector<double> B;  // single nonzero: B[n-1] = b_n / h^2
    double r0 = 0.0, r1 = 0.0, q0 = 0.0, b_n = 0.0;
    std::vector<double> theta_grid, sigma_grid, lambda_grid;

    /// alpha0 - q0*beta0: the scale linking v_1 to the flat output.
    double flat_output_scale = 0.0;
    double alpha0 = 0.0, beta0 = 0.0, alpha1 = 0.0, beta1 = 0.0;
};

SemiDiscreteSystem build_semidiscrete(const ParabolicProblem& p, int n);

/// The stencil factors of A = Theta*L + Sigma*D + Lambda.
TridiagonalMatrix laplacian_stencil(int n, double r0, double r1);
TridiagonalMatrix convection_stencil(int n, double q0);

/// Samples f at the interior grid points jh, j = 1..n.
std::vector<double> restrict_to_grid(const PiecewiseSmoothFn& f, int n);
std::vector<double> restrict_to_grid(const std::function<double(double)>& f, int n);

/// Step-function extension: value v_j on ((j-1)h, jh], v_1 at 0, 0 past nh.
class StepExtension {
  public:
    StepExtension(std::vector<double> values, int n);
    double operator()(double x) const;
    double l2_norm() const;

  private:
    std::vector<double> values_;
    double h_;
};

double norm_2d(const std::vector<double>& v);
double norm_inf(const std::vector<double>& v);

/// Solves A v + B f_ss = 0.
std::vector<double> steady_state(const SemiDiscreteSystem& sys, double f_ss);

/// Diagonal similarity making A symmetric; exists while all immediate
/// off-diagonal entries of A are positive.
struct Symmetrized {
    std::vector<double> p;       // diagonal of P, p[0] = 1
    std::vector<double> diag;    // of P^{-1} A P
    std::vector<double> offdiag; // geometric means of A's off-diagonal pairs
    double asymmetry = 0.0;      // max |M - M^T| over the similarity, pre-averaging
};

Symmetrized symmetrize(const SemiDiscreteSystem& sys);

/// R_n(A xi) - A_n R_n(xi) - B_n f_xi with f_xi = alpha1 xi_x(1) + beta1 xi(1);
/// xi must be twice differentiable on each coefficient piece.
std::vector<double> consistency_residual(const SemiDiscreteSystem& sys, const ParabolicProblem& p,
                                         const PiecewiseSmoothFn& xi);

}  // namespace paraflat
