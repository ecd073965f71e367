#include "paraflat/discretize.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace paraflat {

SemiDiscreteSystem build_semidiscrete(const ParabolicProblem& p, int n)
{
    if (n < 3) throw std::invalid_argument("discretize: order n must be at least 3");
    SemiDiscreteSystem sys;
    sys.n = n;
    sys.h = 1.0 / (n + 1);
    const double h = sys.h;

    const double den_r0 = 3.0 * p.alpha0 - 2.0 * h * p.beta0;
    const double den_r1 = 3.0 * p.alpha1 + 2.0 * h * p.beta1;
    const double den_q0 = p.alpha0 - h * p.beta0;
    auto degenerate = [&](const char* name) {
        std::ostringstream os;
        os << "discretize: boundary-stencil denominator " << name << " is degenerate at n = " << n
           << "; increase the order";
        throw std::runtime_error(os.str());
    };
    if (std::abs(den_r0) <= 1e-12) degenerate("3*alpha0 - 2*h*beta0");
    if (std::abs(den_r1) <= 1e-12) degenerate("3*alpha1 + 2*h*beta1");
    if (std::abs(den_q0) <= 1e-12) degenerate("alpha0 - h*beta0");

    sys.r0 = p.alpha0 / den_r0;
    sys.r1 = p.alpha1 / den_r1;
    sys.q0 = -p.beta0 / den_q0;
    sys.alpha0 = p.alpha0;
    sys.beta0 = p.beta0;
    sys.alpha1 = p.alpha1;
    sys.beta1 = p.beta1;
    sys.flat_output_scale = p.alpha0 - sys.q0 * p.beta0;

    sys.theta_grid.resize(n);
    sys.sigma_grid.resize(n);
    sys.lambda_grid.resize(n);
    for (int j = 1; j <= n; ++j) {
        const double x = j * h;
        sys.theta_grid[j - 1] = p.theta.eval(x);
        sys.sigma_grid[j - 1] = p.sigma.eval(x);
        sys.lambda_grid[j - 1] = p.lambda.eval(x);
    }
    sys.b_n = 2.0 * h * sys.theta_grid[n - 1] / den_r1;

    sys.A = TridiagonalMatrix(static_cast<std::size_t>(n));
    const TridiagonalMatrix L = laplacian_stencil(n, sys.r0, sys.r1);
    const TridiagonalMatrix D = convection_stencil(n, sys.q0);
    for (int j = 0; j < n; ++j) {
        sys.A.diag[j] = sys.theta_grid[j] * L.diag[j] + sys.sigma_grid[j] * D.diag[j] +
                        sys.lambda_grid[j];
        if (j + 1 < n) {
            sys.A.super[j] = sys.theta_grid[j] * L.super[j] + sys.sigma_grid[j] * D.super[j];
            sys.A.sub[j] = sys.theta_grid[j + 1] * L.sub[j] + sys.sigma_grid[j + 1] * D.sub[j];
        }
    }
    sys.B.assign(n, 0.0);
    sys.B[n - 1] = sys.b_n / (h * h);
    return sys;
}

TridiagonalMatrix laplacian_stencil(int n, double r0, double r1)
{
    const double h = 1.0 / (n + 1);
    const double h2 = h * h;
    TridiagonalMatrix L(static_cast<std::size_t>(n));
    L.diag[0] = (-2.0 + 4.0 * r0) / h2;
    L.super[0] = (1.0 - r0) / h2;
    for (int j = 1; j + 1 < n; ++j) {
        L.sub[j - 1] = 1.0 / h2;
        L.diag[j] = -2.0 / h2;
        L.super[j] = 1.0 / h2;
    }
    L.sub[n - 2] = (1.0 - r1) / h2;
    L.diag[n - 1] = (-2.0 + 4.0 * r1) / h2;
    return L;
}

TridiagonalMatrix convection_stencil(int n, double q0)
{
    const double h = 1.0 / (n + 1);
    TridiagonalMatrix D(static_cast<std::size_t>(n));
    D.diag[0] = q0;
    for (int j = 1; j < n; ++j) {
        D.sub[j - 1] = -1.0 / h;
        D.diag[j] = 1.0 / h;
    }
    return D;
}

std::vector<double> restrict_to_grid(const PiecewiseSmoothFn& f, int n)
{
    const double h = 1.0 / (n + 1);
    std::vector<double> v(n);
    for (int j = 1; j <= n; ++j) v[j - 1] = f.eval(j * h);
    return v;
}

std::vector<double> restrict_to_grid(const std::function<double(double)>& f, int n)
{
    const double h = 1.0 / (n + 1);
    std::vector<double> v(n);
    for (int j = 1; j <= n; ++j) v[j - 1] = f(j * h);
    return v;
}

StepExtension::StepExtension(std::vector<double> values, int n)
    : values_(std::move(values)), h_(1.0 / (n + 1))
{
    if (static_cast<int>(values_.size()) != n)
        throw std::invalid_argument("extend: value count must equal n");
}

double StepExtension::operator()(double x) const
{
    if (x < 0.0 || x > 1.0) throw std::domain_error("extend: x outside [0,1]");
    if (x == 0.0) return values_.front();
    const std::size_t j = static_cast<std::size_t>(std::ceil(x / h_ - 1e-15));
    if (j >= 1 && j <= values_.size()) return values_[j - 1];
    return 0.0;
}

double StepExtension::l2_norm() const
{
    double s = 0.0;
    for (double v : values_) s += v * v;
    return std::sqrt(h_ * s);
}

double norm_2d(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v) s += x * x;
    const double h = 1.0 / (static_cast<double>(v.size()) + 1.0);
    return std::sqrt(h * s);
}

double norm_inf(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> steady_state(const SemiDiscreteSystem& sys, double f_ss)
{
    std::vector<double> rhs(sys.n, 0.0);
    rhs[sys.n - 1] = -sys.B[sys.n - 1] * f_ss;
    TridiagonalLU lu(sys.A, 1e-14);
    if (lu.singular())
        throw std::runtime_error(
            "discretize: steady-state system is singular (zero in the spectrum of A_n)");
    return lu.solve(rhs);
}

Symmetrized symmetrize(const SemiDiscreteSystem& sys)
{
    const std::size_t n = sys.A.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(sys.A.super[i] > 0.0) || !(sys.A.sub[i] > 0.0)) {
            std::ostringstream os;
            os << "discretize: off-diagonal entry at row " << (sys.A.super[i] > 0.0 ? i + 2 : i + 1)
               << " is not positive; n too small for the convection strength";
            throw std::runtime_error(os.str());
        }
    }
    Symmetrized sym;
    sym.p.assign(n, 1.0);
    for (std::size_t i = 0; i + 1 < n; ++i)
        sym.p[i + 1] = sym.p[i] * std::sqrt(sys.A.sub[i] / sys.A.super[i]);
    sym.diag = sys.A.diag;
    sym.offdiag.resize(n - 1);
    double max_asym = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double up = sys.A.super[i] * sym.p[i + 1] / sym.p[i];
        const double lo = sys.A.sub[i] * sym.p[i] / sym.p[i + 1];
        max_asym = std::max(max_asym, std::abs(up - lo));
        sym.offdiag[i] = std::sqrt(sys.A.super[i] * sys.A.sub[i]);
    }
    sym.asymmetry = max_asym;
    return sym;
}

std::vector<double> consistency_residual(const SemiDiscreteSystem& sys, const ParabolicProblem& p,
                                         const PiecewiseSmoothFn& xi)
{
    const int n = sys.n;
    // R_n of the differential operator applied to xi.
    std::vector<double> r(n);
    for (int j = 1; j <= n; ++j) {
        const double x = j * sys.h;
        const TaylorJet jet = xi.eval_jet(x, 2);
        r[j - 1] = sys.theta_grid[j - 1] * jet.deriv(2) + sys.sigma_grid[j - 1] * jet.deriv(1) +
                   sys.lambda_grid[j - 1] * jet.value();
    }
    const std::vector<double> grid = restrict_to_grid(xi, n);
    const std::vector<double> Ag = sys.A.apply(grid);
    const TaylorJet at1 = xi.eval_jet(1.0, 1);
    const double f_xi = p.alpha1 * at1.deriv(1) + p.beta1 * at1.value();
    for (int j = 0; j < n; ++j) r[j] -= Ag[j] + sys.B[j] * f_xi;
    return r;
}

}  // namespace paraflat
