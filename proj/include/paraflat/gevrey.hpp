#pragma once

#include <functional>
#include <vector>

#include "paraflat/discretize.hpp"
#include "paraflat/jet.hpp"
#include "paraflat/problem.hpp"

namespace paraflat {

/// Adaptive composite 15-point Gauss-Legendre quadrature on [a,b];
/// abs_tol is distributed over subintervals by length. Throws on
/// non-convergence within the depth cap.
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol);

/// The compactly supported bump psi0 and its normalized step psi on [0,T]:
///   psi0(t) = exp(-[(1 - t/G)(t/G)]^(-1/(alpha-1))) on (0,G), 0 elsewhere,
///   psi(t)  = 1 - (int_0^t psi0) / (int_0^G psi0).
/// All derivatives come from Taylor-jet arithmetic through the closed form.
/// Outside the window where the exponent stays below the 64-bit underflow
/// threshold the jets are exactly zero (or exactly the constant-1 jet).
class GevreyBump {
  public:
    GevreyBump(double alpha, double gamma, double quad_rel_tol = 1e-13);

    double alpha() const { return alpha_; }
    double gamma() const { return gamma_; }
    double normalization() const { return norm_; }

    double psi0(double t) const;
    TaylorJet psi0_jet(double t, int order) const;

    double psi(double t) const;
    TaylorJet psi_jet(double t, int order) const;

  private:
    double alpha_, gamma_, power_, norm_;
    double quad_tol_abs_;
};

struct EndpointSeries {
    std::vector<double> y;  // y[m], m = 0..M
    bool surrogate_warning = false;
};

/// The target derivative sequence y_m = (alpha0 - q0 beta0)-scaled boundary
/// data of the endpoint state, computed through the discrete surrogate
/// system. Steady states give y_m = 0 for m >= 1 exactly.
EndpointSeries endpoint_series(const ParabolicProblem& p, const StateSpec& state,
                               const SemiDiscreteSystem& sys, int M);

/// Gevrey-class reference trajectory interpolating two endpoint derivative
/// sequences: y(t) = g0(t) psi(t) + gT(T-t) psi(T-t) with truncated series
/// g_tau(t) = sum_m y_m t^m / m!.
class ReferenceTrajectory {
  public:
    ReferenceTrajectory(std::vector<double> y0_series, std::vector<double> yT_series, double T,
                        double alpha, double gamma);

    TaylorJet jet(double t, int order) const;
    double operator()(double t) const { return jet(t, 0).value(); }

    double horizon() const { return T_; }
    double gamma() const { return bump_.gamma(); }
    bool gamma_shrunk() const { return gamma_shrunk_; }
    const std::vector<double>& y0_series() const { return y0_; }
    const std::vector<double>& yT_series() const { return yT_; }

  private:
    TaylorJet series_jet(const std::vector<double>& coeffs, double t, int order) const;

    std::vector<double> y0_, yT_, yT_flipped_;
    double T_;
    GevreyBump bump_;
    bool gamma_shrunk_ = false;
};

/// Smallest D with max_t |y^(m)(t)| <= D^(m+1) (m!)^alpha over the sampled
/// jets, m <= max_order.
double fit_gevrey_constant(const std::function<TaylorJet(double, int)>& jets, double t_begin,
                           double t_end, int samples, int max_order, double alpha);

}  // namespace paraflat
