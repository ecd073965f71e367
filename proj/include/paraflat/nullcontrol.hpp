#pragma once

#include <memory>
#include <vector>

#include "paraflat/discretize.hpp"
#include "paraflat/flatness.hpp"
#include "paraflat/gevrey.hpp"

namespace paraflat {

/// Exact evaluation of e^{A tau} z0 and the first-entry derivative ladder
/// [A^m e^{A tau} z0]_1 through the eigendecomposition of the symmetrized
/// system. Each mode contributes lambda^m e^{lambda tau} in closed form, so
/// no time-stepping error or matvec round-off enters the high-order jets.
class ModalPropagator {
  public:
    ModalPropagator(const SemiDiscreteSystem& sys, std::vector<double> z0);

    std::vector<double> state(double tau) const;
    /// out[m] = [A^m e^{A tau} z0]_1 for m = 0..order.
    std::vector<double> first_entry_powers(double tau, int order) const;

    double max_eigenvalue() const { return lambda_.back(); }
    int order() const { return n_; }

  private:
    int n_ = 0;
    std::vector<double> lambda_;  // ascending
    std::vector<double> q_;      // eigenvectors, q_[i*n+k]
    std::vector<double> p_;      // symmetrizer diagonal
    std::vector<double> c_;      // modal coefficients of z0
};

/// The smoothed discrete state z(t) = e^{A(t+s)} R_n u0_tilde together with
/// the flat-output jets phi^(m)(t) = (alpha0 - q0 beta0) [A^m z(t)]_1.
struct SmoothedStateJets {
    int n = 0;
    double s = 0.0;
    double T = 0.0;
    std::vector<double> times;
    std::vector<std::vector<double>> z;
    std::vector<TaylorJet> phi_jets;
    double fitted_growth = 0.0;          // c with |phi^(m)| <= c^(m+1) m!
    double cn_richardson_rel = 0.0;      // CN half-step agreement at probes
    double cn_vs_modal_rel = 0.0;        // CN state vs modal state at probes
    std::shared_ptr<const ModalPropagator> propagator;
};

SmoothedStateJets propagate(const SemiDiscreteSystem& sys, const PiecewiseSmoothFn& u0_tilde,
                            double s, double T, const std::vector<double>& time_grid,
                            int jet_order, bool run_cn_check = true);

/// The null-control input: zero on [0,s), then g(t-s) with
/// g(t) = sum_{k<=i} a_k y^(k)(t), y(t) = phi(t) psi(t).
class NullControlInput {
  public:
    NullControlInput(std::shared_ptr<const ModalPropagator> prop, double flat_output_scale,
                     std::shared_ptr<const GevreyBump> psi, std::shared_ptr<const FlatTable> tab,
                     double s, double T, int truncation);

    double operator()(double t) const;
    double deriv(double t) const;
    /// Jet of y(t) = phi(t) psi(t) at shifted time te in [0,T].
    TaylorJet flat_jet(double te, int order) const;

    double horizon() const { return s_ + T_; }
    int truncation() const { return truncation_; }
    NullControlInput with_truncation(int truncation) const;

  private:
    std::shared_ptr<const ModalPropagator> prop_;
    double scale_;
    std::shared_ptr<const GevreyBump> psi_;
    std::shared_ptr<const FlatTable> tab_;
    double s_, T_;
    int truncation_;
};

SampledSignal null_input(const SmoothedStateJets& jets, const GevreyBump& psi,
                         const FlatTable& tab, int truncation);

struct SurrogateReport {
    int k_max = 0;
    int n = 0, n2 = 0;
    /// sup over the time grid of |[A^k e^{At} R u]_1(n) - same at n2|, per k.
    std::vector<double> sup_differences;
};

SurrogateReport surrogate_convergence_check(const ParabolicProblem& p,
                                            const PiecewiseSmoothFn& u0_tilde, double s,
                                            const std::vector<double>& t_grid, int k_max, int n);

}  // namespace paraflat
