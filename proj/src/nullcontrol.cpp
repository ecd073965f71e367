#include "paraflat/nullcontrol.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "paraflat/simulate.hpp"

namespace paraflat {

namespace {

// lambda^m e^{lambda tau} without overflow in the intermediate power.
double power_times_exp(double lambda, int m, double tau, double t_label)
{
    if (m == 0) {
        const double e = lambda * tau;
        return e < -745.0 ? 0.0 : std::exp(e);
    }
    if (lambda == 0.0) return 0.0;
    const double log_mag = m * std::log(std::abs(lambda)) + lambda * tau;
    if (log_mag < -745.0) return 0.0;
    if (log_mag > 644.0) {  // |value| would exceed ~1e280
        std::ostringstream os;
        os << "nullcontrol: jet entry overflow at derivative order " << m << ", time " << t_label;
        throw std::runtime_error(os.str());
    }
    const double mag = std::exp(log_mag);
    return (lambda < 0.0 && (m % 2 == 1)) ? -mag : mag;
}

}  // namespace

ModalPropagator::ModalPropagator(const SemiDiscreteSystem& sys, std::vector<double> z0)
{
    n_ = sys.n;
    const Symmetrized sym = symmetrize(sys);
    SymTriEigen eig = symtri_eigen(sym.diag, sym.offdiag, true);
    lambda_ = std::move(eig.values);
    q_ = std::move(eig.vectors);
    p_ = sym.p;
    c_.assign(n_, 0.0);
    for (int k = 0; k < n_; ++k) {
        double acc = 0.0;
        for (int i = 0; i < n_; ++i) acc += q_[i * n_ + k] * z0[i] / p_[i];
        c_[k] = acc;
    }
}

std::vector<double> ModalPropagator::state(double tau) const
{
    std::vector<double> w(n_);
    for (int k = 0; k < n_; ++k) w[k] = c_[k] * power_times_exp(lambda_[k], 0, tau, tau);
    std::vector<double> v(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (int k = 0; k < n_; ++k) acc += q_[i * n_ + k] * w[k];
        v[i] = p_[i] * acc;
    }
    return v;
}

std::vector<double> ModalPropagator::first_entry_powers(double tau, int order) const
{
    std::vector<double> out(order + 1, 0.0);
    for (int k = 0; k < n_; ++k) {
        const double w = c_[k] * q_[k];  // row 0 of Q, p_1 = 1
        if (w == 0.0) continue;
        const double e = lambda_[k] * tau;
        if (e < -745.0) continue;
        double term = w * std::exp(e);
        for (int m = 0; m <= order; ++m) {
            out[m] += term;
            if (m == order) break;
            term *= lambda_[k];
            if (std::abs(term) > 1e280) {
                std::ostringstream os;
                os << "nullcontrol: jet entry overflow at derivative order " << m + 1 << ", time "
                   << tau;
                throw std::runtime_error(os.str());
            }
        }
    }
    return out;
}

SmoothedStateJets propagate(const SemiDiscreteSystem& sys, const PiecewiseSmoothFn& u0_tilde,
                            double s, double T, const std::vector<double>& time_grid,
                            int jet_order, bool run_cn_check)
{
    if (!(s > 0.0)) throw std::invalid_argument("nullcontrol: smoothing time s must be positive");
    SmoothedStateJets out;
    out.n = sys.n;
    out.s = s;
    out.T = T;
    out.times = time_grid;

    std::vector<double> z0 = restrict_to_grid(u0_tilde, sys.n);
    auto prop = std::make_shared<ModalPropagator>(sys, std::move(z0));
    out.propagator = prop;

    const double scale = sys.flat_output_scale;
    double growth = 0.0;
    for (double t : time_grid) {
        out.z.push_back(prop->state(t + s));
        const std::vector<double> ladder = prop->first_entry_powers(t + s, jet_order);
        TaylorJet jet(t, jet_order);
        double fact = 1.0;
        for (int m = 0; m <= jet_order; ++m) {
            jet.coeffs[m] = scale * ladder[m];
            if (m > 0) fact *= m;
            const double mag = std::abs(jet.coeffs[m]) / fact;
            if (mag > 0.0) growth = std::max(growth, std::pow(mag, 1.0 / (m + 1.0)));
        }
        out.phi_jets.push_back(std::move(jet));
    }
    out.fitted_growth = growth;

    if (run_cn_check) {
        // Trapezoidal propagation cross-check at three probe times, with the
        // half-step Richardson agreement the scheme is validated by.
        const std::vector<double> probes = {s, s + 0.5 * T, s + T};
        const double dt = s / 2000.0;
        auto zero_input = [](double) { return 0.0; };
        const std::vector<double> z0b = restrict_to_grid(u0_tilde, sys.n);
        const Trajectory full = integrate(sys, z0b, zero_input, s + T, dt, probes);
        const Trajectory half = integrate(sys, z0b, zero_input, s + T, 0.5 * dt, probes);
        double rel_cn = 0.0, rel_modal = 0.0;
        for (std::size_t i = 0; i < full.states.size(); ++i) {
            const double ref = std::max(norm_2d(full.states[i]), 1e-12);
            std::vector<double> d1 = full.states[i];
            const std::vector<double> modal = prop->state(full.times[i]);
            std::vector<double> d2 = d1;
            for (int j = 0; j < sys.n; ++j) {
                d1[j] -= half.states[i][j];
                d2[j] -= modal[j];
            }
            rel_cn = std::max(rel_cn, norm_2d(d1) / ref);
            rel_modal = std::max(rel_modal, norm_2d(d2) / ref);
        }
        out.cn_richardson_rel = rel_cn;
        out.cn_vs_modal_rel = rel_modal;
    }
    return out;
}

NullControlInput::NullControlInput(std::shared_ptr<const ModalPropagator> prop,
                                   double flat_output_scale,
                                   std::shared_ptr<const GevreyBump> psi,
                                   std::shared_ptr<const FlatTable> tab, double s, double T,
                                   int truncation)
    : prop_(std::move(prop)),
      scale_(flat_output_scale),
      psi_(std::move(psi)),
      tab_(std::move(tab)),
      s_(s),
      T_(T),
      truncation_(truncation)
{
    if (truncation_ > tab_->K)
        throw std::invalid_argument("nullcontrol: truncation exceeds the flat-table depth");
}

TaylorJet NullControlInput::flat_jet(double te, int order) const
{
    const std::vector<double> ladder = prop_->first_entry_powers(te + s_, order);
    TaylorJet phi(te, order);
    for (int m = 0; m <= order; ++m) phi.coeffs[m] = scale_ * ladder[m];
    return jet_mul(phi, psi_->psi_jet(te, order));
}

double NullControlInput::operator()(double t) const
{
    if (t < s_) return 0.0;
    const double te = std::min(t - s_, T_);
    return input_from_jet(*tab_, flat_jet(te, truncation_), truncation_);
}

double NullControlInput::deriv(double t) const
{
    if (t < s_) return 0.0;
    const double te = std::min(t - s_, T_);
    return input_deriv_from_jet(*tab_, flat_jet(te, truncation_ + 1), truncation_);
}

NullControlInput NullControlInput::with_truncation(int truncation) const
{
    NullControlInput copy = *this;
    if (truncation > copy.tab_->K)
        throw std::invalid_argument("nullcontrol: truncation exceeds the flat-table depth");
    copy.truncation_ = truncation;
    return copy;
}

SampledSignal null_input(const SmoothedStateJets& jets, const GevreyBump& psi,
                         const FlatTable& tab, int truncation)
{
    if (truncation > tab.K)
        throw std::invalid_argument("nullcontrol: truncation exceeds the flat-table depth");
    SampledSignal sig;
    for (std::size_t i = 0; i < jets.times.size(); ++i) {
        const TaylorJet& phi = jets.phi_jets[i];
        if (phi.order() < truncation + 1)
            throw std::invalid_argument("nullcontrol: jet order is below truncation + 1");
        const TaylorJet y = jet_mul(phi, psi.psi_jet(jets.times[i], phi.order()));
        sig.times.push_back(jets.s + jets.times[i]);
        sig.values.push_back(input_from_jet(tab, y, truncation));
        sig.derivatives.push_back(input_deriv_from_jet(tab, y, truncation));
    }
    return sig;
}

SurrogateReport surrogate_convergence_check(const ParabolicProblem& p,
                                            const PiecewiseSmoothFn& u0_tilde, double s,
                                            const std::vector<double>& t_grid, int k_max, int n)
{
    SurrogateReport rep;
    rep.k_max = k_max;
    rep.n = n;
    rep.n2 = 2 * n;
    const SemiDiscreteSystem sys1 = build_semidiscrete(p, n);
    const SemiDiscreteSystem sys2 = build_semidiscrete(p, 2 * n);
    const ModalPropagator prop1(sys1, restrict_to_grid(u0_tilde, sys1.n));
    const ModalPropagator prop2(sys2, restrict_to_grid(u0_tilde, sys2.n));
    rep.sup_differences.assign(k_max + 1, 0.0);
    for (double t : t_grid) {
        const std::vector<double> a = prop1.first_entry_powers(t + s, k_max);
        const std::vector<double> b = prop2.first_entry_powers(t + s, k_max);
        for (int k = 0; k <= k_max; ++k)
            rep.sup_differences[k] = std::max(rep.sup_differences[k], std::abs(a[k] - b[k]));
    }
    return rep;
}

}  // namespace paraflat
