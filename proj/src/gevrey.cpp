#include "paraflat/gevrey.hpp"

#include <cmath>
#include <stdexcept>

namespace paraflat {

namespace {

// 15-point Gauss-Legendre nodes (positive half) and weights on [-1,1].
constexpr int kHalf = 7;
constexpr double kNodes[kHalf + 1] = {
    0.00000000000000000,    0.20119409399743452230, 0.39415134707756336990,
    0.57097217260853884754, 0.72441773136017004742, 0.84820658341042721620,
    0.93727339240070590431, 0.98799251802048542849};
constexpr double kWeights[kHalf + 1] = {
    0.20257824192556127288, 0.19843148532711157646, 0.18616100001556221103,
    0.16626920581699393355, 0.13957067792615431445, 0.10715922046717193501,
    0.07036604748810812471, 0.03075324199611726835};

double gl15(const std::function<double(double)>& f, double a, double b)
{
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = kWeights[0] * f(mid);
    for (int i = 1; i <= kHalf; ++i)
        acc += kWeights[i] * (f(mid - half * kNodes[i]) + f(mid + half * kNodes[i]));
    return half * acc;
}

double adapt(const std::function<double(double)>& f, double a, double b, double whole,
             double tol, int depth)
{
    const double mid = 0.5 * (a + b);
    const double left = gl15(f, a, mid), right = gl15(f, mid, b);
    const double refined = left + right;
    if (std::abs(refined - whole) <= tol || depth >= 60) {
        if (depth >= 60 && std::abs(refined - whole) > 1e3 * tol)
            throw std::runtime_error("gevrey: adaptive quadrature did not converge");
        return refined;
    }
    return adapt(f, a, mid, left, 0.5 * tol, depth + 1) +
           adapt(f, mid, b, right, 0.5 * tol, depth + 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double abs_tol)
{
    if (!(b > a)) return 0.0;
    return adapt(f, a, b, gl15(f, a, b), abs_tol, 0);
}

GevreyBump::GevreyBump(double alpha, double gamma, double quad_rel_tol)
    : alpha_(alpha), gamma_(gamma)
{
    if (!(alpha > 1.0 && alpha < 2.0))
        throw std::invalid_argument("gevrey: alpha must lie in (1,2)");
    if (!(gamma > 0.0)) throw std::invalid_argument("gevrey: gamma must be positive");
    power_ = -1.0 / (alpha - 1.0);
    // The peak exponent is 4^(1/(alpha-1)); past the 64-bit underflow
    // threshold the bump evaluates to zero everywhere.
    if (-power_ * std::log(4.0) >= std::log(745.0))
        throw std::invalid_argument(
            "gevrey: alpha is too close to 1 for 64-bit evaluation (the bump underflows; "
            "need alpha > 1.21)");

    auto f = [this](double t) { return psi0(t); };
    // Composite pre-pass fixes the scale of the normalizer, then the
    // adaptive pass refines relative to it.
    double rough = 0.0;
    const int panels = 16;
    for (int i = 0; i < panels; ++i)
        rough += gl15(f, gamma_ * i / panels, gamma_ * (i + 1) / panels);
    quad_tol_abs_ = std::max(quad_rel_tol * std::abs(rough), 1e-300);
    norm_ = adaptive_integrate(f, 0.0, gamma_, quad_tol_abs_);
    if (!(norm_ > 0.0)) throw std::runtime_error("gevrey: bump normalization is not positive");
}

double GevreyBump::psi0(double t) const
{
    if (t <= 0.0 || t >= gamma_) return 0.0;
    const double u = t / gamma_;
    const double z = (1.0 - u) * u;
    const double w = std::exp(power_ * std::log(z));
    if (w > 745.0) return 0.0;
    return std::exp(-w);
}

TaylorJet GevreyBump::psi0_jet(double t, int order) const
{
    if (t <= 0.0 || t >= gamma_) return TaylorJet(t, order);
    const double u = t / gamma_;
    const double z0 = (1.0 - u) * u;
    if (power_ * std::log(z0) > std::log(745.0)) return TaylorJet(t, order);

    TaylorJet z(t, order);
    z.coeffs[0] = z0;
    if (order >= 1) z.coeffs[1] = (1.0 - 2.0 * u) / gamma_;
    if (order >= 2) z.coeffs[2] = -2.0 / (gamma_ * gamma_);
    const TaylorJet w = jet_pow_real(z, power_);
    if (w.value() > 745.0) return TaylorJet(t, order);
    return jet_exp(jet_scale(w, -1.0));
}

double GevreyBump::psi(double t) const
{
    if (t <= 0.0) return 1.0;
    if (t >= gamma_) return 0.0;
    // Integrate the shorter flank.
    if (t <= 0.5 * gamma_) {
        const double part =
            adaptive_integrate([this](double s) { return psi0(s); }, 0.0, t, quad_tol_abs_);
        return 1.0 - part / norm_;
    }
    const double part =
        adaptive_integrate([this](double s) { return psi0(s); }, t, gamma_, quad_tol_abs_);
    return part / norm_;
}

TaylorJet GevreyBump::psi_jet(double t, int order) const
{
    if (t <= 0.0) return TaylorJet::constant(1.0, t, order);
    if (t >= gamma_) return TaylorJet(t, order);
    TaylorJet out(t, order);
    out.coeffs[0] = psi(t);
    if (order >= 1) {
        const TaylorJet p0 = psi0_jet(t, order - 1);
        for (int m = 1; m <= order; ++m) out.coeffs[m] = -p0.coeffs[m - 1] / norm_;
    }
    return out;
}

EndpointSeries endpoint_series(const ParabolicProblem& p, const StateSpec& state,
                               const SemiDiscreteSystem& sys, int M)
{
    EndpointSeries out;
    out.y.assign(M + 1, 0.0);
    if (std::holds_alternative<ZeroState>(state)) return out;

    if (const auto* ss = std::get_if<SteadyState>(&state)) {
        // A steady state is annihilated by the generator, so only m = 0
        // survives; its value comes from the discrete steady profile.
        const std::vector<double> v = steady_state(sys, ss->f_ss);
        out.y[0] = sys.flat_output_scale * v[0];
        return out;
    }

    const auto& profile = std::get<ExplicitProfile>(state).profile;
    auto first_entries = [&p](const SemiDiscreteSystem& s, const PiecewiseSmoothFn& u, int M_) {
        const Symmetrized sym = symmetrize(s);
        const SymTriEigen eig = symtri_eigen(sym.diag, sym.offdiag, true);
        const std::vector<double> ru = restrict_to_grid(u, s.n);
        const std::size_t n = static_cast<std::size_t>(s.n);
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) acc += eig.vec(i, k) * ru[i] / sym.p[i];
            c[k] = acc;
        }
        std::vector<double> vals(M_ + 1, 0.0);
        for (std::size_t k = 0; k < n; ++k) {
            const double w = c[k] * eig.vec(0, k);  // p[0] = 1
            double lp = 1.0;
            for (int m = 0; m <= M_; ++m) {
                vals[m] += s.flat_output_scale * lp * w;
                lp *= eig.values[k];
            }
        }
        return vals;
    };

    out.y = first_entries(sys, profile, M);
    const SemiDiscreteSystem sys2 = build_semidiscrete(p, 2 * sys.n);
    const std::vector<double> y2 = first_entries(sys2, profile, M);
    for (int m = 0; m <= M; ++m) {
        const double scale = std::max({std::abs(out.y[m]), std::abs(y2[m]), 1e-12});
        if (std::abs(y2[m] - out.y[m]) > 0.10 * scale) out.surrogate_warning = true;
    }
    return out;
}

namespace {

// Trim a g-series per the tail rule: drop terms once |y_m| G^m / m! falls
// below 1e-16 of the accumulated scale; cap at 60 terms.
std::vector<double> trim_series(std::vector<double> y, double gamma)
{
    const std::size_t cap = std::min<std::size_t>(y.size(), 61);
    double scale = 0.0, weight = 1.0;
    std::size_t keep = 0;
    for (std::size_t m = 0; m < cap; ++m) {
        const double term = std::abs(y[m]) * weight;
        if (term > 1e-16 * std::max(scale, 1e-300)) keep = m + 1;
        scale = std::max(scale, term);
        weight *= gamma / static_cast<double>(m + 1);
    }
    y.resize(std::max<std::size_t>(keep, 1));
    return y;
}

double fit_series_growth(const std::vector<double>& y)
{
    // Smallest c with |y_m| <= c^(m+2) (m+2)!.
    double c = 0.0, fact = 2.0;  // (m+2)! starting at m = 0
    for (std::size_t m = 0; m < y.size(); ++m) {
        const double mag = std::abs(y[m]) / fact;
        if (mag > 0.0) c = std::max(c, std::pow(mag, 1.0 / (m + 2.0)));
        fact *= static_cast<double>(m + 3);
    }
    return c;
}

}  // namespace

ReferenceTrajectory::ReferenceTrajectory(std::vector<double> y0_series,
                                         std::vector<double> yT_series, double T, double alpha,
                                         double gamma)
    : y0_(trim_series(std::move(y0_series), gamma)),
      yT_(trim_series(std::move(yT_series), gamma)),
      T_(T),
      bump_(alpha, [&] {
          // The series composition is justified only while c*Gamma < 1;
          // shrink the support when the fitted growth constant is too large.
          double g = gamma;
          const double c = std::max(fit_series_growth(y0_), fit_series_growth(yT_));
          if (c > 0.0 && c * g >= 1.0) g = 0.99 / c;
          return g;
      }())
{
    gamma_shrunk_ = bump_.gamma() < gamma;
    // The T-end series carries alternating signs so that the reflection
    // through T - t reproduces y^(m)(T) = y_{m,T} rather than its flip.
    yT_flipped_ = yT_;
    for (std::size_t m = 1; m < yT_flipped_.size(); m += 2) yT_flipped_[m] = -yT_flipped_[m];
}

TaylorJet ReferenceTrajectory::series_jet(const std::vector<double>& coeffs, double t,
                                          int order) const
{
    TaylorJet jet(t, order);
    const int M = static_cast<int>(coeffs.size()) - 1;
    // g^(r)(t) = sum_{m>=r} y_m t^(m-r) / (m-r)!
    for (int r = 0; r <= order; ++r) {
        double acc = 0.0, pow_t = 1.0, fact = 1.0;
        for (int m = r; m <= M; ++m) {
            acc += coeffs[m] * pow_t / fact;
            pow_t *= t;
            fact *= static_cast<double>(m - r + 1);
        }
        jet.coeffs[r] = acc;
    }
    return jet;
}

TaylorJet ReferenceTrajectory::jet(double t, int order) const
{
    const TaylorJet left = jet_mul(series_jet(y0_, t, order), bump_.psi_jet(t, order));
    const double tr = T_ - t;
    const TaylorJet right_at_tr =
        jet_mul(series_jet(yT_flipped_, tr, order), bump_.psi_jet(tr, order));
    return jet_add(left, jet_reflect(right_at_tr, t));
}

double fit_gevrey_constant(const std::function<TaylorJet(double, int)>& jets, double t_begin,
                           double t_end, int samples, int max_order, double alpha)
{
    double D = 0.0;
    for (int s = 0; s <= samples; ++s) {
        const double t = t_begin + (t_end - t_begin) * s / samples;
        const TaylorJet j = jets(t, max_order);
        double fact_pow = 1.0;  // (m!)^alpha
        for (int m = 0; m <= max_order; ++m) {
            if (m > 0) fact_pow *= std::pow(static_cast<double>(m), alpha);
            const double mag = std::abs(j.coeffs[m]) / fact_pow;
            if (mag > 0.0) D = std::max(D, std::pow(mag, 1.0 / (m + 1.0)));
        }
    }
    return D;
}

}  // namespace paraflat
