#include "paraflat/flatness.hpp"

#include <cmath>
#include <stdexcept>

namespace paraflat {

FlatTable flat_table(const SemiDiscreteSystem& sys, int K)
{
    const int n = sys.n;
    if (K > n) throw std::invalid_argument("flatness: K must not exceed the system order");
    if (std::abs(sys.flat_output_scale) <= 1e-12)
        throw std::runtime_error("flatness: flat-output scale alpha0 - q0*beta0 is degenerate");

    FlatTable tab;
    tab.n = n;
    tab.K = K;
    tab.flat_output_scale = sys.flat_output_scale;
    tab.d.assign(n, std::vector<double>(K + 1, 0.0));

    const double h = sys.h;
    const double h2 = h * h;
    auto theta = [&](int j) { return sys.theta_grid[j - 1]; };
    auto sigma = [&](int j) { return sys.sigma_grid[j - 1]; };
    auto lambda = [&](int j) { return sys.lambda_grid[j - 1]; };

    tab.d[0][0] = 1.0 / sys.flat_output_scale;

    const double c2a =
        1.0 + sys.q0 * h - h2 * (sigma(1) * sys.q0 + lambda(1)) / ((1.0 - sys.r0) * theta(1));
    const double c2b = h2 / ((1.0 - sys.r0) * theta(1));
    double max_abs = std::abs(tab.d[0][0]);
    for (int k = 0; k <= K; ++k) {
        const double dprev = (k >= 1) ? tab.d[0][k - 1] : 0.0;
        tab.d[1][k] = c2a * tab.d[0][k] + c2b * dprev;
    }
    for (int j = 2; j <= n - 1; ++j) {
        const double ca = (-theta(j) + h * sigma(j)) / theta(j);
        const double cb = (2.0 * theta(j) - h * sigma(j) - h2 * lambda(j)) / theta(j);
        const double cc = h2 / theta(j);
        for (int k = 0; k <= K; ++k) {
            const double dkm1 = (k >= 1) ? tab.d[j - 1][k - 1] : 0.0;
            const double v = ca * tab.d[j - 2][k] + cb * tab.d[j - 1][k] + cc * dkm1;
            tab.d[j][k] = v;
            max_abs = std::max(max_abs, std::abs(v));
        }
    }
    tab.max_intermediate = max_abs;

    // Input coefficients from the last stencil row.
    const double A1 = h2 / sys.b_n;
    const double A2 = ((3.0 * sys.r1 - 1.0) * theta(n) + h2 * lambda(n)) / sys.b_n;
    const double A3 = (h * sigma(n) - (1.0 - sys.r1) * theta(n)) / sys.b_n;
    tab.a.assign(K + 1, 0.0);
    for (int k = 0; k <= K; ++k) {
        const double dnm1 = (k >= 1) ? tab.d[n - 1][k - 1] : 0.0;
        tab.a[k] =
            A1 * dnm1 - A2 * tab.d[n - 1][k] - A3 * (tab.d[n - 1][k] - tab.d[n - 2][k]);
    }
    return tab;
}

std::vector<double> flat_state(const FlatTable& tab, const TaylorJet& y_jet)
{
    if (y_jet.order() < tab.K)
        throw std::invalid_argument("flatness: jet order is below the table depth K");
    std::vector<double> v(tab.n, 0.0);
    for (int j = 1; j <= tab.n; ++j) {
        double acc = 0.0;
        const int kmax = std::min(tab.K, j - 1);  // d[j][k] = 0 for k >= j
        for (int k = 0; k <= kmax; ++k) acc += tab.d[j - 1][k] * y_jet.coeffs[k];
        v[j - 1] = acc;
    }
    return v;
}

double input_from_jet(const FlatTable& tab, const TaylorJet& y_jet, int truncation)
{
    if (truncation > tab.K) throw std::invalid_argument("flatness: truncation exceeds table depth");
    if (y_jet.order() < truncation)
        throw std::invalid_argument("flatness: jet order is below the requested truncation");
    double acc = 0.0;
    for (int k = 0; k <= truncation; ++k) acc += tab.a[k] * y_jet.coeffs[k];
    return acc;
}

double input_deriv_from_jet(const FlatTable& tab, const TaylorJet& y_jet, int truncation)
{
    if (truncation > tab.K) throw std::invalid_argument("flatness: truncation exceeds table depth");
    if (y_jet.order() < truncation + 1)
        throw std::invalid_argument("flatness: jet order is below truncation + 1");
    double acc = 0.0;
    for (int k = 0; k <= truncation; ++k) acc += tab.a[k] * y_jet.coeffs[k + 1];
    return acc;
}

SampledSignal synthesize_input(const FlatTable& tab,
                               const std::function<TaylorJet(double, int)>& jets,
                               const std::vector<double>& times, int truncation)
{
    SampledSignal sig;
    sig.times = times;
    sig.values.reserve(times.size());
    sig.derivatives.reserve(times.size());
    for (double t : times) {
        const TaylorJet jet = jets(t, truncation + 1);
        sig.values.push_back(input_from_jet(tab, jet, truncation));
        sig.derivatives.push_back(input_deriv_from_jet(tab, jet, truncation));
    }
    return sig;
}

double shifted_factorial(int k)
{
    if (k <= 1) return 1.0;
    double f = 1.0;
    for (int i = 2; i <= 2 * k - 2; ++i) f *= i;
    return f;
}

double fit_coefficient_radius(const FlatTable& tab)
{
    double r = 0.0;
    for (int k = 0; k <= tab.K; ++k) {
        const double mag = std::abs(tab.a[k]) * shifted_factorial(k);
        if (mag > 0.0) r = std::max(r, std::pow(mag, 1.0 / (k + 1)));
    }
    return r;
}

CoefficientStudy coefficient_limit_study(const ParabolicProblem& p, int k_max,
                                         const std::vector<int>& n_list)
{
    CoefficientStudy study;
    study.n_list = n_list;
    study.k_max = k_max;
    double radius = 0.0;
    for (int n : n_list) {
        const SemiDiscreteSystem sys = build_semidiscrete(p, n);
        const FlatTable tab = flat_table(sys, k_max);
        study.a.push_back(tab.a);
        radius = std::max(radius, fit_coefficient_radius(tab));
    }
    study.fitted_radius = radius;
    for (std::size_t i = 0; i + 1 < study.a.size(); ++i) {
        std::vector<double> diff(k_max + 1, 0.0);
        for (int k = 0; k <= k_max; ++k) diff[k] = std::abs(study.a[i + 1][k] - study.a[i][k]);
        study.cauchy.push_back(std::move(diff));
    }
    return study;
}

}  // namespace paraflat
