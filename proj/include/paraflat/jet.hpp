#pragma once

#include <vector>

namespace paraflat {

/// Truncated derivative jet of a scalar function at one base point.
///
/// coeffs[m] holds the m-th derivative value itself (not divided by m!).
/// All combinators below are exact Taylor-mode rules, so a jet of order m
/// propagated through them carries no truncation error up to order m.
struct TaylorJet {
    double t = 0.0;
    std::vector<double> coeffs;  // size order+1

    TaylorJet() = default;
    TaylorJet(double t_, int order) : t(t_), coeffs(order + 1, 0.0) {}

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    double value() const { return coeffs[0]; }
    double deriv(int m) const { return coeffs[m]; }

    static TaylorJet constant(double value, double t, int order);
    /// Jet of the identity map s -> s at base point t.
    static TaylorJet variable(double t, int order);
};

/// binomial(n, k) as a double; rows are cached internally.
double binomial(int n, int k);

TaylorJet jet_add(const TaylorJet& a, const TaylorJet& b);
TaylorJet jet_sub(const TaylorJet& a, const TaylorJet& b);
TaylorJet jet_scale(const TaylorJet& a, double s);
/// Leibniz product; exact to round-off for jets of equal order.
TaylorJet jet_mul(const TaylorJet& a, const TaylorJet& b);
/// Throws std::domain_error when a.value() == 0.
TaylorJet jet_reciprocal(const TaylorJet& a);
TaylorJet jet_div(const TaylorJet& a, const TaylorJet& b);
TaylorJet jet_exp(const TaylorJet& a);
/// Natural log; requires a.value() > 0.
TaylorJet jet_log(const TaylorJet& a);
/// Integer power by repeated Leibniz products (m >= 0).
TaylorJet jet_pow_int(const TaylorJet& a, int m);
/// Real power exp(p*log(a)); requires a.value() > 0.
TaylorJet jet_pow_real(const TaylorJet& a, double p);
void jet_sin_cos(const TaylorJet& a, TaylorJet& s, TaylorJet& c);

/// Jet of t -> f(c - t) from the jet of f at c - t (odd entries negated).
TaylorJet jet_reflect(const TaylorJet& a, double new_t);

}  // namespace paraflat
