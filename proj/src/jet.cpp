#include "paraflat/jet.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace paraflat {

namespace {

// Pascal triangle rows, grown on demand.
std::vector<std::vector<double>>& pascal_rows()
{
    static std::vector<std::vector<double>> rows{{1.0}};
    return rows;
}
std::mutex pascal_mutex;

}  // namespace

double binomial(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    std::lock_guard<std::mutex> lock(pascal_mutex);
    auto& rows = pascal_rows();
    while (static_cast<int>(rows.size()) <= n) {
        const auto& prev = rows.back();
        std::vector<double> row(prev.size() + 1, 1.0);
        for (std::size_t j = 1; j + 1 < row.size(); ++j) row[j] = prev[j - 1] + prev[j];
        rows.push_back(std::move(row));
    }
    return rows[n][k];
}

TaylorJet TaylorJet::constant(double value, double t, int order)
{
    TaylorJet j(t, order);
    j.coeffs[0] = value;
    return j;
}

TaylorJet TaylorJet::variable(double t, int order)
{
    TaylorJet j(t, order);
    j.coeffs[0] = t;
    if (order >= 1) j.coeffs[1] = 1.0;
    return j;
}

namespace {

void check_same(const TaylorJet& a, const TaylorJet& b)
{
    if (a.order() != b.order())
        throw std::invalid_argument("jet: operand orders differ");
}

}  // namespace

TaylorJet jet_add(const TaylorJet& a, const TaylorJet& b)
{
    check_same(a, b);
    TaylorJet r(a.t, a.order());
    for (int m = 0; m <= a.order(); ++m) r.coeffs[m] = a.coeffs[m] + b.coeffs[m];
    return r;
}

TaylorJet jet_sub(const TaylorJet& a, const TaylorJet& b)
{
    check_same(a, b);
    TaylorJet r(a.t, a.order());
    for (int m = 0; m <= a.order(); ++m) r.coeffs[m] = a.coeffs[m] - b.coeffs[m];
    return r;
}

TaylorJet jet_scale(const TaylorJet& a, double s)
{
    TaylorJet r(a.t, a.order());
    for (int m = 0; m <= a.order(); ++m) r.coeffs[m] = s * a.coeffs[m];
    return r;
}

TaylorJet jet_mul(const TaylorJet& a, const TaylorJet& b)
{
    check_same(a, b);
    TaylorJet r(a.t, a.order());
    for (int m = 0; m <= a.order(); ++m) {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) acc += binomial(m, j) * a.coeffs[j] * b.coeffs[m - j];
        r.coeffs[m] = acc;
    }
    return r;
}

TaylorJet jet_reciprocal(const TaylorJet& a)
{
    if (a.coeffs[0] == 0.0)
        throw std::domain_error("jet: reciprocal of a jet with zero value");
    TaylorJet r(a.t, a.order());
    r.coeffs[0] = 1.0 / a.coeffs[0];
    for (int m = 1; m <= a.order(); ++m) {
        double acc = 0.0;
        for (int j = 1; j <= m; ++j) acc += binomial(m, j) * a.coeffs[j] * r.coeffs[m - j];
        r.coeffs[m] = -acc / a.coeffs[0];
    }
    return r;
}

TaylorJet jet_div(const TaylorJet& a, const TaylorJet& b)
{
    return jet_mul(a, jet_reciprocal(b));
}

TaylorJet jet_exp(const TaylorJet& a)
{
    TaylorJet r(a.t, a.order());
    r.coeffs[0] = std::exp(a.coeffs[0]);
    // E' = u' E, differentiated m more times.
    for (int m = 0; m < a.order(); ++m) {
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) acc += binomial(m, j) * a.coeffs[j + 1] * r.coeffs[m - j];
        r.coeffs[m + 1] = acc;
    }
    return r;
}

TaylorJet jet_log(const TaylorJet& a)
{
    if (a.coeffs[0] <= 0.0)
        throw std::domain_error("jet: log of a jet with non-positive value");
    TaylorJet r(a.t, a.order());
    r.coeffs[0] = std::log(a.coeffs[0]);
    if (a.order() == 0) return r;
    // L' = u'/u evaluated as a jet of one order less, then shifted back.
    TaylorJet up(a.t, a.order() - 1), u(a.t, a.order() - 1);
    for (int m = 0; m < a.order(); ++m) {
        up.coeffs[m] = a.coeffs[m + 1];
        u.coeffs[m] = a.coeffs[m];
    }
    TaylorJet q = jet_div(up, u);
    for (int m = 1; m <= a.order(); ++m) r.coeffs[m] = q.coeffs[m - 1];
    return r;
}

TaylorJet jet_pow_int(const TaylorJet& a, int m)
{
    if (m < 0) throw std::invalid_argument("jet: negative integer power");
    TaylorJet r = TaylorJet::constant(1.0, a.t, a.order());
    TaylorJet base = a;
    while (m > 0) {
        if (m & 1) r = jet_mul(r, base);
        m >>= 1;
        if (m > 0) base = jet_mul(base, base);
    }
    return r;
}

TaylorJet jet_pow_real(const TaylorJet& a, double p)
{
    return jet_exp(jet_scale(jet_log(a), p));
}

void jet_sin_cos(const TaylorJet& a, TaylorJet& s, TaylorJet& c)
{
    s = TaylorJet(a.t, a.order());
    c = TaylorJet(a.t, a.order());
    s.coeffs[0] = std::sin(a.coeffs[0]);
    c.coeffs[0] = std::cos(a.coeffs[0]);
    // S' = u' C and C' = -u' S, differentiated m more times.
    for (int m = 0; m < a.order(); ++m) {
        double acc_s = 0.0, acc_c = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double w = binomial(m, j) * a.coeffs[j + 1];
            acc_s += w * c.coeffs[m - j];
            acc_c -= w * s.coeffs[m - j];
        }
        s.coeffs[m + 1] = acc_s;
        c.coeffs[m + 1] = acc_c;
    }
}

TaylorJet jet_reflect(const TaylorJet& a, double new_t)
{
    TaylorJet r(new_t, a.order());
    for (int m = 0; m <= a.order(); ++m) r.coeffs[m] = (m % 2 == 0) ? a.coeffs[m] : -a.coeffs[m];
    return r;
}

}  // namespace paraflat
