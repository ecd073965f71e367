#include "paraflat/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace paraflat {

namespace {

void check_breakpoints(const std::vector<double>& b, std::size_t npieces)
{
    if (b.size() < 2 || b.size() != npieces + 1)
        throw std::invalid_argument("piecewise: need one more breakpoint than pieces");
    if (b.front() != 0.0 || b.back() != 1.0)
        throw std::invalid_argument("piecewise: breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < b.size(); ++i)
        if (!(b[i] > b[i - 1]))
            throw std::invalid_argument("piecewise: breakpoints must be strictly increasing");
}

}  // namespace

PiecewiseSmoothFn PiecewiseSmoothFn::from_exprs(std::vector<double> breakpoints,
                                                std::vector<Expr> pieces)
{
    check_breakpoints(breakpoints, pieces.size());
    PiecewiseSmoothFn f;
    f.breakpoints_ = std::move(breakpoints);
    f.exprs_ = std::move(pieces);
    for (const Expr& e : f.exprs_)
        f.evaluators_.push_back([e](double x, int order) { return e.eval_jet(x, order); });
    return f;
}

PiecewiseSmoothFn PiecewiseSmoothFn::from_expr(const std::string& text)
{
    std::vector<Expr> pieces;
    pieces.push_back(Expr::parse(text));
    return from_exprs({0.0, 1.0}, std::move(pieces));
}

PiecewiseSmoothFn PiecewiseSmoothFn::constant(double value)
{
    return from_expr(std::to_string(value));
}

PiecewiseSmoothFn PiecewiseSmoothFn::from_callables(std::vector<double> breakpoints,
                                                    std::vector<JetEvaluator> pieces)
{
    check_breakpoints(breakpoints, pieces.size());
    PiecewiseSmoothFn f;
    f.breakpoints_ = std::move(breakpoints);
    f.evaluators_ = std::move(pieces);
    f.exprs_.resize(f.evaluators_.size());
    return f;
}

std::size_t PiecewiseSmoothFn::piece_index(double x) const
{
    if (x < 0.0 || x > 1.0) throw std::domain_error("piecewise: x outside [0,1]");
    // Right-continuous ownership: piece i covers [b_i, b_{i+1}), last covers up to 1.
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - breakpoints_.begin());
    if (idx == 0) return 0;
    if (idx >= evaluators_.size() + 1) return evaluators_.size() - 1;
    return idx - 1;
}

double PiecewiseSmoothFn::eval(double x) const
{
    return evaluators_[piece_index(x)](x, 0).value();
}

double PiecewiseSmoothFn::eval_deriv(double x) const
{
    return evaluators_[piece_index(x)](x, 1).deriv(1);
}

TaylorJet PiecewiseSmoothFn::eval_jet(double x, int order) const
{
    return evaluators_[piece_index(x)](x, order);
}

std::vector<double> PiecewiseSmoothFn::interior_breakpoints() const
{
    std::vector<double> out;
    for (double b : breakpoints_)
        if (b > 0.0 && b < 1.0) out.push_back(b);
    return out;
}

bool PiecewiseSmoothFn::serializable() const
{
    return std::all_of(exprs_.begin(), exprs_.end(), [](const Expr& e) { return !e.empty(); });
}

std::vector<std::string> PiecewiseSmoothFn::piece_texts() const
{
    if (!serializable())
        throw std::runtime_error("piecewise: callable-backed pieces cannot be serialized");
    std::vector<std::string> out;
    for (const Expr& e : exprs_) out.push_back(e.to_string());
    return out;
}

double PiecewiseSmoothFn::sampled_min(int samples_per_piece) const
{
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < evaluators_.size(); ++i) {
        const double a = breakpoints_[i], b = breakpoints_[i + 1];
        for (int s = 0; s <= samples_per_piece; ++s) {
            const double x = a + (b - a) * s / samples_per_piece;
            m = std::min(m, evaluators_[i](x, 0).value());
        }
    }
    return m;
}

}  // namespace paraflat
