#pragma once

#include <functional>
#include <string>
#include <vector>

#include "paraflat/expr.hpp"
#include "paraflat/jet.hpp"

namespace paraflat {

/// A function on [0,1] defined piecewise by closed-form evaluators.
///
/// Breakpoints are strictly increasing with first 0 and last 1. A breakpoint
/// in (0,1) is owned by the right-hand piece; x = 1 is owned by the last
/// piece. Pieces are C1 on the closure of their interval.
class PiecewiseSmoothFn {
  public:
    using JetEvaluator = std::function<TaylorJet(double, int)>;

    PiecewiseSmoothFn() = default;

    /// Build from per-piece expressions over consecutive intervals.
    static PiecewiseSmoothFn from_exprs(std::vector<double> breakpoints, std::vector<Expr> pieces);
    /// Single expression on all of [0,1].
    static PiecewiseSmoothFn from_expr(const std::string& text);
    static PiecewiseSmoothFn constant(double value);
    /// Library-API escape hatch: arbitrary jet evaluators, not serializable.
    static PiecewiseSmoothFn from_callables(std::vector<double> breakpoints,
                                            std::vector<JetEvaluator> pieces);

    double eval(double x) const;
    double eval_deriv(double x) const;
    TaylorJet eval_jet(double x, int order) const;

    const std::vector<double>& breakpoints() const { return breakpoints_; }
    /// Breakpoints strictly inside (0,1).
    std::vector<double> interior_breakpoints() const;

    bool serializable() const;
    /// Piece expression texts, one per interval; throws when not serializable.
    std::vector<std::string> piece_texts() const;

    /// Minimum of the sampled values over a dense grid plus all breakpoints.
    double sampled_min(int samples_per_piece = 512) const;

  private:
    std::size_t piece_index(double x) const;

    std::vector<double> breakpoints_;
    std::vector<Expr> exprs_;               // empty entries for callable pieces
    std::vector<JetEvaluator> evaluators_;  // always populated
};

}  // namespace paraflat
