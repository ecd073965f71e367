#pragma once

#include <memory>
#include <string>

#include "paraflat/jet.hpp"

namespace paraflat {

/// A closed-form expression in one spatial variable x: infix arithmetic
/// over numbers, x and pi with exp, sin, cos and integer powers.
/// This is the whole grammar accepted by problem configuration files.
class Expr {
  public:
    Expr() = default;

    static Expr parse(const std::string& text);

    bool empty() const { return !root_; }
    double eval(double x) const;
    double eval_deriv(double x) const;
    /// Jet in x to the requested order (used for stencil-consistency tests).
    TaylorJet eval_jet(double x, int order) const;

    /// Canonical text form; parse(to_string()) evaluates identically.
    std::string to_string() const;

    struct Node;

  private:
    std::shared_ptr<const Node> root_;
};

}  // namespace paraflat
