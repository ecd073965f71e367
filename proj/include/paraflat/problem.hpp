#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "paraflat/piecewise.hpp"

namespace paraflat {

/// How an endpoint state of a transfer is specified.
struct ZeroState {};
struct SteadyState {
    double f_ss = 0.0;
};
struct ExplicitProfile {
    PiecewiseSmoothFn profile;
};
using StateSpec = std::variant<ZeroState, SteadyState, ExplicitProfile>;

struct TransferSpec {
    double T = 0.0;  // transfer horizon
    StateSpec u0;
    StateSpec uT;
    double gevrey_alpha = 1.5;  // in (1,2)
    double gevrey_gamma = 0.0;  // bump support width, in (0,T]

    void validate() const;
};

struct NullControlSpec {
    double tau = 0.0;  // total horizon
    double s = 0.0;    // free-evolution smoothing time, in (0,tau)
    PiecewiseSmoothFn u0_tilde;
    double gevrey_alpha = 1.5;

    void validate() const;
};

/// Composite steering task: move u0_tilde to the steady state of f_ss over
/// [0,tau] as (null-control leg) + (zero-to-steady transfer leg).
struct CompositeSpec {
    TransferSpec transfer;
    NullControlSpec null_control;
};

using TaskSpec = std::variant<TransferSpec, NullControlSpec, CompositeSpec>;

/// Boundary-controlled 1D parabolic problem on the unit rod:
/// u_t = theta u_xx + sigma u_x + lambda u, with Robin data
/// alpha0 u_x(0) + beta0 u(0) = 0 and alpha1 u_x(1) + beta1 u(1) = f(t).
struct ParabolicProblem {
    PiecewiseSmoothFn theta, sigma, lambda;
    double alpha0 = 0.0, beta0 = 0.0, alpha1 = 0.0, beta1 = 0.0;
    std::vector<double> interface_points;  // coefficient breakpoints in (0,1)

    void validate() const;
};

struct LoadedProblem {
    ParabolicProblem problem;
    TaskSpec task;
};

ParabolicProblem make_problem(PiecewiseSmoothFn theta, PiecewiseSmoothFn sigma,
                              PiecewiseSmoothFn lambda, double alpha0, double beta0, double alpha1,
                              double beta1);

LoadedProblem load_problem(const std::string& path);
LoadedProblem parse_problem(const std::string& json_text);
std::string serialize_problem(const LoadedProblem& lp);

}  // namespace paraflat
