#pragma once

#include <functional>
#include <vector>

#include "paraflat/discretize.hpp"
#include "paraflat/problem.hpp"

namespace paraflat {

using InputFn = std::function<double(double)>;

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    const std::vector<double>& terminal() const { return states.back(); }
};

/// Crank-Nicolson integration of v' = A v + B f(t) from v0 over [0,T].
/// The input is evaluated exactly at the stage times. Snapshots are stored
/// at the step times nearest the requested snapshot times (all steps when
/// snapshot_times is empty).
Trajectory integrate(const SemiDiscreteSystem& sys, const std::vector<double>& v0,
                     const InputFn& input, double T, double dt,
                     const std::vector<double>& snapshot_times = {});

struct TransferReport {
    double terminal_error_2d = 0.0;
    double richardson_rel_change = 0.0;  // terminal-error change under dt/2
    bool richardson_ok = false;
    int n_sim = 0;
    double dt = 0.0;
};

/// Integrates the problem on an independent fine grid under the given input
/// and reports the terminal distance to the target state.
TransferReport verify_transfer(const ParabolicProblem& p, const StateSpec& u0,
                               const StateSpec& uT, const InputFn& input, double T, int n_sim,
                               double dt, Trajectory* trajectory_out = nullptr,
                               const std::vector<double>& snapshot_times = {});

/// Grid restriction of a state spec (steady states are solved on the grid).
std::vector<double> state_on_grid(const ParabolicProblem& p, const StateSpec& s, int n);

struct ConvergenceStudy {
    std::vector<int> n_list;
    int n_ref = 0;
    std::vector<double> sup_errors;       // sup over snapshots of ||.||_2d
    std::vector<double> terminal_errors;  // at t = T
    std::vector<double> boundary_errors;  // sup over snapshots of the trace error
    std::vector<bool> index_matched;      // grids nested, no interpolation needed
};

/// Errors of the n-th order solutions against a fine reference, interpolated
/// across grids, for a fixed smooth input.
ConvergenceStudy convergence_study(const ParabolicProblem& p, const StateSpec& u0,
                                   const InputFn& input, const std::vector<int>& n_list, int n_ref,
                                   double T, double dt, int snapshots = 11);

struct GrowthCertificate {
    double M = 0.0;
    double omega = 0.0;  // spectral ceiling of the symmetrized system
};

/// Fit ||v(t)||_2 <= M e^{omega t} ||v(0)||_2 over seeded random free
/// trajectories, evolved exactly in the eigenbasis.
GrowthCertificate fit_growth_bound(const SemiDiscreteSystem& sys, unsigned seed, int trials,
                                   double t_max = 1.0);

}  // namespace paraflat
