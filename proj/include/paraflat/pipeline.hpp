#pragma once

#include <memory>
#include <string>

#include "paraflat/flatness.hpp"
#include "paraflat/gevrey.hpp"
#include "paraflat/nullcontrol.hpp"
#include "paraflat/problem.hpp"
#include "paraflat/simulate.hpp"

namespace paraflat {

struct PlanOptions {
    int n = 500;
    int truncation = 20;
    int n_sim = 2000;
    double dt = 1e-4;
    double tolerance = 1e-3;
    int endpoint_terms = 10;  // M for explicit-profile endpoint series
    int out_samples = 1001;
    bool verify = true;
};

struct PlanDiagnostics {
    double coefficient_radius = 0.0;  // fitted R of the input coefficients
    double gevrey_constant = 0.0;     // fitted D of the reference trajectory
    double jet_growth = 0.0;          // fitted c of the smoothed-state jets
    double max_table_entry = 0.0;     // largest |d| intermediate in the table
    bool gamma_shrunk = false;
    bool surrogate_warning = false;
    double cn_richardson_rel = 0.0;
    double terminal_error = 0.0;
    double free_decay_terminal = 0.0;  // null-control runs only
    double tolerance = 0.0;
    bool verified = false;

    std::string summary() const;
};

/// Transfer input f^i(t) = sum_{k<=i} a_k y^(k)(t) for a reference
/// trajectory y; evaluable at arbitrary times.
class TransferInput {
  public:
    TransferInput(std::shared_ptr<const FlatTable> tab,
                  std::shared_ptr<const ReferenceTrajectory> traj, int truncation);

    double operator()(double t) const;
    double deriv(double t) const;
    int truncation() const { return truncation_; }

  private:
    std::shared_ptr<const FlatTable> tab_;
    std::shared_ptr<const ReferenceTrajectory> traj_;
    int truncation_;
};

struct TransferPlan {
    std::shared_ptr<const FlatTable> table;
    std::shared_ptr<const ReferenceTrajectory> trajectory;
    std::shared_ptr<const TransferInput> input;
    SampledSignal signal;
    TransferReport verify;
    PlanDiagnostics diag;

    /// The same plan re-truncated at a different series depth (i <= K).
    TransferInput input_at(int truncation) const { return {table, trajectory, truncation}; }
};

TransferPlan plan_transfer(const ParabolicProblem& p, const TransferSpec& spec,
                           const PlanOptions& opt);

struct NullControlPlan {
    std::shared_ptr<const FlatTable> table;
    std::shared_ptr<const GevreyBump> psi;
    std::shared_ptr<const NullControlInput> input;
    SampledSignal signal;
    TransferReport verify;
    PlanDiagnostics diag;

    NullControlInput input_at(int truncation) const;
};

NullControlPlan plan_null_control(const ParabolicProblem& p, const NullControlSpec& spec,
                                  const PlanOptions& opt);

struct CompositePlan {
    TransferPlan transfer;
    NullControlPlan null_control;
    SampledSignal signal;  // r = f + g-tilde
    TransferReport verify;
    PlanDiagnostics diag;

    InputFn input_at(int truncation) const;
    InputFn input() const;
};

CompositePlan plan_composite(const ParabolicProblem& p, const CompositeSpec& spec,
                             const PlanOptions& opt);

}  // namespace paraflat
