#include "paraflat/pipeline.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace paraflat {

std::string PlanDiagnostics::summary() const
{
    std::ostringstream os;
    os << "verified: " << (verified ? "yes" : "NO") << "\n"
       << "terminal_error_2d: " << terminal_error << " (tolerance " << tolerance << ")\n"
       << "coefficient_radius_R: " << coefficient_radius << "\n"
       << "gevrey_constant_D: " << gevrey_constant << "\n"
       << "jet_growth_c: " << jet_growth << "\n"
       << "max_table_entry: " << max_table_entry << "\n"
       << "dt_richardson_rel: " << cn_richardson_rel << "\n"
       << "gamma_shrunk: " << (gamma_shrunk ? "yes" : "no") << "\n"
       << "surrogate_warning: " << (surrogate_warning ? "yes" : "no") << "\n";
    if (free_decay_terminal > 0.0) os << "free_decay_terminal: " << free_decay_terminal << "\n";
    return os.str();
}

TransferInput::TransferInput(std::shared_ptr<const FlatTable> tab,
                             std::shared_ptr<const ReferenceTrajectory> traj, int truncation)
    : tab_(std::move(tab)), traj_(std::move(traj)), truncation_(truncation)
{
    if (truncation_ > tab_->K)
        throw std::invalid_argument("pipeline: truncation exceeds the flat-table depth");
}

double TransferInput::operator()(double t) const
{
    return input_from_jet(*tab_, traj_->jet(t, truncation_), truncation_);
}

double TransferInput::deriv(double t) const
{
    return input_deriv_from_jet(*tab_, traj_->jet(t, truncation_ + 1), truncation_);
}

namespace {

std::vector<double> uniform_grid(double T, int samples)
{
    std::vector<double> t(samples);
    for (int i = 0; i < samples; ++i) t[i] = T * i / (samples - 1);
    return t;
}

bool all_flags_pass(const PlanDiagnostics& d, const TransferReport& rep)
{
    return rep.richardson_ok && !d.surrogate_warning && d.terminal_error <= d.tolerance;
}

void check_verification_grid(const PlanOptions& opt)
{
    // Verifying a discretization against itself proves nothing.
    if (opt.verify && opt.n_sim == opt.n)
        throw std::invalid_argument(
            "pipeline: the verification order n_sim must differ from the design order n");
}

}  // namespace

namespace {

struct LegContext {
    SemiDiscreteSystem sys;
    std::shared_ptr<const FlatTable> table;
};

LegContext make_context(const ParabolicProblem& p, const PlanOptions& opt)
{
    LegContext ctx;
    ctx.sys = build_semidiscrete(p, opt.n);
    ctx.table = std::make_shared<FlatTable>(flat_table(ctx.sys, opt.truncation + 1));
    return ctx;
}

TransferPlan plan_transfer_with(const ParabolicProblem& p, const TransferSpec& spec,
                                const PlanOptions& opt, const LegContext& ctx);
NullControlPlan plan_null_with(const ParabolicProblem& p, const NullControlSpec& spec,
                               const PlanOptions& opt, const LegContext& ctx);

}  // namespace

TransferPlan plan_transfer(const ParabolicProblem& p, const TransferSpec& spec,
                           const PlanOptions& opt)
{
    spec.validate();
    check_verification_grid(opt);
    return plan_transfer_with(p, spec, opt, make_context(p, opt));
}

namespace {

TransferPlan plan_transfer_with(const ParabolicProblem& p, const TransferSpec& spec,
                                const PlanOptions& opt, const LegContext& ctx)
{
    TransferPlan plan;
    const SemiDiscreteSystem& sys = ctx.sys;
    plan.table = ctx.table;

    const int M = std::max(opt.endpoint_terms, 1);
    const EndpointSeries e0 = endpoint_series(p, spec.u0, sys, M);
    const EndpointSeries eT = endpoint_series(p, spec.uT, sys, M);
    plan.trajectory = std::make_shared<ReferenceTrajectory>(e0.y, eT.y, spec.T, spec.gevrey_alpha,
                                                            spec.gevrey_gamma);
    plan.input = std::make_shared<TransferInput>(plan.table, plan.trajectory, opt.truncation);

    const auto grid = uniform_grid(spec.T, opt.out_samples);
    plan.signal = synthesize_input(
        *plan.table,
        [&](double t, int order) { return plan.trajectory->jet(t, order); }, grid, opt.truncation);

    plan.diag.coefficient_radius = fit_coefficient_radius(*plan.table);
    plan.diag.max_table_entry = plan.table->max_intermediate;
    plan.diag.gevrey_constant = fit_gevrey_constant(
        [&](double t, int order) { return plan.trajectory->jet(t, order); }, 0.0, spec.T, 64,
        std::min(opt.truncation, 20), spec.gevrey_alpha);
    plan.diag.gamma_shrunk = plan.trajectory->gamma_shrunk();
    plan.diag.surrogate_warning = e0.surrogate_warning || eT.surrogate_warning;
    plan.diag.tolerance = opt.tolerance;

    if (opt.verify) {
        const auto& input = *plan.input;
        plan.verify = verify_transfer(
            p, spec.u0, spec.uT, [&input](double t) { return input(t); }, spec.T, opt.n_sim,
            opt.dt);
        plan.diag.terminal_error = plan.verify.terminal_error_2d;
        plan.diag.cn_richardson_rel = plan.verify.richardson_rel_change;
        plan.diag.verified = all_flags_pass(plan.diag, plan.verify);
    }
    return plan;
}

}  // namespace

NullControlInput NullControlPlan::input_at(int truncation) const
{
    return input->with_truncation(truncation);
}

NullControlPlan plan_null_control(const ParabolicProblem& p, const NullControlSpec& spec,
                                  const PlanOptions& opt)
{
    spec.validate();
    check_verification_grid(opt);
    return plan_null_with(p, spec, opt, make_context(p, opt));
}

namespace {

NullControlPlan plan_null_with(const ParabolicProblem& p, const NullControlSpec& spec,
                               const PlanOptions& opt, const LegContext& ctx)
{
    NullControlPlan plan;
    const double T = spec.tau - spec.s;
    const SemiDiscreteSystem& sys = ctx.sys;
    plan.table = ctx.table;
    plan.psi = std::make_shared<GevreyBump>(spec.gevrey_alpha, T);

    // Jets on a short diagnostics grid; the propagator itself is reused by
    // the exact-time input evaluator.
    const SmoothedStateJets jets =
        propagate(sys, spec.u0_tilde, spec.s, T, uniform_grid(T, 9), opt.truncation + 1);
    plan.input = std::make_shared<NullControlInput>(jets.propagator, sys.flat_output_scale,
                                                    plan.psi, plan.table, spec.s, T,
                                                    opt.truncation);

    const auto grid = uniform_grid(spec.tau, opt.out_samples);
    plan.signal.times = grid;
    for (double t : grid) {
        plan.signal.values.push_back((*plan.input)(t));
        plan.signal.derivatives.push_back(plan.input->deriv(t));
    }

    plan.diag.coefficient_radius = fit_coefficient_radius(*plan.table);
    plan.diag.max_table_entry = plan.table->max_intermediate;
    plan.diag.jet_growth = jets.fitted_growth;
    plan.diag.cn_richardson_rel = jets.cn_richardson_rel;
    plan.diag.tolerance = opt.tolerance;

    if (opt.verify) {
        const auto& input = *plan.input;
        const StateSpec u0 = ExplicitProfile{spec.u0_tilde};
        plan.verify = verify_transfer(
            p, u0, ZeroState{}, [&input](double t) { return input(t); }, spec.tau, opt.n_sim,
            opt.dt);
        plan.diag.terminal_error = plan.verify.terminal_error_2d;

        const SemiDiscreteSystem fine = build_semidiscrete(p, opt.n_sim);
        const Trajectory free_decay =
            integrate(fine, restrict_to_grid(spec.u0_tilde, opt.n_sim),
                      [](double) { return 0.0; }, spec.tau, opt.dt, {0.0, spec.tau});
        plan.diag.free_decay_terminal = norm_2d(free_decay.terminal());
        plan.diag.verified = all_flags_pass(plan.diag, plan.verify);
    }
    return plan;
}

}  // namespace

InputFn CompositePlan::input_at(int truncation) const
{
    const TransferInput f = transfer.input_at(truncation);
    const NullControlInput g = null_control.input_at(truncation);
    return [f, g](double t) { return f(t) + g(t); };
}

InputFn CompositePlan::input() const
{
    const auto f = transfer.input;
    const auto g = null_control.input;
    return [f, g](double t) { return (*f)(t) + (*g)(t); };
}

CompositePlan plan_composite(const ParabolicProblem& p, const CompositeSpec& spec,
                             const PlanOptions& opt)
{
    if (std::abs(spec.transfer.T - spec.null_control.tau) > 1e-12)
        throw std::invalid_argument(
            "pipeline: composite legs must share the horizon (transfer T == tau)");

    spec.transfer.validate();
    spec.null_control.validate();
    check_verification_grid(opt);
    CompositePlan plan;
    PlanOptions leg_opt = opt;
    leg_opt.verify = false;  // the composite is verified once, on the sum
    // One system and one coefficient table serve both legs.
    const LegContext ctx = make_context(p, opt);
    plan.transfer = plan_transfer_with(p, spec.transfer, leg_opt, ctx);
    plan.null_control = plan_null_with(p, spec.null_control, leg_opt, ctx);

    const double tau = spec.null_control.tau;
    const auto grid = uniform_grid(tau, opt.out_samples);
    const InputFn r = plan.input();
    plan.signal.times = grid;
    for (double t : grid) plan.signal.values.push_back(r(t));

    plan.diag = plan.transfer.diag;
    plan.diag.jet_growth = plan.null_control.diag.jet_growth;
    plan.diag.cn_richardson_rel = plan.null_control.diag.cn_richardson_rel;
    plan.diag.tolerance = opt.tolerance;

    if (opt.verify) {
        const StateSpec u0 = ExplicitProfile{spec.null_control.u0_tilde};
        plan.verify = verify_transfer(p, u0, spec.transfer.uT, r, tau, opt.n_sim, opt.dt);
        plan.diag.terminal_error = plan.verify.terminal_error_2d;
        plan.diag.cn_richardson_rel = plan.verify.richardson_rel_change;
        plan.diag.verified = all_flags_pass(plan.diag, plan.verify);
    }
    return plan;
}

}  // namespace paraflat
