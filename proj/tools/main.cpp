#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "paraflat/csv.hpp"
#include "paraflat/pipeline.hpp"

namespace fs = std::filesystem;
using namespace paraflat;

namespace {

struct CommonFlags {
    std::string config;
    std::string out_dir = ".";
    int n = 500;
    int truncation = 20;
    int n_sim = 2000;
    double dt = 1e-4;
    double tolerance = 1e-3;
    unsigned seed = 0;
    bool n_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_plan_flags)
{
    cmd->add_option("--config", f.config, "problem configuration file")->required();
    cmd->add_option("--out", f.out_dir, "output directory");
    auto* n_opt = cmd->add_option("--n", f.n, "semi-discretization order");
    n_opt->each([&f](const std::string&) { f.n_set = true; });
    if (with_plan_flags) {
        cmd->add_option("--truncation", f.truncation, "input series truncation");
        cmd->add_option("--n-sim", f.n_sim, "verification grid order");
        cmd->add_option("--dt", f.dt, "verification time step");
        cmd->add_option("--tolerance", f.tolerance, "terminal-error tolerance");
        cmd->add_option("--seed", f.seed, "seed for randomized fits");
    }
}

fs::path prepare_out(const CommonFlags& f)
{
    fs::path dir(f.out_dir);
    fs::create_directories(dir);
    return dir;
}

PlanOptions options_from(const CommonFlags& f)
{
    PlanOptions opt;
    opt.n = f.n;
    opt.truncation = f.truncation;
    opt.n_sim = f.n_sim;
    opt.dt = f.dt;
    opt.tolerance = f.tolerance;
    return opt;
}

std::vector<double> sample_times(double T, int count)
{
    std::vector<double> t(count);
    for (int i = 0; i < count; ++i) t[i] = T * i / (count - 1);
    return t;
}

void write_signal(const fs::path& path, const SampledSignal& sig)
{
    CsvWriter w(path.string());
    if (!sig.derivatives.empty()) {
        w.header({"t", "value", "derivative"});
        for (std::size_t i = 0; i < sig.times.size(); ++i)
            w.row({sig.times[i], sig.values[i], sig.derivatives[i]});
    } else {
        w.header({"t", "value"});
        for (std::size_t i = 0; i < sig.times.size(); ++i) w.row({sig.times[i], sig.values[i]});
    }
}

void write_snapshots(const fs::path& path, const Trajectory& traj, int n)
{
    const double h = 1.0 / (n + 1);
    CsvWriter w(path.string());
    w.header({"t", "x", "value"});
    for (std::size_t s = 0; s < traj.times.size(); ++s)
        for (int j = 1; j <= n; ++j)
            w.row({traj.times[s], j * h, traj.states[s][j - 1]});
}

void write_report(const fs::path& path, const std::string& title, const CommonFlags& f,
                  const PlanDiagnostics& diag, const GrowthCertificate& growth)
{
    std::ofstream out(path);
    out << title << "\n"
        << "config: " << f.config << "\n"
        << "n: " << f.n << ", truncation: " << f.truncation << ", n_sim: " << f.n_sim
        << ", dt: " << format_full(f.dt) << ", seed: " << f.seed << "\n\n"
        << diag.summary() << "growth_bound_M: " << format_full(growth.M) << "\n"
        << "growth_bound_omega: " << format_full(growth.omega) << "\n";
}

const TransferSpec& transfer_leg(const LoadedProblem& lp)
{
    if (const auto* t = std::get_if<TransferSpec>(&lp.task)) return *t;
    if (const auto* c = std::get_if<CompositeSpec>(&lp.task)) return c->transfer;
    throw std::runtime_error("cli: the configured task has no transfer leg");
}

const NullControlSpec& null_leg(const LoadedProblem& lp)
{
    if (const auto* t = std::get_if<NullControlSpec>(&lp.task)) return *t;
    if (const auto* c = std::get_if<CompositeSpec>(&lp.task)) return c->null_control;
    throw std::runtime_error("cli: the configured task has no null-control leg");
}

int run_plan(const std::string& kind, const CommonFlags& f)
{
    const LoadedProblem lp = load_problem(f.config);
    const fs::path dir = prepare_out(f);
    const PlanOptions opt = options_from(f);
    const GrowthCertificate growth =
        fit_growth_bound(build_semidiscrete(lp.problem, std::min(f.n, 200)), f.seed, 10);

    PlanDiagnostics diag;
    if (kind == "transfer") {
        const TransferSpec& spec = transfer_leg(lp);
        const TransferPlan plan = plan_transfer(lp.problem, spec, opt);
        write_signal(dir / "input.csv", plan.signal);
        const auto& input = *plan.input;
        const Trajectory traj =
            integrate(build_semidiscrete(lp.problem, f.n_sim),
                      state_on_grid(lp.problem, spec.u0, f.n_sim),
                      [&input](double t) { return input(t); }, spec.T, f.dt,
                      sample_times(spec.T, 11));
        write_snapshots(dir / "u_snapshots.csv", traj, f.n_sim);
        diag = plan.diag;
    } else if (kind == "null") {
        const NullControlSpec& spec = null_leg(lp);
        const NullControlPlan plan = plan_null_control(lp.problem, spec, opt);
        write_signal(dir / "input.csv", plan.signal);

        // Per-k contribution dump a_k y^(k)(t-s) for truncation diagnostics.
        CsvWriter contrib((dir / "contributions.csv").string());
        contrib.header({"t", "k", "value"});
        for (double t : sample_times(spec.tau, 101)) {
            if (t < spec.s) {
                for (int k = 0; k <= f.truncation; ++k)
                    contrib.row({t, static_cast<double>(k), 0.0});
                continue;
            }
            const TaylorJet y = plan.input->flat_jet(
                std::min(t - spec.s, spec.tau - spec.s), f.truncation);
            for (int k = 0; k <= f.truncation; ++k)
                contrib.row({t, static_cast<double>(k), plan.table->a[k] * y.coeffs[k]});
        }

        const auto& input = *plan.input;
        const Trajectory traj =
            integrate(build_semidiscrete(lp.problem, f.n_sim),
                      restrict_to_grid(spec.u0_tilde, f.n_sim),
                      [&input](double t) { return input(t); }, spec.tau, f.dt,
                      sample_times(spec.tau, 11));
        write_snapshots(dir / "u_snapshots.csv", traj, f.n_sim);
        diag = plan.diag;
    } else {
        const auto* comp = std::get_if<CompositeSpec>(&lp.task);
        if (!comp) throw std::runtime_error("cli: the configured task is not composite");
        const CompositePlan plan = plan_composite(lp.problem, *comp, opt);
        write_signal(dir / "input.csv", plan.signal);

        std::vector<int> curves = {1, 5, 13, 18, 20};
        if (std::find(curves.begin(), curves.end(), f.truncation) == curves.end())
            curves.push_back(f.truncation);
        for (int i : curves) {
            if (i > plan.transfer.table->K - 1) continue;
            const InputFn ri = plan.input_at(i);
            SampledSignal sig;
            sig.times = plan.signal.times;
            for (double t : sig.times) sig.values.push_back(ri(t));
            write_signal(dir / ("r_" + std::to_string(i) + ".csv"), sig);
        }

        const InputFn r = plan.input();
        const double tau = comp->null_control.tau;
        const Trajectory traj =
            integrate(build_semidiscrete(lp.problem, f.n_sim),
                      restrict_to_grid(comp->null_control.u0_tilde, f.n_sim), r, tau, f.dt,
                      sample_times(tau, 11));
        write_snapshots(dir / "u_snapshots.csv", traj, f.n_sim);
        diag = plan.diag;
    }
    write_report(dir / "report.txt", "paraflat plan " + kind, f, diag, growth);
    std::cout << diag.summary();
    return diag.verified ? 0 : 2;
}

class InterpSignal {
  public:
    explicit InterpSignal(const CsvTable& table)
    {
        const std::size_t tc = table.column("t"), vc = table.column("value");
        for (const auto& row : table.rows) {
            times_.push_back(row[tc]);
            values_.push_back(row[vc]);
        }
        if (times_.size() < 2) throw std::runtime_error("cli: input CSV needs at least two rows");
    }

    double operator()(double t) const
    {
        if (t <= times_.front()) return values_.front();
        if (t >= times_.back()) return values_.back();
        const auto it = std::upper_bound(times_.begin(), times_.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - times_.begin());
        const double w = (t - times_[i - 1]) / (times_[i] - times_[i - 1]);
        return values_[i - 1] + w * (values_[i] - values_[i - 1]);
    }

  private:
    std::vector<double> times_, values_;
};

int run_simulate(const CommonFlags& f, const std::string& input_csv)
{
    const LoadedProblem lp = load_problem(f.config);
    const fs::path dir = prepare_out(f);
    const InterpSignal input(read_csv(input_csv));

    double horizon = 0.0;
    std::vector<double> v0;
    if (const auto* t = std::get_if<TransferSpec>(&lp.task)) {
        horizon = t->T;
        v0 = state_on_grid(lp.problem, t->u0, f.n_sim);
    } else {
        const NullControlSpec& spec = null_leg(lp);
        horizon = spec.tau;
        v0 = restrict_to_grid(spec.u0_tilde, f.n_sim);
    }
    const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, f.n_sim);
    const Trajectory traj = integrate(sys, v0, [&input](double t) { return input(t); }, horizon,
                                      f.dt, sample_times(horizon, 11));
    write_snapshots(dir / "u_snapshots.csv", traj, f.n_sim);

    std::ofstream rep(dir / "report.txt");
    rep << "paraflat simulate\nconfig: " << f.config << "\ninput: " << input_csv
        << "\nn_sim: " << f.n_sim << ", dt: " << format_full(f.dt) << "\n"
        << "terminal_norm_2d: " << format_full(norm_2d(traj.terminal())) << "\n";
    std::cout << "terminal_norm_2d: " << format_full(norm_2d(traj.terminal())) << "\n";
    return 0;
}

int run_study(const std::string& kind, const CommonFlags& f)
{
    const LoadedProblem lp = load_problem(f.config);
    const fs::path dir = prepare_out(f);
    if (kind == "convergence") {
        const TransferSpec& leg = transfer_leg(lp);
        const double T = leg.T;
        auto input = [T](double t) { return 0.5 * (1.0 - std::cos(2.0 * M_PI * t / T)); };
        const ConvergenceStudy study = convergence_study(lp.problem, ZeroState{}, input,
                                                         {25, 50, 100, 200}, 2048, T, f.dt, 11);
        CsvWriter w((dir / "convergence.csv").string());
        w.header({"n", "sup_error", "terminal_error"});
        for (std::size_t i = 0; i < study.n_list.size(); ++i) {
            w.row({static_cast<double>(study.n_list[i]), study.sup_errors[i],
                   study.terminal_errors[i]});
            std::cout << "n=" << study.n_list[i] << " sup_error=" << study.sup_errors[i]
                      << " boundary_error=" << study.boundary_errors[i] << " comparison="
                      << (study.index_matched[i] ? "index-matched" : "interpolated") << "\n";
        }
        return 0;
    }
    if (kind == "coefficients") {
        const int k_max = std::min(f.truncation + 5, 40);
        const CoefficientStudy study =
            coefficient_limit_study(lp.problem, k_max, {64, 128, 256, 512});
        CsvWriter w((dir / "coefficients.csv").string());
        w.header({"n", "k", "value"});
        for (std::size_t i = 0; i < study.n_list.size(); ++i)
            for (int k = 0; k <= k_max; ++k)
                w.row({static_cast<double>(study.n_list[i]), static_cast<double>(k),
                       study.a[i][k]});
        CsvWriter c((dir / "cauchy.csv").string());
        c.header({"n", "k", "difference"});
        for (std::size_t i = 0; i < study.cauchy.size(); ++i)
            for (int k = 0; k <= k_max; ++k)
                c.row({static_cast<double>(study.n_list[i]), static_cast<double>(k),
                       study.cauchy[i][k]});
        std::cout << "fitted_radius_R: " << format_full(study.fitted_radius) << "\n";
        return 0;
    }
    if (kind == "truncation") {
        const auto* comp = std::get_if<CompositeSpec>(&lp.task);
        if (!comp) throw std::runtime_error("cli: truncation study needs a composite task");
        PlanOptions opt = options_from(f);
        opt.verify = false;
        const CompositePlan plan = plan_composite(lp.problem, *comp, opt);
        const double tau = comp->null_control.tau;
        std::vector<int> is = {1, 5, 13, 18, 20};
        if (std::find(is.begin(), is.end(), f.truncation) == is.end())
            is.push_back(f.truncation);
        std::sort(is.begin(), is.end());
        is.erase(std::remove_if(is.begin(), is.end(),
                                [&](int i) { return i > plan.transfer.table->K - 1; }),
                 is.end());
        CsvWriter w((dir / "truncation.csv").string());
        w.header({"i_low", "i_high", "l2_difference"});
        const int N = 2000;
        for (std::size_t k = 0; k + 1 < is.size(); ++k) {
            const InputFn lo = plan.input_at(is[k]), hi = plan.input_at(is[k + 1]);
            double acc = 0.0;
            for (int q = 0; q <= N; ++q) {
                const double t = tau * q / N;
                const double d = hi(t) - lo(t);
                acc += (q == 0 || q == N ? 0.5 : 1.0) * d * d;
            }
            w.row({static_cast<double>(is[k]), static_cast<double>(is[k + 1]),
                   std::sqrt(acc * tau / N)});
        }
        return 0;
    }
    throw std::runtime_error("cli: unknown study kind " + kind);
}

int run_inspect(const CommonFlags& f, const std::string& what)
{
    const LoadedProblem lp = load_problem(f.config);
    const fs::path dir = prepare_out(f);
    const int n = f.n_set ? f.n : 20;
    if (what == "matrix") {
        const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, n);
        CsvWriter w((dir / "matrix.csv").string());
        w.header({"sub", "main", "super"});
        for (int j = 0; j < sys.n; ++j)
            w.row({j > 0 ? sys.A.sub[j - 1] : 0.0, sys.A.diag[j],
                   j + 1 < sys.n ? sys.A.super[j] : 0.0});
        CsvWriter b((dir / "bvector.csv").string());
        b.header({"j", "value"});
        for (int j = 1; j <= sys.n; ++j) b.row({static_cast<double>(j), sys.B[j - 1]});
        return 0;
    }
    if (what == "dtable" || what == "coeffs") {
        const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, n);
        const FlatTable tab = flat_table(sys, std::min(f.truncation, n));
        if (what == "dtable") {
            CsvWriter w((dir / "dtable.csv").string());
            w.header({"j", "k", "value"});
            for (int j = 1; j <= tab.n; ++j)
                for (int k = 0; k <= tab.K; ++k)
                    w.row({static_cast<double>(j), static_cast<double>(k), tab.dval(j, k)});
        } else {
            CsvWriter w((dir / "coeffs.csv").string());
            w.header({"n", "k", "value"});
            for (int k = 0; k <= tab.K; ++k)
                w.row({static_cast<double>(n), static_cast<double>(k), tab.a[k]});
        }
        return 0;
    }
    if (what == "psi") {
        const TransferSpec& leg = transfer_leg(lp);
        const GevreyBump bump(leg.gevrey_alpha, leg.gevrey_gamma);
        CsvWriter w((dir / "psi.csv").string());
        w.header({"t", "psi0", "psi"});
        for (double t : sample_times(leg.T, 201)) w.row({t, bump.psi0(t), bump.psi(t)});
        return 0;
    }
    if (what == "trajectory") {
        const TransferSpec& leg = transfer_leg(lp);
        const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, n);
        const EndpointSeries e0 = endpoint_series(lp.problem, leg.u0, sys, 10);
        const EndpointSeries eT = endpoint_series(lp.problem, leg.uT, sys, 10);
        const ReferenceTrajectory traj(e0.y, eT.y, leg.T, leg.gevrey_alpha, leg.gevrey_gamma);
        const int order = std::min(f.truncation, 10);
        CsvWriter w((dir / "trajectory.csv").string());
        std::vector<std::string> head = {"t", "y"};
        for (int m = 1; m <= order; ++m) head.push_back("y" + std::to_string(m));
        w.header(head);
        for (double t : sample_times(leg.T, 201)) {
            const TaylorJet j = traj.jet(t, order);
            std::vector<double> row = {t};
            row.insert(row.end(), j.coeffs.begin(), j.coeffs.end());
            w.row(row);
        }
        return 0;
    }
    throw std::runtime_error("cli: unknown inspect target " + what);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"flatness-based boundary control synthesis for 1D parabolic equations"};
    app.require_subcommand(1);

    CommonFlags plan_flags, sim_flags, study_flags, inspect_flags;
    std::string plan_kind, study_kind, inspect_what, input_csv;

    CLI::App* plan = app.add_subcommand("plan", "synthesize and verify a control input");
    plan->add_option("kind", plan_kind, "transfer | null | composite")
        ->required()
        ->check(CLI::IsMember({"transfer", "null", "composite"}));
    add_common(plan, plan_flags, true);

    CLI::App* sim = app.add_subcommand("simulate", "replay an input CSV against the problem");
    add_common(sim, sim_flags, false);
    sim->add_option("--input", input_csv, "input signal CSV (t,value)")->required();
    sim->add_option("--n-sim", sim_flags.n_sim, "simulation grid order");
    sim->add_option("--dt", sim_flags.dt, "time step");

    CLI::App* study = app.add_subcommand("study", "run a convergence or coefficient study");
    study->add_option("kind", study_kind, "convergence | coefficients | truncation")
        ->required()
        ->check(CLI::IsMember({"convergence", "coefficients", "truncation"}));
    add_common(study, study_flags, true);

    CLI::App* inspect = app.add_subcommand("inspect", "dump internal objects as CSV");
    add_common(inspect, inspect_flags, false);
    inspect->add_option("--truncation", inspect_flags.truncation, "table depth");
    inspect->add_option("--what", inspect_what, "matrix | dtable | coeffs | psi | trajectory")
        ->required()
        ->check(CLI::IsMember({"matrix", "dtable", "coeffs", "psi", "trajectory"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors fold into exit code 1; --help stays 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (plan->parsed()) return run_plan(plan_kind, plan_flags);
        if (sim->parsed()) return run_simulate(sim_flags, input_csv);
        if (study->parsed()) return run_study(study_kind, study_flags);
        if (inspect->parsed()) return run_inspect(inspect_flags, inspect_what);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
