#include "paraflat/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace paraflat {

namespace {

TridiagonalMatrix scaled_shifted(const TridiagonalMatrix& A, double s)
{
    // I + s*A
    TridiagonalMatrix M(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) M.diag[i] = 1.0 + s * A.diag[i];
    for (std::size_t i = 0; i + 1 < A.size(); ++i) {
        M.sub[i] = s * A.sub[i];
        M.super[i] = s * A.super[i];
    }
    return M;
}

}  // namespace

Trajectory integrate(const SemiDiscreteSystem& sys, const std::vector<double>& v0,
                     const InputFn& input, double T, double dt,
                     const std::vector<double>& snapshot_times)
{
    if (!(dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
    if (static_cast<int>(v0.size()) != sys.n)
        throw std::invalid_argument("simulate: initial state has wrong length");

    const long steps = std::max<long>(1, std::lround(T / dt));
    const double step = T / static_cast<double>(steps);

    const TridiagonalMatrix plus = scaled_shifted(sys.A, 0.5 * step);
    const TridiagonalLU minus_lu(scaled_shifted(sys.A, -0.5 * step), 0.0);
    if (minus_lu.singular())
        throw std::runtime_error("simulate: implicit Crank-Nicolson solve is singular");

    // Map requested snapshot times to step indices (always keep 0 and T).
    std::vector<long> snap_idx;
    if (snapshot_times.empty()) {
        snap_idx.resize(steps + 1);
        for (long k = 0; k <= steps; ++k) snap_idx[k] = k;
    } else {
        for (double ts : snapshot_times)
            snap_idx.push_back(std::clamp<long>(std::lround(ts / step), 0, steps));
        snap_idx.push_back(0);
        snap_idx.push_back(steps);
        std::sort(snap_idx.begin(), snap_idx.end());
        snap_idx.erase(std::unique(snap_idx.begin(), snap_idx.end()), snap_idx.end());
    }

    Trajectory traj;
    traj.times.reserve(snap_idx.size());
    traj.states.reserve(snap_idx.size());
    std::size_t next_snap = 0;

    std::vector<double> v = v0;
    const double bn = sys.B[sys.n - 1];
    double f_left = input(0.0);
    for (long k = 0; k <= steps; ++k) {
        if (next_snap < snap_idx.size() && snap_idx[next_snap] == k) {
            traj.times.push_back(k * step);
            traj.states.push_back(v);
            ++next_snap;
        }
        if (k == steps) break;
        const double t1 = (k + 1) * step;
        const double f_right = input(t1);
        std::vector<double> rhs = plus.apply(v);
        rhs[sys.n - 1] += step * bn * 0.5 * (f_left + f_right);
        v = minus_lu.solve(rhs);
        f_left = f_right;
    }
    return traj;
}

std::vector<double> state_on_grid(const ParabolicProblem& p, const StateSpec& s, int n)
{
    if (std::holds_alternative<ZeroState>(s)) return std::vector<double>(n, 0.0);
    if (const auto* ss = std::get_if<SteadyState>(&s))
        return steady_state(build_semidiscrete(p, n), ss->f_ss);
    return restrict_to_grid(std::get<ExplicitProfile>(s).profile, n);
}

namespace {

double terminal_error_once(const SemiDiscreteSystem& sys, const std::vector<double>& v0,
                           const std::vector<double>& target, const InputFn& input, double T,
                           double dt, Trajectory* out, const std::vector<double>& snaps)
{
    Trajectory traj = integrate(sys, v0, input, T, dt, out ? snaps : std::vector<double>{0.0, T});
    std::vector<double> diff = traj.terminal();
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= target[i];
    const double err = norm_2d(diff);
    if (out) *out = std::move(traj);
    return err;
}

}  // namespace

TransferReport verify_transfer(const ParabolicProblem& p, const StateSpec& u0, const StateSpec& uT,
                               const InputFn& input, double T, int n_sim, double dt,
                               Trajectory* trajectory_out, const std::vector<double>& snapshot_times)
{
    TransferReport rep;
    rep.n_sim = n_sim;
    rep.dt = dt;
    const SemiDiscreteSystem sys = build_semidiscrete(p, n_sim);
    const std::vector<double> v0 = state_on_grid(p, u0, n_sim);
    const std::vector<double> target = state_on_grid(p, uT, n_sim);

    rep.terminal_error_2d =
        terminal_error_once(sys, v0, target, input, T, dt, trajectory_out, snapshot_times);
    const double half =
        terminal_error_once(sys, v0, target, input, T, 0.5 * dt, nullptr, {});
    const double scale = std::max({rep.terminal_error_2d, half, 1e-12});
    rep.richardson_rel_change = std::abs(half - rep.terminal_error_2d) / scale;
    rep.richardson_ok = rep.richardson_rel_change < 0.05;
    return rep;
}

namespace {

// Linear interpolation of a fine-grid vector onto a coarse grid; index
// matching is exact when the grids nest. Requires n_fine > n_coarse so that
// every coarse node lies between interior fine nodes.
std::vector<double> interp_to_coarse(const std::vector<double>& fine, int n_fine, int n_coarse)
{
    const double hf = 1.0 / (n_fine + 1), hc = 1.0 / (n_coarse + 1);
    std::vector<double> out(n_coarse);
    for (int j = 1; j <= n_coarse; ++j) {
        const double pos = j * hc / hf;
        const long i = std::clamp<long>(static_cast<long>(std::floor(pos)), 1, n_fine - 1);
        const double w = pos - i;
        out[j - 1] = fine[i - 1] + w * (fine[i] - fine[i - 1]);
    }
    return out;
}

}  // namespace

GrowthCertificate fit_growth_bound(const SemiDiscreteSystem& sys, unsigned seed, int trials,
                                   double t_max)
{
    const Symmetrized sym = symmetrize(sys);
    const SymTriEigen eig = symtri_eigen(sym.diag, sym.offdiag, true);
    const int n = sys.n;
    GrowthCertificate cert;
    cert.omega = eig.values.back();

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double M = 1.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> v0(n);
        double norm0 = 0.0;
        for (double& x : v0) {
            x = gauss(rng);
            norm0 += x * x;
        }
        norm0 = std::sqrt(norm0);
        std::vector<double> c(n, 0.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) c[k] += eig.vec(i, k) * v0[i] / sym.p[i];
        for (double t : {0.05, 0.25, 0.5, t_max}) {
            double norm_t = 0.0;
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int k = 0; k < n; ++k) {
                    const double e = eig.values[k] * t;
                    if (e > -745.0) acc += eig.vec(i, k) * std::exp(e) * c[k];
                }
                acc *= sym.p[i];
                norm_t += acc * acc;
            }
            M = std::max(M, std::sqrt(norm_t) / (std::exp(cert.omega * t) * norm0));
        }
    }
    cert.M = M;
    return cert;
}

ConvergenceStudy convergence_study(const ParabolicProblem& p, const StateSpec& u0,
                                   const InputFn& input, const std::vector<int>& n_list, int n_ref,
                                   double T, double dt, int snapshots)
{
    ConvergenceStudy study;
    study.n_list = n_list;
    study.n_ref = n_ref;
    for (int n : n_list)
        if (n_ref < 4 * n)
            throw std::invalid_argument(
                "simulate: reference order must be at least four times every studied order");

    std::vector<double> snap_times;
    for (int s = 1; s <= snapshots; ++s) snap_times.push_back(T * s / snapshots);

    const SemiDiscreteSystem sys_ref = build_semidiscrete(p, n_ref);
    const Trajectory ref =
        integrate(sys_ref, state_on_grid(p, u0, n_ref), input, T, dt, snap_times);

    for (int n : n_list) {
        const SemiDiscreteSystem sys = build_semidiscrete(p, n);
        const Trajectory traj = integrate(sys, state_on_grid(p, u0, n), input, T, dt, snap_times);
        double sup = 0.0, boundary = 0.0, terminal = 0.0;
        for (std::size_t si = 0; si < traj.states.size(); ++si) {
            const std::vector<double> ref_coarse = interp_to_coarse(ref.states[si], n_ref, n);
            std::vector<double> diff = traj.states[si];
            for (int j = 0; j < n; ++j) diff[j] -= ref_coarse[j];
            const double err = norm_2d(diff);
            sup = std::max(sup, err);
            if (si + 1 == traj.states.size()) terminal = err;
            // Boundary trace: |v_{n,1} - v_{ref,1}| plus the q0-scaled trace.
            const double tr = std::abs(traj.states[si][0] - ref.states[si][0]);
            const double trq =
                std::abs(sys.q0 * traj.states[si][0] - sys_ref.q0 * ref.states[si][0]);
            boundary = std::max(boundary, tr + trq);
        }
        study.sup_errors.push_back(sup);
        study.terminal_errors.push_back(terminal);
        study.boundary_errors.push_back(boundary);
        study.index_matched.push_back((n_ref + 1) % (n + 1) == 0);
    }
    return study;
}

}  // namespace paraflat
