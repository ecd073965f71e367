#include <cmath>
#include <random>

#include "doctest.h"
#include "paraflat/simulate.hpp"
#include "test_support.hpp"

using namespace paraflat;
using paraflat_test::dirichlet_heat;
using paraflat_test::demo_problem;

TEST_SUITE("simulate")
{
    TEST_CASE("zero input and zero state stay zero")
    {
        const SemiDiscreteSystem sys = build_semidiscrete(dirichlet_heat(), 20);
        const Trajectory traj =
            integrate(sys, std::vector<double>(20, 0.0), [](double) { return 0.0; }, 0.1, 1e-3);
        for (const auto& v : traj.states) CHECK(norm_inf(v) == 0.0);
    }

    TEST_CASE("steady state under its own input is an equilibrium")
    {
        const LoadedProblem lp = demo_problem();
        const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, 80);
        const double f_ss = 0.5;
        const std::vector<double> v0 = steady_state(sys, f_ss);
        const Trajectory traj = integrate(sys, v0, [=](double) { return f_ss; }, 0.5, 1e-3);
        std::vector<double> diff = traj.terminal();
        for (int j = 0; j < sys.n; ++j) diff[j] -= v0[j];
        CHECK(norm_inf(diff) <= 1e-10 * norm_inf(v0));
    }

    TEST_CASE("free decay of the first Dirichlet mode matches its eigenvalue")
    {
        const SemiDiscreteSystem sys = build_semidiscrete(dirichlet_heat(), 50);
        std::vector<double> v0(sys.n);
        for (int j = 1; j <= sys.n; ++j) v0[j - 1] = std::sin(M_PI * j * sys.h);
        const double T = 0.1;
        const Trajectory traj = integrate(sys, v0, [](double) { return 0.0; }, T, 1e-5);
        const double rate = std::log(norm_2d(v0) / norm_2d(traj.terminal())) / T;
        const double exact = (2.0 / (sys.h * sys.h)) * (1.0 - std::cos(M_PI * sys.h));
        CHECK(rate == doctest::Approx(exact).epsilon(1e-3));
    }

    TEST_CASE("global error of the integrator is second order in dt")
    {
        const SemiDiscreteSystem sys = build_semidiscrete(dirichlet_heat(), 30);
        std::vector<double> v0(sys.n);
        for (int j = 1; j <= sys.n; ++j) v0[j - 1] = std::sin(M_PI * j * sys.h);
        const double lambda = -(2.0 / (sys.h * sys.h)) * (1.0 - std::cos(M_PI * sys.h));
        const double T = 0.02;
        std::vector<double> errs;
        for (double dt : {2e-4, 1e-4, 5e-5}) {
            const Trajectory traj = integrate(sys, v0, [](double) { return 0.0; }, T, dt);
            double err = 0.0;
            const double decay = std::exp(lambda * T);
            for (int j = 0; j < sys.n; ++j)
                err = std::max(err, std::abs(traj.terminal()[j] - decay * v0[j]));
            errs.push_back(err);
        }
        const double slope = std::log2(errs[0] / errs[2]) / 2.0;
        CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
    }

    TEST_CASE("zero-to-zero transfer with zero input verifies exactly")
    {
        const LoadedProblem lp = demo_problem();
        const TransferReport rep = verify_transfer(
            lp.problem, ZeroState{}, ZeroState{}, [](double) { return 0.0; }, 0.2, 100, 1e-3);
        CHECK(rep.terminal_error_2d == 0.0);
        CHECK(rep.richardson_ok);
    }

    TEST_CASE("convergence study reports zero error for a shared linear equilibrium")
    {
        // Linear steady profile is exact on every grid and exactly
        // reproduced by the cross-grid interpolation.
        const ParabolicProblem p = dirichlet_heat();
        const ConvergenceStudy study = convergence_study(
            p, SteadyState{1.0}, [](double) { return 1.0; }, {25, 50}, 400, 0.1, 1e-3, 5);
        for (double e : study.sup_errors) CHECK(e <= 1e-11);
        for (double e : study.terminal_errors) CHECK(e <= 1e-11);
    }

    TEST_CASE("simulated free trajectories respect the fitted growth certificate")
    {
        const LoadedProblem lp = demo_problem();
        const SemiDiscreteSystem sys = build_semidiscrete(lp.problem, 100);
        const GrowthCertificate cert = fit_growth_bound(sys, 5, 20);
        std::mt19937 rng(11);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> v0(sys.n);
        for (double& x : v0) x = gauss(rng);
        double norm0 = 0.0;
        for (double x : v0) norm0 += x * x;
        norm0 = std::sqrt(norm0);
        const Trajectory traj =
            integrate(sys, v0, [](double) { return 0.0; }, 1.0, 1e-3, {0.1, 0.5, 1.0});
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            double nt = 0.0;
            for (double x : traj.states[i]) nt += x * x;
            nt = std::sqrt(nt);
            CHECK(nt <= 1.001 * cert.M * std::exp(cert.omega * traj.times[i]) * norm0);
        }
    }

    TEST_CASE("errors shrink with the order for the variable-coefficient problem")
    {
        const LoadedProblem lp = demo_problem();
        auto input = [](double t) { return 0.5 * (1.0 - std::cos(2.0 * M_PI * t / 0.25)); };
        const ConvergenceStudy study =
            convergence_study(lp.problem, ZeroState{}, input, {25, 50, 100}, 1024, 0.25, 2e-4, 6);
        CHECK(study.sup_errors[0] > study.sup_errors[1]);
        CHECK(study.sup_errors[1] > study.sup_errors[2]);
        // The boundary traces converge along with the field.
        CHECK(study.boundary_errors[0] > study.boundary_errors[2]);
        // Doubling the reference changes the reported errors by little.
        const ConvergenceStudy finer =
            convergence_study(lp.problem, ZeroState{}, input, {25, 50, 100}, 2048, 0.25, 2e-4, 6);
        for (std::size_t i = 0; i < study.sup_errors.size(); ++i)
            CHECK(std::abs(study.sup_errors[i] - finer.sup_errors[i]) <=
                  0.10 * finer.sup_errors[i]);
    }
}
