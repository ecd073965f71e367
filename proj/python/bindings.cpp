#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "paraflat/pipeline.hpp"

namespace py = pybind11;
using namespace paraflat;

namespace {

py::array_t<double> to_array(const std::vector<double>& v)
{
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::dict semidiscrete_dict(const SemiDiscreteSystem& sys)
{
    py::dict d;
    d["n"] = sys.n;
    d["h"] = sys.h;
    d["sub"] = to_array(sys.A.sub);
    d["diag"] = to_array(sys.A.diag);
    d["super"] = to_array(sys.A.super);
    d["B"] = to_array(sys.B);
    d["r0"] = sys.r0;
    d["r1"] = sys.r1;
    d["q0"] = sys.q0;
    d["b_n"] = sys.b_n;
    return d;
}

py::dict diagnostics_dict(const PlanDiagnostics& diag)
{
    py::dict d;
    d["verified"] = diag.verified;
    d["terminal_error"] = diag.terminal_error;
    d["tolerance"] = diag.tolerance;
    d["coefficient_radius"] = diag.coefficient_radius;
    d["gevrey_constant"] = diag.gevrey_constant;
    d["jet_growth"] = diag.jet_growth;
    d["gamma_shrunk"] = diag.gamma_shrunk;
    d["surrogate_warning"] = diag.surrogate_warning;
    d["dt_richardson"] = diag.cn_richardson_rel;
    d["summary"] = diag.summary();
    return d;
}

py::dict signal_dict(const SampledSignal& sig)
{
    py::dict d;
    d["t"] = to_array(sig.times);
    d["value"] = to_array(sig.values);
    if (!sig.derivatives.empty()) d["derivative"] = to_array(sig.derivatives);
    return d;
}

PlanOptions options_from_kwargs(int n, int truncation, int n_sim, double dt, double tolerance,
                                bool verify, int out_samples)
{
    PlanOptions opt;
    opt.n = n;
    opt.truncation = truncation;
    opt.n_sim = n_sim;
    opt.dt = dt;
    opt.tolerance = tolerance;
    opt.verify = verify;
    opt.out_samples = out_samples;
    return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "flatness-based boundary control synthesis for 1D parabolic equations";

    py::class_<PiecewiseSmoothFn>(m, "PiecewiseSmoothFn")
        .def_static("from_expr", &PiecewiseSmoothFn::from_expr, py::arg("text"))
        .def_static(
            "from_exprs",
            [](std::vector<double> breaks, const std::vector<std::string>& texts) {
                std::vector<Expr> exprs;
                for (const auto& t : texts) exprs.push_back(Expr::parse(t));
                return PiecewiseSmoothFn::from_exprs(std::move(breaks), std::move(exprs));
            },
            py::arg("breakpoints"), py::arg("exprs"))
        .def("__call__", &PiecewiseSmoothFn::eval, py::arg("x"))
        .def("deriv", &PiecewiseSmoothFn::eval_deriv, py::arg("x"))
        .def_property_readonly("breakpoints", [](const PiecewiseSmoothFn& f) {
            return to_array(f.breakpoints());
        });

    py::class_<LoadedProblem>(m, "Problem")
        .def_property_readonly("interface_points",
                               [](const LoadedProblem& lp) {
                                   return to_array(lp.problem.interface_points);
                               })
        .def("theta", [](const LoadedProblem& lp, double x) { return lp.problem.theta.eval(x); })
        .def("sigma", [](const LoadedProblem& lp, double x) { return lp.problem.sigma.eval(x); })
        .def("lam", [](const LoadedProblem& lp, double x) { return lp.problem.lambda.eval(x); })
        .def_property_readonly("bc",
                               [](const LoadedProblem& lp) {
                                   py::dict d;
                                   d["alpha0"] = lp.problem.alpha0;
                                   d["beta0"] = lp.problem.beta0;
                                   d["alpha1"] = lp.problem.alpha1;
                                   d["beta1"] = lp.problem.beta1;
                                   return d;
                               })
        .def("semidiscrete",
             [](const LoadedProblem& lp, int n) {
                 return semidiscrete_dict(build_semidiscrete(lp.problem, n));
             },
             py::arg("n"))
        .def("steady_state",
             [](const LoadedProblem& lp, int n, double f_ss) {
                 return to_array(steady_state(build_semidiscrete(lp.problem, n), f_ss));
             },
             py::arg("n"), py::arg("f_ss"))
        .def("flat_table",
             [](const LoadedProblem& lp, int n, int K) {
                 const FlatTable tab = flat_table(build_semidiscrete(lp.problem, n), K);
                 py::array_t<double> d({tab.n, tab.K + 1});
                 auto acc = d.mutable_unchecked<2>();
                 for (int j = 0; j < tab.n; ++j)
                     for (int k = 0; k <= tab.K; ++k) acc(j, k) = tab.d[j][k];
                 py::dict out;
                 out["a"] = to_array(tab.a);
                 out["d"] = d;
                 out["flat_output_scale"] = tab.flat_output_scale;
                 return out;
             },
             py::arg("n"), py::arg("K"))
        .def("serialize", [](const LoadedProblem& lp) { return serialize_problem(lp); });

    m.def("load_problem", &load_problem, py::arg("path"));
    m.def("parse_problem", &parse_problem, py::arg("json_text"));

    py::class_<GevreyBump>(m, "GevreyBump")
        .def(py::init<double, double, double>(), py::arg("alpha"), py::arg("gamma"),
             py::arg("quad_rel_tol") = 1e-13)
        .def("psi0", &GevreyBump::psi0, py::arg("t"))
        .def("psi", &GevreyBump::psi, py::arg("t"))
        .def("psi_derivatives",
             [](const GevreyBump& b, double t, int order) {
                 return to_array(b.psi_jet(t, order).coeffs);
             },
             py::arg("t"), py::arg("order"))
        .def_property_readonly("normalization", &GevreyBump::normalization);

    m.def(
        "plan_transfer",
        [](const LoadedProblem& lp, int n, int truncation, int n_sim, double dt, double tolerance,
           bool verify, int out_samples) {
            const auto* spec = std::get_if<TransferSpec>(&lp.task);
            const auto* comp = std::get_if<CompositeSpec>(&lp.task);
            if (!spec && !comp)
                throw std::runtime_error("plan_transfer: the configured task has no transfer leg");
            const TransferPlan plan =
                plan_transfer(lp.problem, spec ? *spec : comp->transfer,
                              options_from_kwargs(n, truncation, n_sim, dt, tolerance, verify,
                                                  out_samples));
            py::dict out = signal_dict(plan.signal);
            out["diagnostics"] = diagnostics_dict(plan.diag);
            return out;
        },
        py::arg("problem"), py::arg("n") = 500, py::arg("truncation") = 20,
        py::arg("n_sim") = 2000, py::arg("dt") = 1e-4, py::arg("tolerance") = 1e-3,
        py::arg("verify") = true, py::arg("out_samples") = 1001);

    m.def(
        "plan_null_control",
        [](const LoadedProblem& lp, int n, int truncation, int n_sim, double dt, double tolerance,
           bool verify, int out_samples) {
            const auto* spec = std::get_if<NullControlSpec>(&lp.task);
            const auto* comp = std::get_if<CompositeSpec>(&lp.task);
            if (!spec && !comp)
                throw std::runtime_error(
                    "plan_null_control: the configured task has no null-control leg");
            const NullControlPlan plan =
                plan_null_control(lp.problem, spec ? *spec : comp->null_control,
                                  options_from_kwargs(n, truncation, n_sim, dt, tolerance, verify,
                                                      out_samples));
            py::dict out = signal_dict(plan.signal);
            out["diagnostics"] = diagnostics_dict(plan.diag);
            out["free_decay_terminal"] = plan.diag.free_decay_terminal;
            return out;
        },
        py::arg("problem"), py::arg("n") = 500, py::arg("truncation") = 20,
        py::arg("n_sim") = 2000, py::arg("dt") = 1e-4, py::arg("tolerance") = 1e-3,
        py::arg("verify") = true, py::arg("out_samples") = 1001);

    m.def(
        "plan_composite",
        [](const LoadedProblem& lp, int n, int truncation, int n_sim, double dt, double tolerance,
           bool verify, int out_samples, const std::vector<int>& curves) {
            const auto* comp = std::get_if<CompositeSpec>(&lp.task);
            if (!comp) throw std::runtime_error("plan_composite: the task is not composite");
            const CompositePlan plan = plan_composite(
                lp.problem, *comp,
                options_from_kwargs(n, truncation, n_sim, dt, tolerance, verify, out_samples));
            py::dict out = signal_dict(plan.signal);
            out["diagnostics"] = diagnostics_dict(plan.diag);
            py::dict truncations;
            for (int i : curves) {
                if (i > plan.transfer.table->K - 1) continue;
                const InputFn ri = plan.input_at(i);
                std::vector<double> values;
                values.reserve(plan.signal.times.size());
                for (double t : plan.signal.times) values.push_back(ri(t));
                truncations[py::int_(i)] = to_array(values);
            }
            out["truncations"] = truncations;
            return out;
        },
        py::arg("problem"), py::arg("n") = 500, py::arg("truncation") = 20,
        py::arg("n_sim") = 2000, py::arg("dt") = 1e-4, py::arg("tolerance") = 1e-3,
        py::arg("verify") = true, py::arg("out_samples") = 1001,
        py::arg("curves") = std::vector<int>{});

    m.attr("__version__") = "0.1.0";
}
