#include "paraflat/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace paraflat {

namespace {

using nlohmann::json;

PiecewiseSmoothFn coeff_from_json(const json& arr, const std::string& name)
{
    if (!arr.is_array() || arr.empty())
        throw std::runtime_error("problem: \"" + name + "\" must be a non-empty list of pieces");
    std::vector<double> breaks;
    std::vector<Expr> exprs;
    for (const auto& piece : arr) {
        const double from = piece.at("from").get<double>();
        const double to = piece.at("to").get<double>();
        if (breaks.empty()) {
            breaks.push_back(from);
        } else if (std::abs(breaks.back() - from) > 1e-15) {
            throw std::runtime_error("problem: pieces of \"" + name + "\" are not contiguous");
        }
        breaks.push_back(to);
        exprs.push_back(Expr::parse(piece.at("expr").get<std::string>()));
    }
    return PiecewiseSmoothFn::from_exprs(std::move(breaks), std::move(exprs));
}

json coeff_to_json(const PiecewiseSmoothFn& f)
{
    json arr = json::array();
    const auto& b = f.breakpoints();
    const auto texts = f.piece_texts();
    for (std::size_t i = 0; i < texts.size(); ++i)
        arr.push_back({{"from", b[i]}, {"to", b[i + 1]}, {"expr", texts[i]}});
    return arr;
}

StateSpec state_from_json(const json& j, const std::string& name)
{
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "zero") return ZeroState{};
    if (kind == "steady_state") return SteadyState{j.at("f_ss").get<double>()};
    if (kind == "profile") return ExplicitProfile{coeff_from_json(j.at("pieces"), name)};
    throw std::runtime_error("problem: unknown state kind \"" + kind + "\" for " + name);
}

json state_to_json(const StateSpec& s)
{
    if (std::holds_alternative<ZeroState>(s)) return {{"kind", "zero"}};
    if (const auto* ss = std::get_if<SteadyState>(&s))
        return {{"kind", "steady_state"}, {"f_ss", ss->f_ss}};
    return {{"kind", "profile"}, {"pieces", coeff_to_json(std::get<ExplicitProfile>(s).profile)}};
}

TransferSpec transfer_from_json(const json& t)
{
    TransferSpec spec;
    spec.T = t.at("T").get<double>();
    spec.u0 = state_from_json(t.at("u0"), "u0");
    spec.uT = state_from_json(t.at("uT"), "uT");
    spec.gevrey_alpha = t.at("gevrey_alpha").get<double>();
    spec.gevrey_gamma = t.value("gevrey_gamma", spec.T);
    spec.validate();
    return spec;
}

NullControlSpec null_from_json(const json& t)
{
    NullControlSpec spec;
    spec.tau = t.at("tau").get<double>();
    spec.s = t.at("s").get<double>();
    spec.u0_tilde = coeff_from_json(t.at("u0_tilde"), "u0_tilde");
    spec.gevrey_alpha = t.at("gevrey_alpha").get<double>();
    spec.validate();
    return spec;
}

}  // namespace

void TransferSpec::validate() const
{
    if (!(T > 0.0)) throw std::runtime_error("problem: transfer horizon T must be positive");
    if (!(gevrey_alpha > 1.0 && gevrey_alpha < 2.0))
        throw std::runtime_error("problem: gevrey_alpha must lie in (1,2)");
    if (!(gevrey_gamma > 0.0 && gevrey_gamma <= T))
        throw std::runtime_error("problem: gevrey_gamma must lie in (0,T]");
}

void NullControlSpec::validate() const
{
    if (!(tau > 0.0)) throw std::runtime_error("problem: horizon tau must be positive");
    if (!(s > 0.0 && s < tau))
        throw std::runtime_error("problem: smoothing time s must lie in (0,tau)");
    if (!(gevrey_alpha > 1.0 && gevrey_alpha < 2.0))
        throw std::runtime_error("problem: gevrey_alpha must lie in (1,2)");
}

void ParabolicProblem::validate() const
{
    const double theta_min = theta.sampled_min();
    if (!(theta_min > 0.0)) {
        std::ostringstream os;
        os << "problem: theta must be positive on [0,1]; sampled minimum " << theta_min;
        throw std::runtime_error(os.str());
    }
    if (alpha0 == 0.0 && beta0 == 0.0)
        throw std::runtime_error("problem: (alpha0, beta0) must not both vanish");
    if (alpha1 == 0.0 && beta1 == 0.0)
        throw std::runtime_error("problem: (alpha1, beta1) must not both vanish");
}

ParabolicProblem make_problem(PiecewiseSmoothFn theta, PiecewiseSmoothFn sigma,
                              PiecewiseSmoothFn lambda, double alpha0, double beta0, double alpha1,
                              double beta1)
{
    ParabolicProblem p;
    p.theta = std::move(theta);
    p.sigma = std::move(sigma);
    p.lambda = std::move(lambda);
    p.alpha0 = alpha0;
    p.beta0 = beta0;
    p.alpha1 = alpha1;
    p.beta1 = beta1;
    std::set<double> pts;
    for (const auto* f : {&p.theta, &p.sigma, &p.lambda})
        for (double b : f->interior_breakpoints()) pts.insert(b);
    p.interface_points.assign(pts.begin(), pts.end());
    p.validate();
    return p;
}

LoadedProblem parse_problem(const std::string& json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("problem: config parse error: ") + e.what());
    }

    const auto& bc = j.at("bc");
    ParabolicProblem p = make_problem(
        coeff_from_json(j.at("theta"), "theta"), coeff_from_json(j.at("sigma"), "sigma"),
        coeff_from_json(j.at("lambda"), "lambda"), bc.at("alpha0").get<double>(),
        bc.at("beta0").get<double>(), bc.at("alpha1").get<double>(), bc.at("beta1").get<double>());

    const auto& t = j.at("task");
    const std::string kind = t.at("kind").get<std::string>();
    TaskSpec task;
    if (kind == "transfer") {
        task = transfer_from_json(t);
    } else if (kind == "null_control") {
        task = null_from_json(t);
    } else if (kind == "composite") {
        CompositeSpec c;
        c.null_control = null_from_json(t);
        TransferSpec tr;
        tr.T = c.null_control.tau;
        tr.u0 = ZeroState{};
        tr.uT = state_from_json(t.at("uT"), "uT");
        tr.gevrey_alpha = c.null_control.gevrey_alpha;
        tr.gevrey_gamma = t.value("gevrey_gamma", tr.T);
        if (!(tr.gevrey_gamma > 0.0 && tr.gevrey_gamma <= tr.T))
            throw std::runtime_error("problem: gevrey_gamma must lie in (0,tau]");
        c.transfer = std::move(tr);
        task = std::move(c);
    } else {
        throw std::runtime_error("problem: unknown task kind \"" + kind + "\"");
    }
    return {std::move(p), std::move(task)};
}

LoadedProblem load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("problem: cannot open config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

std::string serialize_problem(const LoadedProblem& lp)
{
    json j;
    j["theta"] = coeff_to_json(lp.problem.theta);
    j["sigma"] = coeff_to_json(lp.problem.sigma);
    j["lambda"] = coeff_to_json(lp.problem.lambda);
    j["bc"] = {{"alpha0", lp.problem.alpha0},
               {"beta0", lp.problem.beta0},
               {"alpha1", lp.problem.alpha1},
               {"beta1", lp.problem.beta1}};
    json t;
    if (const auto* tr = std::get_if<TransferSpec>(&lp.task)) {
        t["kind"] = "transfer";
        t["T"] = tr->T;
        t["u0"] = state_to_json(tr->u0);
        t["uT"] = state_to_json(tr->uT);
        t["gevrey_alpha"] = tr->gevrey_alpha;
        t["gevrey_gamma"] = tr->gevrey_gamma;
    } else if (const auto* nc = std::get_if<NullControlSpec>(&lp.task)) {
        t["kind"] = "null_control";
        t["tau"] = nc->tau;
        t["s"] = nc->s;
        t["u0_tilde"] = coeff_to_json(nc->u0_tilde);
        t["gevrey_alpha"] = nc->gevrey_alpha;
    } else {
        const auto& c = std::get<CompositeSpec>(lp.task);
        t["kind"] = "composite";
        t["tau"] = c.null_control.tau;
        t["s"] = c.null_control.s;
        t["u0_tilde"] = coeff_to_json(c.null_control.u0_tilde);
        t["uT"] = state_to_json(c.transfer.uT);
        t["gevrey_alpha"] = c.null_control.gevrey_alpha;
        t["gevrey_gamma"] = c.transfer.gevrey_gamma;
    }
    j["task"] = std::move(t);
    return j.dump(2);
}

}  // namespace paraflat
