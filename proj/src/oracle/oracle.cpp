#include "ebeq/oracle/oracle.hpp"

#include "ebeq/core/errors.hpp"
#include "ebeq/equivalence/derivation.hpp"
#include "ebeq/symmetry/symmetry.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace ebeq::oracle {

using transform::EbEquation;
using transform::EbForm;
using transform::PointTransformation;

SceneEvaluator::SceneEvaluator(const NumericScene& scene) : scene_(scene) {}

void SceneEvaluator::override_param(const std::string& name, const Q& value)
{
    overrides_[name] = value;
}

double SceneEvaluator::param(const Sym& s) const
{
    auto o = overrides_.find(s.name());
    if (o != overrides_.end()) return o->second.get_d();
    auto it = scene_.params.find(s.name());
    if (it == scene_.params.end()) throw UnboundSymbol("parameter " + s.name() + " has no value in scene " + scene_.label);
    return it->second.get_d();
}

const Expr& SceneEvaluator::w_jet(const MultiIndex& k)
{
    auto it = w_jets_.find(k);
    if (it == w_jets_.end()) it = w_jets_.emplace(k, total_derivative(scene_.w, target_chart(), k)).first;
    return it->second;
}

const Expr& SceneEvaluator::body_derivative(const FuncSym& fn)
{
    auto it = bodies_.find(fn);
    if (it != bodies_.end()) return it->second;
    const bool generalized = scene_.eq.flavor == transform::Flavor::Generalized;
    const auto& body = fn.name == "f" ? scene_.eq.f_body : scene_.eq.m_body;
    if (!body || fn.arity() != (generalized ? 2 : 1))
        throw UnboundSymbol("function " + fn.name + " has no numeric binding in scene " + scene_.label);
    std::vector<Sym> formals;
    if (generalized) formals.push_back(Sym::indep("t"));
    formals.push_back(Sym::indep("x"));
    Expr d = *body;
    for (std::size_t i = 0; i < formals.size(); ++i) {
        for (int n = 0; n < fn.deriv[i]; ++n) d = partial_derivative(d, formals[i]);
    }
    return bodies_.emplace(fn, d).first->second;
}

double SceneEvaluator::operator()(const Expr& e, const Point& p)
{
    const bool generalized = scene_.eq.flavor == transform::Flavor::Generalized;
    canon::FunctionValues functions = [&](const FuncSym& fn, const std::vector<double>& args) -> std::optional<double> {
        if (fn.name != "f" && fn.name != "m") return std::nullopt;
        const Expr& d = body_derivative(fn);
        canon::SymbolValues at_args = [&](const Sym& s) -> double {
            if (s.kind() == SymKind::IndepVar) {
                if (s.name() == "x") return args.back();
                if (s.name() == "t" && generalized) return args.front();
                throw UnboundSymbol("variable " + s.name() + " in the body of " + fn.name);
            }
            if (s.kind() == SymKind::Param) return param(s);
            throw UnboundSymbol(s.str() + " in the body of " + fn.name);
        };
        return evaluate(d, at_args);
    };
    canon::SymbolValues values = [&](const Sym& s) -> double {
        switch (s.kind()) {
        case SymKind::IndepVar:
            if (s.name() == "y") return p[0];
            if (s.name() == "z") return p[1];
            break;
        case SymKind::Param: return param(s);
        case SymKind::Jet:
            if (s.name() == "w" && s.chart() == target_chart()) {
                canon::SymbolValues at_point = [&](const Sym& v) -> double {
                    if (v.kind() == SymKind::IndepVar && v.name() == "y") return p[0];
                    if (v.kind() == SymKind::IndepVar && v.name() == "z") return p[1];
                    if (v.kind() == SymKind::Param) return param(v);
                    throw UnboundSymbol(v.str() + " in the test function of scene " + scene_.label);
                };
                return evaluate(w_jet(s.index()), at_point);
            }
            break;
        default: break;
        }
        throw UnboundSymbol(s.str() + " has no value in scene " + scene_.label);
    };
    return evaluate(e, values, functions);
}

double eval(const Expr& e, const NumericScene& scene, const Point& p)
{
    SceneEvaluator ev(scene);
    return ev(e, p);
}

std::vector<Margin> chart_margins(const PointTransformation& T)
{
    std::vector<Margin> out;
    if (contains(T.S, Sym::param("k4")) || contains(T.L, Sym::param("k4")))
        out.push_back({"1 + k4*z", Expr(1) + param("k4") * var("z"), 0.1});
    if (contains(T.R, Sym::param("k7"))) out.push_back({"1 + k7*y", Expr(1) + param("k7") * var("y"), 0.1});
    const Expr Sz = normalize(total_derivative(T.S, "z"));
    out.push_back({"S_z", Sz, 1e-3});
    out.push_back({"jacobian", normalize(total_derivative(T.R, "y") * Sz - total_derivative(T.R, "z") *
                                                                               total_derivative(T.S, "y")),
                   1e-3});
    return out;
}

void check_margins(const std::vector<Margin>& margins, const NumericScene& scene, const Point& p)
{
    SceneEvaluator ev(scene);
    for (const auto& m : margins) {
        const double v = ev(m.value, p);
        if (!(std::abs(v) > m.threshold)) {
            std::ostringstream os;
            os << m.label << " = " << v << " at (" << p[0] << ", " << p[1] << ") is inside the margin " << m.threshold;
            throw SingularPoint(os.str());
        }
    }
}

Expr pulled_back_residual(const EbEquation& eq, const PointTransformation& T, const AssumptionSet& as)
{
    const Expr U = normalize(T.L * jet(transform::w_function()) + T.J, as);
    auto ops = jets::solve_operator_system(T.R, T.S, target_chart(), as);
    const Expr fxx = normalize(eq.f_at(T.R, T.S) * jets::power(ops.d_x, U, 2, as), as);
    return normalize(jets::power(ops.d_x, fxx, 2, as) + eq.m_at(T.R, T.S) * jets::power(ops.d_t, U, 2, as), as);
}

Expr eb_form_residual(const EbForm& claim, const AssumptionSet& as)
{
    const auto& w = transform::w_function();
    const Expr bending = total_derivative(claim.F * jet(w, {0, 2}), target_chart(), {0, 2}, as);
    return normalize(claim.mu * (bending + claim.M * jet(w, {2, 0})), as);
}

namespace {

double discrepancy(double a, double b, double clamp)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), clamp});
}

}  // namespace

ConsistencyReport compare_residuals(const Expr& lhs, const Expr& rhs, const std::vector<NumericScene>& scenes,
                                    const std::map<std::string, Q>& rhs_scale)
{
    ConsistencyReport r;
    double tol = 0.0;
    for (const auto& scene : scenes) {
        SceneEvaluator a(scene), b(scene);
        for (const auto& [name, factor] : rhs_scale) {
            auto it = scene.params.find(name);
            if (it != scene.params.end()) b.override_param(name, it->second * factor);
        }
        tol = std::max(tol, scene.tolerance);
        for (const auto& p : scene.samples) {
            const double d = discrepancy(a(lhs, p), b(rhs, p), scene.clamp);
            ++r.samples;
            if (!(d <= r.max_discrepancy)) {
                r.max_discrepancy = std::isnan(d) ? INFINITY : d;
                r.worst_scene = scene.label;
                r.worst_point = p;
            }
        }
    }
    r.passed = r.samples > 0 && r.max_discrepancy < tol;
    return r;
}

ConsistencyReport residual_consistency(const EbEquation& eq, const PointTransformation& T, const EbForm& claim,
                                       const std::vector<NumericScene>& scenes,
                                       const std::map<std::string, Q>& claim_scale, const AssumptionSet& as)
{
    return compare_residuals(pulled_back_residual(eq, T, as), eb_form_residual(claim, as), scenes, claim_scale);
}

FdReport fd_crosscheck(const Expr& e, const NumericScene& scene, const std::string& dir, const Point& p, double h,
                       const AssumptionSet& as)
{
    const int axis = target_chart().position(dir);
    if (axis < 0) throw std::invalid_argument("direction must be y or z");
    SceneEvaluator ev(scene);
    auto at = [&](double offset) {
        Point q = p;
        q[axis] += offset;
        return ev(e, q);
    };
    auto central = [&](double step) { return (at(step) - at(-step)) / (2.0 * step); };
    // Two Richardson levels on the central difference: errors O(h^2) -> O(h^4) -> O(h^6).
    const double d1 = central(h), d2 = central(h / 2), d3 = central(h / 4);
    const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
    FdReport out;
    out.numeric = (16.0 * r2 - r1) / 15.0;
    out.symbolic = ev(total_derivative(e, dir, as), p);
    out.rel_error = discrepancy(out.symbolic, out.numeric, 1e-12);
    out.passed = out.rel_error < 1e-6;
    return out;
}

double probe_coefficient(const Expr& pulled_back, const MultiIndex& K, const NumericScene& scene, const Point& p)
{
    NumericScene probe = scene;
    Q fact(1);
    for (int i = 2; i <= K[0]; ++i) fact *= i;
    for (int i = 2; i <= K[1]; ++i) fact *= i;
    const Q y0(p[0]), z0(p[1]);
    probe.w = pow(var("y") - Expr(y0), Frac(K[0])) * pow(var("z") - Expr(z0), Frac(K[1])) / Expr(fact);
    return eval(pulled_back, probe, p);
}

Witness witness(int theorem, const AssumptionSet& as)
{
    Witness wt;
    const Expr f = call("f", {var("z")}), m = call("m", {var("z")});
    switch (theorem) {
    case 0:
        wt.name = "identity";
        wt.eq = EbEquation::classic();
        wt.T = {var("y"), var("z"), Expr(1), Expr(0)};
        wt.claim = {f, m, Expr(1)};
        break;
    case 1: {
        wt.name = "theorem 1";
        wt.eq = EbEquation::classic();
        wt.T = equiv::theorem1_chart({}, equiv::compute_J({}, true));
        auto eb = match_eb_form(transform_pde(wt.eq, wt.T, as), as);
        if (!eb) throw std::logic_error("the Theorem 1 chart did not give an EB form");
        wt.claim = *eb;
        wt.params = {"k0", "k1", "k2", "k3", "k4", "k5", "k6", "k8", "k9", "k10"};
        break;
    }
    case 2: {
        wt.name = "theorem 2";
        wt.eq = EbEquation::generalized();
        wt.T = equiv::moebius_chart({}, equiv::compute_J({}, false));
        auto eb = match_eb_form(transform_pde(wt.eq, wt.T, as), as);
        if (!eb) throw std::logic_error("the y-Moebius chart did not give an EB form");
        wt.claim = *eb;
        wt.params = {"k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "k9", "k10", "k11"};
        break;
    }
    case 3: {
        wt.name = "theorem 3";
        wt.eq = EbEquation::classic();
        wt.T = symmetry::finite_symmetry(symmetry::SymmetryParams::symbolic());
        wt.claim = {f, m, param("p5")};
        wt.params = {"p1", "p2", "p3", "p4", "p5", "p6"};
        break;
    }
    default: throw std::invalid_argument("theorem must be 0 to 3");
    }
    wt.margins = chart_margins(wt.T);
    return wt;
}

namespace {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    /// n / den with n uniform in [lo * den, hi * den].
    Q rational(double lo, double hi, int den = 8)
    {
        std::uniform_int_distribution<long> d(std::lround(lo * den), std::lround(hi * den));
        return Q(d(rng_), den);
    }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

private:
    std::mt19937_64 rng_;
};

Q value_or(const std::map<std::string, Q>& p, const char* name, const Q& fallback)
{
    auto it = p.find(name);
    return it == p.end() ? fallback : it->second;
}

bool admissible(const std::map<std::string, Q>& p)
{
    const Q A = value_or(p, "k2", Q(1)) - value_or(p, "k3", Q(0)) * value_or(p, "k4", Q(0));
    const Q B = value_or(p, "k5", Q(1)) - value_or(p, "k6", Q(0)) * value_or(p, "k7", Q(0));
    if (A < Q(1, 4) || B < Q(1, 4)) return false;
    if (value_or(p, "k1", Q(1)) <= 0 || value_or(p, "k5", Q(1)) < Q(1, 4)) return false;
    for (const char* k : {"k4", "k7", "p5"}) {
        if (p.count(k) && abs(p.at(k)) < Q(1, 8)) return false;
    }
    return true;
}

Expr coefficient_body(Draw& d, bool generalized)
{
    const Expr x = var("x"), t = var("t");
    const Expr a(d.rational(1, 2)), b(d.rational(0.125, 0.5)), c(d.rational(0.25, 1));
    switch (d.pick(3)) {
    case 0: return generalized ? a + b * x * x + c * t * t / Expr(4) : a + b * x * x;
    case 1: return generalized ? a + b * call("sin", {c * x + t}) : a + b * call("sin", {c * x});
    default: return generalized ? a * call("exp", {c * x / Expr(2) - b * t}) : a * call("exp", {c * x / Expr(2)});
    }
}

}  // namespace

std::vector<NumericScene> random_scenes(const Witness& wt, int count, std::uint64_t seed, int samples_per_scene)
{
    Draw d(seed);
    const bool generalized = wt.eq.flavor == transform::Flavor::Generalized;
    std::vector<NumericScene> out;
    int attempts = 0;
    while (static_cast<int>(out.size()) < count) {
        if (++attempts > 100 * count) throw std::runtime_error("could not draw admissible scenes for " + wt.name);
        NumericScene s;
        s.label = wt.name + " #" + std::to_string(out.size());
        for (const auto& name : wt.params) {
            do s.params[name] = d.rational(-1.5, 1.5);
            while (s.params[name] == 0);
        }
        if (s.params.count("k1")) s.params["k1"] = d.rational(0.25, 2);
        if (s.params.count("k5")) s.params["k5"] = d.rational(0.25, 2);
        if (!admissible(s.params)) continue;
        s.eq = generalized ? EbEquation::generalized() : EbEquation::classic();
        s.eq.f_body = coefficient_body(d, generalized);
        s.eq.m_body = coefficient_body(d, generalized);
        const Expr y = var("y"), z = var("z");
        s.w = call("sin", {Expr(d.rational(0.5, 1.5)) * y + Expr(d.rational(-1, 1))}) *
                  call("cosh", {Expr(d.rational(0.25, 1)) * z}) +
              Expr(d.rational(-1, 1)) * y * y * z;
        int tries = 0;
        while (static_cast<int>(s.samples.size()) < samples_per_scene && ++tries < 200) {
            Point p{d.uniform(-1, 1), d.uniform(-1, 1)};
            try {
                check_margins(wt.margins, s, p);
                s.samples.push_back(p);
            } catch (const SingularPoint&) {
            }
        }
        if (static_cast<int>(s.samples.size()) < samples_per_scene) continue;
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace ebeq::oracle
