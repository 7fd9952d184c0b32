#include "ebeq/cli/cli.hpp"

#include "ebeq/core/errors.hpp"
#include "ebeq/equivalence/derivation.hpp"
#include "ebeq/equivalence/group.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/io/print.hpp"
#include "ebeq/oracle/oracle.hpp"
#include "ebeq/symmetry/symmetry.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace ebeq::cli {

using Json = nlohmann::ordered_json;
using equiv::Step;
using equiv::Verdict;
using transform::EbEquation;
using transform::PointTransformation;

std::vector<std::pair<std::string, std::string>> read_parameter_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open parameter file " + path);
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(path + ":" + std::to_string(lineno) + ": expected name = value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return out;
}

namespace {

struct Options {
    std::string format = "pretty";
    std::vector<std::string> sets;
    std::string params_file;
    std::vector<std::string> assume;
    bool strict = false;
    std::string flavor = "classic";
    std::string step;
    std::string chart;
    int theorem = 1;
    int scenes = 20;
    std::uint64_t seed = 7;
    std::string f_body;
    std::string m_body;
};

std::string show(const Expr& e)
{
    return print(e);
}

std::string show_factored(const Expr& e, const AssumptionSet& as)
{
    return print(factored(to_form(e, as)));
}

int exit_for(Verdict v)
{
    switch (v) {
    case Verdict::Verified: return Verified;
    case Verdict::Refuted: return Refuted;
    case Verdict::AssumptionBlocked: return AssumptionBlocked;
    }
    return Refuted;
}

Verdict combine(Verdict a, Verdict b)
{
    if (a == Verdict::AssumptionBlocked || b == Verdict::AssumptionBlocked) return Verdict::AssumptionBlocked;
    if (a == Verdict::Refuted || b == Verdict::Refuted) return Verdict::Refuted;
    return Verdict::Verified;
}

std::vector<std::pair<std::string, std::string>> split_assignments(const std::string& text)
{
    std::vector<std::pair<std::string, std::string>> out;
    int depth = 0;
    std::string cur;
    auto flush = [&] {
        auto eq = cur.find('=');
        if (eq == std::string::npos) throw ParseError("expected name=value in \"" + cur + "\"");
        std::string name = cur.substr(0, eq);
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        out.emplace_back(name, cur.substr(eq + 1));
        cur.clear();
    };
    for (char c : text) {
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            flush();
            continue;
        }
        cur += c;
    }
    if (!cur.empty()) flush();
    return out;
}

equiv::ParamValues parameter_values(const Options& o)
{
    equiv::ParamValues v;
    if (!o.params_file.empty()) {
        for (const auto& [name, text] : read_parameter_file(o.params_file)) v[name] = normalize(parse(text));
    }
    for (const auto& s : o.sets) {
        for (const auto& [name, text] : split_assignments(s)) v[name] = normalize(parse(text));
    }
    return v;
}

AssumptionSet command_assumptions(const Options& o)
{
    AssumptionSet as = equiv::derivation_assumptions(o.strict ? AssumptionSet::strict() : AssumptionSet());
    for (const auto& a : o.assume) {
        const auto f = to_form(parse(a), as);
        as.assume_nonzero(f);
        if (o.strict) as.assume_positive(f);
    }
    return as;
}

Json step_json(const Step& s, const AssumptionSet& as)
{
    Json j;
    j["name"] = s.name;
    j["what"] = s.what;
    j["verdict"] = equiv::to_string(s.verdict);
    j["constraint"] = show(s.derived);
    j["reference"] = show(s.reference);
    j["factor"] = s.factor ? Json(show_factored(*s.factor, as)) : Json(nullptr);
    j["solved_form"] = s.solved_form;
    j["solution_checked"] = s.solution_checked;
    j["notes"] = s.notes;
    return j;
}

void pretty_step(std::ostream& out, const Json& s)
{
    out << std::left << std::setw(8) << s["name"].get<std::string>() << " " << s["verdict"].get<std::string>() << "  "
        << s["what"].get<std::string>() << "\n";
    if (!s["constraint"].get<std::string>().empty()) out << "  constraint: " << s["constraint"].get<std::string>() << "\n";
    if (!s["reference"].get<std::string>().empty()) out << "  reference:  " << s["reference"].get<std::string>() << "\n";
    if (!s["factor"].is_null()) out << "  factor:     " << s["factor"].get<std::string>() << "\n";
    if (!s["solved_form"].get<std::string>().empty()) out << "  solved:     " << s["solved_form"].get<std::string>() << "\n";
    for (const auto& n : s["notes"]) out << "  note: " << n.get<std::string>() << "\n";
}

void emit(std::ostream& out, const Options& o, const Json& report)
{
    if (o.format == "structured") {
        out << report.dump(2) << "\n";
        return;
    }
    out << report["command"].get<std::string>();
    if (report.contains("subject")) out << " " << report["subject"].get<std::string>();
    out << ": " << report["verdict"].get<std::string>() << "\n";
    if (report.contains("steps")) {
        for (const auto& s : report["steps"]) pretty_step(out, s);
    }
    for (const auto& [key, value] : report.items()) {
        if (key == "command" || key == "subject" || key == "verdict" || key == "steps") continue;
        if (value.is_object()) {
            out << key << ":\n";
            for (const auto& [k2, v2] : value.items()) out << "  " << k2 << ": " << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << "\n";
        } else if (value.is_array()) {
            out << key << ":\n";
            for (const auto& v2 : value) out << "  " << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << "\n";
        } else {
            out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
        }
    }
}

// -- derive -------------------------------------------------------------------

Expr coefficient_of(const transform::LinearPde& pde, MultiIndex k)
{
    auto it = pde.coeffs.find(k);
    return it == pde.coeffs.end() ? Expr(0) : it->second;
}

PointTransformation parse_chart(const std::string& text)
{
    PointTransformation T{var("y"), var("z"), Expr(1), Expr(0)};
    for (const auto& [name, value] : split_assignments(text)) {
        const Expr e = parse(value);
        if (name == "R") T.R = e;
        else if (name == "S") T.S = e;
        else if (name == "L") T.L = e;
        else if (name == "J") T.J = e;
        else throw ParseError("chart component must be R, S, L or J, got " + name);
    }
    return T;
}

Json derive_on_chart(const Options& o, const AssumptionSet& as)
{
    const auto T = parse_chart(o.chart);
    auto pde = transform_pde(EbEquation::classic(), T, as);
    Expr value;
    if (o.step == "gamma1") value = coefficient_of(pde, {4, 0});
    else if (o.step == "wy") value = coefficient_of(pde, {1, 0});
    else if (o.step == "gamma3") value = coefficient_of(pde, {0, 0});
    else if (o.step == "delta1" || o.step == "fS") {
        auto c = collect_applications(coefficient_of(pde, {0, 1}), "f", as);
        const std::vector<int> tag{o.step == "delta1" ? 2 : 1};
        value = c.coeffs.count(tag) ? c.coeffs.at(tag) : Expr(0);
    } else {
        throw ParseError("unknown step " + o.step);
    }
    Json r;
    r["command"] = "derive";
    r["subject"] = o.step;
    r["verdict"] = "verified";
    r["chart"] = {{"R", show(T.R)}, {"S", show(T.S)}, {"L", show(T.L)}, {"J", show(T.J)}};
    r["value"] = show(value);
    r["value_factored"] = show_factored(value, as);
    return r;
}

int cmd_derive(const Options& o, std::ostream& out)
{
    const AssumptionSet as = command_assumptions(o);
    if (!o.chart.empty()) {
        if (o.step.empty()) throw ParseError("--chart needs --step");
        emit(out, o, derive_on_chart(o, as));
        return Verified;
    }
    std::vector<Step> steps;
    if (!o.step.empty()) {
        if (o.step == "gamma1") steps.push_back(equiv::step_gamma1(as));
        else if (o.step == "wy") steps.push_back(equiv::step_wy_condition(as));
        else if (o.step == "delta1") steps.push_back(equiv::step_delta1(as));
        else if (o.step == "fS") steps.push_back(equiv::step_fS_condition(as));
        else if (o.step == "gamma3") steps.push_back(equiv::step_gamma3(as));
        else throw ParseError("unknown step " + o.step + " (gamma1, wy, delta1, fS, gamma3)");
    } else {
        steps = equiv::derive_classic(as).steps;
        if (o.flavor == "generalized") {
            for (auto& s : equiv::verify_theorem2_generalized(as).steps) steps.push_back(std::move(s));
        } else if (o.flavor != "classic") {
            throw ParseError("flavor must be classic or generalized");
        }
    }
    Verdict v = Verdict::Verified;
    Json r;
    r["command"] = "derive";
    r["subject"] = o.step.empty() ? o.flavor : o.step;
    Json js = Json::array();
    for (const auto& s : steps) {
        v = combine(v, s.verdict);
        js.push_back(step_json(s, as));
    }
    r["verdict"] = equiv::to_string(v);
    r["steps"] = js;
    emit(out, o, r);
    return exit_for(v);
}

// -- numeric witnesses ----------------------------------------------------------

std::map<std::string, Q> constant_values(const equiv::ParamValues& values)
{
    std::map<std::string, Q> out;
    for (const auto& [name, e] : values) {
        if (auto c = canon::constant_value(to_form(e))) out[name] = *c;
    }
    return out;
}

Json numeric_witness(int theorem, const Options& o, const equiv::ParamValues& values, bool& passed)
{
    auto wt = oracle::witness(theorem);
    auto scenes = oracle::random_scenes(wt, o.scenes, o.seed);
    const auto fixed = constant_values(values);
    if (!fixed.empty()) {
        std::vector<oracle::NumericScene> kept;
        for (auto& s : scenes) {
            for (const auto& [name, q] : fixed) {
                if (s.params.count(name)) s.params[name] = q;
            }
            std::vector<oracle::Point> ok;
            for (const auto& p : s.samples) {
                try {
                    oracle::check_margins(wt.margins, s, p);
                    ok.push_back(p);
                } catch (const SingularPoint&) {
                }
            }
            s.samples = ok;
            if (!s.samples.empty()) kept.push_back(std::move(s));
        }
        scenes = std::move(kept);
    }
    Json j;
    j["scenes"] = scenes.size();
    j["seed"] = o.seed;
    try {
        auto r = oracle::residual_consistency(wt.eq, wt.T, wt.claim, scenes);
        auto bad = wt.claim;
        bad.F = bad.F * (Expr(1) + var("z"));
        auto control = oracle::residual_consistency(wt.eq, wt.T, bad, scenes);
        std::ostringstream md, cd;
        md << std::setprecision(3) << r.max_discrepancy;
        cd << std::setprecision(3) << control.max_discrepancy;
        j["samples"] = r.samples;
        j["max_discrepancy"] = md.str();
        j["tolerance"] = "1e-06";
        j["corrupted_F_discrepancy"] = cd.str();
        const bool control_detected = control.max_discrepancy > 1e-3;
        passed = r.passed && control_detected;
        if (!r.passed) {
            std::ostringstream pt;
            pt << "(" << r.worst_point[0] << ", " << r.worst_point[1] << ")";
            j["counterexample"] = {{"scene", r.worst_scene}, {"point", pt.str()}};
        }
    } catch (const DomainError& e) {
        passed = false;
        j["error"] = e.what();
    }
    return j;
}

// -- verify ---------------------------------------------------------------------

bool has_nonzero(const equiv::ParamValues& v, const std::string& name)
{
    auto it = v.find(name);
    return it != v.end() && !is_zero(it->second);
}

int cmd_verify(const Options& o, std::ostream& out)
{
    const auto values = parameter_values(o);
    const AssumptionSet as = command_assumptions(o);
    Json r;
    r["command"] = "verify";
    r["subject"] = "theorem " + std::to_string(o.theorem);
    Verdict v = Verdict::Verified;
    bool numeric_ok = true;

    if (o.theorem == 1) {
        if (has_nonzero(values, "k7")) {
            auto obs = equiv::k7_obstruction(values, as);
            Json w;
            if (obs.eb) {
                w["F"] = show_factored(obs.eb->F, as);
                w["M"] = show_factored(obs.eb->M, as);
                if (obs.M_depends_on_y) w["dM/dy"] = show_factored(normalize(total_derivative(obs.eb->M, "y", as), as), as);
                if (obs.F_depends_on_y) w["dF/dy"] = show_factored(normalize(total_derivative(obs.eb->F, "y", as), as), as);
            }
            r["verdict"] = "refuted";
            r["y_dependence"] = w;
            emit(out, o, r);
            return Refuted;
        }
        auto t1 = equiv::assemble_theorem1(values, EbEquation::classic(), as);
        Json s;
        if (t1.eb) {
            s["F"] = show_factored(t1.eb->F, as);
            s["M"] = show_factored(t1.eb->M, as);
            s["mu"] = show_factored(t1.eb->mu, as);
        }
        s["J"] = show(t1.T.J);
        s["y_free"] = t1.y_free;
        s["published_F"] = show_factored(t1.published_F, as);
        s["published_M"] = show_factored(t1.published_M, as);
        if (t1.F_ratio) s["F/published_F"] = show_factored(*t1.F_ratio, as);
        if (t1.M_ratio) s["M/published_M"] = show_factored(*t1.M_ratio, as);
        s["published_pair_consistent"] = t1.published_pair_consistent;
        if (!t1.eb || !t1.y_free) v = Verdict::Refuted;
        r["symbolic"] = s;
        r["numeric"] = numeric_witness(1, o, values, numeric_ok);
    } else if (o.theorem == 2) {
        auto tr = equiv::verify_theorem2_generalized(as);
        Json js = Json::array();
        for (const auto& st : tr.steps) js.push_back(step_json(st, as));
        v = tr.verdict();
        r["steps"] = js;
        r["numeric"] = numeric_witness(2, o, values, numeric_ok);
    } else if (o.theorem == 3) {
        const auto eq = EbEquation::classic();
        const auto p = symmetry::SymmetryParams::symbolic();
        Json s;
        const bool inf = symmetry::check_infinitesimal_symmetry(symmetry::generator(p), eq);
        const bool j3 = symmetry::verify_J3_solution(eq);
        auto eb = match_eb_form(transform_pde(eq, symmetry::finite_symmetry(p)));
        const bool fixes = eb && equivalent(eb->F, parse("f(z)")) && equivalent(eb->M, parse("m(z)"));
        symmetry::SymmetryParams q;
        for (int i = 1; i <= 6; ++i) q[i] = param("q" + std::to_string(i));
        const bool law = equiv::same_chart(
            equiv::compose_charts(symmetry::finite_symmetry(p), symmetry::finite_symmetry(q)),
            symmetry::finite_symmetry(symmetry::compose(p, q)));
        const bool sup = symmetry::check_superposition(eq).holds;
        s["generator"] = show(symmetry::generator(p).phi);
        s["infinitesimal_invariance"] = inf;
        s["fundamental_solution_residual_zero"] = j3;
        s["finite_map_fixes_f_m"] = fixes;
        if (eb) s["mu"] = show(eb->mu);
        s["group_law"] = law;
        s["superposition"] = sup;
        if (!(inf && j3 && fixes && law && sup)) v = Verdict::Refuted;
        r["symbolic"] = s;
        r["numeric"] = numeric_witness(3, o, values, numeric_ok);
    } else {
        throw ParseError("--theorem must be 1, 2 or 3");
    }
    if (!numeric_ok) v = combine(v, Verdict::Refuted);
    r["verdict"] = equiv::to_string(v);
    Json ordered;
    ordered["command"] = r["command"];
    ordered["subject"] = r["subject"];
    ordered["verdict"] = r["verdict"];
    for (const auto& [k, val] : r.items()) {
        if (!ordered.contains(k)) ordered[k] = val;
    }
    emit(out, o, ordered);
    return exit_for(v);
}

// -- transform ------------------------------------------------------------------

int cmd_transform(const Options& o, std::ostream& out)
{
    const auto values = parameter_values(o);
    const AssumptionSet as = command_assumptions(o);
    EbEquation eq = EbEquation::classic();
    if (!o.f_body.empty()) eq.f_body = parse(o.f_body);
    if (!o.m_body.empty()) eq.m_body = parse(o.m_body);
    for (const char* det : {"k2 - k3*k4", "k5"}) {
        Bindings b;
        for (const auto& [name, e] : values) b.bind(Sym::param(name), e);
        if (is_zero(substitute(parse(det), b)))
            throw ebeq::DegenerateChart(std::string(det) + " vanishes: the chart is not invertible");
    }
    Expr J;
    std::string j_source;
    auto k4 = values.find("k4");
    if (k4 != values.end() && is_zero(k4->second)) {
        const auto bare = equiv::theorem1_chart(values, Expr(0));
        J = equiv::solve_J(bare.R, bare.S, eq, as);
        j_source = "re-solved at k4 = 0; c_ij are free constants";
    } else {
        J = equiv::compute_J(values, true);
        j_source = "published family with k0, k8, k9, k10";
    }
    const auto T = equiv::theorem1_chart(values, J);
    auto pde = transform_pde(eq, T, as);
    auto eb = match_eb_form(pde, as);
    Json r;
    r["command"] = "transform";
    r["verdict"] = eb ? "verified" : "refuted";
    r["chart"] = {{"t", show(T.R)}, {"x", show(T.S)}, {"L", show_factored(T.L, as)}};
    r["J"] = show(J);
    r["J_source"] = j_source;
    if (eb) {
        r["F"] = show_factored(eb->F, as);
        r["M"] = show_factored(eb->M, as);
        r["mu"] = show_factored(eb->mu, as);
    }
    Json c;
    for (const auto& [K, e] : pde.coeffs) c[jet(transform::w_function(), K).sym().str()] = show_factored(e, as);
    r["coefficients"] = c;
    r["inhomogeneous"] = show(pde.inhom);
    emit(out, o, r);
    return eb ? Verified : Refuted;
}

// -- oracle ---------------------------------------------------------------------

int cmd_oracle(const Options& o, std::ostream& out)
{
    if (o.theorem < 0 || o.theorem > 3) throw ParseError("--theorem must be 0 to 3 for the oracle");
    auto wt = oracle::witness(o.theorem);
    auto scenes = oracle::random_scenes(wt, o.scenes, o.seed);
    Json r;
    r["command"] = "oracle";
    r["subject"] = wt.name;
    auto fmt = [](double d) {
        std::ostringstream os;
        os << std::setprecision(3) << d;
        return os.str();
    };
    auto main = oracle::residual_consistency(wt.eq, wt.T, wt.claim, scenes);
    bool ok = main.passed;
    Json controls;
    auto bad = wt.claim;
    bad.F = bad.F * (Expr(1) + var("z"));
    auto corrupted = oracle::residual_consistency(wt.eq, wt.T, bad, scenes);
    controls["F*(1+z)"] = fmt(corrupted.max_discrepancy);
    ok = ok && corrupted.max_discrepancy > 1e-3;
    for (const auto& name : wt.params) {
        const Sym k = Sym::param(name);
        if (!contains(wt.claim.F, k) && !contains(wt.claim.M, k) && !contains(wt.claim.mu, k)) continue;
        auto p = oracle::residual_consistency(wt.eq, wt.T, wt.claim, scenes, {{name, Q(11, 10)}});
        controls[name + "*1.1"] = fmt(p.max_discrepancy);
        ok = ok && p.max_discrepancy > 1e-3;
    }
    r["verdict"] = ok ? "verified" : "refuted";
    r["scenes"] = scenes.size();
    r["samples"] = main.samples;
    r["seed"] = o.seed;
    r["max_discrepancy"] = fmt(main.max_discrepancy);
    r["controls"] = controls;
    emit(out, o, r);
    return ok ? Verified : Refuted;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Equivalence transformations of the Euler-Bernoulli beam equation", "ebeq"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "pretty or structured")->check(CLI::IsMember({"pretty", "structured"}));
        sub->add_option("--set", o.sets, "name=value, repeatable");
        sub->add_option("--params", o.params_file, "parameter file with name = value lines");
        sub->add_option("--assume", o.assume, "register an expression as nonzero (positive with --strict)");
        sub->add_flag("--strict", o.strict, "refuse radical rewrites of unregistered radicands");
    };
    auto* derive = app.add_subcommand("derive", "replay the constraint derivation");
    common(derive);
    derive->add_option("--flavor", o.flavor, "classic or generalized")->check(CLI::IsMember({"classic", "generalized"}));
    derive->add_option("--step", o.step, "gamma1, wy, delta1, fS or gamma3");
    derive->add_option("--chart", o.chart, "concrete chart, e.g. \"R=y*z,S=z,L=1\"");
    auto* verify = app.add_subcommand("verify", "verify a theorem symbolically and numerically");
    common(verify);
    verify->add_option("--theorem", o.theorem, "1, 2 or 3");
    verify->add_option("--scenes", o.scenes, "number of numeric scenes");
    verify->add_option("--seed", o.seed, "seed of the scene generator");
    auto* transform = app.add_subcommand("transform", "apply the Theorem 1 chart");
    common(transform);
    transform->add_option("--f", o.f_body, "concrete f(x)");
    transform->add_option("--m", o.m_body, "concrete m(x)");
    auto* oracle_cmd = app.add_subcommand("oracle", "numeric witnesses with negative controls");
    common(oracle_cmd);
    oracle_cmd->add_option("--theorem", o.theorem, "0 (identity), 1, 2 or 3");
    oracle_cmd->add_option("--scenes", o.scenes, "number of numeric scenes");
    oracle_cmd->add_option("--seed", o.seed, "seed of the scene generator");

    std::vector<const char*> argv{"ebeq"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Verified : UsageError;
    }
    try {
        if (*derive) return cmd_derive(o, out);
        if (*verify) return cmd_verify(o, out);
        if (*transform) return cmd_transform(o, out);
        if (*oracle_cmd) return cmd_oracle(o, out);
    } catch (const ebeq::DegenerateChart& e) {
        err << "degenerate chart: " << e.what() << "\n";
        return DegenerateChart;
    } catch (const SingularJacobian& e) {
        err << "degenerate chart: " << e.what() << "\n";
        return DegenerateChart;
    } catch (const AssumptionMissing& e) {
        err << "assumption missing: " << e.what() << "\n";
        return AssumptionBlocked;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return UsageError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return UsageError;
    }
    return UsageError;
}

}  // namespace ebeq::cli
