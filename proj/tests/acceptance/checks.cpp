#include "checks.hpp"

#include "../unit/generators.hpp"

#include "ebeq/equivalence/derivation.hpp"
#include "ebeq/equivalence/group.hpp"
#include "ebeq/io/parse.hpp"
#include "ebeq/io/print.hpp"
#include "ebeq/oracle/oracle.hpp"
#include "ebeq/symmetry/symmetry.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

namespace ebeq::checks {

using equiv::Verdict;
using transform::EbEquation;
using transform::PointTransformation;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fixed(double v, int digits = 2)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

std::string sci(double v)
{
    std::ostringstream os;
    os << std::setprecision(3) << v;
    return os.str();
}

// Runs one generated case; a thrown error counts as a failure with its message.
template <class F>
void run_case(SuiteResult& r, int i, F&& body)
{
    ++r.cases;
    std::string why;
    try {
        why = body();
    } catch (const std::exception& e) {
        why = std::string("threw: ") + e.what();
    }
    if (why.empty()) return;
    if (r.failures++ == 0) r.first_failure = "case " + std::to_string(i) + ": " + why;
}

const PointTransformation& identity_chart()
{
    static const PointTransformation id{var("y"), var("z"), Expr(1), Expr(0)};
    return id;
}

class ParamDraw {
public:
    explicit ParamDraw(std::uint64_t seed) : rng_(seed) {}

    Expr rational()
    {
        std::uniform_int_distribution<int> num(-5, 5), den(1, 4);
        int n = 0;
        while (n == 0) n = num(rng_);
        return Expr(Q(n, den(rng_)));
    }

    // Real chart: k5 times the Moebius determinant positive. The inverse needs k2 != 0
    // to stay off the chart boundary d = 0.
    equiv::EquivParams params()
    {
        equiv::EquivParams p;
        p.k1 = rational();
        p.k5 = rational();
        p.k6 = rational();
        do {
            p.space = equiv::Moebius{rational(), rational(), rational(), Expr(1)};
        } while (is_zero(p.space.determinant()) || canon::constant_value(to_form(p.space.determinant() * p.k5)) <= Q(0));
        for (auto& c : p.j) c = rational();
        return p;
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace

// -- property suites ----------------------------------------------------------------

SuiteResult parser_roundtrip(int cases, std::uint64_t seed)
{
    SuiteResult r{"parser round-trip"};
    testing::ExprGen gen(seed);
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            const Expr e = gen.expr(3);
            const std::string raw = print(e);
            if (!canon::equal(to_form(parse(raw)), to_form(e))) return "parse(print(e)) differs for " + raw;
            const std::string canonical = print(normalize(e));
            if (print(normalize(parse(canonical))) != canonical) return "canonical print not stable: " + canonical;
            return {};
        });
    }
    return r;
}

SuiteResult normalize_idempotence(int cases, std::uint64_t seed)
{
    SuiteResult r{"normalize idempotence"};
    testing::ExprGen gen(seed);
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            const Expr once = normalize(gen.expr(3));
            const Expr twice = normalize(once);
            if (print(once) != print(twice)) return print(once) + " -> " + print(twice);
            return {};
        });
    }
    return r;
}

SuiteResult leibniz(int cases, std::uint64_t seed)
{
    SuiteResult r{"Leibniz rule"};
    testing::ExprGen gen(seed);
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            const Expr a = gen.expr(2), b = gen.expr(2);
            const std::string dir = i % 2 ? "y" : "z";
            const Expr lhs = total_derivative(a * b, dir);
            const Expr rhs = total_derivative(a, dir) * b + a * total_derivative(b, dir);
            if (!equivalent(lhs, rhs)) return "D_" + dir + " of (" + print(a) + ")*(" + print(b) + ")";
            return {};
        });
    }
    return r;
}

SuiteResult derivative_commutation(int cases, std::uint64_t seed)
{
    SuiteResult r{"D_y D_z commutation"};
    testing::ExprGen gen(seed);
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            const Expr e = gen.expr(3);
            if (!equivalent(total_derivative(total_derivative(e, "y"), "z"),
                            total_derivative(total_derivative(e, "z"), "y")))
                return print(e);
            return {};
        });
    }
    return r;
}

SuiteResult collect_roundtrip(int cases, std::uint64_t seed)
{
    SuiteResult r{"collect/reassemble round-trip"};
    testing::ExprGen gen(seed);
    const auto& w = transform::w_function();
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            std::map<MultiIndex, Expr, GradedLess> coeffs;
            const int n = static_cast<int>(gen.pick(4)) + 1;
            for (int k = 0; k < n; ++k) {
                MultiIndex K{static_cast<int>(gen.pick(5)), static_cast<int>(gen.pick(5))};
                coeffs[K] = coeffs.count(K) ? coeffs[K] + gen.expr(2) : gen.expr(2);
            }
            const Expr rest = gen.expr(2);
            Expr e = rest;
            for (const auto& [K, c] : coeffs) e = e + c * jet(w, K);
            const auto got = collect(e, w);
            Expr back = got.rest;
            for (const auto& [K, c] : got.coeffs) back = back + c * jet(w, K);
            if (!equivalent(back, e)) return "reassembly differs for " + print(e);
            if (!equivalent(got.rest, rest)) return "rest differs for " + print(e);
            for (const auto& [K, c] : coeffs) {
                auto it = got.coeffs.find(K);
                const Expr found = it == got.coeffs.end() ? Expr(0) : it->second;
                if (!equivalent(found, c)) return "coefficient of w_" + std::to_string(K[0]) + std::to_string(K[1]);
            }
            return {};
        });
    }
    return r;
}

SuiteResult finite_differences(int cases, std::uint64_t seed)
{
    SuiteResult r{"finite-difference cross-check"};
    testing::ExprGen gen(seed, false);
    oracle::NumericScene scene;
    scene.label = "fd";
    scene.params = {{"a", Q(3, 4)}, {"b", Q(-2, 5)}};
    scene.w = parse("sin(y)*cosh(z)");
    for (int i = 0; i < cases; ++i) {
        run_case(r, i, [&]() -> std::string {
            const Expr e = gen.expr(2) + gen.expr(1) * jet(transform::w_function(), {static_cast<int>(gen.pick(2)), 0});
            const oracle::Point p{gen.uniform(-1, 1), gen.uniform(-1, 1)};
            const std::string dir = i % 2 ? "y" : "z";
            auto fd = oracle::fd_crosscheck(e, scene, dir, p, 0.02);
            if (!fd.passed)
                return "D_" + dir + " " + print(e) + " symbolic " + sci(fd.symbolic) + " numeric " + sci(fd.numeric);
            return {};
        });
    }
    return r;
}

// -- criteria -------------------------------------------------------------------------

Outcome coefficient_reproduction()
{
    const auto start = Clock::now();
    auto trace = equiv::derive_classic(equiv::derivation_assumptions());
    const double secs = seconds_since(start);
    Outcome o;
    std::string names;
    for (const auto& s : trace.steps) names += " " + s.name + "=" + equiv::to_string(s.verdict);
    o.passed = trace.steps.size() == 5 && trace.verdict() == Verdict::Verified && secs < 60.0;
    o.detail = names.substr(1) + ", " + fixed(secs) + " s (limit 60 s)";
    return o;
}

Outcome theorem1_y_free()
{
    const auto as = equiv::derivation_assumptions();
    auto t1 = equiv::assemble_theorem1({}, EbEquation::classic(), as);
    auto k7 = equiv::k7_obstruction({}, as);
    const bool obstructed = k7.eb && (k7.F_depends_on_y || k7.M_depends_on_y);
    Outcome o;
    o.passed = t1.eb && t1.y_free && obstructed;
    o.detail = std::string("k7 = 0: F, M y-free ") + (t1.eb && t1.y_free ? "yes" : "no") +
               "; symbolic k7: dF/dy " + (k7.F_depends_on_y ? "nonzero" : "zero") + ", dM/dy " +
               (k7.M_depends_on_y ? "nonzero" : "zero");
    return o;
}

Outcome theorem2_trace()
{
    auto tr = equiv::verify_theorem2_generalized(equiv::derivation_assumptions());
    Outcome o;
    std::string names;
    bool r_of_y = false, s_of_z = false, image = false;
    for (const auto& s : tr.steps) {
        names += " " + s.name + "=" + equiv::to_string(s.verdict);
        const bool ok = s.verdict == Verdict::Verified && s.solution_checked;
        if (s.name == "wyyyy") r_of_y = ok && s.solved_form == "R = R(y)";
        if (s.name == "wyz") s_of_z = ok && s.solved_form == "S = S(z)";
        if (s.name == "image") image = ok;
    }
    o.passed = r_of_y && s_of_z && image && tr.verdict() == Verdict::Verified;
    o.detail = names.substr(1);
    return o;
}

Outcome theorem3_symmetries()
{
    const auto eq = EbEquation::classic();
    const auto p = symmetry::SymmetryParams::symbolic();
    const bool invariant = symmetry::check_infinitesimal_symmetry(symmetry::generator(p), eq);
    const bool j3 = symmetry::verify_J3_solution(eq);
    auto eb = match_eb_form(transform_pde(eq, symmetry::finite_symmetry(p)));
    const bool fixes = eb && equivalent(eb->F, parse("f(z)")) && equivalent(eb->M, parse("m(z)")) &&
                       equivalent(eb->mu, param("p5"));
    Outcome o;
    o.passed = invariant && j3 && fixes;
    o.detail = std::string("pr(4) v reduces to 0: ") + (invariant ? "yes" : "no") + "; J3 residual 0: " +
               (j3 ? "yes" : "no") + "; finite map keeps f, m with mu = p5: " + (fixes ? "yes" : "no");
    return o;
}

Outcome moebius_odes()
{
    const JetFunction S{"S", target_chart()}, R{"R", target_chart()};
    Bindings s, r, sq;
    s.bind_function(S, parse("(k2*z + k3)/(k4*z + 1)"));
    r.bind_function(R, parse("(k5*y + k6)/(k7*y + 1)"));
    sq.bind_function(S, parse("z^2"));
    const bool s_ok = is_zero(substitute(parse("3*S_zz^2 - 2*S_z*S_zzz"), s));
    const bool r_ok = is_zero(substitute(parse("3*R_yy^2 - 2*R_y*R_yyy"), r));
    const Expr counter = substitute(parse("3*S_zz^2 - 2*S_z*S_zzz"), sq);
    Outcome o;
    o.passed = s_ok && r_ok && !is_zero(counter);
    o.detail = std::string("S Moebius: ") + (s_ok ? "0" : "nonzero") + "; R Moebius: " + (r_ok ? "0" : "nonzero") +
               "; S = z^2 gives " + print(normalize(counter));
    return o;
}

Outcome numeric_witnesses(int scenes_per_theorem, std::uint64_t seed)
{
    const auto start = Clock::now();
    Outcome o;
    o.passed = true;
    double worst = 0.0, weakest_control = INFINITY;
    std::string weakest;
    for (int th : {1, 2, 3}) {
        auto wt = oracle::witness(th);
        auto scenes = oracle::random_scenes(wt, scenes_per_theorem, seed + static_cast<std::uint64_t>(th));
        if (static_cast<int>(scenes.size()) < scenes_per_theorem) o.passed = false;
        auto r = oracle::residual_consistency(wt.eq, wt.T, wt.claim, scenes);
        worst = std::max(worst, r.max_discrepancy);
        o.passed = o.passed && r.passed && r.max_discrepancy < 1e-6;
        auto control = [&](const std::string& label, double d) {
            if (d < weakest_control) {
                weakest_control = d;
                weakest = wt.name + " " + label;
            }
            o.passed = o.passed && d > 1e-3;
        };
        auto bad = wt.claim;
        bad.F = bad.F * (Expr(1) + var("z") / Expr(2));
        control("F*(1+z/2)", oracle::residual_consistency(wt.eq, wt.T, bad, scenes).max_discrepancy);
        for (const auto& name : wt.params) {
            const Sym k = Sym::param(name);
            if (!contains(wt.claim.F, k) && !contains(wt.claim.M, k) && !contains(wt.claim.mu, k)) continue;
            control(name + "*1.1",
                    oracle::residual_consistency(wt.eq, wt.T, wt.claim, scenes, {{name, Q(11, 10)}}).max_discrepancy);
        }
    }
    const double secs = seconds_since(start);
    o.passed = o.passed && secs < 30.0;
    o.detail = std::to_string(scenes_per_theorem) + " scenes x 3 theorems, max discrepancy " + sci(worst) +
               " (limit 1e-06), weakest control " + weakest + " " + sci(weakest_control) + " (limit 1e-03), " +
               fixed(secs) + " s (limit 30 s)";
    return o;
}

Outcome group_structure(int draws, std::uint64_t seed)
{
    ParamDraw d(seed);
    int done = 0, skipped = 0, failed = 0;
    while (done < draws) {
        auto p = d.params();
        equiv::EquivParams q;
        try {
            q = equiv::inverse(p);
        } catch (const ChartBoundary&) {
            ++skipped;
            continue;
        }
        const bool left = equiv::same_chart(equiv::compose_charts(equiv::chart(p), equiv::chart(q)), identity_chart());
        const bool right = equiv::same_chart(equiv::compose_charts(equiv::chart(q), equiv::chart(p)), identity_chart());
        if (!left || !right) ++failed;
        ++done;
    }
    symmetry::SymmetryParams a = symmetry::SymmetryParams::symbolic(), b;
    for (int i = 1; i <= 6; ++i) b[i] = param("q" + std::to_string(i));
    const bool law = equiv::same_chart(
        equiv::compose_charts(symmetry::finite_symmetry(a), symmetry::finite_symmetry(b)),
        symmetry::finite_symmetry(symmetry::compose(a, b)));
    Outcome o;
    o.passed = failed == 0 && law;
    o.detail = std::to_string(done) + " draws, " + std::to_string(failed) + " round-trip failures, " +
               std::to_string(skipped) + " boundary draws skipped; G_e composition law " + (law ? "holds" : "fails");
    return o;
}

Outcome property_suites(int cases, std::uint64_t seed)
{
    std::vector<SuiteResult> suites{normalize_idempotence(cases, seed),  leibniz(cases, seed + 1),
                                    derivative_commutation(cases, seed + 2), collect_roundtrip(cases, seed + 3),
                                    parser_roundtrip(std::max(cases, 500), seed + 4)};
    Outcome o;
    o.passed = true;
    for (const auto& s : suites) {
        o.passed = o.passed && s.failures == 0 && s.cases >= cases;
        if (!o.detail.empty()) o.detail += ", ";
        o.detail += s.name + " " + std::to_string(s.cases - s.failures) + "/" + std::to_string(s.cases);
        if (s.failures) o.detail += " [" + s.first_failure + "]";
    }
    return o;
}

}  // namespace ebeq::checks
