#include "ebeq/jet/linop.hpp"

#include "ebeq/core/errors.hpp"

#include <stdexcept>

namespace ebeq::jets {

using canon::Form;

LinOp LinOp::direction(const Chart& chart, int pos)
{
    LinOp op;
    op.chart = chart;
    op.coeff[pos] = normalize(Expr(1));
    op.coeff[1 - pos] = normalize(Expr(0));
    return op;
}

OperatorSystem solve_operator_system(const Expr& t_of, const Expr& x_of, const Chart& chart, const AssumptionSet& as)
{
    canon::TotalDerivative d0(chart.first);
    canon::TotalDerivative d1(chart.second);
    const Form t = to_form(t_of, as);
    const Form x = to_form(x_of, as);
    const Form t0 = d0(t);
    const Form t1 = d1(t);
    const Form x0 = d0(x);
    const Form x1 = d1(x);
    const Form jac = canon::sub(canon::mul(t0, x1), canon::mul(t1, x0));
    if (jac.is_zero()) throw SingularJacobian("the chart has identically vanishing Jacobian");
    const Form inv = canon::inv(jac);
    OperatorSystem out;
    out.jacobian = Expr::from_form(jac);
    out.d_t.chart = chart;
    out.d_t.coeff = {Expr::from_form(canon::mul(x1, inv)), Expr::from_form(canon::neg(canon::mul(x0, inv)))};
    out.d_x.chart = chart;
    out.d_x.coeff = {Expr::from_form(canon::neg(canon::mul(t1, inv))), Expr::from_form(canon::mul(t0, inv))};
    return out;
}

namespace {

Form apply_form(const LinOp& op, const Form& f, const AssumptionSet& as)
{
    std::vector<Form> parts;
    for (int pos = 0; pos < 2; ++pos) {
        const Form c = to_form(op.coeff[pos], as);
        if (c.is_zero()) continue;
        canon::TotalDerivative d(op.chart.var(pos));
        parts.push_back(canon::mul(c, d(f)));
    }
    return canon::sum(parts);
}

}  // namespace

Expr apply(const LinOp& op, const Expr& e, const AssumptionSet& as)
{
    return Expr::from_form(apply_form(op, to_form(e, as), as));
}

Expr power(const LinOp& op, const Expr& e, int n, const AssumptionSet& as)
{
    if (n < 1 || n > 4) throw std::invalid_argument("operator powers are supported for 1 <= n <= 4");
    Form f = to_form(e, as);
    for (int i = 0; i < n; ++i) f = apply_form(op, f, as);
    return Expr::from_form(f);
}

}  // namespace ebeq::jets
