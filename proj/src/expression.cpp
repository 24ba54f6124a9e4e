#include "sheafrig/expression.hpp"

#include "sheafrig/error.hpp"

#include <boost/math/differentiation/autodiff.hpp>
#include <boost/spirit/home/x3.hpp>

#include <cmath>
#include <functional>
#include <numbers>

namespace sheafrig {

namespace {

namespace x3 = boost::spirit::x3;

const char* const kFunctions[] = {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "tanh"};

struct Builder {
    std::vector<Expression::Node> nodes;
    std::vector<int> stack;
    std::vector<std::string> names;  // identifiers awaiting call-or-variable
    const std::vector<std::string>* variables = nullptr;
    std::string error;

    int add(Expression::Node node)
    {
        nodes.push_back(node);
        stack.push_back(static_cast<int>(nodes.size()) - 1);
        return stack.back();
    }
    int pop()
    {
        const int top = stack.back();
        stack.pop_back();
        return top;
    }
};

struct builder_tag;

template <class Ctx>
Builder& builder(Ctx& ctx)
{
    return x3::get<builder_tag>(ctx).get();
}

template <Expression::Node::Kind K>
struct binary {
    template <class Ctx>
    void operator()(Ctx& ctx) const
    {
        Builder& b = builder(ctx);
        Expression::Node node;
        node.kind = K;
        node.b = b.pop();
        node.a = b.pop();
        b.add(node);
    }
};

auto const on_number = [](auto& ctx) {
    Expression::Node node;
    node.kind = Expression::Node::Num;
    node.value = x3::_attr(ctx);
    builder(ctx).add(node);
};

auto const on_negate = [](auto& ctx) {
    Builder& b = builder(ctx);
    Expression::Node node;
    node.kind = Expression::Node::Neg;
    node.a = b.pop();
    b.add(node);
};

auto const on_name = [](auto& ctx) { builder(ctx).names.push_back(x3::_attr(ctx)); };

auto const on_call = [](auto& ctx) {
    Builder& b = builder(ctx);
    const std::string name = b.names.back();
    Expression::Node node;
    node.kind = Expression::Node::Call;
    node.index = -1;
    for (int i = 0; i < static_cast<int>(std::size(kFunctions)); ++i)
        if (name == kFunctions[i])
            node.index = i;
    if (node.index < 0) {
        // leave the name for the variable branch, which fails too
        b.error = "unknown function '" + name + "'";
        x3::_pass(ctx) = false;
        return;
    }
    b.names.pop_back();
    node.a = b.pop();
    b.add(node);
};

auto const on_variable = [](auto& ctx) {
    Builder& b = builder(ctx);
    if (b.names.empty()) {
        x3::_pass(ctx) = false;
        return;
    }
    const std::string name = b.names.back();
    b.names.pop_back();
    Expression::Node node;
    if (name == "pi") {
        node.kind = Expression::Node::Num;
        node.value = std::numbers::pi;
        b.add(node);
        return;
    }
    const auto& vars = *b.variables;
    // x and xi stand for x1 and xi1 when there is a single degree of freedom
    const bool alias = vars.size() == 2 && (name == "x" || name == "xi");
    for (int i = 0; i < static_cast<int>(vars.size()); ++i)
        if (vars[i] == name || (alias && vars[i] == name + "1")) {
            node.kind = Expression::Node::Var;
            node.index = i;
            b.add(node);
            return;
        }
    if (b.error.empty())
        b.error = "unknown variable '" + name + "'";
    x3::_pass(ctx) = false;
};

x3::rule<class expr_r> const expr = "expr";
x3::rule<class term_r> const term = "term";
x3::rule<class unary_r> const unary = "unary";
x3::rule<class power_r> const power = "power";
x3::rule<class primary_r> const primary = "primary";
x3::rule<class ident_r, std::string> const ident = "ident";

auto const ident_def = x3::lexeme[x3::alpha >> *(x3::alnum | x3::char_('_'))];
auto const expr_def = term >> *((x3::lit('+') >> term)[binary<Expression::Node::Add>{}] |
                                (x3::lit('-') >> term)[binary<Expression::Node::Sub>{}]);
auto const term_def = unary >> *((x3::lit('*') >> unary)[binary<Expression::Node::Mul>{}] |
                                 (x3::lit('/') >> unary)[binary<Expression::Node::Div>{}]);
auto const unary_def = (x3::lit('-') >> unary)[on_negate] | (x3::lit('+') >> unary) | power;
auto const power_def = primary >> -((x3::lit('^') >> unary)[binary<Expression::Node::Pow>{}]);
auto const primary_def = (ident[on_name] >> ((x3::lit('(') >> expr >> x3::lit(')'))[on_call] | x3::eps[on_variable])) |
                         x3::double_[on_number] | (x3::lit('(') >> expr >> x3::lit(')'));

BOOST_SPIRIT_DEFINE(expr, term, unary, power, primary, ident)

template <class T>
T apply_function(int id, const T& v)
{
    using std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt, std::tan, std::tanh;
    switch (id) {
    case 0: return sin(v);
    case 1: return cos(v);
    case 2: return tan(v);
    case 3: return exp(v);
    case 4: return log(v);
    case 5: return sqrt(v);
    case 6: return sinh(v);
    case 7: return cosh(v);
    default: return tanh(v);
    }
}

}  // namespace

Expression Expression::parse(const std::string& text, const std::vector<std::string>& variables)
{
    Builder b;
    b.variables = &variables;
    auto first = text.begin();
    const bool ok = x3::phrase_parse(first, text.end(), x3::with<builder_tag>(std::ref(b))[expr], x3::space);
    if (!ok || first != text.end() || b.stack.size() != 1) {
        std::string why = b.error.empty() ? "syntax error near '" + std::string(first, text.end()) + "'" : b.error;
        throw Error(ErrorCode::InvalidConfig, "cannot parse expression '" + text + "': " + why);
    }
    Expression e;
    e.text_ = text;
    e.arity_ = static_cast<int>(variables.size());
    e.nodes_ = std::move(b.nodes);
    e.root_ = b.stack.back();
    return e;
}

template <class T>
T Expression::run(int i, const std::vector<T>& vars) const
{
    using std::pow;
    const Node& nd = nodes_[i];
    switch (nd.kind) {
    case Node::Num: return T(nd.value);
    case Node::Var: return vars[nd.index];
    case Node::Neg: return -run(nd.a, vars);
    case Node::Add: return run(nd.a, vars) + run(nd.b, vars);
    case Node::Sub: return run(nd.a, vars) - run(nd.b, vars);
    case Node::Mul: return run(nd.a, vars) * run(nd.b, vars);
    case Node::Div: return run(nd.a, vars) / run(nd.b, vars);
    case Node::Pow: {
        // integer exponents stay defined for negative bases
        const Node& ex = nodes_[nd.b];
        if (ex.kind == Node::Num && ex.value == std::round(ex.value) && std::abs(ex.value) <= 64) {
            const T base = run(nd.a, vars);
            T acc(1.0);
            for (int k = 0; k < std::abs(static_cast<int>(ex.value)); ++k)
                acc = acc * base;
            return ex.value < 0 ? T(1.0) / acc : acc;
        }
        return pow(run(nd.a, vars), run(nd.b, vars));
    }
    case Node::Call: return apply_function(nd.index, run(nd.a, vars));
    }
    return T(0.0);
}

double Expression::eval(const Vec& z) const
{
    if (z.size() != arity_)
        throw Error(ErrorCode::DimensionMismatch, "expression expects " + std::to_string(arity_) + " variables");
    std::vector<double> v(z.data(), z.data() + z.size());
    return run(root_, v);
}

Vec Expression::gradient(const Vec& z) const
{
    namespace ad = boost::math::differentiation;
    using F = ad::autodiff_fvar<double, 1>;
    if (z.size() != arity_)
        throw Error(ErrorCode::DimensionMismatch, "expression expects " + std::to_string(arity_) + " variables");
    Vec g(arity_);
    std::vector<F> v(arity_);
    for (int i = 0; i < arity_; ++i) {
        for (int j = 0; j < arity_; ++j)
            v[j] = j == i ? ad::make_fvar<double, 1>(z[j]) : F(z[j]);
        g[i] = run(root_, v).derivative(1);
    }
    return g;
}

std::vector<std::string> phase_space_variables(int n)
{
    std::vector<std::string> v;
    for (int i = 1; i <= n; ++i)
        v.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        v.push_back("xi" + std::to_string(i));
    return v;
}

}  // namespace sheafrig
