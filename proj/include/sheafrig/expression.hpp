#pragma once

#include "sheafrig/smooth_map.hpp"

#include <string>
#include <vector>

namespace sheafrig {

// Scalar expression in named variables: + - * / ^, unary minus, parentheses,
// sin cos tan exp log sqrt sinh cosh tanh, and the constant pi.
class Expression {
public:
    static Expression parse(const std::string& text, const std::vector<std::string>& variables);

    double eval(const Vec& z) const;
    // forward-mode derivatives, one pass per variable
    Vec gradient(const Vec& z) const;

    const std::string& text() const { return text_; }
    int arity() const { return arity_; }

    struct Node {
        enum Kind { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind = Num;
        double value = 0.0;
        int index = 0;  // variable index or function id
        int a = -1, b = -1;
    };

private:
    std::string text_;
    int arity_ = 0;
    std::vector<Node> nodes_;
    int root_ = -1;

    template <class T>
    T run(int node, const std::vector<T>& vars) const;
};

// x1..xn, xi1..xin; for n = 1 also x, xi
std::vector<std::string> phase_space_variables(int n);

}  // namespace sheafrig
