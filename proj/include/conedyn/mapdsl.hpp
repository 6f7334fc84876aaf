#pragma once

#include "conedyn/errors.hpp"
#include "conedyn/point.hpp"
#include "conedyn/scalar.hpp"

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace conedyn {

// Coordinatewise min-max expressions with positive coefficients and
// nonnegative constants. Every expression of this class is order preserving
// and subhomogeneous on the standard cone; with all constants zero it is
// homogeneous.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct VarNode {
    std::size_t index;  // one-based
    Rational coeff;     // > 0
    double coeff_f;
};

struct ConstNode {
    Rational value;  // >= 0
    double value_f;
};

struct MinNode {
    std::vector<ExprPtr> children;
};

struct MaxNode {
    std::vector<ExprPtr> children;
};

struct AddNode {
    ExprPtr expr;
    Rational offset;  // >= 0
    double offset_f;
};

struct Expr {
    std::variant<VarNode, ConstNode, MinNode, MaxNode, AddNode> node;
    SourceLocation loc;
};

// Builders enforce the grammar invariants and throw SemanticError.
ExprPtr make_var(std::size_t index, Rational coeff = 1, SourceLocation loc = {});
ExprPtr make_const(Rational value, SourceLocation loc = {});
ExprPtr make_min(std::vector<ExprPtr> children, SourceLocation loc = {});
ExprPtr make_max(std::vector<ExprPtr> children, SourceLocation loc = {});
ExprPtr make_add(ExprPtr expr, Rational offset, SourceLocation loc = {});

// Rewrites variable z_j as coeff * x_{target[j-1]}.
ExprPtr substitute_vars(const ExprPtr& e, const std::vector<std::size_t>& target);

std::size_t max_var_index(const ExprPtr& e);
bool is_homogeneous(const ExprPtr& e);
// True when e is built from Min/Max over bare variables (coefficient 1, no constants).
bool is_pure_min_max(const ExprPtr& e);

template <class T>
T eval_expr(const Expr& e, const Point<T>& x);

std::string print_expr(const ExprPtr& e);

class MinMaxMap {
public:
    MinMaxMap() = default;
    // Throws SemanticError if a component refers to a variable beyond n.
    explicit MinMaxMap(std::vector<ExprPtr> components);

    std::size_t dim() const noexcept { return components_.size(); }
    std::size_t dim_in() const noexcept { return dim(); }
    std::size_t dim_out() const noexcept { return dim(); }
    const std::vector<ExprPtr>& components() const noexcept { return components_; }
    const ExprPtr& component(std::size_t i) const { return components_.at(i); }
    bool homogeneous() const;

    // Requires x.dim() == dim() and x >= 0 coordinatewise.
    template <class T>
    Point<T> operator()(const Point<T>& x) const;

private:
    std::vector<ExprPtr> components_;
};

template <class T>
Point<T> eval(const MinMaxMap& map, const Point<T>& x)
{
    return map(x);
}

// Map file grammar (one component per line, '#' starts a comment):
//   line  := "f" INDEX "=" expr
//   expr  := term ( "\/" term )*          max
//   term  := atom ( "/\" atom )*          min, binds tighter
//   atom  := [COEFF "*"] VAR ["+" CONST] | CONST | "(" expr ")"
MinMaxMap parse_map(std::string_view text);
MinMaxMap load_map(const std::string& path);
std::string print_map(const MinMaxMap& map);

template <class T>
using MapFn = std::function<Point<T>(const Point<T>&)>;

template <class T>
MapFn<T> as_map_fn(MinMaxMap map)
{
    return [m = std::move(map)](const Point<T>& x) { return m(x); };
}

} // namespace conedyn
