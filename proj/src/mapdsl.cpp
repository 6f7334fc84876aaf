#include "conedyn/mapdsl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

namespace conedyn {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

ExprPtr wrap(decltype(Expr::node) node, SourceLocation loc)
{
    return std::make_shared<const Expr>(Expr{std::move(node), loc});
}

} // namespace

// ---------------------------------------------------------------- builders

ExprPtr make_var(std::size_t index, Rational coeff, SourceLocation loc)
{
    if (index == 0) throw SemanticError("variable index must be >= 1", loc);
    if (sgn(coeff) <= 0) throw SemanticError("coefficient must be positive, got " + coeff.get_str(), loc);
    double cf = coeff.get_d();
    return wrap(VarNode{index, std::move(coeff), cf}, loc);
}

ExprPtr make_const(Rational value, SourceLocation loc)
{
    if (sgn(value) < 0) throw SemanticError("constant must be nonnegative, got " + value.get_str(), loc);
    double vf = value.get_d();
    return wrap(ConstNode{std::move(value), vf}, loc);
}

ExprPtr make_min(std::vector<ExprPtr> children, SourceLocation loc)
{
    if (children.empty()) throw ContractError("min of no operands");
    if (children.size() == 1) return children.front();
    return wrap(MinNode{std::move(children)}, loc);
}

ExprPtr make_max(std::vector<ExprPtr> children, SourceLocation loc)
{
    if (children.empty()) throw ContractError("max of no operands");
    if (children.size() == 1) return children.front();
    return wrap(MaxNode{std::move(children)}, loc);
}

ExprPtr make_add(ExprPtr expr, Rational offset, SourceLocation loc)
{
    if (sgn(offset) < 0) throw SemanticError("constant must be nonnegative, got " + offset.get_str(), loc);
    double of = offset.get_d();
    return wrap(AddNode{std::move(expr), std::move(offset), of}, loc);
}

ExprPtr substitute_vars(const ExprPtr& e, const std::vector<std::size_t>& target)
{
    return std::visit(
        Overloaded{
            [&](const VarNode& v) -> ExprPtr {
                if (v.index > target.size()) throw ContractError("substitute_vars: variable beyond restriction");
                return make_var(target[v.index - 1], v.coeff, e->loc);
            },
            [&](const ConstNode&) -> ExprPtr { return e; },
            [&](const MinNode& n) -> ExprPtr {
                std::vector<ExprPtr> ch;
                for (const auto& c : n.children) ch.push_back(substitute_vars(c, target));
                return make_min(std::move(ch), e->loc);
            },
            [&](const MaxNode& n) -> ExprPtr {
                std::vector<ExprPtr> ch;
                for (const auto& c : n.children) ch.push_back(substitute_vars(c, target));
                return make_max(std::move(ch), e->loc);
            },
            [&](const AddNode& n) -> ExprPtr { return make_add(substitute_vars(n.expr, target), n.offset, e->loc); },
        },
        e->node);
}

std::size_t max_var_index(const ExprPtr& e)
{
    return std::visit(Overloaded{
                          [](const VarNode& v) { return v.index; },
                          [](const ConstNode&) { return std::size_t{0}; },
                          [](const MinNode& n) {
                              std::size_t m = 0;
                              for (const auto& c : n.children) m = std::max(m, max_var_index(c));
                              return m;
                          },
                          [](const MaxNode& n) {
                              std::size_t m = 0;
                              for (const auto& c : n.children) m = std::max(m, max_var_index(c));
                              return m;
                          },
                          [](const AddNode& n) { return max_var_index(n.expr); },
                      },
                      e->node);
}

bool is_homogeneous(const ExprPtr& e)
{
    return std::visit(Overloaded{
                          [](const VarNode&) { return true; },
                          [](const ConstNode& c) { return sgn(c.value) == 0; },
                          [](const MinNode& n) {
                              return std::all_of(n.children.begin(), n.children.end(), is_homogeneous);
                          },
                          [](const MaxNode& n) {
                              return std::all_of(n.children.begin(), n.children.end(), is_homogeneous);
                          },
                          [](const AddNode& n) { return sgn(n.offset) == 0 && is_homogeneous(n.expr); },
                      },
                      e->node);
}

bool is_pure_min_max(const ExprPtr& e)
{
    return std::visit(Overloaded{
                          [](const VarNode& v) { return v.coeff == 1; },
                          [](const ConstNode&) { return false; },
                          [](const MinNode& n) {
                              return std::all_of(n.children.begin(), n.children.end(), is_pure_min_max);
                          },
                          [](const MaxNode& n) {
                              return std::all_of(n.children.begin(), n.children.end(), is_pure_min_max);
                          },
                          [](const AddNode&) { return false; },
                      },
                      e->node);
}

// ---------------------------------------------------------------- evaluation

template <class T>
T eval_expr(const Expr& e, const Point<T>& x)
{
    return std::visit(Overloaded{
                          [&](const VarNode& v) -> T {
                              if constexpr (ScalarTraits<T>::exact)
                                  return v.coeff == 1 ? x[v.index - 1] : T(v.coeff * x[v.index - 1]);
                              else
                                  return v.coeff_f * x[v.index - 1];
                          },
                          [&](const ConstNode& c) -> T {
                              if constexpr (ScalarTraits<T>::exact)
                                  return c.value;
                              else
                                  return c.value_f;
                          },
                          [&](const MinNode& n) -> T {
                              T best = eval_expr(*n.children.front(), x);
                              for (std::size_t i = 1; i < n.children.size(); ++i) {
                                  T v = eval_expr(*n.children[i], x);
                                  if (v < best) best = std::move(v);
                              }
                              return best;
                          },
                          [&](const MaxNode& n) -> T {
                              T best = eval_expr(*n.children.front(), x);
                              for (std::size_t i = 1; i < n.children.size(); ++i) {
                                  T v = eval_expr(*n.children[i], x);
                                  if (best < v) best = std::move(v);
                              }
                              return best;
                          },
                          [&](const AddNode& n) -> T {
                              if constexpr (ScalarTraits<T>::exact)
                                  return T(eval_expr(*n.expr, x) + n.offset);
                              else
                                  return eval_expr(*n.expr, x) + n.offset_f;
                          },
                      },
                      e.node);
}

template Rational eval_expr<Rational>(const Expr&, const Point<Rational>&);
template double eval_expr<double>(const Expr&, const Point<double>&);

MinMaxMap::MinMaxMap(std::vector<ExprPtr> components) : components_(std::move(components))
{
    const std::size_t n = components_.size();
    if (n == 0) throw ContractError("a map needs at least one component");
    for (const auto& c : components_) {
        if (!c) throw ContractError("null component");
        if (max_var_index(c) > n)
            throw SemanticError("variable x" + std::to_string(max_var_index(c)) + " out of range for a map on R^" +
                                    std::to_string(n),
                                c->loc);
    }
}

bool MinMaxMap::homogeneous() const
{
    return std::all_of(components_.begin(), components_.end(), is_homogeneous);
}

template <class T>
Point<T> MinMaxMap::operator()(const Point<T>& x) const
{
    require_same_dim(x.dim(), dim(), "map evaluation");
    for (std::size_t i = 0; i < x.dim(); ++i)
        if (x[i] < 0)
            throw DomainError("map evaluation: coordinate " + std::to_string(i + 1) + " is negative");
    Point<T> y(dim());
    for (std::size_t i = 0; i < dim(); ++i) y[i] = eval_expr(*components_[i], x);
    return y;
}

template Point<Rational> MinMaxMap::operator()(const Point<Rational>&) const;
template Point<double> MinMaxMap::operator()(const Point<double>&) const;

// ---------------------------------------------------------------- printing

namespace {

// Pushes additive offsets down to the leaves; min and max commute with
// adding a constant, so the result denotes the same function.
ExprPtr push_offsets(const ExprPtr& e, const Rational& pending)
{
    return std::visit(
        Overloaded{
            [&](const VarNode&) -> ExprPtr { return sgn(pending) == 0 ? e : make_add(e, pending, e->loc); },
            [&](const ConstNode& c) -> ExprPtr {
                return sgn(pending) == 0 ? e : make_const(Rational(c.value + pending), e->loc);
            },
            [&](const MinNode& n) -> ExprPtr {
                std::vector<ExprPtr> ch;
                for (const auto& c : n.children) ch.push_back(push_offsets(c, pending));
                return make_min(std::move(ch), e->loc);
            },
            [&](const MaxNode& n) -> ExprPtr {
                std::vector<ExprPtr> ch;
                for (const auto& c : n.children) ch.push_back(push_offsets(c, pending));
                return make_max(std::move(ch), e->loc);
            },
            [&](const AddNode& n) -> ExprPtr { return push_offsets(n.expr, Rational(pending + n.offset)); },
        },
        e->node);
}

std::string print_var(const VarNode& v)
{
    std::string s = "x" + std::to_string(v.index);
    return v.coeff == 1 ? s : v.coeff.get_str() + "*" + s;
}

std::string print_normalized(const ExprPtr& e)
{
    auto child = [](const ExprPtr& c) {
        bool composite = std::holds_alternative<MinNode>(c->node) || std::holds_alternative<MaxNode>(c->node);
        return composite ? "(" + print_normalized(c) + ")" : print_normalized(c);
    };
    return std::visit(Overloaded{
                          [](const VarNode& v) { return print_var(v); },
                          [](const ConstNode& c) { return c.value.get_str(); },
                          [&](const MinNode& n) {
                              std::string s;
                              for (std::size_t i = 0; i < n.children.size(); ++i)
                                  s += (i ? " /\\ " : "") + child(n.children[i]);
                              return s;
                          },
                          [&](const MaxNode& n) {
                              std::string s;
                              for (std::size_t i = 0; i < n.children.size(); ++i)
                                  s += (i ? " \\/ " : "") + child(n.children[i]);
                              return s;
                          },
                          [](const AddNode& n) {
                              // after push_offsets an AddNode always wraps a variable
                              return print_var(std::get<VarNode>(n.expr->node)) + " + " + n.offset.get_str();
                          },
                      },
                      e->node);
}

} // namespace

std::string print_expr(const ExprPtr& e) { return print_normalized(push_offsets(e, Rational(0))); }

std::string print_map(const MinMaxMap& map)
{
    std::string out;
    for (std::size_t i = 0; i < map.dim(); ++i)
        out += "f" + std::to_string(i + 1) + " = " + print_expr(map.component(i)) + "\n";
    return out;
}

// ---------------------------------------------------------------- parsing

namespace {

enum class Tok { Ident, Number, Slash, Star, Plus, Minus, Eq, LParen, RParen, MinOp, MaxOp, End };

struct Token {
    Tok kind;
    std::string text;
    SourceLocation loc;
};

std::vector<Token> lex_line(std::string_view line, std::size_t line_no)
{
    std::vector<Token> toks;
    std::size_t i = 0;
    auto at = [&](std::size_t col) { return SourceLocation{line_no, col + 1}; };
    while (i < line.size()) {
        char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (c == '#') break;
        std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
            toks.push_back({Tok::Number, std::string(line.substr(start, i - start)), at(start)});
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            while (i < line.size() && std::isalnum(static_cast<unsigned char>(line[i]))) ++i;
            toks.push_back({Tok::Ident, std::string(line.substr(start, i - start)), at(start)});
            continue;
        }
        if (c == '/' && i + 1 < line.size() && line[i + 1] == '\\') {
            toks.push_back({Tok::MinOp, "/\\", at(start)});
            i += 2;
            continue;
        }
        if (c == '\\') {
            if (i + 1 < line.size() && line[i + 1] == '/') {
                toks.push_back({Tok::MaxOp, "\\/", at(start)});
                i += 2;
                continue;
            }
            throw ParseError("stray '\\' (did you mean '\\/')", at(start));
        }
        Tok kind;
        switch (c) {
        case '/': kind = Tok::Slash; break;
        case '*': kind = Tok::Star; break;
        case '+': kind = Tok::Plus; break;
        case '-': kind = Tok::Minus; break;
        case '=': kind = Tok::Eq; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        default: throw ParseError(std::string("unexpected character '") + c + "'", at(start));
        }
        toks.push_back({kind, std::string(1, c), at(start)});
        ++i;
    }
    toks.push_back({Tok::End, "", at(line.size())});
    return toks;
}

std::optional<std::size_t> indexed_name(const std::string& ident, char prefix)
{
    if (ident.size() < 2 || ident[0] != prefix) return std::nullopt;
    for (std::size_t i = 1; i < ident.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(ident[i]))) return std::nullopt;
    return std::stoul(ident.substr(1));
}

class LineParser {
public:
    explicit LineParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::pair<std::size_t, ExprPtr> parse_line()
    {
        const Token& head = peek();
        auto idx = head.kind == Tok::Ident ? indexed_name(head.text, 'f') : std::nullopt;
        if (!idx) throw ParseError("expected component name 'f<index>'", head.loc);
        if (*idx == 0) throw SemanticError("component index must be >= 1", head.loc);
        next();
        expect(Tok::Eq, "'='");
        ExprPtr e = parse_expr();
        if (peek().kind != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().loc);
        return {*idx, e};
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    void expect(Tok kind, const char* what)
    {
        if (peek().kind != kind) throw ParseError(std::string("expected ") + what, peek().loc);
        next();
    }

    ExprPtr parse_expr()
    {
        SourceLocation loc = peek().loc;
        std::vector<ExprPtr> terms{parse_term()};
        while (peek().kind == Tok::MaxOp) {
            next();
            terms.push_back(parse_term());
        }
        return make_max(std::move(terms), loc);
    }

    ExprPtr parse_term()
    {
        SourceLocation loc = peek().loc;
        std::vector<ExprPtr> atoms{parse_atom()};
        while (peek().kind == Tok::MinOp) {
            next();
            atoms.push_back(parse_atom());
        }
        return make_min(std::move(atoms), loc);
    }

    // Rational literal, with an optional leading '-' so that the semantic
    // check can report it with its location.
    Rational parse_literal()
    {
        bool negative = false;
        if (peek().kind == Tok::Minus) {
            negative = true;
            next();
        }
        if (peek().kind != Tok::Number) throw ParseError("expected a number", peek().loc);
        std::string text = next().text;
        if (peek().kind == Tok::Slash) {
            next();
            if (peek().kind != Tok::Number) throw ParseError("expected a denominator", peek().loc);
            text += "/" + next().text;
        }
        Rational q = parse_rational(text);
        return negative ? Rational(-q) : q;
    }

    ExprPtr parse_var_tail(Rational coeff, SourceLocation loc)
    {
        const Token& t = peek();
        auto idx = t.kind == Tok::Ident ? indexed_name(t.text, 'x') : std::nullopt;
        if (!idx) throw ParseError("expected a variable 'x<index>'", t.loc);
        if (*idx == 0) throw SemanticError("variable index must be >= 1", t.loc);
        next();
        ExprPtr v = make_var(*idx, std::move(coeff), loc);
        if (peek().kind == Tok::Plus) {
            next();
            SourceLocation cloc = peek().loc;
            Rational c = parse_literal();
            if (sgn(c) < 0) throw SemanticError("constant must be nonnegative, got " + c.get_str(), cloc);
            if (sgn(c) > 0) v = make_add(v, c, cloc);
        }
        return v;
    }

    ExprPtr parse_atom()
    {
        const Token& t = peek();
        SourceLocation loc = t.loc;
        if (t.kind == Tok::LParen) {
            next();
            ExprPtr e = parse_expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        if (t.kind == Tok::Ident) return parse_var_tail(Rational(1), loc);
        if (t.kind == Tok::Number || t.kind == Tok::Minus) {
            Rational q = parse_literal();
            if (peek().kind == Tok::Star) {
                next();
                if (sgn(q) <= 0) throw SemanticError("coefficient must be positive, got " + q.get_str(), loc);
                return parse_var_tail(std::move(q), loc);
            }
            if (sgn(q) < 0) throw SemanticError("constant must be nonnegative, got " + q.get_str(), loc);
            return make_const(std::move(q), loc);
        }
        throw ParseError(t.kind == Tok::End ? "unexpected end of line" : "unexpected '" + t.text + "'", loc);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

} // namespace

MinMaxMap parse_map(std::string_view text)
{
    std::vector<std::pair<std::size_t, ExprPtr>> parsed;
    std::vector<std::size_t> line_of;
    std::size_t line_no = 0;
    std::size_t begin = 0;
    while (begin <= text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(begin, end - begin);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        auto toks = lex_line(line, line_no);
        if (toks.size() > 1) {
            parsed.push_back(LineParser(std::move(toks)).parse_line());
            line_of.push_back(line_no);
        }
        begin = end + 1;
    }
    const std::size_t n = parsed.size();
    if (n == 0) throw ParseError("map has no components", {line_no, 1});
    std::vector<ExprPtr> comps(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto [idx, e] = parsed[k];
        if (idx > n)
            throw SemanticError("component f" + std::to_string(idx) + " out of range for " + std::to_string(n) +
                                    " components",
                                {line_of[k], 1});
        if (comps[idx - 1]) throw SemanticError("duplicate component f" + std::to_string(idx), {line_of[k], 1});
        comps[idx - 1] = e;
    }
    return MinMaxMap(std::move(comps));
}

MinMaxMap load_map(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open map file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_map(buf.str());
}

} // namespace conedyn
