#pragma once

// Scalar expression language for the conformal factor sigma(x) and the
// temporal metric h11(t).
//
// Grammar (precedence high to low, left-associative within a level):
//   ^ (constant integer/rational exponent) > unary - > * / > + -
//   atoms: decimal literals, declared variables, sin cos exp log sqrt,
//          parenthesized expressions.
//
// Parsed expressions are immutable; evaluation is pure.  Derivatives come
// from one forward pass on Dual2 operands and are exact up to rounding.

#include <cctype>
#include <charconv>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "core.hpp"
#include "dual.hpp"

namespace jetbm {

struct EvalResult {
  double value = 0.0;
  Vec gradient;  // over the requested variables, in request order
  Mat hessian;   // symmetric
};

namespace ast {

enum class Kind { constant, variable, negate, add, sub, mul, div, power, call };
enum class Fn { sin, cos, exp, log, sqrt };

struct Node {
  Kind kind;
  double value = 0.0;     // constant
  int var = -1;           // variable slot
  Fn fn = Fn::sin;        // call
  double exponent = 0.0;  // power (constant-folded at parse time)
  std::unique_ptr<Node> a, b;
};

using NodePtr = std::unique_ptr<Node>;

inline NodePtr make_constant(double v) {
  auto n = std::make_unique<Node>();
  n->kind = Kind::constant;
  n->value = v;
  return n;
}

inline NodePtr clone(const Node& n) {
  auto c = std::make_unique<Node>();
  c->kind = n.kind;
  c->value = n.value;
  c->var = n.var;
  c->fn = n.fn;
  c->exponent = n.exponent;
  if (n.a) c->a = clone(*n.a);
  if (n.b) c->b = clone(*n.b);
  return c;
}

// Checked scalar operations shared by the double and Dual2 evaluation paths,
// so both raise the same DomainErrors.
inline double ev_div(double a, double b) {
  if (b == 0.0) throw DomainError("division by zero");
  return a / b;
}
inline Dual2 ev_div(const Dual2& a, const Dual2& b) { return a / b; }

inline double ev_log(double u) {
  if (u <= 0.0) throw DomainError("log of a non-positive argument");
  return std::log(u);
}
inline Dual2 ev_log(const Dual2& u) { return log(u); }

inline double ev_sqrt(double u) {
  if (u < 0.0) throw DomainError("sqrt of a negative argument");
  return std::sqrt(u);
}
inline Dual2 ev_sqrt(const Dual2& u) { return sqrt(u); }

inline double ev_pow(double u, double p) {
  double f = std::pow(u, p);
  if (!std::isfinite(f)) throw DomainError("power outside domain");
  return f;
}
inline Dual2 ev_pow(const Dual2& u, double p) { return pow_const(u, p); }

inline double ev_sin(double u) { return std::sin(u); }
inline double ev_cos(double u) { return std::cos(u); }
inline double ev_exp(double u) { return std::exp(u); }
inline Dual2 ev_sin(const Dual2& u) { return sin(u); }
inline Dual2 ev_cos(const Dual2& u) { return cos(u); }
inline Dual2 ev_exp(const Dual2& u) { return exp(u); }

template <class T>
T evaluate(const Node& n, const std::vector<T>& vars) {
  switch (n.kind) {
    case Kind::constant:
      if constexpr (std::is_same_v<T, double>) return n.value;
      else return T(n.value, vars.empty() ? 0 : vars.front().vars());
    case Kind::variable:
      return vars[std::size_t(n.var)];
    case Kind::negate:
      return -evaluate(*n.a, vars);
    case Kind::add:
      return evaluate(*n.a, vars) + evaluate(*n.b, vars);
    case Kind::sub:
      return evaluate(*n.a, vars) - evaluate(*n.b, vars);
    case Kind::mul:
      return evaluate(*n.a, vars) * evaluate(*n.b, vars);
    case Kind::div:
      return ev_div(evaluate(*n.a, vars), evaluate(*n.b, vars));
    case Kind::power:
      return ev_pow(evaluate(*n.a, vars), n.exponent);
    case Kind::call: {
      T u = evaluate(*n.a, vars);
      switch (n.fn) {
        case Fn::sin: return ev_sin(u);
        case Fn::cos: return ev_cos(u);
        case Fn::exp: return ev_exp(u);
        case Fn::log: return ev_log(u);
        case Fn::sqrt: return ev_sqrt(u);
      }
      break;
    }
  }
  throw std::logic_error("corrupt expression node");
}

inline bool depends_on_variables(const Node& n) {
  if (n.kind == Kind::variable) return true;
  if (n.a && depends_on_variables(*n.a)) return true;
  if (n.b && depends_on_variables(*n.b)) return true;
  return false;
}

inline const char* fn_name(Fn f) {
  switch (f) {
    case Fn::sin: return "sin";
    case Fn::cos: return "cos";
    case Fn::exp: return "exp";
    case Fn::log: return "log";
    case Fn::sqrt: return "sqrt";
  }
  return "?";
}

inline std::string print_number(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

// Fully parenthesized canonical form; re-parsing it recovers an
// evaluation-equivalent tree.
inline void print(const Node& n, const std::vector<std::string>& names,
                  std::string& out) {
  switch (n.kind) {
    case Kind::constant:
      if (n.value < 0.0) {
        out += '(';
        out += print_number(n.value);
        out += ')';
      } else {
        out += print_number(n.value);
      }
      return;
    case Kind::variable:
      out += names[std::size_t(n.var)];
      return;
    case Kind::negate:
      out += "(-";
      print(*n.a, names, out);
      out += ')';
      return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: {
      const char op = n.kind == Kind::add ? '+'
                      : n.kind == Kind::sub ? '-'
                      : n.kind == Kind::mul ? '*' : '/';
      out += '(';
      print(*n.a, names, out);
      out += op;
      print(*n.b, names, out);
      out += ')';
      return;
    }
    case Kind::power:
      out += '(';
      print(*n.a, names, out);
      out += '^';
      if (n.exponent < 0.0) {
        out += '(';
        out += print_number(n.exponent);
        out += ')';
      } else {
        out += print_number(n.exponent);
      }
      out += ')';
      return;
    case Kind::call:
      out += fn_name(n.fn);
      out += '(';
      print(*n.a, names, out);
      out += ')';
      return;
  }
}

}  // namespace ast

class Expression;
namespace detail {
ast::NodePtr parse_source(std::string_view src,
                          const std::vector<std::string>& variables);
}

class Expression {
 public:
  // Parses `source` over the declared variable set.  Throws ParseError with
  // the byte offset of the failure; unknown identifiers are reported by name.
  static Expression parse(std::string_view source,
                          std::vector<std::string> variables) {
    if (source.empty()) throw ParseError("empty expression", 0);
    Expression e;
    e.names_ = std::move(variables);
    e.root_ = detail::parse_source(source, e.names_);
    return e;
  }

  const std::vector<std::string>& variables() const { return names_; }

  bool is_constant() const { return !ast::depends_on_variables(*root_); }

  // Value at a point, variables bound positionally (declared order).
  double operator()(const Vec& values) const {
    if (values.size() != names_.size())
      throw DomainError("binding count does not match declared variables");
    return ast::evaluate<double>(*root_, values);
  }

  // Value, gradient and Hessian with respect to `wrt` (indices into the
  // declared variable list); all declared variables must be bound.
  EvalResult derivatives_at(const Vec& values,
                            const std::vector<int>& wrt) const {
    if (values.size() != names_.size())
      throw DomainError("binding count does not match declared variables");
    const int m = int(wrt.size());
    std::vector<Dual2> seeded;
    seeded.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) seeded.emplace_back(values[i], m);
    for (int s = 0; s < m; ++s)
      seeded[std::size_t(wrt[std::size_t(s)])] =
          Dual2::variable(values[std::size_t(wrt[std::size_t(s)])], m, s);
    Dual2 out = ast::evaluate<Dual2>(*root_, seeded);
    EvalResult r;
    r.value = out.value();
    r.gradient.resize(std::size_t(m));
    r.hessian = Mat(m);
    for (int i = 0; i < m; ++i) {
      r.gradient[std::size_t(i)] = out.grad(i);
      for (int j = 0; j < m; ++j) r.hessian(i, j) = out.hess(i, j);
    }
    return r;
  }

  // Map-based convenience form: bindings by name, derivative variables by name.
  EvalResult derivatives(const std::map<std::string, double>& bindings,
                         const std::vector<std::string>& wrt) const {
    Vec values(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
      auto it = bindings.find(names_[i]);
      if (it == bindings.end())
        throw DomainError("unbound variable: " + names_[i]);
      values[i] = it->second;
    }
    std::vector<int> idx;
    for (const auto& name : wrt) idx.push_back(index_of(name));
    return derivatives_at(values, idx);
  }

  // Canonical printed form.
  std::string str() const {
    std::string out;
    ast::print(*root_, names_, out);
    return out;
  }

  Expression(const Expression& o) : names_(o.names_), root_(ast::clone(*o.root_)) {}
  Expression& operator=(const Expression& o) {
    names_ = o.names_;
    root_ = ast::clone(*o.root_);
    return *this;
  }
  Expression(Expression&&) = default;
  Expression& operator=(Expression&&) = default;

  const ast::Node& root() const { return *root_; }

  // Rebuilds the tree with each variable v replaced by (v - shift)/scale,
  // then applies `outer_scale` and `outer_shift` to the whole expression:
  //     result = outer_scale * e((v - shift)/scale) + outer_shift.
  // This is exactly the family of rewrites the diagonal jet chart changes
  // need, and it stays inside the grammar.
  Expression affine_pullback(const Vec& scale, const Vec& shift,
                             double outer_scale, double outer_shift) const {
    Expression out(*this);
    out.root_ = rewrite(*root_, scale, shift);
    if (outer_scale != 1.0) {
      auto mul = std::make_unique<ast::Node>();
      mul->kind = ast::Kind::mul;
      mul->a = ast::make_constant(outer_scale);
      mul->b = std::move(out.root_);
      out.root_ = std::move(mul);
    }
    if (outer_shift != 0.0) {
      auto add = std::make_unique<ast::Node>();
      add->kind = ast::Kind::add;
      add->a = std::move(out.root_);
      add->b = ast::make_constant(outer_shift);
      out.root_ = std::move(add);
    }
    return out;
  }

 private:
  Expression() = default;

  int index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return int(i);
    throw DomainError("unknown variable: " + name);
  }

  static ast::NodePtr rewrite(const ast::Node& n, const Vec& scale,
                              const Vec& shift) {
    if (n.kind == ast::Kind::variable) {
      ast::NodePtr v = ast::clone(n);
      const double sh = shift[std::size_t(n.var)];
      const double sc = scale[std::size_t(n.var)];
      if (sh != 0.0) {
        auto sub = std::make_unique<ast::Node>();
        sub->kind = ast::Kind::sub;
        sub->a = std::move(v);
        sub->b = ast::make_constant(sh);
        v = std::move(sub);
      }
      if (sc != 1.0) {
        auto div = std::make_unique<ast::Node>();
        div->kind = ast::Kind::div;
        div->a = std::move(v);
        div->b = ast::make_constant(sc);
        v = std::move(div);
      }
      return v;
    }
    ast::NodePtr c = ast::clone(n);
    if (n.a) c->a = rewrite(*n.a, scale, shift);
    if (n.b) c->b = rewrite(*n.b, scale, shift);
    return c;
  }

  std::vector<std::string> names_;
  ast::NodePtr root_;
};

namespace detail {

struct Token {
  enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };
  Kind kind;
  std::size_t offset;
  double value = 0.0;   // number
  std::string text;     // ident
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t start = i;
      while (i < src.size() && (std::isdigit(static_cast<unsigned char>(src[i])) ||
                                src[i] == '.'))
        ++i;
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          ++j;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
          i = j;
        }
      }
      double v = 0.0;
      auto res = std::from_chars(src.data() + start, src.data() + i, v);
      if (res.ec != std::errc() || res.ptr != src.data() + i)
        throw ParseError("malformed number", start);
      out.push_back({Token::number, start, v, {}});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) ||
                                src[i] == '_'))
        ++i;
      out.push_back({Token::ident, start, 0.0,
                     std::string(src.substr(start, i - start))});
      continue;
    }
    Token::Kind k;
    switch (c) {
      case '+': k = Token::plus; break;
      case '-': k = Token::minus; break;
      case '*': k = Token::star; break;
      case '/': k = Token::slash; break;
      case '^': k = Token::caret; break;
      case '(': k = Token::lparen; break;
      case ')': k = Token::rparen; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    out.push_back({k, i, 0.0, {}});
    ++i;
  }
  out.push_back({Token::end, src.size(), 0.0, {}});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& variables)
      : toks_(std::move(tokens)), vars_(variables) {}

  ast::NodePtr run() {
    ast::NodePtr e = parse_sum();
    if (peek().kind != Token::end)
      throw ParseError("unexpected trailing input", peek().offset);
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& advance() { return toks_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind == k) { ++pos_; return true; }
    return false;
  }

  ast::NodePtr parse_sum() {
    ast::NodePtr lhs = parse_product();
    while (peek().kind == Token::plus || peek().kind == Token::minus) {
      const bool add = advance().kind == Token::plus;
      auto n = std::make_unique<ast::Node>();
      n->kind = add ? ast::Kind::add : ast::Kind::sub;
      n->a = std::move(lhs);
      n->b = parse_product();
      lhs = std::move(n);
    }
    return lhs;
  }

  ast::NodePtr parse_product() {
    ast::NodePtr lhs = parse_unary();
    while (peek().kind == Token::star || peek().kind == Token::slash) {
      const bool mul = advance().kind == Token::star;
      auto n = std::make_unique<ast::Node>();
      n->kind = mul ? ast::Kind::mul : ast::Kind::div;
      n->a = std::move(lhs);
      n->b = parse_unary();
      lhs = std::move(n);
    }
    return lhs;
  }

  ast::NodePtr parse_unary() {
    if (accept(Token::minus)) {
      auto n = std::make_unique<ast::Node>();
      n->kind = ast::Kind::negate;
      n->a = parse_unary();
      return n;
    }
    return parse_power();
  }

  ast::NodePtr parse_power() {
    ast::NodePtr lhs = parse_atom();
    while (peek().kind == Token::caret) {
      const std::size_t caret_off = advance().offset;
      bool negated = accept(Token::minus);
      ast::NodePtr rhs = parse_atom();
      if (ast::depends_on_variables(*rhs))
        throw ParseError("exponent must be a constant", caret_off);
      double p = ast::evaluate<double>(*rhs, {});
      if (negated) p = -p;
      auto n = std::make_unique<ast::Node>();
      n->kind = ast::Kind::power;
      n->a = std::move(lhs);
      n->exponent = p;
      lhs = std::move(n);
    }
    return lhs;
  }

  ast::NodePtr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::number: {
        advance();
        return ast::make_constant(t.value);
      }
      case Token::ident: {
        advance();
        if (peek().kind == Token::lparen) {
          ast::Fn fn;
          if (t.text == "sin") fn = ast::Fn::sin;
          else if (t.text == "cos") fn = ast::Fn::cos;
          else if (t.text == "exp") fn = ast::Fn::exp;
          else if (t.text == "log") fn = ast::Fn::log;
          else if (t.text == "sqrt") fn = ast::Fn::sqrt;
          else throw ParseError("unknown function '" + t.text + "'", t.offset);
          advance();  // '('
          auto n = std::make_unique<ast::Node>();
          n->kind = ast::Kind::call;
          n->fn = fn;
          n->a = parse_sum();
          if (!accept(Token::rparen))
            throw ParseError("expected ')'", peek().offset);
          return n;
        }
        for (std::size_t v = 0; v < vars_.size(); ++v) {
          if (vars_[v] == t.text) {
            auto n = std::make_unique<ast::Node>();
            n->kind = ast::Kind::variable;
            n->var = int(v);
            return n;
          }
        }
        throw ParseError("unknown identifier '" + t.text + "'", t.offset);
      }
      case Token::lparen: {
        advance();
        ast::NodePtr e = parse_sum();
        if (!accept(Token::rparen))
          throw ParseError("expected ')'", peek().offset);
        return e;
      }
      default:
        throw ParseError("expected an operand", t.offset);
    }
  }

  std::vector<Token> toks_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

inline ast::NodePtr parse_source(std::string_view src,
                                 const std::vector<std::string>& variables) {
  return Parser(tokenize(src), variables).run();
}

}  // namespace detail

}  // namespace jetbm
