#include "szabo/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace szabo {

namespace {

std::string print_subtree(const Expression::Node* n,
                          const std::vector<std::string>& names);

const Coords kEmptyCoords = std::make_shared<const std::vector<std::string>>();

Expression::NodePtr const_node(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Expression::Op::Const;
  n->value = v;
  return n;
}

Expression::NodePtr var_node(int idx) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Expression::Op::Var;
  n->var = idx;
  return n;
}

Expression::NodePtr unary_node(Expression::Op op, Expression::NodePtr a) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  return n;
}

Expression::NodePtr binary_node(Expression::Op op, Expression::NodePtr a,
                                Expression::NodePtr b) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

Expression::NodePtr pow_node(Expression::NodePtr a, int k) {
  auto n = std::make_shared<Expression::Node>();
  n->op = Expression::Op::Pow;
  n->exponent = k;
  n->a = std::move(a);
  return n;
}

double int_pow(double x, int k) {
  if (k == 0) return 1.0;
  bool inv = k < 0;
  unsigned long long e = inv ? -static_cast<long long>(k) : k;
  double base = x, acc = 1.0;
  while (e) {
    if (e & 1) acc *= base;
    base *= base;
    e >>= 1;
  }
  return inv ? 1.0 / acc : acc;
}

}  // namespace

Coords make_coords(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

Expression::Expression() : root_(const_node(0.0)), coords_(kEmptyCoords) {}

Expression Expression::constant(double v, Coords coords) {
  return Expression(const_node(v), std::move(coords));
}

Expression Expression::variable(int index, Coords coords) {
  if (index < 0 || index >= static_cast<int>(coords->size()))
    throw std::invalid_argument("variable index out of chart range");
  return Expression(var_node(index), std::move(coords));
}

Expression Expression::lifted(Coords larger) const {
  if (larger->size() < coords_->size())
    throw std::invalid_argument("lifted() target chart is smaller");
  return Expression(root_, std::move(larger));
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace {

struct Evaluator {
  const Point& p;
  const Coords& coords;
  Expression::EvalCache* cache;

  double run(const Expression::Node* n) {
    if (cache) {
      auto it = cache->find(n);
      if (it != cache->end()) return it->second;
    }
    double v = compute(n);
    if (!std::isfinite(v)) {
      throw DomainError(print_subtree(n, *coords), p,
                        "non-finite value in sub-expression");
    }
    if (cache) cache->emplace(n, v);
    return v;
  }

  double compute(const Expression::Node* n) {
    using Op = Expression::Op;
    switch (n->op) {
      case Op::Const: return n->value;
      case Op::Var: return p[static_cast<std::size_t>(n->var)];
      case Op::Add: return run(n->a.get()) + run(n->b.get());
      case Op::Sub: return run(n->a.get()) - run(n->b.get());
      case Op::Mul: return run(n->a.get()) * run(n->b.get());
      case Op::Div: return run(n->a.get()) / run(n->b.get());
      case Op::Pow: return int_pow(run(n->a.get()), n->exponent);
      case Op::Neg: return -run(n->a.get());
      case Op::Sin: return std::sin(run(n->a.get()));
      case Op::Cos: return std::cos(run(n->a.get()));
      case Op::Exp: return std::exp(run(n->a.get()));
      case Op::Log: return std::log(run(n->a.get()));
      case Op::Sqrt: return std::sqrt(run(n->a.get()));
    }
    return 0.0;
  }
};

}  // namespace

double Expression::eval(const Point& p) const {
  if (p.size() != coords_->size())
    throw std::invalid_argument("point dimension does not match chart");
  Evaluator ev{p, coords_, nullptr};
  return ev.run(root_.get());
}

double Expression::eval(const Point& p, EvalCache& cache) const {
  if (p.size() != coords_->size())
    throw std::invalid_argument("point dimension does not match chart");
  Evaluator ev{p, coords_, &cache};
  return ev.run(root_.get());
}

// ---------------------------------------------------------------------------
// construction helpers
// ---------------------------------------------------------------------------

namespace {

Coords join_coords(const Expression& a, const Expression& b) {
  if (a.dimension() == b.dimension()) return a.coords();
  if (a.dimension() == 0) return b.coords();
  if (b.dimension() == 0) return a.coords();
  throw std::invalid_argument("expressions live on different charts");
}

}  // namespace

Expression make_unary(Expression::Op op, const Expression& a) {
  return Expression(unary_node(op, a.root()), a.coords());
}

Expression make_binary(Expression::Op op, const Expression& a,
                       const Expression& b) {
  Coords c = join_coords(a, b);
  return Expression(binary_node(op, a.root(), b.root()), std::move(c));
}

Expression operator+(const Expression& a, const Expression& b) {
  return make_binary(Expression::Op::Add, a, b);
}
Expression operator-(const Expression& a, const Expression& b) {
  return make_binary(Expression::Op::Sub, a, b);
}
Expression operator*(const Expression& a, const Expression& b) {
  return make_binary(Expression::Op::Mul, a, b);
}
Expression operator/(const Expression& a, const Expression& b) {
  return make_binary(Expression::Op::Div, a, b);
}
Expression operator-(const Expression& a) {
  return make_unary(Expression::Op::Neg, a);
}
Expression pow_int(const Expression& a, int exponent) {
  return Expression(pow_node(a.root(), exponent), a.coords());
}
Expression sin(const Expression& a) { return make_unary(Expression::Op::Sin, a); }
Expression cos(const Expression& a) { return make_unary(Expression::Op::Cos, a); }
Expression exp(const Expression& a) { return make_unary(Expression::Op::Exp, a); }
Expression log(const Expression& a) { return make_unary(Expression::Op::Log, a); }
Expression sqrt(const Expression& a) { return make_unary(Expression::Op::Sqrt, a); }

Expression Expression::operator*(double k) const {
  return *this * Expression::constant(k, coords_);
}
Expression Expression::operator+(double k) const {
  return *this + Expression::constant(k, coords_);
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

Expression Expression::diff(int var) const {
  if (var < 0 || var >= dimension())
    throw std::invalid_argument("diff variable index out of chart range");
  using Op = Expression::Op;
  const Coords& c = coords_;

  // recursive worker over raw nodes; wraps results back into Expressions
  struct D {
    int var;
    const Coords& c;

    Expression wrap(NodePtr n) const { return Expression(std::move(n), c); }

    Expression operator()(const NodePtr& n) const {
      const D& d = *this;
      switch (n->op) {
        case Op::Const: return wrap(const_node(0.0));
        case Op::Var:
          return wrap(const_node(n->var == var ? 1.0 : 0.0));
        case Op::Add: return d(n->a) + d(n->b);
        case Op::Sub: return d(n->a) - d(n->b);
        case Op::Mul:
          return d(n->a) * wrap(n->b) + wrap(n->a) * d(n->b);
        case Op::Div:
          return (d(n->a) * wrap(n->b) - wrap(n->a) * d(n->b)) /
                 wrap(pow_node(n->b, 2));
        case Op::Pow: {
          if (n->exponent == 0) return wrap(const_node(0.0));
          Expression inner = d(n->a);
          Expression k = wrap(const_node(static_cast<double>(n->exponent)));
          return k * wrap(pow_node(n->a, n->exponent - 1)) * inner;
        }
        case Op::Neg: return -d(n->a);
        case Op::Sin: return wrap(unary_node(Op::Cos, n->a)) * d(n->a);
        case Op::Cos: return -(wrap(unary_node(Op::Sin, n->a)) * d(n->a));
        case Op::Exp: return wrap(unary_node(Op::Exp, n->a)) * d(n->a);
        case Op::Log: return d(n->a) / wrap(n->a);
        case Op::Sqrt:
          return d(n->a) / (wrap(const_node(2.0)) * wrap(unary_node(Op::Sqrt, n->a)));
      }
      return wrap(const_node(0.0));
    }
  };
  return D{var, c}(root_).simplified();
}

// ---------------------------------------------------------------------------
// simplification
// ---------------------------------------------------------------------------

namespace {

using Op = Expression::Op;
using NodePtr = Expression::NodePtr;

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::Const && n->value == v;
}

NodePtr simp(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
    case Op::Var:
      return n;
    default:
      break;
  }

  NodePtr a = n->a ? simp(n->a) : nullptr;
  NodePtr b = n->b ? simp(n->b) : nullptr;

  auto fold1 = [&](double (*f)(double)) -> NodePtr {
    if (a->op == Op::Const) {
      double v = f(a->value);
      if (std::isfinite(v)) return const_node(v);
    }
    return nullptr;
  };

  switch (n->op) {
    case Op::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      if (a->op == Op::Const && b->op == Op::Const) {
        double v = a->value + b->value;
        if (std::isfinite(v)) return const_node(v);
      }
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return simp(unary_node(Op::Neg, b));
      if (a->op == Op::Const && b->op == Op::Const) {
        double v = a->value - b->value;
        if (std::isfinite(v)) return const_node(v);
      }
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return const_node(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      if (a->op == Op::Const && b->op == Op::Const) {
        double v = a->value * b->value;
        if (std::isfinite(v)) return const_node(v);
      }
      break;
    case Op::Div:
      if (is_const(a, 0.0)) return const_node(0.0);
      if (is_const(b, 1.0)) return a;
      if (a->op == Op::Const && b->op == Op::Const && b->value != 0.0) {
        double v = a->value / b->value;
        if (std::isfinite(v)) return const_node(v);
      }
      break;
    case Op::Pow:
      if (n->exponent == 0) return const_node(1.0);
      if (n->exponent == 1) return a;
      if (a->op == Op::Const) {
        double v = int_pow(a->value, n->exponent);
        if (std::isfinite(v)) return const_node(v);
      }
      return pow_node(a, n->exponent);
    case Op::Neg:
      if (a->op == Op::Neg) return a->a;
      if (a->op == Op::Const) return const_node(-a->value);
      break;
    case Op::Sin:
      if (auto f = fold1([](double x) { return std::sin(x); })) return f;
      break;
    case Op::Cos:
      if (auto f = fold1([](double x) { return std::cos(x); })) return f;
      break;
    case Op::Exp:
      if (auto f = fold1([](double x) { return std::exp(x); })) return f;
      break;
    case Op::Log:
      if (auto f = fold1([](double x) { return std::log(x); })) return f;
      break;
    case Op::Sqrt:
      if (auto f = fold1([](double x) { return std::sqrt(x); })) return f;
      break;
    default:
      break;
  }

  if (n->a == a && n->b == b) return n;
  if (b) return binary_node(n->op, a, b);
  return unary_node(n->op, a);
}

}  // namespace

Expression Expression::simplified() const {
  return Expression(simp(root_), coords_);
}

// ---------------------------------------------------------------------------
// printing (minimal parentheses by precedence)
// ---------------------------------------------------------------------------

namespace {

// precedence levels: Add/Sub 1, Mul/Div 2, Neg 3, Pow 4, atoms 5
int precedence(const Expression::Node* n) {
  switch (n->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const:
      return n->value < 0.0 || std::signbit(n->value) ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

void print_node(const Expression::Node* n,
                const std::vector<std::string>& names, int ctx,
                std::string& out) {
  int prec = precedence(n);
  bool parens = prec < ctx;
  if (parens) out += '(';
  switch (n->op) {
    case Op::Const:
      if (n->value < 0.0 || std::signbit(n->value)) {
        out += '-';
        out += format_number(-n->value);
      } else {
        out += format_number(n->value);
      }
      break;
    case Op::Var:
      out += names[static_cast<std::size_t>(n->var)];
      break;
    case Op::Add:
      print_node(n->a.get(), names, 1, out);
      out += " + ";
      print_node(n->b.get(), names, 2, out);
      break;
    case Op::Sub:
      print_node(n->a.get(), names, 1, out);
      out += " - ";
      print_node(n->b.get(), names, 2, out);
      break;
    case Op::Mul:
      print_node(n->a.get(), names, 2, out);
      out += "*";
      print_node(n->b.get(), names, 2, out);
      break;
    case Op::Div:
      print_node(n->a.get(), names, 2, out);
      out += "/";
      print_node(n->b.get(), names, 3, out);
      break;
    case Op::Neg:
      out += '-';
      print_node(n->a.get(), names, 3, out);
      break;
    case Op::Pow:
      print_node(n->a.get(), names, 5, out);
      out += '^';
      out += std::to_string(n->exponent);
      break;
    case Op::Sin: out += "sin("; print_node(n->a.get(), names, 0, out); out += ')'; break;
    case Op::Cos: out += "cos("; print_node(n->a.get(), names, 0, out); out += ')'; break;
    case Op::Exp: out += "exp("; print_node(n->a.get(), names, 0, out); out += ')'; break;
    case Op::Log: out += "log("; print_node(n->a.get(), names, 0, out); out += ')'; break;
    case Op::Sqrt: out += "sqrt("; print_node(n->a.get(), names, 0, out); out += ')'; break;
  }
  if (parens) out += ')';
}

std::string print_subtree(const Expression::Node* n,
                          const std::vector<std::string>& names) {
  std::string out;
  print_node(n, names, 0, out);
  return out;
}

}  // namespace

std::string Expression::str() const {
  std::string out;
  print_node(root_.get(), *coords_, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// parser: recursive descent over the module grammar
// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, Coords coords)
      : text_(text), coords_(std::move(coords)) {}

  Expression run() {
    Expression e = parse_expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError(pos_, "unexpected trailing input");
    return e;
  }

 private:
  std::string_view text_;
  Coords coords_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos_, std::string("expected ") + what);
  }

  Expression parse_expr() {
    Expression e = parse_term();
    for (;;) {
      if (accept('+'))
        e = e + parse_term();
      else if (accept('-'))
        e = e - parse_term();
      else
        return e;
    }
  }

  Expression parse_term() {
    Expression e = parse_factor();
    for (;;) {
      if (accept('*'))
        e = e * parse_factor();
      else if (accept('/'))
        e = e / parse_factor();
      else
        return e;
    }
  }

  Expression parse_factor() {
    if (accept('-')) return -parse_factor();
    Expression base = parse_base();
    if (accept('^')) return pow_int(base, parse_integer());
    return base;
  }

  int parse_integer() {
    skip_ws();
    std::size_t start = pos_;
    bool neg = false;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) {
      neg = text_[pos_] == '-';
      ++pos_;
    }
    if (pos_ >= text_.size() ||
        !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw ParseError(pos_, "expected integer exponent");
    long v = 0;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000) throw ParseError(start, "exponent too large");
      ++pos_;
    }
    return static_cast<int>(neg ? -v : v);
  }

  Expression parse_base() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError(pos_, "expected operand");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression e = parse_expr();
      expect(')', "')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return parse_ident();
    throw ParseError(pos_, "expected operand");
  }

  Expression parse_number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto r = std::from_chars(begin, end, v);
    if (r.ec != std::errc()) throw ParseError(pos_, "malformed number");
    pos_ = static_cast<std::size_t>(r.ptr - text_.data());
    return Expression::constant(v, coords_);
  }

  Expression parse_ident() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_'))
      ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);

    static const std::pair<std::string_view, Expression::Op> kFuncs[] = {
        {"sin", Expression::Op::Sin}, {"cos", Expression::Op::Cos},
        {"exp", Expression::Op::Exp}, {"log", Expression::Op::Log},
        {"sqrt", Expression::Op::Sqrt}};

    for (const auto& [fname, op] : kFuncs) {
      if (name == fname) {
        if (!accept('('))
          throw ParseError(start, "function '" + std::string(name) +
                                      "' requires an argument list");
        Expression arg = parse_expr();
        expect(')', "')'");
        return make_unary(op, arg);
      }
    }

    for (std::size_t i = 0; i < coords_->size(); ++i) {
      if ((*coords_)[i] == name) {
        if (peek('('))
          throw ParseError(pos_, "coordinate '" + std::string(name) +
                                     "' used as a function");
        return Expression::variable(static_cast<int>(i), coords_);
      }
    }
    throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
  }
};

Expression parse(std::string_view text,
                 const std::vector<std::string>& coordinate_names) {
  return parse(text, make_coords(coordinate_names));
}

Expression parse(std::string_view text, Coords coords) {
  return Parser(text, std::move(coords)).run();
}

}  // namespace szabo
