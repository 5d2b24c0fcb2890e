#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace szabo {

/// Chart point (u1,...,un), or (u1,...,un,u1',...,un') on the cotangent bundle.
using Point = std::vector<double>;

/// Shared, immutable coordinate-name list. Expressions over the same chart
/// share one instance; variable indices refer into it.
using Coords = std::shared_ptr<const std::vector<std::string>>;

Coords make_coords(std::vector<std::string> names);

/// Thrown by parse() with the byte offset of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Thrown by eval() when a sub-expression produces a non-finite value.
/// Carries the offending sub-tree (printed) and the evaluation point.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string subtree, Point point, const std::string& what)
      : std::runtime_error(what), subtree_(std::move(subtree)),
        point_(std::move(point)) {}
  const std::string& subtree() const { return subtree_; }
  const Point& point() const { return point_; }

 private:
  std::string subtree_;
  Point point_;
};

// Immutable expression tree over a fixed coordinate chart. All operations
// are pure; trees share subexpressions freely (shared_ptr DAG), so copies
// are cheap and concurrent reads are safe.
class Expression {
 public:
  enum class Op {
    Const, Var,
    Add, Sub, Mul, Div, Pow,   // Pow: integer exponent in `exponent`
    Neg, Sin, Cos, Exp, Log, Sqrt,
  };

  struct Node;
  using NodePtr = std::shared_ptr<const Node>;

  struct Node {
    Op op;
    double value = 0.0;  // Const
    int var = -1;        // Var
    int exponent = 0;    // Pow
    NodePtr a, b;        // operands (a only for unary/Pow)
  };

  /// Default: the constant 0 over an empty chart; lifts onto any chart.
  Expression();

  static Expression constant(double v, Coords coords);
  static Expression variable(int index, Coords coords);

  int dimension() const { return static_cast<int>(coords_->size()); }
  const Coords& coords() const { return coords_; }
  const NodePtr& root() const { return root_; }

  bool is_constant() const { return root_->op == Op::Const; }
  bool is_zero() const { return is_constant() && root_->value == 0.0; }

  /// Evaluates at p (p.size() must equal dimension()). Non-finite
  /// intermediate results raise DomainError.
  double eval(const Point& p) const;

  /// Memoizing variant for large shared DAGs; `cache` maps node -> value
  /// and must be used for a single point only.
  using EvalCache = std::unordered_map<const Node*, double>;
  double eval(const Point& p, EvalCache& cache) const;

  /// Exact symbolic partial derivative with respect to coordinate `var`.
  Expression diff(int var) const;

  /// Constant folding and 0/1 identity elimination, bottom-up. Idempotent.
  Expression simplified() const;

  /// Grammar-compatible text; parse(str()) is evaluation-equivalent.
  std::string str() const;

  /// Reinterprets the tree over a larger chart (same variable indices).
  Expression lifted(Coords larger) const;

  // arithmetic; operands must share a chart dimension
  friend Expression operator+(const Expression&, const Expression&);
  friend Expression operator-(const Expression&, const Expression&);
  friend Expression operator*(const Expression&, const Expression&);
  friend Expression operator/(const Expression&, const Expression&);
  friend Expression operator-(const Expression&);
  friend Expression pow_int(const Expression&, int exponent);
  friend Expression sin(const Expression&);
  friend Expression cos(const Expression&);
  friend Expression exp(const Expression&);
  friend Expression log(const Expression&);
  friend Expression sqrt(const Expression&);

  Expression operator*(double k) const;
  Expression operator+(double k) const;

 private:
  Expression(NodePtr root, Coords coords)
      : root_(std::move(root)), coords_(std::move(coords)) {}

  NodePtr root_;
  Coords coords_;

  friend class Parser;
  friend Expression make_unary(Expression::Op, const Expression&);
  friend Expression make_binary(Expression::Op, const Expression&,
                                const Expression&);
};

/// Parses `text` against the chart `coordinate_names`.
///
/// Grammar: expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
/// factor := '-' factor | base ('^' integer)? ;
/// base := number | ident | ident '(' expr ')' | '(' expr ')' ;
/// ident is a coordinate name or one of sin, cos, exp, log, sqrt.
Expression parse(std::string_view text,
                 const std::vector<std::string>& coordinate_names);
Expression parse(std::string_view text, Coords coords);

}  // namespace szabo
