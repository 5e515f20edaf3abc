#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "frontal/jet.hpp"
#include "frontal/types.hpp"

namespace frontal {

enum class NodeKind { Constant, Variable, Neg, Func, Binary, PowCall };
enum class Func { Sin, Cos, Exp, Sqrt, Abs };
enum class BinOp { Add, Sub, Mul, Div, Pow };
enum class Var { U1, U2, T };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind = NodeKind::Constant;
  double value = 0.0;     // Constant
  bool is_pi = false;     // Constant spelled "pi"
  Var var = Var::U1;      // Variable
  Func func = Func::Sin;  // Func
  BinOp op = BinOp::Add;  // Binary
  double exponent = 0.0;  // Binary Pow and PowCall: validated exponent
  NodePtr a, b;           // operands; for Pow, b is the exponent subtree
  std::size_t pos = 0;    // byte offset in the source
};

class Expression {
 public:
  Expression() = default;
  static Expression parse(std::string_view source);
  static Expression from_node(NodePtr root);

  // Symbolic partial derivative (constant folding of 0 and 1 only).
  Expression derivative(Var v) const;
  bool uses(Var v) const;

  const NodePtr& root() const { return root_; }
  const std::string& source() const { return source_; }

  // Jet of the expression at (u1, u2); t is only needed if the text uses it.
  Jet eval_jet(double u1, double u2, int order, std::optional<double> t = {}) const;
  // Plain double evaluator, a separate code path from eval_jet.
  double eval(double u1, double u2, std::optional<double> t = {}) const;
  std::string print() const;

  // Rejects abs() whose argument changes sign on a 16x16 grid over the domain.
  void validate_abs(const Domain& domain) const;

 private:
  NodePtr root_;
  std::string source_;
};

std::string print(const NodePtr& n);
bool structurally_equal(const NodePtr& x, const NodePtr& y);
NodePtr differentiate(const NodePtr& n, Var v);
Jet eval_jet(const NodePtr& n, double u1, double u2, int order, std::optional<double> t = {});
double eval_plain(const NodePtr& n, double u1, double u2, std::optional<double> t = {});

}  // namespace frontal
