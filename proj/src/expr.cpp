#include "frontal/expr.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace frontal {

namespace {

[[noreturn]] void syntax_error(std::size_t pos, const std::string& expected) {
  throw ParseError(ErrorKind::SyntaxError, pos,
                   "SyntaxError at offset " + std::to_string(pos) + ": expected " + expected);
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (i_ != s_.size()) syntax_error(i_, "operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool accept(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) syntax_error(i_, std::string("'") + c + "'");
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip();
      const std::size_t p = i_;
      if (accept('+'))
        lhs = binary(BinOp::Add, lhs, term(), p);
      else if (accept('-'))
        lhs = binary(BinOp::Sub, lhs, term(), p);
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      skip();
      const std::size_t p = i_;
      if (accept('*'))
        lhs = binary(BinOp::Mul, lhs, unary(), p);
      else if (accept('/'))
        lhs = binary(BinOp::Div, lhs, unary(), p);
      else
        return lhs;
    }
  }

  NodePtr unary() {
    skip();
    const std::size_t p = i_;
    if (accept('-')) {
      Node n;
      n.kind = NodeKind::Neg;
      n.a = unary();
      n.pos = p;
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    skip();
    const std::size_t p = i_;
    if (!accept('^')) return base;
    skip();
    const std::size_t epos = i_;
    NodePtr e = unary();
    Node n;
    n.kind = NodeKind::Binary;
    n.op = BinOp::Pow;
    n.a = base;
    n.b = e;
    n.pos = p;
    n.exponent = constant_exponent(e, epos, true);
    return make(std::move(n));
  }

  // Exponents must fold to an integer or half-integer constant.
  static double constant_exponent(const NodePtr& e, std::size_t pos, bool allow_half) {
    double v;
    try {
      v = eval_plain(e, 0.0, 0.0, 0.0);
      if (uses_variable(e)) throw Error(ErrorKind::SyntaxError, "");
    } catch (const Error&) {
      syntax_error(pos, "constant exponent");
    }
    const double twice = 2.0 * v;
    const bool ok = allow_half ? twice == std::round(twice) : v == std::round(v);
    if (!ok || std::abs(v) > 64)
      syntax_error(pos, allow_half ? "integer or half-integer exponent" : "integer exponent");
    return v;
  }

  static bool uses_variable(const NodePtr& n) {
    if (!n) return false;
    if (n->kind == NodeKind::Variable) return true;
    return uses_variable(n->a) || uses_variable(n->b);
  }

  static NodePtr binary(BinOp op, NodePtr a, NodePtr b, std::size_t pos) {
    Node n;
    n.kind = NodeKind::Binary;
    n.op = op;
    n.a = std::move(a);
    n.b = std::move(b);
    n.pos = pos;
    return make(std::move(n));
  }

  NodePtr primary() {
    skip();
    const std::size_t p = i_;
    if (i_ >= s_.size()) syntax_error(i_, "number, identifier, '(' or '-'");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_')) ++j;
      const std::string id(s_.substr(i_, j - i_));
      i_ = j;
      return identifier(id, p);
    }
    syntax_error(p, "number, identifier, '(' or '-'");
  }

  NodePtr number() {
    const std::size_t p = i_;
    std::size_t j = i_;
    auto digits = [&] {
      while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
    };
    digits();
    if (j < s_.size() && s_[j] == '.') {
      ++j;
      digits();
    }
    if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
      if (k < s_.size() && std::isdigit(static_cast<unsigned char>(s_[k]))) {
        j = k;
        digits();
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + p, s_.data() + j, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + j) syntax_error(p, "number");
    i_ = j;
    Node n;
    n.kind = NodeKind::Constant;
    n.value = v;
    n.pos = p;
    return make(std::move(n));
  }

  NodePtr identifier(const std::string& id, std::size_t p) {
    Node n;
    n.pos = p;
    if (id == "u1" || id == "u2" || id == "t") {
      n.kind = NodeKind::Variable;
      n.var = id == "u1" ? Var::U1 : id == "u2" ? Var::U2 : Var::T;
      return make(std::move(n));
    }
    if (id == "pi") {
      n.kind = NodeKind::Constant;
      n.value = std::numbers::pi;
      n.is_pi = true;
      return make(std::move(n));
    }
    static const std::pair<const char*, Func> funcs[] = {
        {"sin", Func::Sin}, {"cos", Func::Cos}, {"exp", Func::Exp}, {"sqrt", Func::Sqrt}, {"abs", Func::Abs}};
    for (const auto& [name, f] : funcs)
      if (id == name) {
        expect('(');
        n.kind = NodeKind::Func;
        n.func = f;
        n.a = expr();
        expect(')');
        return make(std::move(n));
      }
    if (id == "pow") {
      expect('(');
      n.kind = NodeKind::PowCall;
      n.a = expr();
      expect(',');
      skip();
      const std::size_t epos = i_;
      n.b = expr();
      n.exponent = constant_exponent(n.b, epos, false);
      expect(')');
      return make(std::move(n));
    }
    throw ParseError(ErrorKind::UnknownIdentifier, p,
                     "UnknownIdentifier '" + id + "' at offset " + std::to_string(p));
  }
};

double bound_t(std::optional<double> t) {
  if (!t) fail(ErrorKind::UnknownIdentifier, "variable t is not bound here");
  return *t;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

std::string number_text(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void collect_abs(const NodePtr& n, std::vector<NodePtr>& out) {
  if (!n) return;
  if (n->kind == NodeKind::Func && n->func == Func::Abs) out.push_back(n->a);
  collect_abs(n->a, out);
  if (n->kind != NodeKind::Binary || n->op != BinOp::Pow) collect_abs(n->b, out);
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  Expression e;
  e.source_ = std::string(source);
  e.root_ = Parser(source).parse();
  return e;
}

Expression Expression::from_node(NodePtr root) {
  Expression e;
  e.root_ = std::move(root);
  e.source_ = frontal::print(e.root_);
  return e;
}

Expression Expression::derivative(Var v) const { return from_node(differentiate(root_, v)); }

bool Expression::uses(Var v) const {
  auto walk = [v](const auto& self, const NodePtr& n) -> bool {
    if (!n) return false;
    if (n->kind == NodeKind::Variable && n->var == v) return true;
    return self(self, n->a) || self(self, n->b);
  };
  return walk(walk, root_);
}

Jet Expression::eval_jet(double u1, double u2, int order, std::optional<double> t) const {
  return frontal::eval_jet(root_, u1, u2, order, t);
}

double Expression::eval(double u1, double u2, std::optional<double> t) const {
  return eval_plain(root_, u1, u2, t);
}

std::string Expression::print() const { return frontal::print(root_); }

void Expression::validate_abs(const Domain& d) const {
  std::vector<NodePtr> args;
  collect_abs(root_, args);
  for (const NodePtr& a : args) {
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) {
        const double v = eval_plain(a, d.a1 + (d.b1 - d.a1) * i / 15.0, d.a2 + (d.b2 - d.a2) * j / 15.0, 0.0);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    if (lo < 0.0 && hi > 0.0)
      fail(ErrorKind::DomainError, "argument of abs changes sign on the domain (offset " +
                                       std::to_string(a->pos) + ")");
  }
}

Jet eval_jet(const NodePtr& n, double u1, double u2, int order, std::optional<double> t) {
  switch (n->kind) {
    case NodeKind::Constant: return Jet(order, n->value);
    case NodeKind::Variable:
      if (n->var == Var::U1) return Jet::variable(0, u1, order);
      if (n->var == Var::U2) return Jet::variable(1, u2, order);
      return Jet(order, bound_t(t));
    case NodeKind::Neg: return -eval_jet(n->a, u1, u2, order, t);
    case NodeKind::Func: {
      const Jet a = eval_jet(n->a, u1, u2, order, t);
      switch (n->func) {
        case Func::Sin: return sin(a);
        case Func::Cos: return cos(a);
        case Func::Exp: return exp(a);
        case Func::Sqrt: return sqrt(a);
        case Func::Abs: return abs(a);
      }
      break;
    }
    case NodeKind::PowCall:
      return pow(eval_jet(n->a, u1, u2, order, t), static_cast<int>(n->exponent));
    case NodeKind::Binary: {
      const Jet a = eval_jet(n->a, u1, u2, order, t);
      if (n->op == BinOp::Pow) {
        const double e = n->exponent;
        try {
          return e == std::round(e) ? pow(a, static_cast<int>(e)) : pow(a, e);
        } catch (const Error& err) {
          if (err.kind() == ErrorKind::DivisionByZeroValue)
            fail(ErrorKind::DomainError, "negative power of zero");
          throw;
        }
      }
      const Jet b = eval_jet(n->b, u1, u2, order, t);
      switch (n->op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
          if (b.value() == 0.0) fail(ErrorKind::DomainError, "division by zero");
          return a / b;
        case BinOp::Pow: break;
      }
      break;
    }
  }
  fail(ErrorKind::SyntaxError, "malformed expression tree");
}

double eval_plain(const NodePtr& n, double u1, double u2, std::optional<double> t) {
  switch (n->kind) {
    case NodeKind::Constant: return n->value;
    case NodeKind::Variable: return n->var == Var::U1 ? u1 : n->var == Var::U2 ? u2 : bound_t(t);
    case NodeKind::Neg: return -eval_plain(n->a, u1, u2, t);
    case NodeKind::Func: {
      const double a = eval_plain(n->a, u1, u2, t);
      switch (n->func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Exp: return std::exp(a);
        case Func::Sqrt:
          if (a < 0.0) fail(ErrorKind::DomainError, "sqrt of a negative value");
          return std::sqrt(a);
        case Func::Abs: return std::abs(a);
      }
      break;
    }
    case NodeKind::PowCall:
    case NodeKind::Binary: {
      const double a = eval_plain(n->a, u1, u2, t);
      if (n->kind == NodeKind::PowCall || n->op == BinOp::Pow) {
        const double e = n->exponent;
        if (a == 0.0 && e < 0) fail(ErrorKind::DomainError, "negative power of zero");
        if (e != std::round(e) && a < 0.0) fail(ErrorKind::DomainError, "half-integer power of a negative value");
        if (e == std::round(e)) {
          // Repeated multiplication keeps this path exact for small integer powers.
          int k = static_cast<int>(std::abs(e));
          double r = 1.0;
          for (int i = 0; i < k; ++i) r *= a;
          return e < 0 ? 1.0 / r : r;
        }
        return std::pow(a, e);
      }
      const double b = eval_plain(n->b, u1, u2, t);
      switch (n->op) {
        case BinOp::Add: return a + b;
        case BinOp::Sub: return a - b;
        case BinOp::Mul: return a * b;
        case BinOp::Div:
          if (b == 0.0) fail(ErrorKind::DomainError, "division by zero");
          return a / b;
        case BinOp::Pow: break;
      }
      break;
    }
  }
  fail(ErrorKind::SyntaxError, "malformed expression tree");
}

std::string print(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::Constant: return n->is_pi ? "pi" : number_text(n->value);
    case NodeKind::Variable: return n->var == Var::U1 ? "u1" : n->var == Var::U2 ? "u2" : "t";
    case NodeKind::Neg: return "(-" + print(n->a) + ")";
    case NodeKind::Func: return std::string(func_name(n->func)) + "(" + print(n->a) + ")";
    case NodeKind::PowCall: return "pow(" + print(n->a) + ", " + print(n->b) + ")";
    case NodeKind::Binary: {
      static const char* ops[] = {" + ", " - ", " * ", " / ", " ^ "};
      return "(" + print(n->a) + ops[static_cast<int>(n->op)] + print(n->b) + ")";
    }
  }
  return "?";
}

bool structurally_equal(const NodePtr& x, const NodePtr& y) {
  if (!x || !y) return !x && !y;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case NodeKind::Constant:
      if (x->value != y->value || x->is_pi != y->is_pi) return false;
      break;
    case NodeKind::Variable:
      if (x->var != y->var) return false;
      break;
    case NodeKind::Func:
      if (x->func != y->func) return false;
      break;
    case NodeKind::Binary:
      if (x->op != y->op) return false;
      break;
    default: break;
  }
  return structurally_equal(x->a, y->a) && structurally_equal(x->b, y->b);
}

namespace {

NodePtr constant(double v) {
  Node n;
  n.kind = NodeKind::Constant;
  n.value = v;
  return make(std::move(n));
}

bool is_const(const NodePtr& n, double v) { return n->kind == NodeKind::Constant && !n->is_pi && n->value == v; }

NodePtr neg(const NodePtr& a) {
  if (a->kind == NodeKind::Constant && !a->is_pi) return constant(-a->value);
  Node n;
  n.kind = NodeKind::Neg;
  n.a = a;
  return make(std::move(n));
}

NodePtr bin(BinOp op, const NodePtr& a, const NodePtr& b) {
  switch (op) {
    case BinOp::Add:
      if (is_const(a, 0)) return b;
      if (is_const(b, 0)) return a;
      break;
    case BinOp::Sub:
      if (is_const(b, 0)) return a;
      if (is_const(a, 0)) return neg(b);
      break;
    case BinOp::Mul:
      if (is_const(a, 0) || is_const(b, 0)) return constant(0);
      if (is_const(a, 1)) return b;
      if (is_const(b, 1)) return a;
      break;
    case BinOp::Div:
      if (is_const(a, 0)) return constant(0);
      if (is_const(b, 1)) return a;
      break;
    case BinOp::Pow: break;
  }
  Node n;
  n.kind = NodeKind::Binary;
  n.op = op;
  n.a = a;
  n.b = b;
  return make(std::move(n));
}

NodePtr func(Func f, const NodePtr& a) {
  Node n;
  n.kind = NodeKind::Func;
  n.func = f;
  n.a = a;
  return make(std::move(n));
}

NodePtr power(const NodePtr& a, double e, bool call) {
  if (e == 0) return constant(1);
  if (e == 1) return a;
  Node n;
  n.kind = call ? NodeKind::PowCall : NodeKind::Binary;
  n.op = BinOp::Pow;
  n.a = a;
  n.b = constant(e);
  n.exponent = e;
  return make(std::move(n));
}

}  // namespace

NodePtr differentiate(const NodePtr& n, Var v) {
  switch (n->kind) {
    case NodeKind::Constant: return constant(0);
    case NodeKind::Variable: return constant(n->var == v ? 1 : 0);
    case NodeKind::Neg: return neg(differentiate(n->a, v));
    case NodeKind::Func: {
      const NodePtr da = differentiate(n->a, v);
      if (is_const(da, 0)) return da;
      switch (n->func) {
        case Func::Sin: return bin(BinOp::Mul, func(Func::Cos, n->a), da);
        case Func::Cos: return neg(bin(BinOp::Mul, func(Func::Sin, n->a), da));
        case Func::Exp: return bin(BinOp::Mul, n, da);
        case Func::Sqrt: return bin(BinOp::Div, da, bin(BinOp::Mul, constant(2), n));
        case Func::Abs: return bin(BinOp::Mul, bin(BinOp::Div, n->a, n), da);
      }
      break;
    }
    case NodeKind::PowCall:
    case NodeKind::Binary: {
      const NodePtr da = differentiate(n->a, v);
      if (n->kind == NodeKind::PowCall || n->op == BinOp::Pow) {
        const double e = n->exponent;
        const NodePtr p = power(n->a, e - 1, n->kind == NodeKind::PowCall);
        return bin(BinOp::Mul, bin(BinOp::Mul, constant(e), p), da);
      }
      const NodePtr db = differentiate(n->b, v);
      switch (n->op) {
        case BinOp::Add: return bin(BinOp::Add, da, db);
        case BinOp::Sub: return bin(BinOp::Sub, da, db);
        case BinOp::Mul: return bin(BinOp::Add, bin(BinOp::Mul, da, n->b), bin(BinOp::Mul, n->a, db));
        case BinOp::Div:
          return bin(BinOp::Sub, bin(BinOp::Div, da, n->b),
                     bin(BinOp::Div, bin(BinOp::Mul, n->a, db), power(n->b, 2, false)));
        case BinOp::Pow: break;
      }
      break;
    }
  }
  fail(ErrorKind::SyntaxError, "malformed expression tree");
}

}  // namespace frontal
