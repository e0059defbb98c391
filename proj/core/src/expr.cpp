#include "kpv/expr.hpp"

#include <sstream>

namespace kpv {

Expr make_node(NodeKind kind, Expr a, Expr b, long exp) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  n->exp = exp;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

Expr::Expr(Rational c) {
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kConst;
  n->value = std::move(c);
  node_ = std::move(n);
}

Expr Expr::symbol(const std::string& name) {
  if (name.empty()) throw Error("empty symbol name");
  auto n = std::make_shared<Node>();
  n->kind = NodeKind::kSymbol;
  n->name = name;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

NodeKind Expr::kind() const { return node_->kind; }
bool Expr::is_const(const Rational& v) const { return is_const() && node_->value == v; }

const Rational& Expr::value() const {
  if (!is_const()) throw Error("not a constant node");
  return node_->value;
}
const std::string& Expr::name() const {
  if (kind() != NodeKind::kSymbol) throw Error("not a symbol node");
  return node_->name;
}
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }
long Expr::exponent() const { return node_->exp; }

Expr Expr::operator-() const {
  if (is_const()) return Expr(-value());
  return make_node(NodeKind::kProduct, Expr(-1), *this, 0);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() + b.value());
  if (a.is_const(0)) return b;
  if (b.is_const(0)) return a;
  return make_node(NodeKind::kSum, a, b, 0);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() - b.value());
  if (b.is_const(0)) return a;
  if (a.is_const(0)) return -b;
  return make_node(NodeKind::kDiff, a, b, 0);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_const() && b.is_const()) return Expr(a.value() * b.value());
  if (a.is_const(0) || b.is_const(0)) return Expr(0);
  if (a.is_const(1)) return b;
  if (b.is_const(1)) return a;
  return make_node(NodeKind::kProduct, a, b, 0);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_const() && !b.value().is_zero()) {
    if (a.is_const()) return Expr(a.value() / b.value());
    if (b.is_const(1)) return a;
  }
  return make_node(NodeKind::kQuotient, a, b, 0);
}

Expr pow(const Expr& base, long exponent) {
  if (exponent == 0) return Expr(1);
  if (exponent == 1) return base;
  if (base.is_const() && !(exponent < 0 && base.value().is_zero())) {
    return Expr(pow(base.value(), exponent));
  }
  return make_node(NodeKind::kPower, base, Expr(0), exponent);
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::kConst:
      return a.value() == b.value();
    case NodeKind::kSymbol:
      return a.name() == b.name();
    case NodeKind::kPower:
      return a.exponent() == b.exponent() && a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

class Differ {
 public:
  explicit Differ(const std::string& s) : s_(s) {}

  Expr operator()(const Expr& e) {
    auto it = cache_.find(e.node());
    if (it != cache_.end()) return it->second;
    Expr r = compute(e);
    cache_.emplace(e.node(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kConst:
        return Expr(0);
      case NodeKind::kSymbol:
        return Expr(e.name() == s_ ? 1 : 0);
      case NodeKind::kSum:
        return (*this)(e.lhs()) + (*this)(e.rhs());
      case NodeKind::kDiff:
        return (*this)(e.lhs()) - (*this)(e.rhs());
      case NodeKind::kProduct:
        return (*this)(e.lhs()) * e.rhs() + e.lhs() * (*this)(e.rhs());
      case NodeKind::kQuotient: {
        const Expr da = (*this)(e.lhs());
        const Expr db = (*this)(e.rhs());
        if (db.is_const(0)) return da / e.rhs();
        return (da * e.rhs() - e.lhs() * db) / pow(e.rhs(), 2);
      }
      case NodeKind::kPower: {
        const long k = e.exponent();
        return Expr(k) * pow(e.lhs(), k - 1) * (*this)(e.lhs());
      }
    }
    throw Error("corrupt expression node");
  }

  const std::string& s_;
  std::unordered_map<const Node*, Expr> cache_;
};

class Substituter {
 public:
  explicit Substituter(const Substitution& subs) : subs_(subs) {}

  Expr operator()(const Expr& e) {
    auto it = cache_.find(e.node());
    if (it != cache_.end()) return it->second;
    Expr r = compute(e);
    cache_.emplace(e.node(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kConst:
        return e;
      case NodeKind::kSymbol: {
        auto it = subs_.find(e.name());
        return it == subs_.end() ? e : it->second;
      }
      case NodeKind::kSum:
        return (*this)(e.lhs()) + (*this)(e.rhs());
      case NodeKind::kDiff:
        return (*this)(e.lhs()) - (*this)(e.rhs());
      case NodeKind::kProduct:
        return (*this)(e.lhs()) * (*this)(e.rhs());
      case NodeKind::kQuotient:
        return (*this)(e.lhs()) / (*this)(e.rhs());
      case NodeKind::kPower:
        return pow((*this)(e.lhs()), e.exponent());
    }
    throw Error("corrupt expression node");
  }

  const Substitution& subs_;
  std::unordered_map<const Node*, Expr> cache_;
};

void collect(const Expr& e, std::set<std::string>& out, std::set<const Node*>& seen) {
  if (!seen.insert(e.node()).second) return;
  switch (e.kind()) {
    case NodeKind::kConst:
      return;
    case NodeKind::kSymbol:
      out.insert(e.name());
      return;
    case NodeKind::kPower:
      collect(e.lhs(), out, seen);
      return;
    default:
      collect(e.lhs(), out, seen);
      collect(e.rhs(), out, seen);
  }
}

// 1: sum/diff, 2: product/quotient, 4: power and atoms.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case NodeKind::kSum:
    case NodeKind::kDiff:
      return 1;
    case NodeKind::kProduct:
    case NodeKind::kQuotient:
      return 2;
    case NodeKind::kConst: {
      const Rational& v = e.value();
      if (v.sign() < 0) return 1;
      return v.is_integer() ? 4 : 2;
    }
    default:
      return 4;
  }
}

void infix(const Expr& e, std::ostream& os);

void infix_at(const Expr& e, int min_prec, std::ostream& os) {
  if (precedence(e) < min_prec) {
    os << '(';
    infix(e, os);
    os << ')';
  } else {
    infix(e, os);
  }
}

void infix(const Expr& e, std::ostream& os) {
  switch (e.kind()) {
    case NodeKind::kConst:
      os << e.value().str();
      return;
    case NodeKind::kSymbol:
      os << e.name();
      return;
    case NodeKind::kSum:
      infix_at(e.lhs(), 1, os);
      os << " + ";
      infix_at(e.rhs(), 2, os);
      return;
    case NodeKind::kDiff:
      infix_at(e.lhs(), 1, os);
      os << " - ";
      infix_at(e.rhs(), 2, os);
      return;
    case NodeKind::kProduct:
      infix_at(e.lhs(), 2, os);
      os << "*";
      infix_at(e.rhs(), 3, os);
      return;
    case NodeKind::kQuotient:
      infix_at(e.lhs(), 2, os);
      os << "/";
      infix_at(e.rhs(), 3, os);
      return;
    case NodeKind::kPower:
      infix_at(e.lhs(), 4, os);
      if (e.exponent() < 0) {
        os << "^(" << e.exponent() << ')';
      } else {
        os << '^' << e.exponent();
      }
      return;
  }
}

void prefix(const Expr& e, std::ostream& os) {
  switch (e.kind()) {
    case NodeKind::kConst:
      os << e.value().str();
      return;
    case NodeKind::kSymbol:
      os << e.name();
      return;
    case NodeKind::kPower:
      os << "(^ ";
      prefix(e.lhs(), os);
      os << ' ' << e.exponent() << ')';
      return;
    default: {
      const char* op = e.kind() == NodeKind::kSum        ? "+"
                       : e.kind() == NodeKind::kDiff     ? "-"
                       : e.kind() == NodeKind::kProduct  ? "*"
                                                         : "/";
      os << '(' << op << ' ';
      prefix(e.lhs(), os);
      os << ' ';
      prefix(e.rhs(), os);
      os << ')';
    }
  }
}

}  // namespace

Expr differentiate(const Expr& e, const std::string& s) { return Differ(s)(e); }

Expr substitute(const Expr& e, const Substitution& subs) { return Substituter(subs)(e); }

Expr substitute(const Expr& e, const std::string& s, const Expr& r) {
  return substitute(e, Substitution{{s, r}});
}

std::set<std::string> symbols(const Expr& e) {
  std::set<std::string> out;
  std::set<const Node*> seen;
  collect(e, out, seen);
  return out;
}

namespace {

void collect_dens(const Expr& e, std::vector<Expr>& out, std::set<const Node*>& seen) {
  if (!seen.insert(e.node()).second) return;
  switch (e.kind()) {
    case NodeKind::kConst:
    case NodeKind::kSymbol:
      return;
    case NodeKind::kPower:
      if (e.exponent() < 0) out.push_back(e.lhs());
      collect_dens(e.lhs(), out, seen);
      return;
    case NodeKind::kQuotient:
      if (!e.rhs().is_const()) out.push_back(e.rhs());
      [[fallthrough]];
    default:
      collect_dens(e.lhs(), out, seen);
      collect_dens(e.rhs(), out, seen);
  }
}

}  // namespace

std::vector<Expr> denominators(const Expr& e) {
  std::vector<Expr> out;
  std::set<const Node*> seen;
  collect_dens(e, out, seen);
  return out;
}

std::string to_infix(const Expr& e) {
  std::ostringstream os;
  infix(e, os);
  return os.str();
}

std::string to_prefix(const Expr& e) {
  std::ostringstream os;
  prefix(e, os);
  return os.str();
}

Rational evaluate(const Expr& e, const Binding<Rational>& b) {
  detail::Evaluator<Rational> ev(detail::lookup_in(b), [](const Rational& c) { return c; });
  return ev(e);
}

double evaluate(const Expr& e, const Binding<double>& b) {
  detail::Evaluator<double> ev(detail::lookup_in(b), [](const Rational& c) { return c.to_double(); });
  return ev(e);
}

namespace {

Scalar lift_scalar(const Rational& c, Mode mode) {
  return mode == Mode::kExact ? Scalar(c) : Scalar(c.to_double());
}

}  // namespace

Scalar evaluate(const Expr& e, const Binding<Scalar>& b, Mode mode) {
  detail::Evaluator<Scalar> ev(detail::lookup_in(b),
                               [mode](const Rational& c) { return lift_scalar(c, mode); });
  return ev(e);
}

Jet evaluate_jet(const Expr& e, const Binding<Jet>& b, Mode mode) {
  const Scalar zero = Scalar::zero(mode);
  detail::Evaluator<Jet> ev(detail::lookup_in(b), [mode, zero](const Rational& c) {
    return Jet{lift_scalar(c, mode), zero, zero};
  });
  return ev(e);
}

Jet2<Rational> evaluate_jet(const Expr& e, const Binding<Jet2<Rational>>& b) {
  detail::Evaluator<Jet2<Rational>> ev(detail::lookup_in(b), [](const Rational& c) {
    return Jet2<Rational>{c, Rational(0), Rational(0)};
  });
  return ev(e);
}

Jet2<double> evaluate_jet(const Expr& e, const Binding<Jet2<double>>& b) {
  detail::Evaluator<Jet2<double>> ev(detail::lookup_in(b), [](const Rational& c) {
    return Jet2<double>{c.to_double(), 0.0, 0.0};
  });
  return ev(e);
}

std::vector<Rational> evaluate_all(const std::vector<Expr>& es, const Binding<Rational>& b) {
  detail::Evaluator<Rational> ev(detail::lookup_in(b), [](const Rational& c) { return c; });
  std::vector<Rational> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(ev(e));
  return out;
}

std::vector<double> evaluate_all(const std::vector<Expr>& es, const Binding<double>& b) {
  detail::Evaluator<double> ev(detail::lookup_in(b), [](const Rational& c) { return c.to_double(); });
  std::vector<double> out;
  out.reserve(es.size());
  for (const auto& e : es) out.push_back(ev(e));
  return out;
}

}  // namespace kpv
