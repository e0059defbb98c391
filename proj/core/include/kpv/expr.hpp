#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "kpv/errors.hpp"
#include "kpv/jet.hpp"
#include "kpv/rational.hpp"
#include "kpv/scalar.hpp"

namespace kpv {

enum class NodeKind { kConst, kSymbol, kSum, kDiff, kProduct, kQuotient, kPower };

struct Node;

/// Immutable symbolic expression. Copies share structure.
class Expr {
 public:
  Expr() : Expr(Rational(0)) {}
  Expr(Rational c);              // NOLINT(google-explicit-constructor)
  Expr(long c) : Expr(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  Expr(int c) : Expr(Rational(c)) {}   // NOLINT(google-explicit-constructor)

  static Expr symbol(const std::string& name);

  NodeKind kind() const;
  bool is_const() const { return kind() == NodeKind::kConst; }
  bool is_const(const Rational& value) const;
  const Rational& value() const;       // kConst only
  const std::string& name() const;     // kSymbol only
  const Expr& lhs() const;             // binary nodes and kPower
  const Expr& rhs() const;             // binary nodes
  long exponent() const;               // kPower only
  const Node* node() const { return node_.get(); }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  Expr& operator/=(const Expr& o) { return *this = *this / o; }

  /// Structural equality (same tree shape, same constants and names).
  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend Expr make_node(NodeKind, Expr, Expr, long);
  friend struct Node;
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind;
  Rational value;
  std::string name;
  Expr a{std::shared_ptr<const Node>()};
  Expr b{std::shared_ptr<const Node>()};
  long exp = 0;
};

Expr pow(const Expr& base, long exponent);
inline Expr sym(const std::string& name) { return Expr::symbol(name); }

template <class T>
using Binding = std::unordered_map<std::string, T>;

using Substitution = std::map<std::string, Expr>;

/// Symbolic partial derivative. Only light constant folding is applied.
Expr differentiate(const Expr& e, const std::string& s);
/// Simultaneous, capture-free replacement of symbols.
Expr substitute(const Expr& e, const Substitution& subs);
Expr substitute(const Expr& e, const std::string& s, const Expr& r);
std::set<std::string> symbols(const Expr& e);
/// Every divisor in `e`: right operands of quotients and bases of negative
/// powers, deduplicated by node.
std::vector<Expr> denominators(const Expr& e);

/// Readable infix form, reparseable by `parse_expr`.
std::string to_infix(const Expr& e);
/// Fully parenthesised prefix form, e.g. "(* 2 (^ t 2))".
std::string to_prefix(const Expr& e);

namespace detail {

template <class T>
T int_power(const T& base, long k, const T& one) {
  T acc = one;
  T b = base;
  for (long e = k; e > 0; e >>= 1) {
    if (e & 1) acc = acc * b;
    if (e > 1) b = b * b;
  }
  return acc;
}

inline bool value_is_zero(const Rational& r) { return r.is_zero(); }
inline bool value_is_zero(double d) { return d == 0.0; }
inline bool value_is_zero(const Scalar& s) { return s.is_zero(); }
template <class T>
bool value_is_zero(const Jet2<T>& j) {
  return is_zero_value(j.v);
}

/// Bottom-up evaluation with a per-call cache keyed on shared nodes.
template <class T>
class Evaluator {
 public:
  Evaluator(std::function<T(const std::string&)> lookup, std::function<T(const Rational&)> lift)
      : lookup_(std::move(lookup)), lift_(std::move(lift)) {}

  T operator()(const Expr& e) {
    auto it = cache_.find(e.node());
    if (it != cache_.end()) return it->second;
    T r = compute(e);
    cache_.emplace(e.node(), r);
    return r;
  }

 private:
  T compute(const Expr& e) {
    switch (e.kind()) {
      case NodeKind::kConst:
        return lift_(e.value());
      case NodeKind::kSymbol:
        return lookup_(e.name());
      case NodeKind::kSum:
        return (*this)(e.lhs()) + (*this)(e.rhs());
      case NodeKind::kDiff:
        return (*this)(e.lhs()) - (*this)(e.rhs());
      case NodeKind::kProduct:
        return (*this)(e.lhs()) * (*this)(e.rhs());
      case NodeKind::kQuotient: {
        T den = (*this)(e.rhs());
        if (value_is_zero(den)) throw DivisionByZero(to_infix(e.rhs()));
        return (*this)(e.lhs()) / den;
      }
      case NodeKind::kPower: {
        T base = (*this)(e.lhs());
        const long k = e.exponent();
        T one = lift_(Rational(1));
        if (k >= 0) return int_power(base, k, one);
        if (value_is_zero(base)) throw DivisionByZero(to_infix(e.lhs()));
        return one / int_power(base, -k, one);
      }
    }
    throw Error("corrupt expression node");
  }

  std::function<T(const std::string&)> lookup_;
  std::function<T(const Rational&)> lift_;
  std::unordered_map<const Node*, T> cache_;
};

template <class T>
std::function<T(const std::string&)> lookup_in(const Binding<T>& b) {
  return [&b](const std::string& name) -> T {
    auto it = b.find(name);
    if (it == b.end()) throw UnboundSymbol(name);
    return it->second;
  };
}

}  // namespace detail

/// Exact evaluation. Throws UnboundSymbol or DivisionByZero.
Rational evaluate(const Expr& e, const Binding<Rational>& b);
double evaluate(const Expr& e, const Binding<double>& b);
/// Evaluation in the mode of the bound values; constants follow `mode`.
Scalar evaluate(const Expr& e, const Binding<Scalar>& b, Mode mode);
/// Order-2 Taylor data along a curve. Parameters are bound as constant jets.
Jet evaluate_jet(const Expr& e, const Binding<Jet>& b, Mode mode);
Jet2<Rational> evaluate_jet(const Expr& e, const Binding<Jet2<Rational>>& b);
Jet2<double> evaluate_jet(const Expr& e, const Binding<Jet2<double>>& b);

/// Evaluates several expressions sharing one cache.
std::vector<Rational> evaluate_all(const std::vector<Expr>& es, const Binding<Rational>& b);
std::vector<double> evaluate_all(const std::vector<Expr>& es, const Binding<double>& b);

}  // namespace kpv
