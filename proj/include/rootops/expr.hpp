#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/matrix.hpp"
#include "rootops/rational.hpp"

namespace rootops {

using Complex = std::complex<double>;

// Primitive transcendental functions. The set is closed under
// differentiation:
//   sinh' = coth*sinh   coth' = -csch^2   csch' = -csch*coth
//   sin'  = cot*sin     cot'  = -csc^2    csc'  = -csc*cot
enum class PrimKind { Sinh, Coth, Csch, Sin, Cot, Csc };

inline const char* prim_name(PrimKind k) {
  switch (k) {
    case PrimKind::Sinh: return "sinh";
    case PrimKind::Coth: return "coth";
    case PrimKind::Csch: return "csch";
    case PrimKind::Sin: return "sin";
    case PrimKind::Cot: return "cot";
    case PrimKind::Csc: return "csc";
  }
  return "?";
}

class Expr;

struct ExprNode {
  enum class Tag : std::uint8_t { Const, Var, Sum, Prod, Pow, Prim };

  Tag tag = Tag::Const;
  Complex value{};              // Const
  int var = -1;                 // Var
  std::vector<Expr> kids;       // Sum/Prod children; Pow base; Prim argument
  Rational exponent{0};         // Pow
  PrimKind prim{PrimKind::Sinh};
  std::size_t hash = 0;
};

// Immutable expression handle with structural sharing. All algebra below
// (normalize, diff, substitution) builds new trees; nodes are never
// mutated after construction, so expressions are safe to share across
// threads.
class Expr {
 public:
  using Tag = ExprNode::Tag;

  Expr() : Expr(constant(0.0)) {}

  static Expr constant(Complex v);
  static Expr constant(double v) { return constant(Complex(v, 0.0)); }
  static Expr constant(const Rational& v) { return constant(to_double(v)); }
  static Expr variable(int index);
  static Expr sum(std::vector<Expr> kids);
  static Expr product(std::vector<Expr> kids);
  static Expr power(Expr base, Rational exp);
  static Expr prim(PrimKind kind, Expr arg);

  static const Expr& zero();
  static const Expr& one();

  const ExprNode& node() const { return *node_; }
  const ExprNode* raw() const { return node_.get(); }
  std::size_t hash() const { return node_->hash; }
  Tag tag() const { return node_->tag; }

  bool is_const() const { return node_->tag == Tag::Const; }
  bool is_zero() const { return is_const() && node_->value == Complex(0.0, 0.0); }
  bool is_one() const { return is_const() && node_->value == Complex(1.0, 0.0); }
  Complex const_value() const { return node_->value; }

 private:
  explicit Expr(std::shared_ptr<const ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const ExprNode> node_;
};

namespace detail {

inline void hash_mix(std::size_t& h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
}

inline std::uint64_t double_bits(double d) {
  if (d == 0.0) d = 0.0;  // collapse -0.0
  return std::bit_cast<std::uint64_t>(d);
}

inline std::shared_ptr<const ExprNode> finish(ExprNode n) {
  std::size_t h = static_cast<std::size_t>(n.tag) * 0x9e3779b97f4a7c15ULL + 1;
  switch (n.tag) {
    case ExprNode::Tag::Const:
      hash_mix(h, double_bits(n.value.real()));
      hash_mix(h, double_bits(n.value.imag()));
      break;
    case ExprNode::Tag::Var:
      hash_mix(h, static_cast<std::uint64_t>(n.var));
      break;
    case ExprNode::Tag::Pow:
      hash_mix(h, n.kids[0].hash());
      hash_mix(h, static_cast<std::uint64_t>(n.exponent.numerator()));
      hash_mix(h, static_cast<std::uint64_t>(n.exponent.denominator()));
      break;
    case ExprNode::Tag::Prim:
      hash_mix(h, static_cast<std::uint64_t>(n.prim));
      hash_mix(h, n.kids[0].hash());
      break;
    case ExprNode::Tag::Sum:
    case ExprNode::Tag::Prod:
      for (const Expr& k : n.kids) hash_mix(h, k.hash());
      break;
  }
  n.hash = h;
  return std::make_shared<const ExprNode>(std::move(n));
}

}  // namespace detail

inline Expr Expr::constant(Complex v) {
  // canonicalize signed zeros so structurally equal constants hash equal
  double re = v.real() == 0.0 ? 0.0 : v.real();
  double im = v.imag() == 0.0 ? 0.0 : v.imag();
  ExprNode n;
  n.tag = Tag::Const;
  n.value = Complex(re, im);
  return Expr(detail::finish(std::move(n)));
}

inline Expr Expr::variable(int index) {
  if (index < 0) throw InvalidArgument("negative variable index");
  ExprNode n;
  n.tag = Tag::Var;
  n.var = index;
  return Expr(detail::finish(std::move(n)));
}

inline Expr Expr::sum(std::vector<Expr> kids) {
  if (kids.empty()) return zero();
  if (kids.size() == 1) return kids[0];
  ExprNode n;
  n.tag = Tag::Sum;
  n.kids = std::move(kids);
  return Expr(detail::finish(std::move(n)));
}

inline Expr Expr::product(std::vector<Expr> kids) {
  if (kids.empty()) return one();
  if (kids.size() == 1) return kids[0];
  ExprNode n;
  n.tag = Tag::Prod;
  n.kids = std::move(kids);
  return Expr(detail::finish(std::move(n)));
}

inline Expr Expr::power(Expr base, Rational exp) {
  if (exp == Rational(0)) return one();
  if (exp == Rational(1)) return base;
  ExprNode n;
  n.tag = Tag::Pow;
  n.kids.push_back(std::move(base));
  n.exponent = std::move(exp);
  return Expr(detail::finish(std::move(n)));
}

inline Expr Expr::prim(PrimKind kind, Expr arg) {
  ExprNode n;
  n.tag = Tag::Prim;
  n.prim = kind;
  n.kids.push_back(std::move(arg));
  return Expr(detail::finish(std::move(n)));
}

inline const Expr& Expr::zero() {
  static const Expr e = Expr::constant(0.0);
  return e;
}

inline const Expr& Expr::one() {
  static const Expr e = Expr::constant(1.0);
  return e;
}

// ---------------------------------------------------------------------------
// Canonical ordering. The cached hash is the primary sort key (cheap and
// deterministic: doubles are hashed by bit pattern); structural comparison
// breaks the rare collisions, so equal hash + compare == 0 is genuine
// structural equality.

int compare(const Expr& a, const Expr& b);

namespace detail {

inline int cmp_complex(Complex a, Complex b) {
  if (a.real() != b.real()) return a.real() < b.real() ? -1 : 1;
  if (a.imag() != b.imag()) return a.imag() < b.imag() ? -1 : 1;
  return 0;
}

inline int structural_compare(const Expr& a, const Expr& b) {
  const ExprNode& x = a.node();
  const ExprNode& y = b.node();
  if (x.tag != y.tag) return x.tag < y.tag ? -1 : 1;
  switch (x.tag) {
    case ExprNode::Tag::Const:
      return cmp_complex(x.value, y.value);
    case ExprNode::Tag::Var:
      return x.var == y.var ? 0 : (x.var < y.var ? -1 : 1);
    case ExprNode::Tag::Pow: {
      if (int c = compare(x.kids[0], y.kids[0])) return c;
      if (x.exponent == y.exponent) return 0;
      return x.exponent < y.exponent ? -1 : 1;
    }
    case ExprNode::Tag::Prim: {
      if (x.prim != y.prim) return x.prim < y.prim ? -1 : 1;
      return compare(x.kids[0], y.kids[0]);
    }
    case ExprNode::Tag::Sum:
    case ExprNode::Tag::Prod: {
      if (x.kids.size() != y.kids.size())
        return x.kids.size() < y.kids.size() ? -1 : 1;
      for (std::size_t i = 0; i < x.kids.size(); ++i)
        if (int c = compare(x.kids[i], y.kids[i])) return c;
      return 0;
    }
  }
  return 0;
}

}  // namespace detail

inline int compare(const Expr& a, const Expr& b) {
  if (a.raw() == b.raw()) return 0;
  if (a.tag() != b.tag()) return a.tag() < b.tag() ? -1 : 1;
  if (a.hash() != b.hash()) return a.hash() < b.hash() ? -1 : 1;
  return detail::structural_compare(a, b);
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Lightweight construction sugar. Folds the trivial cases eagerly; deep
// canonicalization is normalize()'s job.

inline Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_const() && b.is_const())
    return Expr::constant(a.const_value() + b.const_value());
  std::vector<Expr> kids;
  if (a.tag() == Expr::Tag::Sum)
    kids = a.node().kids;
  else
    kids.push_back(a);
  if (b.tag() == Expr::Tag::Sum)
    kids.insert(kids.end(), b.node().kids.begin(), b.node().kids.end());
  else
    kids.push_back(b);
  return Expr::sum(std::move(kids));
}

inline Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::zero();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_const() && b.is_const())
    return Expr::constant(a.const_value() * b.const_value());
  std::vector<Expr> kids;
  if (a.tag() == Expr::Tag::Prod)
    kids = a.node().kids;
  else
    kids.push_back(a);
  if (b.tag() == Expr::Tag::Prod)
    kids.insert(kids.end(), b.node().kids.begin(), b.node().kids.end());
  else
    kids.push_back(b);
  return Expr::product(std::move(kids));
}

inline Expr operator-(const Expr& a) { return Expr::constant(-1.0) * a; }

inline Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

inline Expr pow(const Expr& base, const Rational& e) {
  return Expr::power(base, e);
}

inline Expr scale(const Expr& e, Complex c) { return Expr::constant(c) * e; }

/// Structural reciprocal: inverts products factor by factor and flips Pow
/// exponents, so w * reciprocal(w) collapses to 1 under normalize().
inline Expr reciprocal(const Expr& e) {
  switch (e.tag()) {
    case Expr::Tag::Const: {
      Complex v = e.const_value();
      if (std::abs(v) == 0.0) throw InvalidArgument("reciprocal of zero");
      return Expr::constant(1.0 / v);
    }
    case Expr::Tag::Pow:
      return Expr::power(e.node().kids[0], -e.node().exponent);
    case Expr::Tag::Prod: {
      std::vector<Expr> kids;
      kids.reserve(e.node().kids.size());
      for (const Expr& k : e.node().kids) kids.push_back(reciprocal(k));
      return Expr::product(std::move(kids));
    }
    default:
      return Expr::power(e, Rational(-1));
  }
}

// ---------------------------------------------------------------------------
// Evaluation. Complex-valued, double precision, with a pole guard: any
// denominator magnitude below the threshold raises PoleError naming the
// offending node kind. A context memoizes shared subtrees per point.

constexpr double kPoleThreshold = 1e-12;

namespace detail {

inline Complex ipow(Complex b, long long e) {
  Complex acc(1.0, 0.0);
  while (e > 0) {
    if (e & 1) acc *= b;
    e >>= 1;
    if (e) b *= b;
  }
  return acc;
}

}  // namespace detail

class EvalContext {
 public:
  explicit EvalContext(std::span<const double> point,
                       double pole_threshold = kPoleThreshold)
      : q_(point.begin(), point.end()), eps_(pole_threshold) {}

  Complex eval(const Expr& e) {
    auto it = memo_.find(e.raw());
    if (it != memo_.end()) return it->second;
    Complex v = compute(e);
    memo_.emplace(e.raw(), v);
    return v;
  }

  std::span<const double> point() const { return q_; }

 private:
  Complex compute(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.tag) {
      case ExprNode::Tag::Const:
        return n.value;
      case ExprNode::Tag::Var:
        if (n.var >= static_cast<int>(q_.size()))
          throw InvalidArgument("variable q" + std::to_string(n.var) +
                                " exceeds point dimension " +
                                std::to_string(q_.size()));
        return Complex(q_[static_cast<std::size_t>(n.var)], 0.0);
      case ExprNode::Tag::Sum: {
        Complex acc(0.0, 0.0);
        for (const Expr& k : n.kids) acc += eval(k);
        return acc;
      }
      case ExprNode::Tag::Prod: {
        Complex acc(1.0, 0.0);
        for (const Expr& k : n.kids) acc *= eval(k);
        return acc;
      }
      case ExprNode::Tag::Pow: {
        Complex b = eval(n.kids[0]);
        const Rational& r = n.exponent;
        if (is_integer(r)) {
          long long k = r.numerator();
          if (k >= 0) return detail::ipow(b, k);
          if (std::abs(b) < eps_)
            throw PoleError("pow", "pole in q^" + to_string(r) +
                                       ": base magnitude below threshold");
          return 1.0 / detail::ipow(b, -k);
        }
        double rd = to_double(r);
        if (rd < 0 && std::abs(b) < eps_)
          throw PoleError("pow", "pole in fractional power");
        if (b.imag() == 0.0 && b.real() > 0.0)
          return Complex(std::pow(b.real(), rd), 0.0);
        return std::pow(b, Complex(rd, 0.0));
      }
      case ExprNode::Tag::Prim: {
        Complex a = eval(n.kids[0]);
        switch (n.prim) {
          case PrimKind::Sinh:
            return std::sinh(a);
          case PrimKind::Coth: {
            Complex s = std::sinh(a);
            if (std::abs(s) < eps_) throw PoleError("coth", "coth pole");
            return std::cosh(a) / s;
          }
          case PrimKind::Csch: {
            Complex s = std::sinh(a);
            if (std::abs(s) < eps_) throw PoleError("csch", "csch pole");
            return 1.0 / s;
          }
          case PrimKind::Sin:
            return std::sin(a);
          case PrimKind::Cot: {
            Complex s = std::sin(a);
            if (std::abs(s) < eps_) throw PoleError("cot", "cot pole");
            return std::cos(a) / s;
          }
          case PrimKind::Csc: {
            Complex s = std::sin(a);
            if (std::abs(s) < eps_) throw PoleError("csc", "csc pole");
            return 1.0 / s;
          }
        }
        return Complex(0.0, 0.0);
      }
    }
    return Complex(0.0, 0.0);
  }

  std::vector<double> q_;
  double eps_;
  std::unordered_map<const ExprNode*, Complex> memo_;
};

inline Complex eval(const Expr& e, std::span<const double> q) {
  EvalContext ctx(q);
  return ctx.eval(e);
}

inline Complex eval(const Expr& e, const std::vector<double>& q) {
  return eval(e, std::span<const double>(q));
}

// ---------------------------------------------------------------------------
// normalize: flattens nested sums/products, folds constants, merges Pow
// exponents over equal bases, collects like terms, drops zeros. The
// contract is evaluation equivalence on the working domain; no attempt is
// made at a canonical form for mixed transcendental expressions.

class Normalizer {
 public:
  Expr run(const Expr& e) {
    auto it = memo_.find(e.raw());
    if (it != memo_.end()) return it->second;
    Expr out = compute(e);
    memo_.emplace(e.raw(), out);
    return out;
  }

 private:
  Expr compute(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.tag) {
      case ExprNode::Tag::Const:
      case ExprNode::Tag::Var:
        return e;
      case ExprNode::Tag::Prim: {
        Expr arg = run(n.kids[0]);
        if (arg.is_const()) {
          if (auto v = fold_prim(n.prim, arg.const_value()))
            return Expr::constant(*v);
        }
        if (arg.raw() == n.kids[0].raw()) return e;
        return Expr::prim(n.prim, arg);
      }
      case ExprNode::Tag::Pow: {
        Expr base = run(n.kids[0]);
        if (base.is_const()) {
          if (auto v = fold_pow(base.const_value(), n.exponent))
            return Expr::constant(*v);
        }
        if (base.raw() == n.kids[0].raw()) return e;
        return Expr::power(base, n.exponent);
      }
      case ExprNode::Tag::Prod:
        return norm_prod(n.kids);
      case ExprNode::Tag::Sum:
        return norm_sum(n.kids);
    }
    return e;
  }

  static std::optional<Complex> fold_prim(PrimKind k, Complex a) {
    Complex s;
    switch (k) {
      case PrimKind::Sinh:
        return std::sinh(a);
      case PrimKind::Sin:
        return std::sin(a);
      case PrimKind::Coth:
        s = std::sinh(a);
        if (std::abs(s) < kPoleThreshold) return std::nullopt;
        return std::cosh(a) / s;
      case PrimKind::Csch:
        s = std::sinh(a);
        if (std::abs(s) < kPoleThreshold) return std::nullopt;
        return 1.0 / s;
      case PrimKind::Cot:
        s = std::sin(a);
        if (std::abs(s) < kPoleThreshold) return std::nullopt;
        return std::cos(a) / s;
      case PrimKind::Csc:
        s = std::sin(a);
        if (std::abs(s) < kPoleThreshold) return std::nullopt;
        return 1.0 / s;
    }
    return std::nullopt;
  }

  static std::optional<Complex> fold_pow(Complex b, const Rational& r) {
    if (is_integer(r)) {
      long long k = r.numerator();
      if (k >= 0) return detail::ipow(b, k);
      if (std::abs(b) < kPoleThreshold) return std::nullopt;
      return 1.0 / detail::ipow(b, -k);
    }
    double rd = to_double(r);
    if (rd < 0 && std::abs(b) < kPoleThreshold) return std::nullopt;
    if (b.imag() == 0.0 && b.real() > 0.0)
      return Complex(std::pow(b.real(), rd), 0.0);
    return std::pow(b, Complex(rd, 0.0));
  }

  Expr norm_prod(const std::vector<Expr>& raw_kids) {
    Complex scalar(1.0, 0.0);
    std::vector<std::pair<Expr, Rational>> factors;  // base, exponent
    collect_factors(raw_kids, scalar, factors);
    if (scalar == Complex(0.0, 0.0)) return Expr::zero();

    std::vector<Expr> kids;
    bool spilled = true;
    while (spilled) {
      spilled = false;
      std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) {
        return compare(a.first, b.first) < 0;
      });
      std::vector<std::pair<Expr, Rational>> next;
      kids.clear();
      std::size_t i = 0;
      while (i < factors.size()) {
        Rational exp = factors[i].second;
        std::size_t j = i + 1;
        while (j < factors.size() &&
               compare(factors[j].first, factors[i].first) == 0) {
          exp += factors[j].second;
          ++j;
        }
        if (exp != Rational(0)) {
          Expr f = Expr::power(factors[i].first, exp);
          if (f.tag() == Expr::Tag::Pow && f.node().kids[0].is_const()) {
            if (auto v =
                    fold_pow(f.node().kids[0].const_value(), f.node().exponent)) {
              scalar *= *v;
              i = j;
              continue;
            }
          }
          if (f.is_const()) {
            scalar *= f.const_value();
          } else if (f.tag() == Expr::Tag::Prod) {
            // exponent collapsed to 1 over a product base: splice it back in
            // and rerun the merge over everything
            spilled = true;
            for (const Expr& k : f.node().kids) {
              if (k.is_const())
                scalar *= k.const_value();
              else if (k.tag() == Expr::Tag::Pow)
                next.emplace_back(k.node().kids[0], k.node().exponent);
              else
                next.emplace_back(k, Rational(1));
            }
          } else if (f.tag() == Expr::Tag::Pow) {
            next.emplace_back(f.node().kids[0], f.node().exponent);
            kids.push_back(f);
          } else {
            next.emplace_back(f, Rational(1));
            kids.push_back(f);
          }
        }
        i = j;
      }
      factors = std::move(next);
    }
    if (scalar == Complex(0.0, 0.0)) return Expr::zero();
    if (kids.empty()) return Expr::constant(scalar);
    if (scalar != Complex(1.0, 0.0)) kids.push_back(Expr::constant(scalar));
    std::sort(kids.begin(), kids.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return Expr::product(std::move(kids));
  }

  void collect_factors(const std::vector<Expr>& kids, Complex& scalar,
                       std::vector<std::pair<Expr, Rational>>& factors) {
    for (const Expr& kid : kids) {
      Expr c = run(kid);
      switch (c.tag()) {
        case ExprNode::Tag::Const:
          scalar *= c.const_value();
          break;
        case ExprNode::Tag::Prod:
          // already normalized: children are const/pow/other, no nesting
          for (const Expr& k : c.node().kids) {
            if (k.is_const())
              scalar *= k.const_value();
            else if (k.tag() == Expr::Tag::Pow)
              factors.emplace_back(k.node().kids[0], k.node().exponent);
            else
              factors.emplace_back(k, Rational(1));
          }
          break;
        case ExprNode::Tag::Pow:
          factors.emplace_back(c.node().kids[0], c.node().exponent);
          break;
        default:
          factors.emplace_back(c, Rational(1));
          break;
      }
    }
  }

  // splits a normalized non-const term into (numeric coefficient, core)
  static std::pair<Complex, Expr> decompose(const Expr& t) {
    if (t.tag() == Expr::Tag::Prod) {
      const auto& kids = t.node().kids;
      // normalized products hold at most one constant, sorted first
      if (!kids.empty() && kids[0].is_const()) {
        std::vector<Expr> rest(kids.begin() + 1, kids.end());
        return {kids[0].const_value(), Expr::product(std::move(rest))};
      }
    }
    return {Complex(1.0, 0.0), t};
  }

  static Expr recompose(Complex coeff, const Expr& core) {
    if (coeff == Complex(1.0, 0.0)) return core;
    std::vector<Expr> kids;
    if (core.tag() == Expr::Tag::Prod)
      kids = core.node().kids;
    else
      kids.push_back(core);
    kids.push_back(Expr::constant(coeff));
    std::sort(kids.begin(), kids.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return Expr::product(std::move(kids));
  }

  Expr norm_sum(const std::vector<Expr>& raw_kids) {
    Complex const_acc(0.0, 0.0);
    std::vector<std::pair<Expr, Complex>> terms;  // core, coefficient
    collect_terms(raw_kids, const_acc, terms);

    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });

    std::vector<Expr> kids;
    std::size_t i = 0;
    while (i < terms.size()) {
      Complex coeff = terms[i].second;
      std::size_t j = i + 1;
      while (j < terms.size() && compare(terms[j].first, terms[i].first) == 0) {
        coeff += terms[j].second;
        ++j;
      }
      if (coeff != Complex(0.0, 0.0))
        kids.push_back(recompose(coeff, terms[i].first));
      i = j;
    }
    if (const_acc != Complex(0.0, 0.0)) kids.push_back(Expr::constant(const_acc));
    if (kids.empty()) return Expr::zero();
    std::sort(kids.begin(), kids.end(),
              [](const Expr& a, const Expr& b) { return compare(a, b) < 0; });
    return Expr::sum(std::move(kids));
  }

  void collect_terms(const std::vector<Expr>& kids, Complex& const_acc,
                     std::vector<std::pair<Expr, Complex>>& terms) {
    for (const Expr& kid : kids) {
      Expr c = run(kid);
      if (c.is_const()) {
        const_acc += c.const_value();
      } else if (c.tag() == Expr::Tag::Sum) {
        for (const Expr& k : c.node().kids) {
          if (k.is_const()) {
            const_acc += k.const_value();
          } else {
            auto [coeff, core] = decompose(k);
            terms.emplace_back(core, coeff);
          }
        }
      } else {
        auto [coeff, core] = decompose(c);
        terms.emplace_back(core, coeff);
      }
    }
  }

  std::unordered_map<const ExprNode*, Expr> memo_;
};

inline Expr normalize(const Expr& e) { return Normalizer().run(e); }

// ---------------------------------------------------------------------------
// Symbolic partial differentiation. Closed on the node set above.

class Differ {
 public:
  explicit Differ(int var) : var_(var) {}

  Expr d(const Expr& e) {
    auto it = memo_.find(e.raw());
    if (it != memo_.end()) return it->second;
    Expr out = compute(e);
    memo_.emplace(e.raw(), out);
    return out;
  }

 private:
  Expr compute(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.tag) {
      case ExprNode::Tag::Const:
        return Expr::zero();
      case ExprNode::Tag::Var:
        return n.var == var_ ? Expr::one() : Expr::zero();
      case ExprNode::Tag::Sum: {
        std::vector<Expr> parts;
        for (const Expr& k : n.kids) {
          Expr dk = d(k);
          if (!dk.is_zero()) parts.push_back(dk);
        }
        return Expr::sum(std::move(parts));
      }
      case ExprNode::Tag::Prod: {
        std::vector<Expr> parts;
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          Expr dk = d(n.kids[i]);
          if (dk.is_zero()) continue;
          std::vector<Expr> fac;
          fac.reserve(n.kids.size());
          for (std::size_t j = 0; j < n.kids.size(); ++j)
            fac.push_back(j == i ? dk : n.kids[j]);
          parts.push_back(Expr::product(std::move(fac)));
        }
        return Expr::sum(std::move(parts));
      }
      case ExprNode::Tag::Pow: {
        Expr db = d(n.kids[0]);
        if (db.is_zero()) return Expr::zero();
        return Expr::constant(to_double(n.exponent)) *
               Expr::power(n.kids[0], n.exponent - Rational(1)) * db;
      }
      case ExprNode::Tag::Prim: {
        Expr du = d(n.kids[0]);
        if (du.is_zero()) return Expr::zero();
        return prim_rule(n.prim, n.kids[0]) * du;
      }
    }
    return Expr::zero();
  }

  static Expr prim_rule(PrimKind k, const Expr& u) {
    switch (k) {
      case PrimKind::Sinh:
        return Expr::prim(PrimKind::Coth, u) * Expr::prim(PrimKind::Sinh, u);
      case PrimKind::Coth:
        return -Expr::power(Expr::prim(PrimKind::Csch, u), Rational(2));
      case PrimKind::Csch:
        return -(Expr::prim(PrimKind::Csch, u) * Expr::prim(PrimKind::Coth, u));
      case PrimKind::Sin:
        return Expr::prim(PrimKind::Cot, u) * Expr::prim(PrimKind::Sin, u);
      case PrimKind::Cot:
        return -Expr::power(Expr::prim(PrimKind::Csc, u), Rational(2));
      case PrimKind::Csc:
        return -(Expr::prim(PrimKind::Csc, u) * Expr::prim(PrimKind::Cot, u));
    }
    return Expr::zero();
  }

  int var_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

inline Expr diff(const Expr& e, int var) {
  return normalize(Differ(var).d(e));
}

// ---------------------------------------------------------------------------
// Substitution.

namespace detail {

template <typename Fn>
class Rebuilder {
 public:
  explicit Rebuilder(Fn var_fn) : var_fn_(std::move(var_fn)) {}

  Expr run(const Expr& e) {
    auto it = memo_.find(e.raw());
    if (it != memo_.end()) return it->second;
    Expr out = compute(e);
    memo_.emplace(e.raw(), out);
    return out;
  }

 private:
  Expr compute(const Expr& e) {
    const ExprNode& n = e.node();
    switch (n.tag) {
      case ExprNode::Tag::Const:
        return e;
      case ExprNode::Tag::Var:
        return var_fn_(n.var, e);
      case ExprNode::Tag::Sum:
      case ExprNode::Tag::Prod: {
        std::vector<Expr> kids;
        kids.reserve(n.kids.size());
        bool changed = false;
        for (const Expr& k : n.kids) {
          kids.push_back(run(k));
          changed = changed || kids.back().raw() != k.raw();
        }
        if (!changed) return e;
        return n.tag == ExprNode::Tag::Sum ? Expr::sum(std::move(kids))
                                           : Expr::product(std::move(kids));
      }
      case ExprNode::Tag::Pow: {
        Expr b = run(n.kids[0]);
        if (b.raw() == n.kids[0].raw()) return e;
        return Expr::power(b, n.exponent);
      }
      case ExprNode::Tag::Prim: {
        Expr a = run(n.kids[0]);
        if (a.raw() == n.kids[0].raw()) return e;
        return Expr::prim(n.prim, a);
      }
    }
    return e;
  }

  Fn var_fn_;
  std::unordered_map<const ExprNode*, Expr> memo_;
};

inline int max_var_index(const Expr& e) {
  const ExprNode& n = e.node();
  if (n.tag == ExprNode::Tag::Var) return n.var;
  int m = -1;
  for (const Expr& k : n.kids) m = std::max(m, max_var_index(k));
  return m;
}

}  // namespace detail

/// Replaces every variable q_j by the linear form sum_i M(j,i) q_i, so that
/// eval(result, q) == eval(e, M q).
inline Expr substitute_linear(const Expr& e, const RealMatrix& m) {
  int needed = detail::max_var_index(e);
  if (needed >= m.dim())
    throw InvalidArgument("substitute_linear: matrix dimension " +
                          std::to_string(m.dim()) + " too small for q" +
                          std::to_string(needed));
  std::vector<Expr> repl;
  repl.reserve(static_cast<std::size_t>(m.dim()));
  for (int j = 0; j < m.dim(); ++j) {
    std::vector<Expr> parts;
    for (int i = 0; i < m.dim(); ++i) {
      if (m(j, i) == 0.0) continue;
      if (m(j, i) == 1.0)
        parts.push_back(Expr::variable(i));
      else
        parts.push_back(Expr::constant(m(j, i)) * Expr::variable(i));
    }
    repl.push_back(normalize(Expr::sum(std::move(parts))));
  }
  auto fn = [&repl](int var, const Expr& original) {
    return var < static_cast<int>(repl.size()) ? repl[static_cast<std::size_t>(var)]
                                               : original;
  };
  return normalize(detail::Rebuilder<decltype(fn)>(fn).run(e));
}

/// Replaces one variable by an arbitrary expression (single pass; the
/// replacement is not re-scanned).
inline Expr substitute_var(const Expr& e, int var, const Expr& replacement) {
  auto fn = [var, &replacement](int v, const Expr& original) {
    return v == var ? replacement : original;
  };
  return normalize(detail::Rebuilder<decltype(fn)>(fn).run(e));
}

// ---------------------------------------------------------------------------
// Potential / inverse-x profiles shared by all models.
//
//   rational      x(t) = 1/t
//   hyperbolic    x(t) = a/sinh(a t)
//   trigonometric x(t) = a/sin(a t)
//   harmonic      V(t) = 1/t^2 + omega^2 t^2  (no x profile)

enum class XFamily { Rational, Hyperbolic, Trigonometric, RationalHarmonic };

struct XKind {
  XFamily family = XFamily::Rational;
  double a = 1.0;       // period / curvature parameter
  double omega = 0.0;   // harmonic frequency (RationalHarmonic only)
};

inline const char* xfamily_name(XFamily f) {
  switch (f) {
    case XFamily::Rational: return "rational";
    case XFamily::Hyperbolic: return "hyperbolic";
    case XFamily::Trigonometric: return "trig";
    case XFamily::RationalHarmonic: return "harmonic";
  }
  return "?";
}

/// The function x applied to a linear form.
inline Expr x_expr(const XKind& k, const Expr& linear_form) {
  switch (k.family) {
    case XFamily::Rational:
      return Expr::power(linear_form, Rational(-1));
    case XFamily::Hyperbolic:
      return Expr::constant(k.a) *
             Expr::prim(PrimKind::Csch,
                        normalize(Expr::constant(k.a) * linear_form));
    case XFamily::Trigonometric:
      return Expr::constant(k.a) *
             Expr::prim(PrimKind::Csc,
                        normalize(Expr::constant(k.a) * linear_form));
    case XFamily::RationalHarmonic:
      throw InvalidArgument("x profile undefined for the harmonic potential");
  }
  throw InvalidArgument("unknown x kind");
}

/// The potential profile V = x^2 (harmonic: 1/t^2 + omega^2 t^2).
inline Expr v_expr(const XKind& k, const Expr& linear_form) {
  if (k.family == XFamily::RationalHarmonic) {
    return normalize(Expr::power(linear_form, Rational(-2)) +
                     Expr::constant(k.omega * k.omega) *
                         Expr::power(linear_form, Rational(2)));
  }
  Expr x = x_expr(k, linear_form);
  return normalize(x * x);
}

}  // namespace rootops
