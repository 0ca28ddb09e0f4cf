#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/expr.hpp"
#include "rootops/expr_io.hpp"
#include "rootops/matrix.hpp"

namespace rootops {

// Linear differential operators with expression coefficients, stored in
// normal form: every derivative stands to the right of its coefficient,
// one collected coefficient per derivative multi-index.
//
// Convention: the momentum operator is p_j = -i d/dq_j. Operators given in
// terms of momenta carry the corresponding (-i)^order factors in their
// coefficients (see p_term).

using MultiIndex = std::vector<int>;

inline int order_of(const MultiIndex& a) {
  return std::accumulate(a.begin(), a.end(), 0);
}

// Composition cost grows multinomially with order; compositions beyond
// this are outside the library's intended range.
constexpr int kMaxOperatorOrder = 8;

class DiffOp {
 public:
  explicit DiffOp(int dim) : dim_(dim) {
    if (dim <= 0) throw InvalidArgument("operator dimension must be positive");
  }

  int dim() const { return dim_; }
  const std::map<MultiIndex, Expr>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  int order() const {
    int m = 0;
    for (const auto& [a, c] : terms_) m = std::max(m, order_of(a));
    return m;
  }

  /// Accumulates coeff * d^index (coefficients sum; no normalization yet —
  /// call collected() when done building).
  void add_term(const MultiIndex& index, const Expr& coeff) {
    if (static_cast<int>(index.size()) != dim_)
      throw InvalidArgument("multi-index length does not match dimension");
    auto it = terms_.find(index);
    if (it == terms_.end())
      terms_.emplace(index, coeff);
    else
      it->second = it->second + coeff;
  }

  /// Normalizes every coefficient and drops structural zeros.
  DiffOp collected() const {
    DiffOp out(dim_);
    for (const auto& [a, c] : terms_) {
      Expr n = normalize(c);
      if (!n.is_zero()) out.terms_.emplace(a, n);
    }
    return out;
  }

  static DiffOp zero(int dim) { return DiffOp(dim); }

  static DiffOp multiplication(const Expr& f, int dim) {
    DiffOp op(dim);
    op.add_term(MultiIndex(static_cast<std::size_t>(dim), 0), f);
    return op.collected();
  }

  static DiffOp identity_op(int dim) {
    return multiplication(Expr::one(), dim);
  }

  static DiffOp partial(int j, int dim) {
    DiffOp op(dim);
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    a[static_cast<std::size_t>(j)] = 1;
    op.add_term(a, Expr::one());
    return op;
  }

  /// p_j = -i d/dq_j.
  static DiffOp momentum(int j, int dim) {
    DiffOp op(dim);
    MultiIndex a(static_cast<std::size_t>(dim), 0);
    a[static_cast<std::size_t>(j)] = 1;
    op.add_term(a, Expr::constant(Complex(0.0, -1.0)));
    return op;
  }

 private:
  int dim_;
  std::map<MultiIndex, Expr> terms_;
};

/// coeff * p^index as a builder contribution: multiplies in the
/// (-i)^|index| factor that converts momenta to plain derivatives.
inline void add_p_term(DiffOp& op, const MultiIndex& index, const Expr& coeff) {
  int k = order_of(index) % 4;
  static const Complex table[4] = {{1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
  op.add_term(index, Expr::constant(table[k]) * coeff);
}

inline DiffOp add(const DiffOp& a, const DiffOp& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch");
  DiffOp out(a.dim());
  for (const auto& [idx, c] : a.terms()) out.add_term(idx, c);
  for (const auto& [idx, c] : b.terms()) out.add_term(idx, c);
  return out.collected();
}

inline DiffOp scale(const DiffOp& a, Complex factor) {
  DiffOp out(a.dim());
  for (const auto& [idx, c] : a.terms())
    out.add_term(idx, Expr::constant(factor) * c);
  return out.collected();
}

inline DiffOp sub(const DiffOp& a, const DiffOp& b) {
  return add(a, scale(b, Complex(-1.0, 0.0)));
}

namespace detail {

/// Derivatives of one expression indexed by derivative multi-index,
/// computed lazily and shared within one composition.
class DerivativeLattice {
 public:
  DerivativeLattice(Expr base, int dim) : dim_(dim) {
    cache_.emplace(MultiIndex(static_cast<std::size_t>(dim), 0), std::move(base));
  }

  const Expr& get(const MultiIndex& a) {
    auto it = cache_.find(a);
    if (it != cache_.end()) return it->second;
    for (int j = 0; j < dim_; ++j) {
      if (a[static_cast<std::size_t>(j)] > 0) {
        MultiIndex prev = a;
        --prev[static_cast<std::size_t>(j)];
        Expr d = diff(get(prev), j);
        return cache_.emplace(a, std::move(d)).first->second;
      }
    }
    return cache_.at(a);  // zero index, already present
  }

 private:
  int dim_;
  std::map<MultiIndex, Expr> cache_;
};

inline long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline long long multi_binomial(const MultiIndex& a, const MultiIndex& s) {
  long long r = 1;
  for (std::size_t i = 0; i < a.size(); ++i) r *= binomial(a[i], s[i]);
  return r;
}

/// Enumerates all multi-indices s <= a.
template <typename Fn>
void for_each_subindex(const MultiIndex& a, Fn&& fn) {
  MultiIndex s(a.size(), 0);
  while (true) {
    fn(s);
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] < a[i]) {
        ++s[i];
        break;
      }
      s[i] = 0;
      ++i;
    }
    if (i == s.size()) break;
  }
}

}  // namespace detail

/// Applies the operator to an expression.
inline Expr apply(const DiffOp& a, const Expr& f) {
  detail::DerivativeLattice lattice(f, a.dim());
  Expr acc = Expr::zero();
  for (const auto& [idx, c] : a.terms()) acc = acc + c * lattice.get(idx);
  return normalize(acc);
}

/// Operator product via the Leibniz expansion:
/// (c d^a)(e d^b) = sum_{s<=a} C(a,s) c (d^{a-s} e) d^{s+b}.
/// Satisfies apply(compose(A,B), f) == apply(A, apply(B, f)).
inline DiffOp compose(const DiffOp& a, const DiffOp& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("operator dimension mismatch");
  if (a.order() + b.order() > kMaxOperatorOrder)
    throw InvalidArgument("composition order " +
                          std::to_string(a.order() + b.order()) +
                          " exceeds supported maximum " +
                          std::to_string(kMaxOperatorOrder));
  DiffOp out(a.dim());
  for (const auto& [bi, bc] : b.terms()) {
    detail::DerivativeLattice lattice(bc, b.dim());
    for (const auto& [ai, ac] : a.terms()) {
      detail::for_each_subindex(ai, [&](const MultiIndex& s) {
        MultiIndex rem(ai.size());
        for (std::size_t i = 0; i < ai.size(); ++i) rem[i] = ai[i] - s[i];
        const Expr& db = lattice.get(rem);
        if (db.is_zero()) return;
        long long binom = detail::multi_binomial(ai, s);
        MultiIndex target(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) target[i] = s[i] + bi[i];
        Expr coeff = ac * db;
        if (binom != 1)
          coeff = Expr::constant(static_cast<double>(binom)) * coeff;
        out.add_term(target, coeff);
      });
    }
  }
  return out.collected();
}

inline DiffOp commutator(const DiffOp& a, const DiffOp& b) {
  return sub(compose(a, b), compose(b, a));
}

/// The conjugation A -> w A w^{-1}. Preserves order and leading
/// coefficients.
inline DiffOp conjugate(const DiffOp& a, const Expr& w) {
  Expr winv = reciprocal(w);
  DiffOp inner = compose(a, DiffOp::multiplication(winv, a.dim()));
  return compose(DiffOp::multiplication(w, a.dim()), inner);
}

/// The operator A^s with apply(A^s, f o s) = apply(A, f) o s for an
/// orthogonal matrix s: coefficients become c o s and each d_i turns into
/// the directional derivative sum_j s_{ij} d_j.
inline DiffOp pushforward_orthogonal(const DiffOp& a, const RealMatrix& s) {
  if (s.dim() != a.dim()) throw InvalidArgument("matrix dimension mismatch");
  if (!is_orthogonal(s))
    throw InvalidArgument("pushforward requires an orthogonal matrix");
  // directional derivative operators (constant coefficients, they commute)
  std::vector<DiffOp> directions;
  directions.reserve(static_cast<std::size_t>(a.dim()));
  for (int i = 0; i < a.dim(); ++i) {
    DiffOp d(a.dim());
    MultiIndex e(static_cast<std::size_t>(a.dim()), 0);
    for (int j = 0; j < a.dim(); ++j) {
      if (s(i, j) == 0.0) continue;
      e[static_cast<std::size_t>(j)] = 1;
      d.add_term(e, Expr::constant(s(i, j)));
      e[static_cast<std::size_t>(j)] = 0;
    }
    directions.push_back(d.collected());
  }
  DiffOp out(a.dim());
  for (const auto& [idx, c] : a.terms()) {
    DiffOp dir = DiffOp::identity_op(a.dim());
    for (int i = 0; i < a.dim(); ++i)
      for (int rep = 0; rep < idx[static_cast<std::size_t>(i)]; ++rep)
        dir = compose(dir, directions[static_cast<std::size_t>(i)]);
    Expr moved = substitute_linear(c, s);
    for (const auto& [di, dc] : dir.terms()) out.add_term(di, moved * dc);
  }
  return out.collected();
}

/// The scaling (p, q) -> (lambda^{-1} p, lambda q): substitutes q -> lambda q
/// in every coefficient and multiplies each term by lambda^{-order}.
inline DiffOp grade_scale(const DiffOp& a, double lambda) {
  if (!(lambda > 0)) throw InvalidArgument("scaling parameter must be positive");
  RealMatrix m(a.dim());
  for (int i = 0; i < a.dim(); ++i) m(i, i) = lambda;
  DiffOp out(a.dim());
  for (const auto& [idx, c] : a.terms()) {
    double factor = std::pow(lambda, -order_of(idx));
    out.add_term(idx, Expr::constant(factor) * substitute_linear(c, m));
  }
  return out.collected();
}

// ---------------------------------------------------------------------------
// Numerical coefficient bounds. Identically-zero detection is numerical by
// design: coefficients are evaluated at margin-separated sample points,
// never decided structurally.

struct CoeffProbe {
  double max_abs = 0.0;
  MultiIndex worst_index;
  std::vector<double> worst_point;
};

inline CoeffProbe probe_coefficients(const DiffOp& a,
                                     const std::vector<std::vector<double>>& points) {
  CoeffProbe out;
  for (const auto& q : points) {
    EvalContext ctx(q);
    for (const auto& [idx, c] : a.terms()) {
      double v = std::abs(ctx.eval(c));
      if (v > out.max_abs) {
        out.max_abs = v;
        out.worst_index = idx;
        out.worst_point = q;
      }
    }
  }
  return out;
}

/// Residual of "A is the zero operator" relative to `scale`.
struct ResidualOutcome {
  double residual_max = 0.0;   // max |coefficient| over points
  double scale = 1.0;
  MultiIndex worst_index;
  std::vector<double> worst_point;
  double relative() const { return scale > 0 ? residual_max / scale : residual_max; }
};

inline ResidualOutcome residual_zero(const DiffOp& a,
                                     const std::vector<std::vector<double>>& points,
                                     double scale) {
  if (!(scale > 0)) throw InvalidArgument("residual scale must be positive");
  CoeffProbe p = probe_coefficients(a, points);
  return {p.max_abs, scale, p.worst_index, p.worst_point};
}

// ---------------------------------------------------------------------------
// Text rendering: one line per multi-index, sorted.

inline std::string to_text(const DiffOp& a) {
  std::string out;
  for (const auto& [idx, c] : a.terms()) {
    out += "d^(";
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(idx[i]);
    }
    out += ") : ";
    out += to_text(c);
    out += '\n';
  }
  return out;
}

}  // namespace rootops
