#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "rootops/errors.hpp"
#include "rootops/rational.hpp"

namespace rootops {

// Minimal dense square matrix; dimensions here never exceed the ambient
// dimension of a rank <= 6 root system.
template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n, T init = T(0))
      : n_(n), data_(static_cast<std::size_t>(n) * n, init) {}

  static SquareMatrix identity(int n) {
    SquareMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int dim() const { return n_; }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * n_ + j]; }
  const T& operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * n_ + j];
  }

  SquareMatrix operator*(const SquareMatrix& rhs) const {
    if (n_ != rhs.n_) throw InvalidArgument("matrix dimension mismatch");
    SquareMatrix out(n_);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (int j = 0; j < n_; ++j) out(i, j) += a * rhs(k, j);
      }
    return out;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (static_cast<int>(v.size()) != n_)
      throw InvalidArgument("matrix/vector dimension mismatch");
    std::vector<T> out(v.size(), T(0));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  SquareMatrix transpose() const {
    SquareMatrix out(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  bool operator==(const SquareMatrix&) const = default;
  bool operator<(const SquareMatrix& rhs) const { return data_ < rhs.data_; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using RationalMatrix = SquareMatrix<Rational>;
using RealMatrix = SquareMatrix<double>;

inline RealMatrix to_real(const RationalMatrix& m) {
  RealMatrix out(m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = to_double(m(i, j));
  return out;
}

inline bool is_orthogonal(const RealMatrix& s, double tol = 1e-12) {
  RealMatrix p = s * s.transpose();
  for (int i = 0; i < s.dim(); ++i)
    for (int j = 0; j < s.dim(); ++j) {
      double want = i == j ? 1.0 : 0.0;
      if (std::abs(p(i, j) - want) > tol) return false;
    }
  return true;
}

}  // namespace rootops
