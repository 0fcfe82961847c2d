#pragma once

// Dense matrices over any coefficient ring with the shared ring interface
// (W, R_pi, or the truncated series ring T).

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "pigeom/witt_base.hpp"
#include "pigeom/error.hpp"

namespace pigeom {

template <class E>
class Mat {
 public:
  Mat() = default;
  Mat(size_t rows, size_t cols, const E& fill) : rows_(rows), cols_(cols), d_(rows * cols, fill) {}
  Mat(size_t rows, size_t cols, std::vector<E> data) : rows_(rows), cols_(cols), d_(std::move(data)) {
    if (d_.size() != rows * cols) throw Error(ErrorCode::config_invalid, "matrix data has the wrong size");
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  E& operator()(size_t i, size_t j) { return d_[i * cols_ + j]; }
  const E& operator()(size_t i, size_t j) const { return d_[i * cols_ + j]; }
  const std::vector<E>& data() const { return d_; }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
  }

 private:
  size_t rows_ = 0;
  size_t cols_ = 0;
  std::vector<E> d_;
};

template <class Ring>
Mat<typename Ring::Elem> identity(const Ring& R, size_t n) {
  Mat<typename Ring::Elem> out(n, n, R.zero());
  for (size_t i = 0; i < n; ++i) out(i, i) = R.one();
  return out;
}

template <class Ring>
Mat<typename Ring::Elem> zeros(const Ring& R, size_t rows, size_t cols) {
  return Mat<typename Ring::Elem>(rows, cols, R.zero());
}

template <class E, class F>
auto map(const Mat<E>& a, F f) {
  using Out = decltype(f(a(0, 0)));
  std::vector<Out> data;
  data.reserve(a.data().size());
  for (const E& x : a.data()) data.push_back(f(x));
  return Mat<Out>(a.rows(), a.cols(), std::move(data));
}

template <class E>
void require_shape(const Mat<E>& a, const Mat<E>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::config_invalid, "matrix shapes differ");
}

template <class E>
Mat<E> operator+(const Mat<E>& a, const Mat<E>& b) {
  require_shape(a, b);
  Mat<E> out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

template <class E>
Mat<E> operator-(const Mat<E>& a, const Mat<E>& b) {
  require_shape(a, b);
  Mat<E> out = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

template <class E>
Mat<E> operator-(const Mat<E>& a) {
  return map(a, [](const E& x) { return -x; });
}

template <class E>
Mat<E> operator*(const Mat<E>& a, const Mat<E>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::config_invalid, "matrix product shape mismatch");
  if (a.cols() == 0) throw Error(ErrorCode::config_invalid, "empty matrix product");
  Mat<E> out(a.rows(), b.cols(), a(0, 0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < b.cols(); ++j) {
      E acc = a(i, 0) * b(0, j);
      for (size_t k = 1; k < a.cols(); ++k) acc = acc + a(i, k) * b(k, j);
      out(i, j) = std::move(acc);
    }
  return out;
}

template <class E>
Mat<E> scale(const E& c, const Mat<E>& a) {
  return map(a, [&](const E& x) { return c * x; });
}

template <class E>
Mat<E> transpose(const Mat<E>& a) {
  if (a.data().empty()) return a;
  Mat<E> out(a.cols(), a.rows(), a(0, 0));
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

template <class E>
bool is_symmetric(const Mat<E>& a) {
  return a.rows() == a.cols() && transpose(a) == a;
}

// Entrywise e-th powers, X^{(e)}.
template <class E>
Mat<E> mat_pow_entries(const Mat<E>& a, u64 e) {
  return map(a, [e](const E& x) { return pow(x, e); });
}

// Entrywise p^s-th powers, with p^s taken from the coefficient ring.
template <class Ring>
Mat<typename Ring::Elem> mat_pow_ps(const Ring& R, const Mat<typename Ring::Elem>& a) {
  return mat_pow_entries(a, R.ps());
}

template <class Ring>
bool mat_is_zero(const Ring& R, const Mat<typename Ring::Elem>& a) {
  for (const auto& x : a.data())
    if (!R.is_zero(x)) return false;
  return true;
}

// Minimum entry valuation (each entry capped at its own precision).
template <class Ring>
int mat_valuation(const Ring& R, const Mat<typename Ring::Elem>& a) {
  int v = R.cap();
  for (const auto& x : a.data()) v = std::min(v, R.valuation(x));
  return v;
}

template <class Ring>
int mat_precision(const Ring& R, const Mat<typename Ring::Elem>& a) {
  int v = R.cap();
  for (const auto& x : a.data()) v = std::min(v, R.precision(x));
  return v;
}

template <class Ring>
Mat<typename Ring::Elem> mat_div_pi(const Ring& R, const Mat<typename Ring::Elem>& a, int j) {
  return map(a, [&](const auto& x) { return R.div_pi(x, j); });
}

template <class Ring>
Mat<typename Ring::Elem> mat_mul_pi(const Ring& R, const Mat<typename Ring::Elem>& a, int j) {
  return map(a, [&](const auto& x) { return R.mul_pi(x, j); });
}

template <class Ring>
Mat<Fq> mat_residue(const Ring& R, const Mat<typename Ring::Elem>& a) {
  return map(a, [&](const auto& x) { return R.residue(x); });
}

template <class Ring>
Mat<typename Ring::Elem> mat_lift(const Ring& R, const Mat<Fq>& a) {
  return map(a, [&](const Fq& x) { return R.lift(x); });
}

// Gauss-Jordan inverse over the residue field; nullopt if singular.
inline std::optional<Mat<Fq>> fq_mat_inverse(Mat<Fq> a) {
  const size_t n = a.rows();
  if (n == 0 || a.cols() != n) return std::nullopt;
  const FieldCtx& F = a(0, 0).ctx();
  Mat<Fq> inv(n, n, F.zero());
  for (size_t i = 0; i < n; ++i) inv(i, i) = F.one();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    while (pivot < n && a(pivot, col).is_zero()) ++pivot;
    if (pivot == n) return std::nullopt;
    if (pivot != col)
      for (size_t j = 0; j < n; ++j) {
        std::swap(a(pivot, j), a(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    const Fq scale_by = inverse(a(col, col));
    for (size_t j = 0; j < n; ++j) {
      a(col, j) = a(col, j) * scale_by;
      inv(col, j) = inv(col, j) * scale_by;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a(r, col).is_zero()) continue;
      const Fq f = a(r, col);
      for (size_t j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

// Newton iteration Y <- Y + Y (1 - X Y) from the residue inverse; each step
// doubles the pi-adic agreement.
template <class Ring>
Mat<typename Ring::Elem> mat_inv(const Ring& R, const Mat<typename Ring::Elem>& x) {
  if (x.rows() != x.cols()) throw Error(ErrorCode::config_invalid, "inverse of a non-square matrix");
  const auto res_inv = fq_mat_inverse(mat_residue(R, x));
  if (!res_inv) throw Error(ErrorCode::singular_residue, "matrix is singular modulo the uniformizer");
  const auto one = identity(R, x.rows());
  auto y = mat_lift(R, *res_inv);
  for (int step = 0; step < 64; ++step) {
    const auto err = one - x * y;
    if (mat_is_zero(R, err)) return y;
    y = y + y * err;
  }
  throw Error(ErrorCode::precision_exhausted, "matrix inversion did not converge");
}

// The square root congruent to 1 of a matrix Y = 1 mod pi, by the binomial
// series in Y - 1.
template <class Ring>
Mat<typename Ring::Elem> mat_sqrt_near_one(const Ring& R, const Mat<typename Ring::Elem>& y) {
  if (y.rows() != y.cols()) throw Error(ErrorCode::config_invalid, "square root of a non-square matrix");
  const auto one = identity(R, y.rows());
  const auto t = y - one;
  if (mat_valuation(R, t) < 1) throw Error(ErrorCode::not_congruent_to_one, "matrix is not 1 modulo pi");
  const BaseCtx& W = R.base();
  auto sum = one;
  auto power = one;
  for (unsigned k = 1;; ++k) {
    power = power * t;
    if (mat_is_zero(R, power)) break;
    const auto c = R.from_int(static_cast<i64>(binomial_half(k, W.p(), W.K())));
    sum = sum + scale(c, power);
  }
  return sum;
}

}  // namespace pigeom
