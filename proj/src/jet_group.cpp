#include "pigeom/jet_group.hpp"

#include <algorithm>
#include <climits>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

Mat<RpiElem> padded(const RamCtx& R, const Mat<RpiElem>& a) {
  return map(a, [&R](const RpiElem& x) { return RpiElem(&R, x.raw(), R.cap()); });
}

int min_precision(const RamCtx& R, const Mat<RpiElem>& a) { return mat_precision(R, a); }

// If x = y mod pi^k then x^p = y^p mod pi^{min(k + e, p k)}.
int power_precision(const RamCtx& R, int k) {
  const int p = static_cast<int>(R.base().p());
  for (unsigned i = 0; i < R.s(); ++i) k = std::min({k + R.e(), p * k, R.cap()});
  return k;
}

// pi^{-1}(a^{(p^s)} b^{(p^s)} - (a b)^{(p^s)}), divisible since p-th powers are
// additive mod p. Unknown digits of a and b are read as zero; the result does
// not depend on them below the returned precision.
Mat<RpiElem> carry_term(const RamCtx& R, const Mat<RpiElem>& a, const Mat<RpiElem>& b) {
  const int k = std::min(min_precision(R, a), min_precision(R, b));
  const Mat<RpiElem> A = padded(R, a), B = padded(R, b);
  const Mat<RpiElem> X = mat_pow_ps(R, A) * mat_pow_ps(R, B) - mat_pow_ps(R, A * B);
  const int prec = std::min(power_precision(R, k) - 1, R.cap() - 1);
  return map(mat_div_pi(R, X, 1), [&](const RpiElem& x) { return rpi_truncate(x, prec); });
}

void require_shape(const JetPoint& x, const JetPoint& y) {
  if (x.a.size() != y.a.size() || x.a0.rows() != y.a0.rows())
    throw Error(ErrorCode::config_invalid, "jet points of different shape");
}

}  // namespace

JetPoint jet_identity(const RamCtx& R, int N, int n) {
  const size_t sz = static_cast<size_t>(N);
  return JetPoint{identity(R, sz), std::vector<Mat<RpiElem>>(static_cast<size_t>(n), zeros(R, sz, sz))};
}

JetPoint jet_mul(const RamCtx& R, const JetPoint& x, const JetPoint& y) {
  require_shape(x, y);
  const Mat<RpiElem> xa = mat_pow_ps(R, x.a0), yb = mat_pow_ps(R, y.a0);
  const Mat<RpiElem> carry = carry_term(R, x.a0, y.a0);
  JetPoint out{x.a0 * y.a0, {}};
  for (size_t i = 0; i < x.a.size(); ++i)
    out.a.push_back(xa * y.a[i] + x.a[i] * yb + mat_mul_pi(R, x.a[i] * y.a[i], 1) + carry);
  return out;
}

JetPoint jet_inv(const RamCtx& R, const JetPoint& x) {
  // With y_0 = x_0^{-1}, the product's i-th part vanishes iff
  // (x_0^{(p^s)} + pi x_i) y_i = -x_i y_0^{(p^s)} - carry(x_0, y_0).
  const Mat<RpiElem> b0 = mat_inv(R, x.a0);
  const Mat<RpiElem> xa = mat_pow_ps(R, x.a0), bb = mat_pow_ps(R, b0);
  const Mat<RpiElem> carry = carry_term(R, x.a0, b0);
  JetPoint out{b0, {}};
  for (const auto& ai : x.a) out.a.push_back(mat_inv(R, xa + mat_mul_pi(R, ai, 1)) * (-(ai * bb) - carry));
  return out;
}

bool jet_equal(const RamCtx& R, const JetPoint& x, const JetPoint& y) {
  require_shape(x, y);
  if (!mat_is_zero(R, x.a0 - y.a0)) return false;
  for (size_t i = 0; i < x.a.size(); ++i)
    if (!mat_is_zero(R, x.a[i] - y.a[i])) return false;
  return true;
}

Mat<RpiElem> lie_add(const RamCtx& R, const Mat<RpiElem>& a, const Mat<RpiElem>& b) {
  return a + b + mat_mul_pi(R, a * b, 1);
}

Mat<RpiElem> lie_neg(const RamCtx& R, const Mat<RpiElem>& a) {
  // -a + pi a^2 - pi^2 a^3 + ..., until pi^k a^{k+1} vanishes at a's precision.
  Mat<RpiElem> term = -a, out = -a;
  for (int k = 1; k <= R.cap(); ++k) {
    term = mat_mul_pi(R, -(term * a), 1);
    if (mat_is_zero(R, term)) break;
    out = out + term;
  }
  return out;
}

Mat<RpiElem> g_to_G1(const RamCtx& R, const Mat<RpiElem>& a) {
  return identity(R, a.rows()) + mat_mul_pi(R, a, 1);
}

JetPoint jet_of_connection(const RamCtx& R, const Mat<RpiElem>& g, const std::vector<Mat<RpiElem>>& lambdas) {
  const Mat<RpiElem> gp = mat_pow_ps(R, g);
  JetPoint out{transpose(g), {}};
  for (const auto& L : lambdas) out.a.push_back(transpose(gp * mat_div_pi(R, L - identity(R, L.rows()), 1)));
  return out;
}

std::vector<Mat<RpiElem>> log_derivative(const RamCtx& R, const Mat<RpiElem>& g,
                                         const std::vector<Mat<RpiElem>>& lambdas) {
  const JetPoint D = jet_of_connection(R, g, lambdas);
  const JetPoint D0 = jet_identity(R, static_cast<int>(g.rows()), static_cast<int>(lambdas.size()));
  const JetPoint trivial{D.a0, D0.a};
  const JetPoint diff = jet_mul(R, D, jet_inv(R, trivial));
  if (!mat_is_zero(R, diff.a0 - identity(R, g.rows())))
    throw Error(ErrorCode::hypothesis_violated, "base components of the two jets differ");
  return diff.a;
}

}  // namespace pigeom
