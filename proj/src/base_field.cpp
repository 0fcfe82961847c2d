#include "pigeom/base_field.hpp"

#include <algorithm>
#include <string>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

using Poly = std::vector<u64>;  // over F_p, low degree first

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& b, const Modulus& mod) {
  trim(a);
  const u64 lead_inv = inverse_mod(b.back(), mod.value());
  const size_t db = b.size() - 1;
  while (a.size() > db) {
    const u64 t = mod.mul(a.back(), lead_inv);
    const size_t shift = a.size() - 1 - db;
    for (size_t i = 0; i <= db; ++i) a[shift + i] = mod.sub(a[shift + i], mod.mul(t, b[i]));
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, const Modulus& mod) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, mod);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, const Modulus& mod) {
  if (a.empty() || b.empty()) return {};
  Poly prod(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) prod[i + j] = mod.add(prod[i + j], mod.mul(a[i], b[j]));
  return poly_mod(std::move(prod), f, mod);
}

Poly poly_powmod(Poly base, u64 e, const Poly& f, const Modulus& mod) {
  Poly result{1};
  base = poly_mod(std::move(base), f, mod);
  while (e > 0) {
    if (e & 1) result = poly_mulmod(result, base, f, mod);
    base = poly_mulmod(base, base, f, mod);
    e >>= 1;
  }
  return result;
}

}  // namespace

bool is_irreducible(const std::vector<u64>& poly, u64 p) {
  Modulus mod(p);
  Poly f = poly;
  trim(f);
  if (f.size() < 2) return false;
  const int m = static_cast<int>(f.size()) - 1;
  Poly xp{0, 1};
  for (int i = 1; i < m; ++i) {
    xp = poly_powmod(xp, p, f, mod);
    Poly diff = xp;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = mod.sub(diff[1], 1);
    Poly g = poly_gcd(f, diff, mod);
    if (g.size() > 1) return false;
  }
  return true;
}

Fq::Fq(const FieldCtx* ctx, Coeffs coeffs) : ctx_(ctx), c_(std::move(coeffs)) {}

bool Fq::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool Fq::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

Fq operator+(const Fq& a, const Fq& b) {
  const Modulus& mod = a.ctx_->mod_p();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.add(a.c_[i], b.c_[i]);
  return Fq(a.ctx_, std::move(c));
}

Fq operator-(const Fq& a, const Fq& b) {
  const Modulus& mod = a.ctx_->mod_p();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.sub(a.c_[i], b.c_[i]);
  return Fq(a.ctx_, std::move(c));
}

Fq operator-(const Fq& a) {
  const Modulus& mod = a.ctx_->mod_p();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.neg(a.c_[i]);
  return Fq(a.ctx_, std::move(c));
}

Fq operator*(const Fq& a, const Fq& b) {
  Coeffs c(a.c_.size());
  a.ctx_->mul_raw(a.c_.data(), b.c_.data(), c.data());
  return Fq(a.ctx_, std::move(c));
}

Fq pow(const Fq& a, u64 e) {
  Fq result = a.ctx().one();
  Fq base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    base = base * base;
    e >>= 1;
  }
  return result;
}

Fq inverse(const Fq& a) {
  if (a.is_zero()) throw Error(ErrorCode::not_a_unit, "zero has no inverse in F_q");
  return pow(a, a.ctx().order() - 2);
}

std::shared_ptr<const FieldCtx> FieldCtx::make(u64 p, int m, std::optional<std::vector<u64>> modulus) {
  if (p == 2 || !is_prime(p)) throw Error(ErrorCode::config_invalid, "p must be an odd prime, got " + std::to_string(p));
  if (m < 1) throw Error(ErrorCode::config_invalid, "residue degree m must be at least 1");
  checked_pow(p, static_cast<unsigned>(m));
  std::vector<u64> f;
  if (modulus) {
    f = *modulus;
    if (f.size() != static_cast<size_t>(m) + 1 || f.back() != 1)
      throw Error(ErrorCode::config_invalid, "modulus must be monic of degree m");
    for (u64 c : f)
      if (c >= p) throw Error(ErrorCode::config_invalid, "modulus coefficients must lie in [0, p)");
    if (!is_irreducible(f, p)) throw Error(ErrorCode::config_invalid, "modulus is reducible over F_p");
  } else {
    const u64 count = checked_pow(p, static_cast<unsigned>(m));
    for (u64 idx = 0; idx < count; ++idx) {
      std::vector<u64> cand(static_cast<size_t>(m) + 1, 0);
      u64 t = idx;
      for (int i = 0; i < m; ++i) {
        cand[static_cast<size_t>(i)] = t % p;
        t /= p;
      }
      cand.back() = 1;
      if (is_irreducible(cand, p)) {
        f = std::move(cand);
        break;
      }
    }
  }
  return std::shared_ptr<const FieldCtx>(new FieldCtx(p, m, std::move(f)));
}

FieldCtx::FieldCtx(u64 p, int m, std::vector<u64> modulus)
    : p_(p), m_(m), q_(checked_pow(p, static_cast<unsigned>(m))), mod_(p), modulus_(std::move(modulus)) {
  order_factors_ = prime_factors(q_ - 1);
  for (u64 idx = 1; idx < q_; ++idx) {
    Fq cand = element(idx);
    if (order_of(cand) == q_ - 1) {
      generator_ = cand;
      break;
    }
  }
}

Fq FieldCtx::zero() const { return Fq(this, Coeffs(static_cast<size_t>(m_), 0)); }

Fq FieldCtx::one() const {
  Coeffs c(static_cast<size_t>(m_), 0);
  c[0] = 1;
  return Fq(this, std::move(c));
}

Fq FieldCtx::from_int(i64 v) const {
  Coeffs c(static_cast<size_t>(m_), 0);
  c[0] = mod_.reduce(v);
  return Fq(this, std::move(c));
}

Fq FieldCtx::from_coeffs(const std::vector<u64>& v) const {
  if (v.size() > static_cast<size_t>(m_)) throw Error(ErrorCode::config_invalid, "too many F_q coefficients");
  Coeffs c(static_cast<size_t>(m_), 0);
  for (size_t i = 0; i < v.size(); ++i) c[i] = v[i] % p_;
  return Fq(this, std::move(c));
}

Fq FieldCtx::element(u64 idx) const {
  Coeffs c(static_cast<size_t>(m_), 0);
  for (int i = 0; i < m_; ++i) {
    c[static_cast<size_t>(i)] = idx % p_;
    idx /= p_;
  }
  return Fq(this, std::move(c));
}

u64 FieldCtx::index_of(const Fq& a) const {
  u64 idx = 0;
  for (int i = m_ - 1; i >= 0; --i) idx = idx * p_ + a.coeffs()[static_cast<size_t>(i)];
  return idx;
}

u64 FieldCtx::order_of(const Fq& a) const {
  if (a.is_zero()) throw Error(ErrorCode::not_a_unit, "zero has no multiplicative order");
  u64 ord = q_ - 1;
  for (u64 r : order_factors_) {
    while (ord % r == 0 && pow(a, ord / r).is_one()) ord /= r;
  }
  return ord;
}

void FieldCtx::mul_raw(const u64* a, const u64* b, u64* out) const {
  const size_t m = static_cast<size_t>(m_);
  u64 prod[64];
  const size_t len = 2 * m - 1;
  std::vector<u64> heap;
  u64* buf = prod;
  if (len > 64) {
    heap.assign(len, 0);
    buf = heap.data();
  } else {
    std::fill(prod, prod + len, 0);
  }
  for (size_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < m; ++j) buf[i + j] = mod_.add(buf[i + j], mod_.mul(a[i], b[j]));
  }
  for (size_t d = len; d-- > m;) {
    const u64 t = buf[d];
    if (t == 0) continue;
    for (size_t i = 0; i < m; ++i) buf[d - m + i] = mod_.sub(buf[d - m + i], mod_.mul(t, modulus_[i]));
  }
  std::copy(buf, buf + m, out);
}

Fq fq_frobenius(const Fq& a, unsigned s) {
  const FieldCtx& ctx = a.ctx();
  Fq r = a;
  const unsigned steps = s % static_cast<unsigned>(ctx.m());
  for (unsigned i = 0; i < steps; ++i) r = pow(r, ctx.p());
  return r;
}

Fq fq_inv_frobenius(const Fq& a, unsigned s) {
  const unsigned m = static_cast<unsigned>(a.ctx().m());
  return fq_frobenius(a, (m - s % m) % m);
}

Fq fq_root_of_unity(const FieldCtx& ctx, u64 e, u64 j) {
  if (e == 0 || (ctx.order() - 1) % e != 0)
    throw Error(ErrorCode::config_invalid,
                "e = " + std::to_string(e) + " does not divide p^m - 1 = " + std::to_string(ctx.order() - 1) +
                    "; the ramification is not tame over this residue field (increase m)");
  const u64 step = (ctx.order() - 1) / e;
  return pow(ctx.generator(), (j % e) * step);
}

}  // namespace pigeom
