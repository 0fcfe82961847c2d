#include "pigeom/witt_base.hpp"

#include <algorithm>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

// Product in (Z/n)[x]/(f) for monic f of degree m.
void mulmod_raw(const u64* a, const u64* b, const std::vector<u64>& f, const Modulus& mod, size_t m,
                u64* out) {
  u64 stack[64];
  std::vector<u64> heap;
  const size_t len = 2 * m - 1;
  u64* buf = stack;
  if (len > 64) {
    heap.assign(len, 0);
    buf = heap.data();
  } else {
    std::fill(stack, stack + len, 0);
  }
  for (size_t i = 0; i < m; ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < m; ++j) buf[i + j] = mod.add(buf[i + j], mod.mul(a[i], b[j]));
  }
  for (size_t d = len; d-- > m;) {
    const u64 t = buf[d];
    if (t == 0) continue;
    for (size_t i = 0; i < m; ++i) buf[d - m + i] = mod.sub(buf[d - m + i], mod.mul(t, f[i]));
  }
  std::copy(buf, buf + m, out);
}

Coeffs powmod_raw(Coeffs base, u64 e, const std::vector<u64>& f, const Modulus& mod, size_t m) {
  Coeffs result(m, 0);
  result[0] = 1 % mod.value();
  Coeffs tmp(m, 0);
  while (e > 0) {
    if (e & 1) {
      mulmod_raw(result.data(), base.data(), f, mod, m, tmp.data());
      result = tmp;
    }
    mulmod_raw(base.data(), base.data(), f, mod, m, tmp.data());
    base = tmp;
    e >>= 1;
  }
  return result;
}

Coeffs x_mod(const std::vector<u64>& f, const Modulus& mod, size_t m) {
  Coeffs x(m, 0);
  if (m == 1)
    x[0] = mod.neg(f[0] % mod.value());
  else
    x[1] = 1;
  return x;
}

std::vector<u64> mat_mul_mod(const std::vector<u64>& a, const std::vector<u64>& b, size_t m, const Modulus& mod) {
  std::vector<u64> c(m * m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t k = 0; k < m; ++k) {
      const u64 aik = a[i * m + k];
      if (aik == 0) continue;
      for (size_t j = 0; j < m; ++j) c[i * m + j] = mod.add(c[i * m + j], mod.mul(aik, b[k * m + j]));
    }
  return c;
}

void require_same_ctx(const WElem& a, const WElem& b) {
  if (a.ctx_ptr() != b.ctx_ptr()) throw Error(ErrorCode::context_mismatch, "W elements from different contexts");
}

}  // namespace

std::shared_ptr<const BaseCtx> BaseCtx::make(std::shared_ptr<const FieldCtx> field, int K) {
  if (!field) throw Error(ErrorCode::config_invalid, "missing residue field");
  if (K < 2) throw Error(ErrorCode::config_invalid, "precision K must be at least 2");
  return std::shared_ptr<const BaseCtx>(new BaseCtx(std::move(field), K));
}

BaseCtx::BaseCtx(std::shared_ptr<const FieldCtx> field, int K)
    : field_(std::move(field)), K_(K), mod_(checked_pow(field_->p(), static_cast<unsigned>(K))) {
  const u64 p = field_->p();
  const size_t m = static_cast<size_t>(field_->m());
  pk_.resize(static_cast<size_t>(K) + 1);
  pk_[0] = 1;
  for (int k = 1; k <= K; ++k) pk_[static_cast<size_t>(k)] = pk_[static_cast<size_t>(k) - 1] * p;

  // Teichmueller lift of a root of the residue modulus, computed in the
  // provisional model (Z/p^K)[x]/(f), then its conjugates give the lift.
  const std::vector<u64>& f0 = field_->modulus();
  Coeffs y = x_mod(f0, mod_, m);
  bool stable = false;
  for (int it = 0; it <= K + 1; ++it) {
    Coeffs next = powmod_raw(y, field_->order(), f0, mod_, m);
    if (next == y) {
      stable = true;
      break;
    }
    y = std::move(next);
  }
  if (!stable) throw Error(ErrorCode::config_invalid, "Teichmueller iteration did not stabilize");

  std::vector<Coeffs> poly{Coeffs(m, 0)};
  poly[0][0] = 1;
  Coeffs root = y;
  Coeffs prod(m, 0);
  for (size_t i = 0; i < m; ++i) {
    std::vector<Coeffs> next(poly.size() + 1, Coeffs(m, 0));
    for (size_t k = 0; k < poly.size(); ++k) {
      for (size_t t = 0; t < m; ++t) next[k + 1][t] = mod_.add(next[k + 1][t], poly[k][t]);
      mulmod_raw(root.data(), poly[k].data(), f0, mod_, m, prod.data());
      for (size_t t = 0; t < m; ++t) next[k][t] = mod_.sub(next[k][t], prod[t]);
    }
    poly = std::move(next);
    root = powmod_raw(root, p, f0, mod_, m);
  }
  lift_.resize(m + 1);
  for (size_t k = 0; k <= m; ++k) {
    for (size_t t = 1; t < m; ++t)
      if (poly[k][t] != 0) throw Error(ErrorCode::config_invalid, "lifted modulus is not defined over Z/p^K");
    lift_[k] = poly[k][0];
    if (lift_[k] % p != f0[k]) throw Error(ErrorCode::config_invalid, "lifted modulus does not reduce to the residue modulus");
  }

  // Frobenius x -> x^p and its powers.
  const Coeffs x = x_mod(lift_, mod_, m);
  if (powmod_raw(x, field_->order(), lift_, mod_, m) != x)
    throw Error(ErrorCode::config_invalid, "lifted modulus does not divide x^q - x");
  const Coeffs xp = powmod_raw(x, p, lift_, mod_, m);
  std::vector<u64> phi(m * m, 0);
  Coeffs col(m, 0);
  col[0] = 1;
  for (size_t j = 0; j < m; ++j) {
    for (size_t i = 0; i < m; ++i) phi[i * m + j] = col[i];
    Coeffs tmp(m, 0);
    mulmod_raw(col.data(), xp.data(), lift_, mod_, m, tmp.data());
    col = tmp;
  }
  std::vector<u64> ident(m * m, 0);
  for (size_t i = 0; i < m; ++i) ident[i * m + i] = 1;
  frob_.push_back(ident);
  for (size_t k = 1; k < m; ++k) frob_.push_back(mat_mul_mod(frob_.back(), phi, m, mod_));
  if (m > 1 && mat_mul_mod(frob_.back(), phi, m, mod_) != ident)
    throw Error(ErrorCode::config_invalid, "Frobenius lift does not have order m");

  // Multiplicativity on basis products and reduction to the p-power map.
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) {
      Coeffs ei(m, 0), ej(m, 0), prod_ij(m, 0), lhs(m, 0), fi(m, 0), fj(m, 0), rhs(m, 0);
      ei[i] = 1;
      ej[j] = 1;
      mul_raw(ei.data(), ej.data(), prod_ij.data());
      frob_raw(prod_ij.data(), 1, lhs.data());
      frob_raw(ei.data(), 1, fi.data());
      frob_raw(ej.data(), 1, fj.data());
      mul_raw(fi.data(), fj.data(), rhs.data());
      if (lhs != rhs) throw Error(ErrorCode::config_invalid, "Frobenius lift is not multiplicative");
      Coeffs pw = powmod_raw(ei, p, lift_, mod_, m);
      for (size_t t = 0; t < m; ++t)
        if ((pw[t] + mod_.value() - fi[t]) % p != 0)
          throw Error(ErrorCode::config_invalid, "Frobenius lift does not reduce to the p-power map");
    }
}

void BaseCtx::mul_raw(const u64* a, const u64* b, u64* out) const {
  mulmod_raw(a, b, lift_, mod_, static_cast<size_t>(m()), out);
}

void BaseCtx::frob_raw(const u64* a, unsigned k, u64* out) const {
  const size_t m = static_cast<size_t>(this->m());
  const std::vector<u64>& F = frobenius_matrix(k);
  for (size_t i = 0; i < m; ++i) {
    u64 acc = 0;
    for (size_t j = 0; j < m; ++j) acc = mod_.add(acc, mod_.mul(F[i * m + j], a[j]));
    out[i] = acc;
  }
}

void BaseCtx::normalize(Coeffs& c, int prec) const {
  const u64 n = pk_[static_cast<size_t>(std::clamp(prec, 0, K_))];
  for (u64& v : c) v %= n;
}

WElem BaseCtx::from_int(i64 v) const {
  Coeffs c(static_cast<size_t>(m()), 0);
  c[0] = mod_.reduce(v);
  return WElem(this, std::move(c), K_);
}

WElem BaseCtx::from_coeffs(const std::vector<u64>& v, int prec) const {
  if (v.size() > static_cast<size_t>(m())) throw Error(ErrorCode::config_invalid, "too many W coefficients");
  Coeffs c(static_cast<size_t>(m()), 0);
  for (size_t i = 0; i < v.size(); ++i) c[i] = v[i] % mod_.value();
  return WElem(this, std::move(c), prec);
}

WElem BaseCtx::random(std::mt19937_64& rng, int prec) const {
  Coeffs c(static_cast<size_t>(m()), 0);
  for (u64& v : c) v = rng() % mod_.value();
  return WElem(this, std::move(c), prec);
}

WElem::WElem(const BaseCtx* ctx, Coeffs coeffs, int prec)
    : ctx_(ctx), c_(std::move(coeffs)), prec_(std::clamp(prec, 0, ctx->K())) {
  ctx_->normalize(c_, prec_);
}

bool WElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

WElem operator+(const WElem& a, const WElem& b) {
  require_same_ctx(a, b);
  const Modulus& mod = a.ctx_->mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.add(a.c_[i], b.c_[i]);
  return WElem(a.ctx_, std::move(c), std::min(a.prec_, b.prec_));
}

WElem operator-(const WElem& a, const WElem& b) {
  require_same_ctx(a, b);
  const Modulus& mod = a.ctx_->mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.sub(a.c_[i], b.c_[i]);
  return WElem(a.ctx_, std::move(c), std::min(a.prec_, b.prec_));
}

WElem operator-(const WElem& a) {
  const Modulus& mod = a.ctx_->mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.neg(a.c_[i]);
  return WElem(a.ctx_, std::move(c), a.prec_);
}

WElem operator*(const WElem& a, const WElem& b) {
  require_same_ctx(a, b);
  Coeffs c(a.c_.size());
  a.ctx_->mul_raw(a.c_.data(), b.c_.data(), c.data());
  return WElem(a.ctx_, std::move(c), std::min(a.prec_, b.prec_));
}

WElem pow(const WElem& a, u64 e) {
  WElem result = w_truncate(a.ctx().one(), a.prec());
  WElem base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

int w_val(const WElem& a) {
  const u64 p = a.ctx().p();
  int v = a.prec();
  for (u64 c : a.coeffs())
    if (c != 0) v = std::min(v, valuation(c, p));
  return v;
}

WElem w_truncate(const WElem& a, int prec) {
  return WElem(a.ctx_ptr(), a.coeffs(), std::min(prec, a.prec()));
}

WElem w_mul_p(const WElem& a, int j) {
  const BaseCtx& ctx = a.ctx();
  if (j >= ctx.K()) return WElem(&ctx, Coeffs(a.coeffs().size(), 0), ctx.K());
  const u64 pj = ctx.p_power(j);
  Coeffs c(a.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = ctx.mod().mul(a.coeffs()[i], pj);
  return WElem(&ctx, std::move(c), a.prec() + j);
}

WElem w_div_p(const WElem& a, int j) {
  const BaseCtx& ctx = a.ctx();
  if (j > a.prec()) throw Error(ErrorCode::precision_exhausted, "division by p^j beyond known precision");
  const u64 pj = ctx.p_power(j);
  Coeffs c(a.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) {
    if (a.coeffs()[i] % pj != 0) throw Error(ErrorCode::not_divisible, "W element not divisible by p^j");
    c[i] = a.coeffs()[i] / pj;
  }
  return WElem(&ctx, std::move(c), a.prec() - j);
}

WElem w_frobenius(const WElem& a, unsigned s) {
  Coeffs c(a.coeffs().size());
  a.ctx().frob_raw(a.coeffs().data(), s, c.data());
  return WElem(a.ctx_ptr(), std::move(c), a.prec());
}

WElem w_delta(const WElem& a, unsigned s) {
  if (a.prec() < 2) throw Error(ErrorCode::precision_exhausted, "delta needs precision at least 2");
  const u64 ps = checked_pow(a.ctx().p(), s);
  return w_div_p(w_frobenius(a, s) - pow(a, ps), 1);
}

WElem w_lift(const BaseCtx& ctx, const Fq& alpha) {
  Coeffs c(alpha.coeffs().begin(), alpha.coeffs().end());
  return WElem(&ctx, std::move(c), ctx.K());
}

WElem w_teichmueller(const BaseCtx& ctx, const Fq& alpha) {
  WElem y = w_lift(ctx, alpha);
  const u64 q = ctx.field().order();
  for (int it = 0; it <= ctx.K() + 1; ++it) {
    WElem next = pow(y, q);
    if (next == y) return y;
    y = std::move(next);
  }
  throw Error(ErrorCode::precision_exhausted, "Teichmueller iteration did not stabilize");
}

Fq w_residue(const WElem& a) {
  if (a.prec() < 1) throw Error(ErrorCode::precision_exhausted, "residue of an element with no known digits");
  const u64 p = a.ctx().p();
  std::vector<u64> c(a.coeffs().begin(), a.coeffs().end());
  for (u64& v : c) v %= p;
  return a.ctx().field().from_coeffs(c);
}

WElem w_invert(const WElem& a) {
  Fq r = w_residue(a);
  if (r.is_zero()) throw Error(ErrorCode::not_a_unit, "W element is divisible by p");
  const BaseCtx& ctx = a.ctx();
  WElem y = w_truncate(w_lift(ctx, inverse(r)), a.prec());
  const WElem two = ctx.from_int(2);
  for (int known = 1; known < a.prec(); known *= 2) y = y * (two - a * y);
  return y;
}

WElem w_p_integrate(const WElem& b, unsigned s) {
  const BaseCtx& ctx = b.ctx();
  const unsigned m = static_cast<unsigned>(ctx.m());
  const unsigned back = (m - s % m) % m;
  const u64 ps = checked_pow(ctx.p(), s);
  const int shift = ps - 1 >= static_cast<u64>(ctx.K()) ? ctx.K() : static_cast<int>(ps - 1);
  WElem v = w_frobenius(b, back);
  for (int it = 0; it <= ctx.K() + 1; ++it) {
    WElem next = w_frobenius(b + w_mul_p(pow(v, ps), shift), back);
    if (next == v) return w_mul_p(v, 1);
    v = std::move(next);
  }
  throw Error(ErrorCode::precision_exhausted, "p-integration did not stabilize");
}

WElem cp_carry(const WElem& x, const WElem& y, unsigned s) {
  require_same_ctx(x, y);
  const BaseCtx& ctx = x.ctx();
  const u64 ps = checked_pow(ctx.p(), s);
  const int prec = std::min(x.prec(), y.prec());
  std::vector<WElem> xk{w_truncate(ctx.one(), prec)}, yk{w_truncate(ctx.one(), prec)};
  for (u64 k = 1; k < ps; ++k) {
    xk.push_back(xk.back() * x);
    yk.push_back(yk.back() * y);
  }
  WElem sum = w_truncate(ctx.zero(), prec);
  for (u64 k = 1; k < ps; ++k) {
    const u64 coeff = binomial_over_p(ps, k, ctx.p(), ctx.K());
    sum = sum + ctx.from_int(static_cast<i64>(coeff)) * xk[k] * yk[ps - k];
  }
  return -sum;
}

WElem w_change_ring(const WElem& a, const BaseCtx& target) {
  if (a.ctx().p() != target.p() || a.ctx().field().modulus() != target.field().modulus())
    throw Error(ErrorCode::context_mismatch, "W contexts over different residue fields");
  return WElem(&target, a.coeffs(), std::min(a.prec(), target.K()));
}

bool w_congruent(const WElem& a, const WElem& b, int k) {
  if (a.prec() < k || b.prec() < k) throw Error(ErrorCode::precision_exhausted, "congruence beyond known precision");
  return w_val(a - b) >= k;
}

}  // namespace pigeom
