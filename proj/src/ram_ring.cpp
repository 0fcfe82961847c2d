#include "pigeom/ram_ring.hpp"

#include <algorithm>
#include <string>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

void require_same_ctx(const RpiElem& a, const RpiElem& b) {
  if (a.ctx_ptr() != b.ctx_ptr()) throw Error(ErrorCode::context_mismatch, "R_pi elements from different contexts");
}

RpiElem shift_down(const RpiElem& a) {
  const RamCtx& ctx = a.ctx();
  const size_t m = static_cast<size_t>(ctx.base().m());
  const size_t e = static_cast<size_t>(ctx.e());
  const u64 p = ctx.base().p();
  Coeffs c(a.raw().size());
  for (size_t t = 0; t < m; ++t) {
    if (a.raw()[t] % p != 0) throw Error(ErrorCode::not_divisible, "R_pi element not divisible by pi");
    c[(e - 1) * m + t] = a.raw()[t] / p;
  }
  for (size_t j = 1; j < e; ++j)
    for (size_t t = 0; t < m; ++t) c[(j - 1) * m + t] = a.raw()[j * m + t];
  return RpiElem(&ctx, std::move(c), a.prec() - 1);
}

RpiElem shift_up(const RpiElem& a) {
  const RamCtx& ctx = a.ctx();
  const size_t m = static_cast<size_t>(ctx.base().m());
  const size_t e = static_cast<size_t>(ctx.e());
  const Modulus& mod = ctx.base().mod();
  const u64 p = ctx.base().p();
  Coeffs c(a.raw().size());
  for (size_t t = 0; t < m; ++t) c[t] = mod.mul(a.raw()[(e - 1) * m + t], p);
  for (size_t j = 1; j < e; ++j)
    for (size_t t = 0; t < m; ++t) c[j * m + t] = a.raw()[(j - 1) * m + t];
  return RpiElem(&ctx, std::move(c), std::min(a.prec() + 1, ctx.cap()));
}

}  // namespace

std::shared_ptr<const RamCtx> RamCtx::make(std::shared_ptr<const BaseCtx> base, int e, unsigned s, int n,
                                           std::vector<u64> zeta_exps, std::optional<int> prec_pi) {
  if (!base) throw Error(ErrorCode::config_invalid, "missing base ring");
  if (e < 1) throw Error(ErrorCode::config_invalid, "ramification index e must be at least 1");
  const u64 q = base->field().order();
  if ((q - 1) % static_cast<u64>(e) != 0)
    throw Error(ErrorCode::config_invalid,
                "e = " + std::to_string(e) + " does not divide p^m - 1 = " + std::to_string(q - 1) +
                    "; tame ramification needs the e-th roots of unity in the residue field (increase m)");
  if (s < 1) throw Error(ErrorCode::config_invalid, "Frobenius degree s must be at least 1");
  if (n < 1) throw Error(ErrorCode::config_invalid, "number of directions n must be at least 1");
  if (zeta_exps.size() != static_cast<size_t>(n))
    throw Error(ErrorCode::config_invalid, "zeta_exps must list one exponent per direction");
  const int M = prec_pi.value_or(e * (base->K() - 1));
  if (M < 1 || M > e * base->K())
    throw Error(ErrorCode::config_invalid, "prec_pi must lie in [1, e K]");
  return std::shared_ptr<const RamCtx>(new RamCtx(std::move(base), e, s, n, std::move(zeta_exps), M));
}

RamCtx::RamCtx(std::shared_ptr<const BaseCtx> base, int e, unsigned s, int n, std::vector<u64> zeta_exps, int M)
    : base_(std::move(base)), e_(e), s_(s), n_(n), M_(M), ps_(checked_pow(base_->p(), s)),
      zeta_exps_(std::move(zeta_exps)) {
  tau_ = w_teichmueller(*base_, base_->field().generator());
  const u64 step = (base_->field().order() - 1) / static_cast<u64>(e_);
  for (int i = 0; i < n_; ++i) {
    const u64 j = zeta_exps_[static_cast<size_t>(i)] % static_cast<u64>(e_);
    WElem z = pow(tau_, j * step);
    if (!(pow(z, static_cast<u64>(e_)) == base_->one()))
      throw Error(ErrorCode::config_invalid, "zeta is not an e-th root of unity");
    zetas_.push_back(z);
    WElem zj = base_->one();
    for (int k = 0; k < e_; ++k) {
      zeta_pows_.push_back(zj.coeffs());
      zj = zj * z;
    }
  }
}

int RamCtx::coord_prec(int prec, int j) const {
  const int num = prec - j;
  if (num <= 0) return 0;
  return std::min((num + e_ - 1) / e_, base_->K());
}

void RamCtx::normalize(Coeffs& c, int prec) const {
  const size_t m = static_cast<size_t>(base_->m());
  for (int j = 0; j < e_; ++j) {
    const u64 n = base_->p_power(coord_prec(prec, j));
    for (size_t t = 0; t < m; ++t) c[static_cast<size_t>(j) * m + t] %= n;
  }
}

RpiElem RamCtx::from_int(i64 v) const {
  Coeffs c(static_cast<size_t>(e_ * base_->m()), 0);
  c[0] = base_->mod().reduce(v);
  return RpiElem(this, std::move(c), cap());
}

RpiElem RamCtx::from_w(const WElem& a) const {
  if (a.ctx_ptr() != base_.get()) throw Error(ErrorCode::context_mismatch, "W element from another base ring");
  Coeffs c(static_cast<size_t>(e_ * base_->m()), 0);
  std::copy(a.coeffs().begin(), a.coeffs().end(), c.begin());
  return RpiElem(this, std::move(c), std::min(e_ * a.prec(), cap()));
}

RpiElem RamCtx::from_coords(const std::vector<WElem>& coords) const {
  if (coords.size() != static_cast<size_t>(e_)) throw Error(ErrorCode::config_invalid, "expected e coordinates");
  const size_t m = static_cast<size_t>(base_->m());
  Coeffs c(static_cast<size_t>(e_) * m, 0);
  int prec = cap();
  for (size_t j = 0; j < coords.size(); ++j) {
    if (coords[j].ctx_ptr() != base_.get()) throw Error(ErrorCode::context_mismatch, "coordinate from another base ring");
    std::copy(coords[j].coeffs().begin(), coords[j].coeffs().end(), c.begin() + static_cast<long>(j * m));
    prec = std::min(prec, static_cast<int>(j) + e_ * coords[j].prec());
  }
  return RpiElem(this, std::move(c), prec);
}

RpiElem RamCtx::pi() const { return shift_up(one()); }

RpiElem RamCtx::p_over_pi() const { return rpi_mul_pi(one(), e_ - 1); }

RpiElem RamCtx::random(std::mt19937_64& rng, int prec) const {
  Coeffs c(static_cast<size_t>(e_ * base_->m()), 0);
  for (u64& v : c) v = rng() % base_->mod().value();
  return RpiElem(this, std::move(c), prec);
}

RpiElem RamCtx::random_unit(std::mt19937_64& rng, int prec) const {
  for (;;) {
    RpiElem a = random(rng, prec);
    if (!rpi_residue(a).is_zero()) return a;
  }
}

RpiElem::RpiElem(const RamCtx* ctx, Coeffs coords, int prec)
    : ctx_(ctx), c_(std::move(coords)), prec_(std::clamp(prec, 0, ctx->cap())) {
  ctx_->normalize(c_, prec_);
}

bool RpiElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

RpiElem operator+(const RpiElem& a, const RpiElem& b) {
  require_same_ctx(a, b);
  const Modulus& mod = a.ctx_->base().mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.add(a.c_[i], b.c_[i]);
  return RpiElem(a.ctx_, std::move(c), std::min(a.prec_, b.prec_));
}

RpiElem operator-(const RpiElem& a, const RpiElem& b) {
  require_same_ctx(a, b);
  const Modulus& mod = a.ctx_->base().mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.sub(a.c_[i], b.c_[i]);
  return RpiElem(a.ctx_, std::move(c), std::min(a.prec_, b.prec_));
}

RpiElem operator-(const RpiElem& a) {
  const Modulus& mod = a.ctx_->base().mod();
  Coeffs c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = mod.neg(a.c_[i]);
  return RpiElem(a.ctx_, std::move(c), a.prec_);
}

RpiElem operator*(const RpiElem& a, const RpiElem& b) {
  require_same_ctx(a, b);
  const RamCtx& ctx = *a.ctx_;
  const BaseCtx& base = ctx.base();
  const Modulus& mod = base.mod();
  const size_t m = static_cast<size_t>(base.m());
  const size_t e = static_cast<size_t>(ctx.e());
  Coeffs acc((2 * e - 1) * m, 0);
  Coeffs tmp(m, 0);
  for (size_t j = 0; j < e; ++j) {
    const u64* aj = a.c_.data() + j * m;
    if (std::all_of(aj, aj + m, [](u64 v) { return v == 0; })) continue;
    for (size_t k = 0; k < e; ++k) {
      const u64* bk = b.c_.data() + k * m;
      if (std::all_of(bk, bk + m, [](u64 v) { return v == 0; })) continue;
      base.mul_raw(aj, bk, tmp.data());
      u64* dst = acc.data() + (j + k) * m;
      for (size_t t = 0; t < m; ++t) dst[t] = mod.add(dst[t], tmp[t]);
    }
  }
  const u64 p = base.p();
  for (size_t l = 2 * e - 1; l-- > e;)
    for (size_t t = 0; t < m; ++t)
      acc[(l - e) * m + t] = mod.add(acc[(l - e) * m + t], mod.mul(acc[l * m + t], p));
  acc.resize(e * m);
  return RpiElem(a.ctx_, std::move(acc), std::min(a.prec_, b.prec_));
}

RpiElem pow(const RpiElem& a, u64 e) {
  RpiElem result = rpi_truncate(a.ctx().one(), a.prec());
  RpiElem base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

int rpi_val(const RpiElem& a) {
  const RamCtx& ctx = a.ctx();
  const size_t m = static_cast<size_t>(ctx.base().m());
  const u64 p = ctx.base().p();
  int v = a.prec();
  for (int j = 0; j < ctx.e(); ++j)
    for (size_t t = 0; t < m; ++t) {
      const u64 c = a.raw()[static_cast<size_t>(j) * m + t];
      if (c != 0) v = std::min(v, j + ctx.e() * valuation(c, p));
    }
  return v;
}

RpiElem rpi_truncate(const RpiElem& a, int prec) {
  return RpiElem(a.ctx_ptr(), a.raw(), std::min(prec, a.prec()));
}

RpiElem rpi_mul_pi(const RpiElem& a, int j) {
  RpiElem r = a;
  for (int i = 0; i < j; ++i) r = shift_up(r);
  return r;
}

RpiElem rpi_div_pi(const RpiElem& a, int j) {
  if (j > a.prec()) throw Error(ErrorCode::precision_exhausted, "division by pi^j beyond known precision");
  RpiElem r = a;
  for (int i = 0; i < j; ++i) r = shift_down(r);
  return r;
}

Fq rpi_residue(const RpiElem& a) {
  if (a.prec() < 1) throw Error(ErrorCode::precision_exhausted, "residue of an element with no known digits");
  const size_t m = static_cast<size_t>(a.ctx().base().m());
  const u64 p = a.ctx().base().p();
  std::vector<u64> c(a.raw().begin(), a.raw().begin() + static_cast<long>(m));
  for (u64& v : c) v %= p;
  return a.ctx().field().from_coeffs(c);
}

RpiElem rpi_invert(const RpiElem& a) {
  const Fq r = rpi_residue(a);
  if (r.is_zero()) throw Error(ErrorCode::not_a_unit, "R_pi element is divisible by pi");
  const RamCtx& ctx = a.ctx();
  RpiElem y = rpi_truncate(ctx.lift(inverse(r)), a.prec());
  const RpiElem two = ctx.from_int(2);
  for (int known = 1; known < a.prec(); known *= 2) y = y * (two - a * y);
  return y;
}

RpiElem rpi_phi(const RpiElem& a, int i) {
  const RamCtx& ctx = a.ctx();
  if (i < 0 || i >= ctx.n()) throw Error(ErrorCode::config_invalid, "direction index out of range");
  const BaseCtx& base = ctx.base();
  const size_t m = static_cast<size_t>(base.m());
  Coeffs c(a.raw().size());
  Coeffs tmp(m, 0);
  for (int j = 0; j < ctx.e(); ++j) {
    const size_t off = static_cast<size_t>(j) * m;
    base.frob_raw(a.raw().data() + off, ctx.s(), tmp.data());
    base.mul_raw(ctx.zeta_power(i, j).data(), tmp.data(), c.data() + off);
  }
  return RpiElem(&ctx, std::move(c), a.prec());
}

RpiElem rpi_delta(const RpiElem& a, int i) {
  if (a.prec() < 2) throw Error(ErrorCode::precision_exhausted, "pi-derivation needs precision at least 2");
  return rpi_div_pi(rpi_phi(a, i) - pow(a, a.ctx().ps()), 1);
}

RpiElem rpi_phi_word(const RpiElem& a, const Word& mu) {
  RpiElem r = a;
  for (auto it = mu.rbegin(); it != mu.rend(); ++it) r = rpi_phi(r, *it);
  return r;
}

RpiElem rpi_delta_word(const RpiElem& a, const Word& mu) {
  if (a.prec() < 2) throw Error(ErrorCode::precision_exhausted, "pi-derivation needs precision at least 2");
  u64 exponent = 1;
  for (size_t k = 0; k < mu.size(); ++k) exponent = exponent * a.ctx().ps();
  return rpi_div_pi(rpi_phi_word(a, mu) - pow(a, exponent), 1);
}

std::vector<WElem> rpi_theta_coords(const RpiElem& a) {
  const RamCtx& ctx = a.ctx();
  const size_t m = static_cast<size_t>(ctx.base().m());
  std::vector<WElem> out;
  for (int j = 0; j < ctx.e(); ++j) {
    const auto first = a.raw().begin() + static_cast<long>(static_cast<size_t>(j) * m);
    out.emplace_back(&ctx.base(), Coeffs(first, first + static_cast<long>(m)), ctx.coord_prec(a.prec(), j));
  }
  return out;
}

RpiElem rpi_cp_carry(const RpiElem& x, const RpiElem& y) {
  require_same_ctx(x, y);
  const RamCtx& ctx = x.ctx();
  const u64 ps = ctx.ps();
  const int prec = std::min(x.prec(), y.prec());
  std::vector<RpiElem> xk{rpi_truncate(ctx.one(), prec)}, yk{rpi_truncate(ctx.one(), prec)};
  for (u64 k = 1; k < ps; ++k) {
    xk.push_back(xk.back() * x);
    yk.push_back(yk.back() * y);
  }
  RpiElem sum = rpi_truncate(ctx.zero(), prec);
  for (u64 k = 1; k < ps; ++k) {
    const u64 coeff = binomial_over_p(ps, k, ctx.base().p(), ctx.base().K());
    sum = sum + ctx.from_int(static_cast<i64>(coeff)) * xk[k] * yk[ps - k];
  }
  return -sum;
}

}  // namespace pigeom
