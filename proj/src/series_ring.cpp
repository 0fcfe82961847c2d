#include "pigeom/series_ring.hpp"

#include <algorithm>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

void require_same_ctx(const SeriesElem& a, const SeriesElem& b) {
  if (a.ctx_ptr() != b.ctx_ptr()) throw Error(ErrorCode::context_mismatch, "series from different contexts");
}

// All exponent vectors over `vars` variables with total degree exactly d.
void enumerate(int vars, int d, std::vector<int>& cur, int pos, std::vector<std::vector<int>>& out) {
  if (pos == vars - 1) {
    cur[static_cast<size_t>(pos)] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[static_cast<size_t>(pos)] = k;
    enumerate(vars, d - k, cur, pos + 1, out);
  }
}

}  // namespace

std::shared_ptr<const SeriesCtx> SeriesCtx::make(std::shared_ptr<const RamCtx> ram, int N, int D) {
  if (!ram) throw Error(ErrorCode::config_invalid, "missing coefficient ring");
  if (N < 1) throw Error(ErrorCode::config_invalid, "matrix size N must be at least 1");
  if (D < 1) throw Error(ErrorCode::config_invalid, "degree cap D must be at least 1");
  return std::shared_ptr<const SeriesCtx>(new SeriesCtx(std::move(ram), N, D));
}

SeriesCtx::SeriesCtx(std::shared_ptr<const RamCtx> ram, int N, int D) : ram_(std::move(ram)), N_(N), D_(D) {
  const int vars = N_ * N_;
  std::vector<int> cur(static_cast<size_t>(vars), 0);
  for (int d = 0; d <= D_; ++d) {
    const size_t before = monomials_.size();
    enumerate(vars, d, cur, 0, monomials_);
    degrees_.insert(degrees_.end(), monomials_.size() - before, d);
  }
  for (size_t i = 0; i < monomials_.size(); ++i) index_.emplace(monomials_[i], i);
  std::vector<int> sum(static_cast<size_t>(vars));
  for (size_t i = 0; i < monomials_.size(); ++i)
    for (size_t j = 0; j < monomials_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > D_) continue;
      for (size_t v = 0; v < sum.size(); ++v) sum[v] = monomials_[i][v] + monomials_[j][v];
      products_.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j),
                           static_cast<std::uint32_t>(index_.at(sum))});
    }
}

size_t SeriesCtx::index_of(const std::vector<int>& exponents) const {
  const auto it = index_.find(exponents);
  if (it == index_.end()) throw Error(ErrorCode::config_invalid, "monomial outside the truncation");
  return it->second;
}

SeriesElem SeriesCtx::constant(const RpiElem& c) const {
  if (c.ctx_ptr() != ram_.get()) throw Error(ErrorCode::context_mismatch, "constant from another R_pi context");
  std::vector<RpiElem> coeffs(size(), ram_->zero());
  coeffs[0] = c;
  return SeriesElem(this, std::move(coeffs));
}

SeriesElem SeriesCtx::variable(int a, int b) const {
  if (a < 0 || b < 0 || a >= N_ || b >= N_) throw Error(ErrorCode::config_invalid, "variable index out of range");
  std::vector<int> exps(static_cast<size_t>(num_vars()), 0);
  exps[static_cast<size_t>(a * N_ + b)] = 1;
  std::vector<RpiElem> coeffs(size(), ram_->zero());
  coeffs[index_of(exps)] = ram_->one();
  return SeriesElem(this, std::move(coeffs));
}

SeriesElem SeriesCtx::random(std::mt19937_64& rng, int prec) const {
  std::vector<RpiElem> coeffs;
  coeffs.reserve(size());
  for (size_t i = 0; i < size(); ++i) coeffs.push_back(ram_->random(rng, prec));
  return SeriesElem(this, std::move(coeffs));
}

SeriesElem::SeriesElem(const SeriesCtx* ctx, std::vector<RpiElem> coeffs) : ctx_(ctx), c_(std::move(coeffs)) {
  if (c_.size() != ctx_->size()) throw Error(ErrorCode::config_invalid, "coefficient count mismatch");
}

bool SeriesElem::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const RpiElem& c) { return c.is_zero(); });
}

SeriesElem operator+(const SeriesElem& a, const SeriesElem& b) {
  require_same_ctx(a, b);
  std::vector<RpiElem> c;
  c.reserve(a.c_.size());
  for (size_t i = 0; i < a.c_.size(); ++i) c.push_back(a.c_[i] + b.c_[i]);
  return SeriesElem(a.ctx_, std::move(c));
}

SeriesElem operator-(const SeriesElem& a, const SeriesElem& b) {
  require_same_ctx(a, b);
  std::vector<RpiElem> c;
  c.reserve(a.c_.size());
  for (size_t i = 0; i < a.c_.size(); ++i) c.push_back(a.c_[i] - b.c_[i]);
  return SeriesElem(a.ctx_, std::move(c));
}

SeriesElem operator-(const SeriesElem& a) {
  std::vector<RpiElem> c;
  c.reserve(a.c_.size());
  for (const RpiElem& x : a.c_) c.push_back(-x);
  return SeriesElem(a.ctx_, std::move(c));
}

SeriesElem operator*(const SeriesElem& a, const SeriesElem& b) {
  require_same_ctx(a, b);
  const SeriesCtx& ctx = *a.ctx_;
  // Start every coefficient at full precision; each contribution lowers it.
  std::vector<RpiElem> c(ctx.size(), ctx.ram().zero());
  for (const auto& [i, j, k] : ctx.products()) c[k] = c[k] + a.c_[i] * b.c_[j];
  return SeriesElem(a.ctx_, std::move(c));
}

SeriesElem pow(const SeriesElem& a, u64 e) {
  SeriesElem result = a.ctx().one();
  SeriesElem base = a;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

SeriesElem ser_scale(const RpiElem& c, const SeriesElem& a) {
  std::vector<RpiElem> out;
  out.reserve(a.coeffs().size());
  for (const RpiElem& x : a.coeffs()) out.push_back(c * x);
  return SeriesElem(a.ctx_ptr(), std::move(out));
}

SeriesElem ser_invert(const SeriesElem& a) {
  const SeriesCtx& ctx = a.ctx();
  const RpiElem c0_inv = rpi_invert(a.coeff(0));
  // a = c0 (1 + n) with n in P, and n^{D+1} = 0 in T.
  const SeriesElem n = ser_scale(c0_inv, a) - ctx.one();
  SeriesElem term = ctx.one();
  SeriesElem sum = ctx.one();
  for (int k = 1; k <= ctx.D(); ++k) {
    term = -(term * n);
    sum = sum + term;
  }
  return ser_scale(c0_inv, sum);
}

RpiElem ser_eval_at_one(const SeriesElem& a) { return a.coeff(0); }

SeriesElem ser_reduce_mod(const SeriesElem& a, int pi_power, bool include_P) {
  std::vector<RpiElem> out;
  out.reserve(a.coeffs().size());
  const RamCtx& R = a.ctx().ram();
  for (size_t i = 0; i < a.coeffs().size(); ++i) {
    if (include_P && i > 0)
      out.push_back(rpi_truncate(R.zero(), pi_power));
    else
      out.push_back(rpi_truncate(a.coeff(i), pi_power));
  }
  return SeriesElem(a.ctx_ptr(), std::move(out));
}

SeriesElem ser_div_pi(const SeriesElem& a, int j) {
  std::vector<RpiElem> out;
  out.reserve(a.coeffs().size());
  for (const RpiElem& x : a.coeffs()) out.push_back(rpi_div_pi(x, j));
  return SeriesElem(a.ctx_ptr(), std::move(out));
}

SeriesElem ser_mul_pi(const SeriesElem& a, int j) {
  std::vector<RpiElem> out;
  out.reserve(a.coeffs().size());
  for (const RpiElem& x : a.coeffs()) out.push_back(rpi_mul_pi(x, j));
  return SeriesElem(a.ctx_ptr(), std::move(out));
}

int ser_val(const SeriesElem& a) {
  int v = a.ctx().cap();
  for (const RpiElem& x : a.coeffs()) v = std::min(v, rpi_val(x));
  return v;
}

int ser_prec(const SeriesElem& a) {
  int v = a.ctx().cap();
  for (const RpiElem& x : a.coeffs()) v = std::min(v, x.prec());
  return v;
}

RpiElem ser_eval(const SeriesElem& a, const std::vector<RpiElem>& values) {
  const SeriesCtx& ctx = a.ctx();
  if (values.size() != static_cast<size_t>(ctx.num_vars()))
    throw Error(ErrorCode::config_invalid, "expected one value per variable");
  RpiElem sum = ctx.ram().zero();
  for (size_t i = 0; i < ctx.size(); ++i) {
    RpiElem term = a.coeff(i);
    const auto& exps = ctx.monomials()[i];
    for (size_t v = 0; v < exps.size(); ++v)
      if (exps[v] > 0) term = term * pow(values[v], static_cast<u64>(exps[v]));
    sum = sum + term;
  }
  return sum;
}

}  // namespace pigeom
