#include "pigeom/delta_poly.hpp"

#include <algorithm>
#include <string>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

void trim(DeltaPoly::Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

}  // namespace

DeltaPoly DeltaPoly::constant(const BaseCtx& ctx, const WElem& c) {
  DeltaPoly out(ctx);
  out.add_term({}, c);
  return out;
}

DeltaPoly DeltaPoly::variable(const BaseCtx& ctx, int i) {
  if (i < 0) throw Error(ErrorCode::config_invalid, "negative derivative index");
  Exponents e(static_cast<size_t>(i) + 1, 0);
  e.back() = 1;
  DeltaPoly out(ctx);
  out.add_term(std::move(e), ctx.one());
  return out;
}

void DeltaPoly::add_term(Exponents exps, const WElem& coeff) {
  if (coeff.ctx_ptr() != ctx_) throw Error(ErrorCode::context_mismatch, "coefficient from another ring");
  trim(exps);
  auto it = terms_.find(exps);
  const WElem sum = it == terms_.end() ? coeff : it->second + coeff;
  if (it != terms_.end()) terms_.erase(it);
  if (!sum.is_zero()) terms_.emplace(std::move(exps), sum);
}

int DeltaPoly::order() const {
  size_t r = 0;
  for (const auto& [e, c] : terms_) r = std::max(r, e.size());
  return r == 0 ? 0 : static_cast<int>(r) - 1;
}

u64 weighted_degree(const DeltaPoly::Exponents& exps, u64 p, unsigned s) {
  u64 deg = 0, w = 1;
  const u64 ps = checked_pow(p, s);
  for (unsigned e : exps) {
    deg += w * e;
    w *= ps;
  }
  return deg;
}

std::optional<u64> DeltaPoly::homogeneous_degree(unsigned s) const {
  std::optional<u64> d;
  for (const auto& [e, c] : terms_) {
    const u64 de = weighted_degree(e, ctx_->p(), s);
    if (d && *d != de) return std::nullopt;
    d = de;
  }
  return d.value_or(0);
}

bool DeltaPoly::congruent_mod_p(const DeltaPoly& other) const {
  auto nonzero_residues = [](const DeltaPoly& P) {
    std::map<Exponents, Fq> out;
    for (const auto& [e, c] : P.terms_) {
      Fq r = w_residue(c);
      if (!r.is_zero()) out.emplace(e, r);
    }
    return out;
  };
  return nonzero_residues(*this) == nonzero_residues(other);
}

DeltaPoly operator+(const DeltaPoly& a, const DeltaPoly& b) {
  DeltaPoly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

DeltaPoly operator*(const DeltaPoly& a, const DeltaPoly& b) {
  DeltaPoly out(*a.ctx_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      DeltaPoly::Exponents e(std::max(ea.size(), eb.size()), 0);
      for (size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
      for (size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
      out.add_term(std::move(e), ca * cb);
    }
  return out;
}

WElem eval_delta_poly(const DeltaPoly& P, const WElem& a, unsigned s) {
  if (a.ctx_ptr() != &P.ctx()) throw Error(ErrorCode::context_mismatch, "argument from another ring");
  const int r = P.order();
  if (a.prec() <= r)
    throw Error(ErrorCode::precision_exhausted,
                "argument precision " + std::to_string(a.prec()) + " does not exceed order " + std::to_string(r));
  std::vector<WElem> iter{a};
  for (int i = 1; i <= r; ++i) iter.push_back(w_delta(iter.back(), s));
  WElem sum = w_truncate(P.ctx().zero(), a.prec() - r);
  for (const auto& [e, c] : P.terms()) {
    WElem term = c;
    for (size_t i = 0; i < e.size(); ++i)
      if (e[i] != 0) term = term * pow(iter[i], e[i]);
    sum = sum + term;
  }
  return w_truncate(sum, a.prec() - r);
}

Fq eval_at(const DeltaPoly& P, const WElem& a, unsigned s) { return w_residue(eval_delta_poly(P, a, s)); }

std::vector<WElem> witt_coords(const WElem& a, int r) {
  if (r < 0) throw Error(ErrorCode::config_invalid, "negative coordinate count");
  if (a.prec() <= r)
    throw Error(ErrorCode::precision_exhausted,
                "precision " + std::to_string(a.prec()) + " does not determine " + std::to_string(r + 1) +
                    " coordinates");
  const u64 p = a.ctx().p();
  std::vector<WElem> x;
  for (int j = 0; j <= r; ++j) {
    WElem rest = w_frobenius(a, static_cast<unsigned>(j));
    for (int i = 0; i < j; ++i)
      rest = rest - w_truncate(w_mul_p(pow(x[static_cast<size_t>(i)], checked_pow(p, static_cast<unsigned>(j - i))), i),
                               a.prec());
    x.push_back(w_div_p(rest, j));
  }
  return x;
}

std::vector<WElem> ghost_components(const std::vector<WElem>& x) {
  std::vector<WElem> out;
  if (x.empty()) return out;
  const u64 p = x.front().ctx().p();
  for (size_t j = 0; j < x.size(); ++j) {
    WElem g = w_truncate(x.front().ctx().zero(), x.front().ctx().K());
    for (size_t i = 0; i <= j; ++i)
      g = g + w_mul_p(pow(x[i], checked_pow(p, static_cast<unsigned>(j - i))), static_cast<int>(i));
    out.push_back(g);
  }
  return out;
}

}  // namespace pigeom
