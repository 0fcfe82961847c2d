#pragma once

// T = R_pi[[u]] truncated above total degree D, in the N^2 variables
// u_{ab} = x_{ab} - delta_{ab}. Coefficients are stored densely, one RpiElem
// per monomial of degree <= D.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <vector>

#include "pigeom/ram_ring.hpp"

namespace pigeom {

class SeriesCtx;

class SeriesElem {
 public:
  SeriesElem() = default;
  SeriesElem(const SeriesCtx* ctx, std::vector<RpiElem> coeffs);

  const SeriesCtx& ctx() const { return *ctx_; }
  const SeriesCtx* ctx_ptr() const { return ctx_; }
  const std::vector<RpiElem>& coeffs() const { return c_; }
  const RpiElem& coeff(size_t monomial) const { return c_[monomial]; }
  bool is_zero() const;

  friend bool operator==(const SeriesElem& a, const SeriesElem& b) { return a.c_ == b.c_; }
  friend SeriesElem operator+(const SeriesElem& a, const SeriesElem& b);
  friend SeriesElem operator-(const SeriesElem& a, const SeriesElem& b);
  friend SeriesElem operator-(const SeriesElem& a);
  friend SeriesElem operator*(const SeriesElem& a, const SeriesElem& b);

 private:
  const SeriesCtx* ctx_ = nullptr;
  std::vector<RpiElem> c_;
};

SeriesElem pow(const SeriesElem& a, u64 e);
SeriesElem ser_invert(const SeriesElem& a);
RpiElem ser_eval_at_one(const SeriesElem& a);
// Canonical representative modulo pi^k, or modulo (pi^k, P) when include_P.
SeriesElem ser_reduce_mod(const SeriesElem& a, int pi_power, bool include_P);
SeriesElem ser_div_pi(const SeriesElem& a, int j);
SeriesElem ser_mul_pi(const SeriesElem& a, int j);
SeriesElem ser_scale(const RpiElem& c, const SeriesElem& a);
int ser_val(const SeriesElem& a);
int ser_prec(const SeriesElem& a);
// Substitutes u_{ab} = values[a*N + b].
RpiElem ser_eval(const SeriesElem& a, const std::vector<RpiElem>& values);

class SeriesCtx {
 public:
  using Elem = SeriesElem;

  static std::shared_ptr<const SeriesCtx> make(std::shared_ptr<const RamCtx> ram, int N, int D = 2);

  SeriesCtx(const SeriesCtx&) = delete;
  SeriesCtx& operator=(const SeriesCtx&) = delete;

  const RamCtx& ram() const { return *ram_; }
  const std::shared_ptr<const RamCtx>& ram_ptr() const { return ram_; }
  const BaseCtx& base() const { return ram_->base(); }
  const FieldCtx& field() const { return ram_->field(); }
  int N() const { return N_; }
  int D() const { return D_; }
  u64 ps() const { return ram_->ps(); }
  int num_vars() const { return N_ * N_; }
  size_t size() const { return monomials_.size(); }
  const std::vector<std::vector<int>>& monomials() const { return monomials_; }
  size_t index_of(const std::vector<int>& exponents) const;
  int degree(size_t monomial) const { return degrees_[monomial]; }
  // (i, j, k) with monomial_i * monomial_j = monomial_k.
  const std::vector<std::array<std::uint32_t, 3>>& products() const { return products_; }

  SeriesElem zero() const { return constant(ram_->zero()); }
  SeriesElem one() const { return constant(ram_->one()); }
  SeriesElem from_int(i64 v) const { return constant(ram_->from_int(v)); }
  SeriesElem constant(const RpiElem& c) const;
  SeriesElem variable(int a, int b) const;  // u_{ab}
  SeriesElem random(std::mt19937_64& rng, int prec) const;

  // Ring interface.
  int cap() const { return ram_->cap(); }
  SeriesElem div_pi(const SeriesElem& a, int j) const { return ser_div_pi(a, j); }
  SeriesElem mul_pi(const SeriesElem& a, int j) const { return ser_mul_pi(a, j); }
  SeriesElem invert(const SeriesElem& a) const { return ser_invert(a); }
  bool is_zero(const SeriesElem& a) const { return a.is_zero(); }
  int valuation(const SeriesElem& a) const { return ser_val(a); }
  int precision(const SeriesElem& a) const { return ser_prec(a); }
  Fq residue(const SeriesElem& a) const { return rpi_residue(a.coeff(0)); }
  SeriesElem lift(const Fq& a) const { return constant(ram_->lift(a)); }
  SeriesElem truncate(const SeriesElem& a, int prec) const { return ser_reduce_mod(a, prec, false); }

 private:
  SeriesCtx(std::shared_ptr<const RamCtx> ram, int N, int D);

  std::shared_ptr<const RamCtx> ram_;
  int N_;
  int D_;
  std::vector<std::vector<int>> monomials_;
  std::vector<int> degrees_;
  std::map<std::vector<int>, size_t> index_;
  std::vector<std::array<std::uint32_t, 3>> products_;
};

}  // namespace pigeom
