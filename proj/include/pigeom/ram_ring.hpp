#pragma once

// R_pi = W[pi]/(pi^e - p), a tame totally ramified extension of W, with n
// Frobenius lifts phi_i acting as phi^s on W and by pi -> zeta_i pi.
// Elements store e W-coordinates in the basis 1, pi, ..., pi^{e-1} and carry
// an absolute pi-adic precision.

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "pigeom/witt_base.hpp"

namespace pigeom {

class RamCtx;

class RpiElem {
 public:
  RpiElem() = default;
  // coords holds e*m words, coordinate j in [j*m, (j+1)*m).
  RpiElem(const RamCtx* ctx, Coeffs coords, int prec);

  const RamCtx& ctx() const { return *ctx_; }
  const RamCtx* ctx_ptr() const { return ctx_; }
  const Coeffs& raw() const { return c_; }
  int prec() const { return prec_; }
  bool is_zero() const;

  friend bool operator==(const RpiElem& a, const RpiElem& b) {
    return a.prec_ == b.prec_ && a.c_ == b.c_;
  }
  friend RpiElem operator+(const RpiElem& a, const RpiElem& b);
  friend RpiElem operator-(const RpiElem& a, const RpiElem& b);
  friend RpiElem operator-(const RpiElem& a);
  friend RpiElem operator*(const RpiElem& a, const RpiElem& b);

 private:
  const RamCtx* ctx_ = nullptr;
  Coeffs c_;
  int prec_ = 0;
};

// A finite sequence of direction indices (0-based); phi_mu applies the last
// letter first.
using Word = std::vector<int>;

RpiElem pow(const RpiElem& a, u64 e);
int rpi_val(const RpiElem& a);  // capped at prec
RpiElem rpi_truncate(const RpiElem& a, int prec);
RpiElem rpi_mul_pi(const RpiElem& a, int j);
RpiElem rpi_div_pi(const RpiElem& a, int j);  // throws not_divisible
RpiElem rpi_invert(const RpiElem& a);
Fq rpi_residue(const RpiElem& a);
RpiElem rpi_phi(const RpiElem& a, int i);
RpiElem rpi_delta(const RpiElem& a, int i);
RpiElem rpi_phi_word(const RpiElem& a, const Word& mu);
RpiElem rpi_delta_word(const RpiElem& a, const Word& mu);
std::vector<WElem> rpi_theta_coords(const RpiElem& a);
// (x^{p^s} + y^{p^s} - (x+y)^{p^s}) / p, evaluated from its integral expansion.
RpiElem rpi_cp_carry(const RpiElem& x, const RpiElem& y);

class RamCtx {
 public:
  using Elem = RpiElem;

  // zeta_exps[i] = j_i selects zeta_i = tau^{j_i (p^m - 1)/e}; prec_pi
  // defaults to e (K - 1).
  static std::shared_ptr<const RamCtx> make(std::shared_ptr<const BaseCtx> base, int e, unsigned s, int n,
                                            std::vector<u64> zeta_exps, std::optional<int> prec_pi = std::nullopt);

  RamCtx(const RamCtx&) = delete;
  RamCtx& operator=(const RamCtx&) = delete;

  const BaseCtx& base() const { return *base_; }
  const std::shared_ptr<const BaseCtx>& base_ptr() const { return base_; }
  const FieldCtx& field() const { return base_->field(); }
  int e() const { return e_; }
  unsigned s() const { return s_; }
  int n() const { return n_; }
  int M() const { return M_; }
  u64 ps() const { return ps_; }  // p^s
  const std::vector<u64>& zeta_exps() const { return zeta_exps_; }
  const WElem& zeta(int i) const { return zetas_[static_cast<size_t>(i)]; }
  const WElem& tau() const { return tau_; }
  int coord_prec(int prec, int j) const;

  RpiElem zero() const { return from_int(0); }
  RpiElem one() const { return from_int(1); }
  RpiElem from_int(i64 v) const;
  RpiElem from_w(const WElem& a) const;
  RpiElem from_coords(const std::vector<WElem>& coords) const;
  RpiElem pi() const;
  RpiElem p_over_pi() const;
  RpiElem random(std::mt19937_64& rng, int prec) const;
  RpiElem random_unit(std::mt19937_64& rng, int prec) const;

  // Ring interface.
  int cap() const { return e_ * base_->K(); }
  RpiElem div_pi(const RpiElem& a, int j) const { return rpi_div_pi(a, j); }
  RpiElem mul_pi(const RpiElem& a, int j) const { return rpi_mul_pi(a, j); }
  RpiElem invert(const RpiElem& a) const { return rpi_invert(a); }
  bool is_zero(const RpiElem& a) const { return a.is_zero(); }
  int valuation(const RpiElem& a) const { return rpi_val(a); }
  int precision(const RpiElem& a) const { return a.prec(); }
  Fq residue(const RpiElem& a) const { return rpi_residue(a); }
  RpiElem lift(const Fq& a) const { return from_w(w_lift(*base_, a)); }
  RpiElem constant(const RpiElem& a) const { return a; }
  RpiElem truncate(const RpiElem& a, int prec) const { return rpi_truncate(a, prec); }

  void normalize(Coeffs& c, int prec) const;
  // Coefficient action of phi_i on coordinate j: W-multiplication by zeta_i^j after phi^s.
  const Coeffs& zeta_power(int i, int j) const {
    return zeta_pows_[static_cast<size_t>(i * e_ + j)];
  }

 private:
  RamCtx(std::shared_ptr<const BaseCtx> base, int e, unsigned s, int n, std::vector<u64> zeta_exps, int M);

  std::shared_ptr<const BaseCtx> base_;
  int e_;
  unsigned s_;
  int n_;
  int M_;
  u64 ps_;
  std::vector<u64> zeta_exps_;
  WElem tau_;
  std::vector<WElem> zetas_;
  std::vector<Coeffs> zeta_pows_;
};

}  // namespace pigeom
