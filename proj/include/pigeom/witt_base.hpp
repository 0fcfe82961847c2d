#pragma once

// The unramified base W = (Z/p^K)[x]/(F), where F is the lift of the residue
// modulus whose roots are Teichmueller, so that the Frobenius lift is x -> x^p.
// Every element carries an absolute precision: it is known modulo p^prec.

#include <memory>
#include <random>
#include <vector>

#include "pigeom/arith.hpp"
#include "pigeom/base_field.hpp"

namespace pigeom {

class BaseCtx;

class WElem {
 public:
  WElem() = default;
  // Coefficients are reduced modulo p^prec; 0 <= prec <= K.
  WElem(const BaseCtx* ctx, Coeffs coeffs, int prec);

  const BaseCtx& ctx() const { return *ctx_; }
  const BaseCtx* ctx_ptr() const { return ctx_; }
  const Coeffs& coeffs() const { return c_; }
  int prec() const { return prec_; }
  bool is_zero() const;

  // Exact representation equality, precision included.
  friend bool operator==(const WElem& a, const WElem& b) {
    return a.prec_ == b.prec_ && a.c_ == b.c_;
  }
  friend WElem operator+(const WElem& a, const WElem& b);
  friend WElem operator-(const WElem& a, const WElem& b);
  friend WElem operator-(const WElem& a);
  friend WElem operator*(const WElem& a, const WElem& b);

 private:
  const BaseCtx* ctx_ = nullptr;
  Coeffs c_;
  int prec_ = 0;
};

WElem pow(const WElem& a, u64 e);
int w_val(const WElem& a);  // capped at prec
WElem w_truncate(const WElem& a, int prec);
WElem w_mul_p(const WElem& a, int j);
WElem w_div_p(const WElem& a, int j);  // throws not_divisible
WElem w_frobenius(const WElem& a, unsigned s);
WElem w_delta(const WElem& a, unsigned s);
WElem w_teichmueller(const BaseCtx& ctx, const Fq& alpha);
WElem w_invert(const WElem& a);
WElem w_p_integrate(const WElem& b, unsigned s);
WElem cp_carry(const WElem& x, const WElem& y, unsigned s);
Fq w_residue(const WElem& a);
// Coefficientwise lift with digits in [0, p), at precision K.
WElem w_lift(const BaseCtx& ctx, const Fq& alpha);
// Moves an element into another precision level over the same residue field.
WElem w_change_ring(const WElem& a, const BaseCtx& target);
// a and b agree modulo p^k (both must be known to at least that precision).
bool w_congruent(const WElem& a, const WElem& b, int k);

class BaseCtx {
 public:
  using Elem = WElem;

  static std::shared_ptr<const BaseCtx> make(std::shared_ptr<const FieldCtx> field, int K);

  BaseCtx(const BaseCtx&) = delete;
  BaseCtx& operator=(const BaseCtx&) = delete;

  const FieldCtx& field() const { return *field_; }
  const BaseCtx& base() const { return *this; }
  const std::shared_ptr<const FieldCtx>& field_ptr() const { return field_; }
  u64 p() const { return field_->p(); }
  int m() const { return field_->m(); }
  int K() const { return K_; }
  u64 p_power(int k) const { return pk_[static_cast<size_t>(k)]; }
  const Modulus& mod() const { return mod_; }
  const std::vector<u64>& modulus_lift() const { return lift_; }
  // Matrix of phi^k on the power basis, row-major m x m.
  const std::vector<u64>& frobenius_matrix(unsigned k) const {
    return frob_[k % static_cast<unsigned>(m())];
  }

  WElem zero() const { return from_int(0); }
  WElem one() const { return from_int(1); }
  WElem from_int(i64 v) const;
  WElem from_coeffs(const std::vector<u64>& c, int prec) const;
  WElem random(std::mt19937_64& rng, int prec) const;

  // Ring interface shared with the ramified and series rings; the
  // uniformizer of W is p.
  int cap() const { return K_; }
  WElem div_pi(const WElem& a, int j) const { return w_div_p(a, j); }
  WElem mul_pi(const WElem& a, int j) const { return w_mul_p(a, j); }
  WElem invert(const WElem& a) const { return w_invert(a); }
  bool is_zero(const WElem& a) const { return a.is_zero(); }
  int valuation(const WElem& a) const { return w_val(a); }
  int precision(const WElem& a) const { return a.prec(); }
  Fq residue(const WElem& a) const { return w_residue(a); }
  WElem lift(const Fq& a) const { return w_lift(*this, a); }
  WElem truncate(const WElem& a, int prec) const { return w_truncate(a, prec); }

  void mul_raw(const u64* a, const u64* b, u64* out) const;
  void frob_raw(const u64* a, unsigned k, u64* out) const;
  void normalize(Coeffs& c, int prec) const;

 private:
  BaseCtx(std::shared_ptr<const FieldCtx> field, int K);

  std::shared_ptr<const FieldCtx> field_;
  int K_;
  Modulus mod_;
  std::vector<u64> pk_;
  std::vector<u64> lift_;  // monic, low degree first
  std::vector<std::vector<u64>> frob_;
};

}  // namespace pigeom
