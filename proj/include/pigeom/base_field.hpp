#pragma once

// The finite residue field F_{p^m} = F_p[x]/(modulus).

#include <memory>
#include <optional>
#include <vector>

#include "pigeom/arith.hpp"

namespace pigeom {

class FieldCtx;

class Fq {
 public:
  Fq() = default;
  Fq(const FieldCtx* ctx, Coeffs coeffs);

  const FieldCtx& ctx() const { return *ctx_; }
  const FieldCtx* ctx_ptr() const { return ctx_; }
  const Coeffs& coeffs() const { return c_; }
  bool is_zero() const;
  bool is_one() const;

  friend bool operator==(const Fq& a, const Fq& b) { return a.c_ == b.c_; }
  friend Fq operator+(const Fq& a, const Fq& b);
  friend Fq operator-(const Fq& a, const Fq& b);
  friend Fq operator-(const Fq& a);
  friend Fq operator*(const Fq& a, const Fq& b);

 private:
  const FieldCtx* ctx_ = nullptr;
  Coeffs c_;
};

Fq pow(const Fq& a, u64 e);
Fq inverse(const Fq& a);  // throws not_a_unit on 0

class FieldCtx {
 public:
  // Builds F_{p^m}. Without a modulus, the first monic irreducible polynomial in
  // lexicographic order of (c_0, ..., c_{m-1}) is used; the generator is the
  // first element of full order in the same ordering.
  static std::shared_ptr<const FieldCtx> make(u64 p, int m,
                                              std::optional<std::vector<u64>> modulus = std::nullopt);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  u64 p() const { return p_; }
  int m() const { return m_; }
  u64 order() const { return q_; }  // p^m
  const Modulus& mod_p() const { return mod_; }
  const std::vector<u64>& modulus() const { return modulus_; }  // low degree first, monic
  const Fq& generator() const { return generator_; }

  Fq zero() const;
  Fq one() const;
  Fq from_int(i64 v) const;
  Fq from_coeffs(const std::vector<u64>& c) const;
  // Elements enumerated by the base-p digits of idx, coefficient 0 first.
  Fq element(u64 idx) const;
  u64 index_of(const Fq& a) const;

  // Multiplicative order of a nonzero element.
  u64 order_of(const Fq& a) const;

  void mul_raw(const u64* a, const u64* b, u64* out) const;

 private:
  FieldCtx(u64 p, int m, std::vector<u64> modulus);

  u64 p_;
  int m_;
  u64 q_;
  Modulus mod_;
  std::vector<u64> modulus_;
  std::vector<u64> order_factors_;
  Fq generator_;
};

Fq fq_frobenius(const Fq& a, unsigned s);
Fq fq_inv_frobenius(const Fq& a, unsigned s);
// tau^{j (p^m - 1)/e} for the context generator tau; throws config_invalid if e does not divide p^m - 1.
Fq fq_root_of_unity(const FieldCtx& ctx, u64 e, u64 j);

// Whether a monic polynomial over F_p (low degree first) is irreducible.
bool is_irreducible(const std::vector<u64>& poly, u64 p);

}  // namespace pigeom
