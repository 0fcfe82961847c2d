#pragma once

// Polynomials in t, t', t'', ... over W, evaluated by substituting iterated
// p-derivations, and the Witt coordinates of an element of W.

#include <map>
#include <optional>
#include <vector>

#include "pigeom/witt_base.hpp"

namespace pigeom {

class DeltaPoly {
 public:
  // exponents[i] is the power of t^{(i)}; trailing zeros are dropped.
  using Exponents = std::vector<unsigned>;

  explicit DeltaPoly(const BaseCtx& ctx) : ctx_(&ctx) {}

  static DeltaPoly constant(const BaseCtx& ctx, const WElem& c);
  // t^{(i)}
  static DeltaPoly variable(const BaseCtx& ctx, int i);

  const BaseCtx& ctx() const { return *ctx_; }
  const std::map<Exponents, WElem>& terms() const { return terms_; }
  void add_term(Exponents exps, const WElem& coeff);

  // Largest i with t^{(i)} present; 0 for constants and the zero polynomial.
  int order() const;
  // Degree with t^{(i)} weighted by p^{is}; nullopt unless homogeneous.
  std::optional<u64> homogeneous_degree(unsigned s) const;
  // Coefficients reduced mod p; equal residues give equal evaluation maps.
  bool congruent_mod_p(const DeltaPoly& other) const;

  friend DeltaPoly operator+(const DeltaPoly& a, const DeltaPoly& b);
  friend DeltaPoly operator*(const DeltaPoly& a, const DeltaPoly& b);

 private:
  const BaseCtx* ctx_;
  std::map<Exponents, WElem> terms_;
};

u64 weighted_degree(const DeltaPoly::Exponents& exps, u64 p, unsigned s);

// P(a, d a, d^2 a, ...) with d the degree-s p-derivation; precision drops by
// the order of P.
WElem eval_delta_poly(const DeltaPoly& P, const WElem& a, unsigned s);
// The residue of eval_delta_poly.
Fq eval_at(const DeltaPoly& P, const WElem& a, unsigned s);

// (x_0, ..., x_r) with sum_{i<=j} p^i x_i^{p^{j-i}} = phi^j(a) for j <= r.
std::vector<WElem> witt_coords(const WElem& a, int r);
// Ghost components of Witt coordinates; inverse of witt_coords.
std::vector<WElem> ghost_components(const std::vector<WElem>& x);

}  // namespace pigeom
