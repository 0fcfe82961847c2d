#pragma once

// First-order arithmetic ODEs over W, and parallel transport and geodesics
// for a pi-connection with e = n = N. Curves, velocities and transported
// vectors live over W; only the Christoffel symbols at the identity come from
// R_pi, through their coordinates in the basis 1, pi, ..., pi^{e-1}.

#include <functional>
#include <memory>
#include <vector>

#include "pigeom/connections.hpp"
#include "pigeom/delta_poly.hpp"
#include "pigeom/matrix_ring.hpp"

namespace pigeom {

using WVec = std::vector<WElem>;
using FqVec = std::vector<Fq>;

// d u = F(u, phi^s u) / G(u, phi^s u) for u in W^dim, d the degree-s p-derivation.
struct OdeSystem {
  int dim = 0;
  unsigned s = 1;
  std::function<WVec(const WVec& u, const WVec& u_phi)> numer;
  std::function<WElem(const WVec& u, const WVec& u_phi)> denom;  // empty means 1
};

WVec ode_rhs(const OdeSystem& sys, const WVec& u);
// d u - F/G, precision one less than u.
WVec ode_residual(const OdeSystem& sys, const WVec& u);
// The unique solution congruent to u0 mod p, known mod p^depth; its residual
// vanishes mod p^{depth-1}.
WVec ode_solve(const OdeSystem& sys, const WVec& u0, int depth);

WVec vec_delta(const WVec& a, unsigned s);
WVec vec_frobenius(const WVec& a, unsigned s);
WVec vec_truncate(const WVec& a, int prec);
WVec vec_scale(const WElem& c, const WVec& a);
FqVec vec_residue(const WVec& a);
WVec vec_lift(const BaseCtx& W, const FqVec& a);
int vec_valuation(const WVec& a);
int vec_precision(const WVec& a);

struct Curve {
  WVec c;
  WVec v;  // velocity d c, or the solver's value for it
};

Curve make_curve(WVec c, unsigned s);

class GeodesicCtx {
 public:
  // gamma_theta[((i n + j) n + k) n + l] is the l-th coordinate of Gamma^k_{ij}(1).
  GeodesicCtx(std::shared_ptr<const BaseCtx> W, unsigned s, WVec r, WVec gamma_theta);

  // gamma(i, j, k) = Gamma^k_{ij}(1); requires e = n = N.
  static GeodesicCtx from_christoffel(const RamCtx& ram, const Tensor3<RpiElem>& gamma,
                                      std::shared_ptr<const BaseCtx> W);
  // The pointwise connection at x = 1.
  static GeodesicCtx from_connection(const RamCtx& ram, const Connection<RpiElem>& at_identity,
                                     std::shared_ptr<const BaseCtx> W);

  const BaseCtx& W() const { return *W_; }
  const std::shared_ptr<const BaseCtx>& W_ptr() const { return W_; }
  unsigned s() const { return s_; }
  int n() const { return n_; }
  const WVec& r() const { return r_; }
  const WElem& gamma_theta(int i, int j, int k, int l) const {
    return gamma_[static_cast<size_t>(((i * n_ + j) * n_ + k) * n_ + l)];
  }
  // Relabels coordinates, directions and matrix columns by sigma.
  GeodesicCtx permuted(const std::vector<int>& sigma) const;

 private:
  std::shared_ptr<const BaseCtx> W_;
  unsigned s_;
  int n_;
  WVec r_;
  WVec gamma_;
};

bool is_nondegenerate(const GeodesicCtx& ctx, const Curve& c);

// sum_l r_l c_l, the image of p/pi under the curve.
WElem curve_p_over_pi(const GeodesicCtx& ctx, const WVec& c);
// alpha with d w = alpha w^{phi^s} for vectors parallel along c.
Mat<WElem> transport_matrix(const GeodesicCtx& ctx, const Curve& c);
// beta = alpha + p alpha^2 + p^2 alpha^3 + ..., so that d w = beta w^{(p^s)}.
Mat<WElem> power_form(const Mat<WElem>& alpha);

// The derivative of w along c; zero iff w is parallel along c.
WVec derivative_along(const GeodesicCtx& ctx, const Curve& c, const WVec& w);
WVec acceleration(const GeodesicCtx& ctx, const Curve& c);
// d w_k + (normalised connection term), zero iff w is parallel.
WVec transport_residual(const GeodesicCtx& ctx, const Curve& c, const WVec& w);
// d^2 c_k + (connection term in d c), zero iff c is a geodesic.
WVec second_order_residual(const GeodesicCtx& ctx, const WVec& c);

WVec parallel_transport(const GeodesicCtx& ctx, const Curve& c, const WVec& w0, int depth);
Curve geodesic(const GeodesicCtx& ctx, const Curve& c0, int depth);

// Residue-level maps through evaluation at a delta polynomial.
FqVec par_map(const GeodesicCtx& ctx, const Curve& c, const DeltaPoly& P, const FqVec& lambda, int depth);
FqVec exp_map(const GeodesicCtx& ctx, const FqVec& origin, const FqVec& direction, const DeltaPoly& P, int depth);
FqVec trans_map(const OdeSystem& sys, const BaseCtx& W, const DeltaPoly& P, const FqVec& lambda0, int depth);

// A curve c0 with c0 = origin and d c0 = direction mod p.
WVec curve_with_tangent(const BaseCtx& W, unsigned s, const FqVec& origin, const FqVec& direction);

}  // namespace pigeom
