#include "pigeom/geodesics.hpp"

#include <algorithm>
#include <climits>
#include <string>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

const BaseCtx& ctx_of(const WVec& a) {
  if (a.empty()) throw Error(ErrorCode::config_invalid, "empty vector");
  return a.front().ctx();
}

WElem sum(const BaseCtx& W, const WVec& a) {
  WElem out = W.zero();
  for (const WElem& x : a) out = out + x;
  return out;
}

void require_dim(const WVec& a, int n, const char* what) {
  if (static_cast<int>(a.size()) != n)
    throw Error(ErrorCode::config_invalid, std::string(what) + " has length " + std::to_string(a.size()) +
                                               ", expected " + std::to_string(n));
}

// Moves a vector into the curve ring, which must share the residue field.
WVec to_ring(const BaseCtx& W, const WVec& a) {
  WVec out;
  out.reserve(a.size());
  for (const WElem& x : a) out.push_back(x.ctx_ptr() == &W ? x : w_change_ring(x, W));
  return out;
}

// sum_{ij} (sum_l Gamma^k_{ij,l} c_l) a_i b_j
WElem connection_term(const GeodesicCtx& ctx, const WVec& c, int k, const WVec& a, const WVec& b) {
  const int n = ctx.n();
  WElem out = ctx.W().zero();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      WElem g = ctx.W().zero();
      for (int l = 0; l < n; ++l) g = g + ctx.gamma_theta(i, j, k, l) * c[static_cast<size_t>(l)];
      out = out + g * a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    }
  return out;
}

WElem check_unit(const WElem& d, ErrorCode code, const char* what) {
  if (w_residue(d).is_zero()) throw Error(code, what);
  return d;
}

}  // namespace

WVec vec_delta(const WVec& a, unsigned s) {
  WVec out;
  for (const WElem& x : a) out.push_back(w_delta(x, s));
  return out;
}

WVec vec_frobenius(const WVec& a, unsigned s) {
  WVec out;
  for (const WElem& x : a) out.push_back(w_frobenius(x, s));
  return out;
}

WVec vec_truncate(const WVec& a, int prec) {
  WVec out;
  for (const WElem& x : a) out.push_back(w_truncate(x, prec));
  return out;
}

WVec vec_scale(const WElem& c, const WVec& a) {
  WVec out;
  for (const WElem& x : a) out.push_back(c * x);
  return out;
}

FqVec vec_residue(const WVec& a) {
  FqVec out;
  for (const WElem& x : a) out.push_back(w_residue(x));
  return out;
}

WVec vec_lift(const BaseCtx& W, const FqVec& a) {
  WVec out;
  for (const Fq& x : a) out.push_back(w_lift(W, x));
  return out;
}

int vec_valuation(const WVec& a) {
  int v = INT_MAX;
  for (const WElem& x : a) v = std::min(v, w_val(x));
  return v;
}

int vec_precision(const WVec& a) {
  int v = INT_MAX;
  for (const WElem& x : a) v = std::min(v, x.prec());
  return v;
}

WVec ode_rhs(const OdeSystem& sys, const WVec& u) {
  require_dim(u, sys.dim, "ODE state");
  const WVec u_phi = vec_frobenius(u, sys.s);
  WVec num = sys.numer(u, u_phi);
  require_dim(num, sys.dim, "ODE numerator");
  if (!sys.denom) return num;
  const WElem g = sys.denom(u, u_phi);
  return vec_scale(w_invert(check_unit(g, ErrorCode::degenerate_denominator, "denominator vanishes mod p")), num);
}

WVec ode_residual(const OdeSystem& sys, const WVec& u) {
  const WVec du = vec_delta(u, sys.s), f = ode_rhs(sys, u);
  WVec out;
  for (size_t k = 0; k < du.size(); ++k) out.push_back(du[k] - f[k]);
  return out;
}

WVec ode_solve(const OdeSystem& sys, const WVec& u0, int depth) {
  require_dim(u0, sys.dim, "initial value");
  const BaseCtx& W = ctx_of(u0);
  if (depth < 1 || depth > W.K())
    throw Error(ErrorCode::precision_exhausted, "depth " + std::to_string(depth) + " outside [1, K]");
  if (vec_precision(u0) < 1) throw Error(ErrorCode::precision_exhausted, "initial value unknown mod p");
  // Only u0 mod p matters; start from its digit lift so the output is canonical.
  WVec u = vec_truncate(vec_lift(W, vec_residue(u0)), depth);
  if (sys.denom) check_unit(sys.denom(u, vec_frobenius(u, sys.s)), ErrorCode::degenerate_denominator,
                            "denominator vanishes mod p at the initial value");
  for (int nu = 0; nu + 1 < depth; ++nu) {
    const WVec res = ode_residual(sys, u);
    if (vec_precision(res) < nu + 1)
      throw Error(ErrorCode::precision_exhausted,
                  "right-hand side known only mod p^" + std::to_string(vec_precision(res)));
    for (size_t k = 0; k < u.size(); ++k) {
      if (w_val(res[k]) < nu) throw Error(ErrorCode::precision_exhausted, "successive approximation lost a digit");
      const Fq c = w_residue(w_div_p(res[k], nu));
      // d(u + p^{nu+1} b) = d u + p^nu b^{p^s} mod p^{nu+1}, so b^{p^s} = -c.
      const Fq b = fq_inv_frobenius(-c, sys.s);
      u[k] = u[k] + w_mul_p(w_lift(W, b), nu + 1);
    }
  }
  return u;
}

Curve make_curve(WVec c, unsigned s) {
  if (vec_precision(c) < 2) throw Error(ErrorCode::precision_exhausted, "velocity needs precision 2");
  WVec v = vec_delta(c, s);
  return Curve{std::move(c), std::move(v)};
}

GeodesicCtx::GeodesicCtx(std::shared_ptr<const BaseCtx> W, unsigned s, WVec r, WVec gamma_theta)
    : W_(std::move(W)), s_(s), n_(static_cast<int>(r.size())) {
  const size_t n = static_cast<size_t>(n_);
  if (n == 0 || gamma_theta.size() != n * n * n * n)
    throw Error(ErrorCode::config_invalid, "need n^4 Christoffel coordinates for n = " + std::to_string(n));
  r_ = to_ring(*W_, r);
  gamma_ = to_ring(*W_, gamma_theta);
}

GeodesicCtx GeodesicCtx::from_christoffel(const RamCtx& ram, const Tensor3<RpiElem>& gamma,
                                          std::shared_ptr<const BaseCtx> W) {
  const int n = gamma.n();
  if (ram.e() != n || ram.n() != n)
    throw Error(ErrorCode::hypothesis_violated, "geodesics need e = n = N, got e = " + std::to_string(ram.e()) +
                                                    ", n = " + std::to_string(ram.n()) +
                                                    ", N = " + std::to_string(n));
  WVec coords;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (const WElem& x : rpi_theta_coords(gamma(i, j, k))) coords.push_back(x);
  return GeodesicCtx(std::move(W), ram.s(), rpi_theta_coords(ram.p_over_pi()), std::move(coords));
}

GeodesicCtx GeodesicCtx::from_connection(const RamCtx& ram, const Connection<RpiElem>& at_identity,
                                         std::shared_ptr<const BaseCtx> W) {
  return from_christoffel(ram, as_tensor(christoffel_second(ram, at_identity.lambdas)), std::move(W));
}

GeodesicCtx GeodesicCtx::permuted(const std::vector<int>& sigma) const {
  const int n = n_;
  if (static_cast<int>(sigma.size()) != n) throw Error(ErrorCode::config_invalid, "permutation of wrong size");
  std::vector<int> seen(static_cast<size_t>(n), 0);
  for (int x : sigma) {
    if (x < 0 || x >= n || seen[static_cast<size_t>(x)]++)
      throw Error(ErrorCode::config_invalid, "not a permutation");
  }
  auto at = [&](int i) { return sigma[static_cast<size_t>(i)]; };
  WVec r, g;
  for (int l = 0; l < n; ++l) r.push_back(r_[static_cast<size_t>(at(l))]);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) g.push_back(gamma_theta(at(i), at(j), at(k), at(l)));
  return GeodesicCtx(W_, s_, std::move(r), std::move(g));
}

WElem curve_p_over_pi(const GeodesicCtx& ctx, const WVec& c) {
  require_dim(c, ctx.n(), "curve");
  WElem out = ctx.W().zero();
  for (int l = 0; l < ctx.n(); ++l) out = out + ctx.r()[static_cast<size_t>(l)] * c[static_cast<size_t>(l)];
  return out;
}

bool is_nondegenerate(const GeodesicCtx& ctx, const Curve& c) {
  require_dim(c.v, ctx.n(), "velocity");
  return !w_residue(curve_p_over_pi(ctx, c.c)).is_zero() && !w_residue(sum(ctx.W(), c.v)).is_zero();
}

namespace {

void require_nondegenerate(const GeodesicCtx& ctx, const Curve& c) {
  if (!is_nondegenerate(ctx, c)) throw Error(ErrorCode::degenerate_curve, "curve is degenerate mod p");
}

// (sum_l r_l c_l)(sum_l v_l^{phi^s})
WElem transport_denominator(const GeodesicCtx& ctx, const WVec& c, const WVec& v_phi) {
  return curve_p_over_pi(ctx, c) * sum(ctx.W(), v_phi);
}

}  // namespace

Mat<WElem> transport_matrix(const GeodesicCtx& ctx, const Curve& c) {
  require_nondegenerate(ctx, c);
  const int n = ctx.n();
  const WVec v_phi = vec_frobenius(c.v, ctx.s());
  const WElem inv = w_invert(transport_denominator(ctx, c.c, v_phi));
  Mat<WElem> alpha(static_cast<size_t>(n), static_cast<size_t>(n), ctx.W().zero());
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      WVec e(static_cast<size_t>(n), ctx.W().zero());
      e[static_cast<size_t>(j)] = ctx.W().one();
      alpha(static_cast<size_t>(k), static_cast<size_t>(j)) = -(connection_term(ctx, c.c, k, v_phi, e) * inv);
    }
  return alpha;
}

Mat<WElem> power_form(const Mat<WElem>& alpha) {
  const BaseCtx& W = alpha(0, 0).ctx();
  Mat<WElem> beta = alpha, term = alpha;
  for (int k = 1; k < W.K(); ++k) {
    term = mat_mul_pi(W, term * alpha, 1);
    beta = beta + term;
  }
  return beta;
}

WVec derivative_along(const GeodesicCtx& ctx, const Curve& c, const WVec& w) {
  require_dim(w, ctx.n(), "vector");
  const WVec v_phi = vec_frobenius(c.v, ctx.s()), w_phi = vec_frobenius(w, ctx.s());
  const WElem lead = transport_denominator(ctx, c.c, v_phi);
  const WVec dw = vec_delta(w, ctx.s());
  WVec out;
  for (int k = 0; k < ctx.n(); ++k)
    out.push_back(lead * dw[static_cast<size_t>(k)] + connection_term(ctx, c.c, k, v_phi, w_phi));
  return out;
}

WVec acceleration(const GeodesicCtx& ctx, const Curve& c) { return derivative_along(ctx, c, c.v); }

WVec transport_residual(const GeodesicCtx& ctx, const Curve& c, const WVec& w) {
  require_nondegenerate(ctx, c);
  const WElem inv = w_invert(transport_denominator(ctx, c.c, vec_frobenius(c.v, ctx.s())));
  return vec_scale(inv, derivative_along(ctx, c, w));
}

WVec second_order_residual(const GeodesicCtx& ctx, const WVec& c) {
  if (vec_precision(c) < 3) throw Error(ErrorCode::precision_exhausted, "second derivative needs precision 3");
  return transport_residual(ctx, make_curve(c, ctx.s()), vec_delta(c, ctx.s()));
}

WVec parallel_transport(const GeodesicCtx& ctx, const Curve& c, const WVec& w0, int depth) {
  const Mat<WElem> alpha = transport_matrix(ctx, c);
  const int n = ctx.n();
  OdeSystem sys;
  sys.dim = n;
  sys.s = ctx.s();
  sys.numer = [alpha, n](const WVec&, const WVec& w_phi) {
    WVec out;
    for (int k = 0; k < n; ++k) {
      WElem x = w_phi.front().ctx().zero();
      for (int j = 0; j < n; ++j) x = x + alpha(static_cast<size_t>(k), static_cast<size_t>(j)) * w_phi[static_cast<size_t>(j)];
      out.push_back(x);
    }
    return out;
  };
  return ode_solve(sys, to_ring(ctx.W(), w0), depth);
}

Curve geodesic(const GeodesicCtx& ctx, const Curve& c0, int depth) {
  require_nondegenerate(ctx, c0);
  const int n = ctx.n();
  const size_t nn = static_cast<size_t>(n);
  // Unknowns (c, v) with d c = v and d v = -(connection term)/(denominator).
  OdeSystem sys;
  sys.dim = 2 * n;
  sys.s = ctx.s();
  auto split = [nn](const WVec& u) {
    return std::pair<WVec, WVec>{WVec(u.begin(), u.begin() + static_cast<long>(nn)),
                                 WVec(u.begin() + static_cast<long>(nn), u.end())};
  };
  sys.denom = [&ctx, split](const WVec& u, const WVec& u_phi) {
    return transport_denominator(ctx, split(u).first, split(u_phi).second);
  };
  sys.numer = [&ctx, split, n](const WVec& u, const WVec& u_phi) {
    const auto [c, v] = split(u);
    const WVec v_phi = split(u_phi).second;
    const WElem den = transport_denominator(ctx, c, v_phi);
    WVec out;
    for (const WElem& x : v) out.push_back(x * den);
    for (int k = 0; k < n; ++k) out.push_back(-connection_term(ctx, c, k, v_phi, v_phi));
    return out;
  };
  WVec u0 = to_ring(ctx.W(), c0.c);
  for (const WElem& x : to_ring(ctx.W(), c0.v)) u0.push_back(x);
  const auto [c, v] = split(ode_solve(sys, u0, depth));
  return Curve{c, v};
}

FqVec par_map(const GeodesicCtx& ctx, const Curve& c, const DeltaPoly& P, const FqVec& lambda, int depth) {
  const WVec w = parallel_transport(ctx, c, vec_lift(ctx.W(), lambda), depth);
  FqVec out;
  for (const WElem& x : w) out.push_back(eval_at(P, x, ctx.s()));
  return out;
}

WVec curve_with_tangent(const BaseCtx& W, unsigned s, const FqVec& origin, const FqVec& direction) {
  if (origin.size() != direction.size()) throw Error(ErrorCode::config_invalid, "origin and direction differ in length");
  WVec c;
  for (size_t l = 0; l < origin.size(); ++l) {
    const WElem a = w_lift(W, origin[l]);
    // d(a + p b) = d a + b^{p^s} mod p.
    const Fq b = fq_inv_frobenius(direction[l] - w_residue(w_delta(a, s)), s);
    c.push_back(a + w_mul_p(w_lift(W, b), 1));
  }
  return c;
}

FqVec exp_map(const GeodesicCtx& ctx, const FqVec& origin, const FqVec& direction, const DeltaPoly& P, int depth) {
  if (static_cast<int>(origin.size()) != ctx.n() || static_cast<int>(direction.size()) != ctx.n())
    throw Error(ErrorCode::config_invalid, "exp needs two vectors of length n");
  Fq r_dot = ctx.W().field().zero(), ones_dot = ctx.W().field().zero();
  for (size_t l = 0; l < origin.size(); ++l) {
    r_dot = r_dot + w_residue(ctx.r()[l]) * origin[l];
    ones_dot = ones_dot + direction[l];
  }
  if (r_dot.is_zero()) throw Error(ErrorCode::hyperplane_violation, "origin is orthogonal to r");
  if (ones_dot.is_zero()) throw Error(ErrorCode::hyperplane_violation, "direction is orthogonal to (1, ..., 1)");
  const Curve c = geodesic(ctx, make_curve(curve_with_tangent(ctx.W(), ctx.s(), origin, direction), ctx.s()), depth);
  FqVec out;
  for (const WElem& x : c.c) out.push_back(eval_at(P, x, ctx.s()));
  return out;
}

FqVec trans_map(const OdeSystem& sys, const BaseCtx& W, const DeltaPoly& P, const FqVec& lambda0, int depth) {
  const WVec u = ode_solve(sys, vec_lift(W, lambda0), depth);
  FqVec out;
  for (const WElem& x : u) out.push_back(eval_at(P, x, sys.s));
  return out;
}

}  // namespace pigeom
