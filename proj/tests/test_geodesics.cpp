#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "pigeom/error.hpp"
#include "pigeom/geodesics.hpp"
#include "support.hpp"

using namespace pigeom;
using namespace test_support;

namespace {

struct Setup {
  std::shared_ptr<const RamCtx> ram;
  std::shared_ptr<const BaseCtx> W;
  GeodesicCtx ctx;
};

// Connection ring with enough pi-adic room that Gamma(1) is known to the
// precision of the curve ring.
Setup make_setup(std::mt19937_64& rng, bool flat, u64 p = 5, int m = 2, int e = 2, int K_curve = 7) {
  std::vector<u64> exps(static_cast<size_t>(e));
  std::iota(exps.begin(), exps.end(), 0);
  auto ram = make_ram(p, m, K_curve + 1, e, 1, exps);
  auto W = BaseCtx::make(ram->base().field_ptr(), K_curve);
  const size_t n = static_cast<size_t>(e);
  const auto q = flat ? identity(*ram, n) : random_metric(*ram, n, rng, ram->M());
  const auto L = flat ? TorsionSymbol::zero(ram, e) : random_torsion(ram, e, rng);
  const auto lc = levi_civita(*ram, metric_matrices(*ram, q, identity(*ram, n)), L, ram->M());
  return Setup{ram, W, GeodesicCtx::from_connection(*ram, lc, W)};
}

WVec random_vec(const BaseCtx& W, std::mt19937_64& rng, int n) {
  WVec out;
  for (int i = 0; i < n; ++i) out.push_back(W.random(rng, W.K()));
  return out;
}

Curve random_nondegenerate(const GeodesicCtx& ctx, std::mt19937_64& rng) {
  for (;;) {
    Curve c = make_curve(random_vec(ctx.W(), rng, ctx.n()), ctx.s());
    if (is_nondegenerate(ctx, c)) return c;
  }
}

FqVec random_fq(const FieldCtx& F, std::mt19937_64& rng, int n) {
  FqVec out;
  for (int i = 0; i < n; ++i) out.push_back(F.element(rng() % F.order()));
  return out;
}

template <class T>
std::vector<T> permute(const std::vector<T>& a, const std::vector<int>& sigma) {
  std::vector<T> out;
  for (int i : sigma) out.push_back(a[static_cast<size_t>(i)]);
  return out;
}

// Coefficients of the reduced interpolating polynomial of h over F_q:
// h(x) = sum_c h(c) (1 - (x - c)^{q-1}).
std::vector<Fq> interpolate(const FieldCtx& F, const std::vector<Fq>& h) {
  const u64 q = F.order();
  std::vector<Fq> a(q, F.zero());
  for (u64 c = 0; c < q; ++c) {
    const Fq x = F.element(c);
    if (x.is_zero()) a[0] = a[0] + h[c];
    for (u64 k = 1; k < q; ++k) {
      const u64 e = q - 1 - k;
      const Fq xe = e == 0 ? F.one() : pow(x, e);
      a[k] = a[k] - h[c] * xe;
    }
  }
  return a;
}

int degree(const std::vector<Fq>& a) {
  for (int k = static_cast<int>(a.size()) - 1; k >= 0; --k)
    if (!a[static_cast<size_t>(k)].is_zero()) return k;
  return -1;
}

}  // namespace

TEST_CASE("ODE solver examples") {
  auto W = make_base(5, 1, 4);
  OdeSystem zero;
  zero.dim = 1;
  zero.numer = [](const WVec& u, const WVec&) { return WVec{u[0].ctx().zero()}; };
  const WVec u = ode_solve(zero, {W->from_int(2)}, 4);
  CHECK(w_truncate(u[0], 2) == w_truncate(W->from_int(7), 2));
  CHECK(u[0] == w_teichmueller(*W, w_residue(W->from_int(2))));
  CHECK(ode_solve(zero, {W->from_int(1)}, 4)[0] == W->one());
  CHECK(ode_solve(zero, {W->from_int(1 + 5 * 17)}, 4)[0] == W->one());

  auto W2 = make_base(5, 2, 6);
  std::mt19937_64 rng(1);
  const WElem a = W2->random(rng, 6), b = W2->random(rng, 6);
  OdeSystem lin;
  lin.dim = 2;
  lin.numer = [a, b](const WVec& x, const WVec& x_phi) { return WVec{a * x_phi[1] + x[0] * x[1], b * x[0] * x_phi[0]}; };
  lin.denom = [](const WVec& x, const WVec&) { return x[0] + x[0].ctx().one(); };
  for (int t = 0; t < 20; ++t) {
    WVec u0 = random_vec(*W2, rng, 2);
    if (w_residue(u0[0] + W2->one()).is_zero()) continue;
    const WVec sol = ode_solve(lin, u0, 6);
    CHECK(vec_residue(sol) == vec_residue(u0));
    CHECK(vec_valuation(ode_residual(lin, sol)) >= 5);
    WVec other = u0;
    for (WElem& x : other) x = x + w_mul_p(W2->random(rng, 6), 1);
    CHECK(ode_solve(lin, other, 6) == sol);
  }
  CHECK_THROWS_AS(ode_solve(lin, {W2->from_int(-1), W2->one()}, 6), Error);
}

TEST_CASE("exhaustive first-order solutions over Z/9") {
  auto W = make_base(3, 1, 2);
  // Over Z_3 the Frobenius lift is the identity; d u mod 3 depends on u mod 9.
  auto delta_int = [](i64 u) { return (((u - u * u * u) / 3) % 3 + 3) % 3; };
  for (i64 a = 0; a < 9; ++a)
    for (i64 b = 0; b < 9; ++b)
      for (i64 c = 0; c < 9; ++c) {
        OdeSystem sys;
        sys.dim = 1;
        sys.numer = [&](const WVec& u, const WVec& u_phi) {
          return WVec{W->from_int(a) * u[0] + W->from_int(b) * u_phi[0] + W->from_int(c)};
        };
        for (i64 r = 0; r < 3; ++r) {
          std::vector<i64> sols;
          for (i64 u = r; u < 9; u += 3)
            if (delta_int(u) == ((a + b) * u + c) % 3) sols.push_back(u);
          REQUIRE(sols.size() == 1);
          CHECK(ode_solve(sys, {W->from_int(r)}, 2)[0] == W->from_int(sols[0]));
        }
      }
}

TEST_CASE("non-degenerate curves") {
  std::mt19937_64 rng(2);
  const Setup st = make_setup(rng, true);
  const BaseCtx& W = *st.W;
  const FieldCtx& F = W.field();
  CHECK(st.ctx.r()[0].is_zero());
  CHECK(st.ctx.r()[1] == W.one());
  auto curve = [&](i64 c0, i64 c1, i64 v0, i64 v1) {
    return make_curve(curve_with_tangent(W, 1, {F.from_int(c0), F.from_int(c1)}, {F.from_int(v0), F.from_int(v1)}), 1);
  };
  const Curve good = curve(0, 1, 1, 0);
  CHECK(vec_residue(good.v) == FqVec{F.one(), F.zero()});
  CHECK(is_nondegenerate(st.ctx, good));
  CHECK(!is_nondegenerate(st.ctx, curve(1, 0, 1, 0)));
  CHECK(!is_nondegenerate(st.ctx, curve(0, 1, 1, 4)));
  CHECK_THROWS_AS(parallel_transport(st.ctx, curve(1, 0, 1, 0), {W.one(), W.one()}, 7), Error);
}

TEST_CASE("parallel transport") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 5; ++rep) {
    const Setup st = make_setup(rng, false);
    const BaseCtx& W = *st.W;
    for (int t = 0; t < 10; ++t) {
      const Curve c = random_nondegenerate(st.ctx, rng);
      const WVec w0 = random_vec(W, rng, 2);
      const WVec w = parallel_transport(st.ctx, c, w0, 7);
      CHECK(vec_residue(w) == vec_residue(w0));
      CHECK(vec_valuation(transport_residual(st.ctx, c, w)) >= 6);

      const WElem zeta = random_teichmueller(W, rng, false);
      CHECK(parallel_transport(st.ctx, c, vec_scale(zeta, w0), 7) == vec_scale(zeta, w));

      const Mat<WElem> alpha = transport_matrix(st.ctx, c);
      const Mat<WElem> beta = power_form(alpha);
      const WVec dw = vec_delta(w, 1), w_phi = vec_frobenius(w, 1);
      for (size_t k = 0; k < 2; ++k) {
        WElem lhs = W.zero(), rhs = W.zero();
        for (size_t j = 0; j < 2; ++j) {
          lhs = lhs + alpha(k, j) * w_phi[j];
          rhs = rhs + beta(k, j) * pow(w[j], 5);
        }
        CHECK(w_val(dw[k] - lhs) >= 6);
        CHECK(w_val(dw[k] - rhs) >= 6);
      }
    }
  }

  const Setup flat = make_setup(rng, true);
  for (int t = 0; t < 10; ++t) {
    const Curve c = random_nondegenerate(flat.ctx, rng);
    const WVec w = parallel_transport(flat.ctx, c, random_vec(*flat.W, rng, 2), 7);
    for (const WElem& x : w) CHECK(x == w_teichmueller(*flat.W, w_residue(x)));
  }
}

TEST_CASE("geodesics") {
  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 4; ++rep) {
    const Setup st = make_setup(rng, false);
    const BaseCtx& W = *st.W;
    for (int t = 0; t < 5; ++t) {
      const Curve c0 = random_nondegenerate(st.ctx, rng);
      const Curve g = geodesic(st.ctx, c0, 7);
      CHECK(vec_residue(g.c) == vec_residue(c0.c));
      CHECK(vec_residue(g.v) == vec_residue(c0.v));
      const Curve from_c = make_curve(g.c, 1);
      // d^2 c is known mod p^5 on a 7-digit ring.
      CHECK(vec_valuation(transport_residual(st.ctx, from_c, from_c.v)) >= 5);
      CHECK(vec_valuation(second_order_residual(st.ctx, g.c)) >= 5);
      CHECK(vec_valuation(acceleration(st.ctx, from_c)) >= 5);
      CHECK(vec_valuation(transport_residual(st.ctx, g, g.v)) >= 6);
      CHECK(is_nondegenerate(st.ctx, g));

      Curve near = c0;
      for (WElem& x : near.c) x = x + w_mul_p(W.random(rng, 7), 2);
      near = make_curve(near.c, 1);
      CHECK(geodesic(st.ctx, near, 7).c == g.c);

      const WElem zeta = random_teichmueller(W, rng, false);
      const Curve scaled = geodesic(st.ctx, make_curve(vec_scale(zeta, c0.c), 1), 7);
      CHECK(scaled.c == vec_scale(zeta, g.c));
    }
  }

  const Setup flat = make_setup(rng, true);
  for (int t = 0; t < 10; ++t) {
    const Curve g = geodesic(flat.ctx, random_nondegenerate(flat.ctx, rng), 7);
    for (const WElem& v : g.v) CHECK(v == w_teichmueller(*flat.W, w_residue(v)));
  }
}

TEST_CASE("relabelling coordinates permutes accelerations and geodesics") {
  std::mt19937_64 rng(5);
  for (int e : {2, 3}) {
    const Setup st = e == 2 ? make_setup(rng, false) : make_setup(rng, false, 7, 1, 3, 5);
    const int depth = st.W->K();
    std::vector<int> sigma(static_cast<size_t>(e));
    std::iota(sigma.begin(), sigma.end(), 0);
    do {
      const GeodesicCtx moved = st.ctx.permuted(sigma);
      for (int t = 0; t < 3; ++t) {
        const Curve c = random_nondegenerate(st.ctx, rng);
        const Curve pc{permute(c.c, sigma), permute(c.v, sigma)};
        CHECK(is_nondegenerate(moved, pc));
        CHECK(acceleration(moved, pc) == permute(acceleration(st.ctx, c), sigma));
        CHECK(geodesic(moved, pc, depth).c == permute(geodesic(st.ctx, c, depth).c, sigma));
      }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
  }
}

TEST_CASE("parallel transport and exponential maps") {
  std::mt19937_64 rng(6);
  const Setup st = make_setup(rng, false);
  const BaseCtx& W = *st.W;
  const FieldCtx& F = W.field();
  const DeltaPoly t = DeltaPoly::variable(W, 0), t1 = DeltaPoly::variable(W, 1);
  const DeltaPoly hom = t * t * t * t * t * t1 + DeltaPoly::constant(W, W.from_int(3)) * t1 * t1;
  REQUIRE(hom.homogeneous_degree(1) == 10u);
  for (int k = 0; k < 20; ++k) {
    const Curve c = random_nondegenerate(st.ctx, rng);
    const FqVec lambda = random_fq(F, rng, 2);
    CHECK(par_map(st.ctx, c, t, lambda, 7) == lambda);
    const Fq gamma = F.element(rng() % F.order());
    FqVec scaled;
    for (const Fq& x : lambda) scaled.push_back(gamma * x);
    const FqVec base = par_map(st.ctx, c, hom, lambda, 7);
    FqVec expect;
    for (const Fq& x : base) expect.push_back(pow(gamma, 10) * x);
    CHECK(par_map(st.ctx, c, hom, scaled, 7) == expect);

    FqVec origin, direction;
    do origin = random_fq(F, rng, 2);
    while (origin[1].is_zero());
    do direction = random_fq(F, rng, 2);
    while ((direction[0] + direction[1]).is_zero());
    CHECK(exp_map(st.ctx, origin, direction, t, 7) == origin);
    CHECK(exp_map(st.ctx, origin, direction, t1, 7) == direction);
    const Curve g = geodesic(st.ctx, make_curve(curve_with_tangent(W, 1, origin, direction), 1), 7);
    CHECK(exp_map(st.ctx, origin, direction, hom, 7) ==
          FqVec{eval_at(hom, g.c[0], 1), eval_at(hom, g.c[1], 1)});
  }
  CHECK_THROWS_AS(exp_map(st.ctx, {F.one(), F.zero()}, {F.one(), F.zero()}, t, 7), Error);
  CHECK_THROWS_AS(exp_map(st.ctx, {F.zero(), F.one()}, {F.one(), -F.one()}, t, 7), Error);

  const Setup flat = make_setup(rng, true);
  const Curve c = random_nondegenerate(flat.ctx, rng);
  const DeltaPoly flat_t1 = DeltaPoly::variable(*flat.W, 1);
  CHECK(par_map(flat.ctx, c, flat_t1, random_fq(F, rng, 2), 7) == FqVec{F.zero(), F.zero()});
}

TEST_CASE("transport maps of first-order equations") {
  auto W = make_base(5, 2, 5);
  const FieldCtx& F = W->field();
  std::mt19937_64 rng(7);
  const DeltaPoly t = DeltaPoly::variable(*W, 0), t1 = DeltaPoly::variable(*W, 1);
  OdeSystem zero;
  zero.dim = 1;
  zero.numer = [](const WVec& u, const WVec&) { return WVec{u[0].ctx().zero()}; };
  for (int k = 0; k < 10; ++k) {
    const FqVec l = random_fq(F, rng, 1);
    CHECK(trans_map(zero, *W, t, l, 5) == l);
    CHECK(trans_map(zero, *W, t1, l, 5) == FqVec{F.zero()});
  }

  // With F linear and G = 1, d^i u mod p is a polynomial of degree p^{is} in
  // u mod p, so u(P) has degree at most the graded degree of P.
  const WElem a = W->random(rng, 5), b = W->random(rng, 5), c = W->random(rng, 5);
  OdeSystem lin;
  lin.dim = 1;
  lin.numer = [a, b, c](const WVec& u, const WVec& u_phi) { return WVec{a * u[0] + b * u_phi[0] + c}; };
  const std::vector<std::pair<DeltaPoly, int>> cases = {
      {t1, 5}, {t * t1 + t, 6}, {t1 * t1, 10}, {t * t * t1 + DeltaPoly::constant(*W, a), 7}};
  for (const auto& [P, bound] : cases) {
    std::vector<Fq> table;
    for (u64 x = 0; x < F.order(); ++x) table.push_back(trans_map(lin, *W, P, {F.element(x)}, 5)[0]);
    const auto coeffs = interpolate(F, table);
    CHECK(degree(coeffs) <= bound);
    for (u64 x = 0; x < F.order(); ++x) {
      Fq y = F.zero();
      for (size_t k = coeffs.size(); k-- > 0;) y = y * F.element(x) + coeffs[k];
      CHECK(y == table[x]);
    }
  }

  OdeSystem rational = lin;
  rational.denom = [](const WVec& u, const WVec&) { return u[0]; };
  CHECK_THROWS_AS(trans_map(rational, *W, t, {F.zero()}, 5), Error);
}
