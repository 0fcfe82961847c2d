#include "doctest.h"
#include "pigeom/error.hpp"
#include "pigeom/overconv.hpp"
#include "support.hpp"

using namespace pigeom;
using namespace test_support;

namespace {

OverconvConfig desk_config(std::vector<int> e_list, int K = 4, int D = 1) {
  OverconvConfig cfg;
  cfg.base = make_base(5, 2, K);
  cfg.n = 2;
  cfg.zeta_exps = {0, 1};
  cfg.e_list = std::move(e_list);
  cfg.D = D;
  return cfg;
}

Mat<WElem> random_w_metric(const BaseCtx& W, std::mt19937_64& rng, size_t n, bool teichmueller_plus) {
  for (;;) {
    Mat<WElem> q(n, n, W.zero());
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a; b < n; ++b) {
        const WElem x = teichmueller_plus ? random_teichmueller(W, rng) + w_mul_p(W.random(rng, W.K()), 1)
                                          : W.random(rng, W.K());
        q(a, b) = q(b, a) = x;
      }
    if (fq_mat_inverse(mat_residue(W, q))) return q;
  }
}

Tensor3<WElem> random_w_torsion(const BaseCtx& W, std::mt19937_64& rng, int n) {
  Tensor3<WElem> t(n, W.zero());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const i64 v = static_cast<i64>(rng() % 3) - 1;
        t(i, j, k) = W.from_int(v);
        t(j, i, k) = W.from_int(-v);
      }
  return t;
}

}  // namespace

TEST_CASE("flat metric is the same connection in every ramification") {
  const auto cfg = desk_config({1, 2});
  const Mat<WElem> one = identity(*cfg.base, 2);
  const auto lc = lc_overconvergence_check(cfg, one, scaled_torsion(Tensor3<WElem>(2, cfg.base->zero())));
  const auto ch = chern_overconvergence_check(cfg, one);
  for (const auto* r : {&lc, &ch}) {
    CHECK(r->pass());
    CHECK(r->precision >= cfg.base->K() - 1);
    for (const auto& e : r->entries) {
      const bool diag_constant = e.row == e.col && std::all_of(e.monomial.begin(), e.monomial.end(), [](int x) { return x == 0; });
      CHECK(e.value == w_truncate(cfg.base->from_int(diag_constant ? 1 : 0), r->precision));
    }
  }
}

TEST_CASE("Levi-Civita agreement across ramifications") {
  std::mt19937_64 rng(1);
  const auto cfg = desk_config({1, 2, 4});
  for (int t = 0; t < 3; ++t) {
    const auto q = random_w_metric(*cfg.base, rng, 2, true);
    const auto r0 = lc_overconvergence_check(cfg, q, scaled_torsion(Tensor3<WElem>(2, cfg.base->zero())));
    CHECK(r0.pass());
    CHECK(r0.rings.size() == 3);
    const auto r1 = lc_overconvergence_check(cfg, random_w_metric(*cfg.base, rng, 2, false),
                                             scaled_torsion(random_w_torsion(*cfg.base, rng, 2)));
    CHECK(r1.pass());
  }
}

TEST_CASE("polynomial torsion scaled by p/pi") {
  std::mt19937_64 rng(2);
  const auto cfg = desk_config({1, 2, 4});
  const BaseCtx& W = *cfg.base;
  // L^k_{01} = c_k (y_0)_{k1}, L^k_{10} = -L^k_{01}; variable (i, j, k) is i n^2 + j n + k.
  using Term = std::pair<WElem, std::vector<std::pair<int, unsigned>>>;
  std::vector<std::vector<Term>> entries(8);
  for (int k = 0; k < 2; ++k) {
    const WElem c = W.random(rng, W.K());
    entries[static_cast<size_t>((0 * 2 + 1) * 2 + k)].push_back(Term{c, {{k * 2 + 1, 1u}}});
    entries[static_cast<size_t>((1 * 2 + 0) * 2 + k)].push_back(Term{-c, {{k * 2 + 1, 1u}}});
  }
  const auto report = lc_overconvergence_check(cfg, random_w_metric(W, rng, 2, false), scaled_torsion(2, entries));
  CHECK(report.pass());
}

TEST_CASE("unscaled torsion is flagged") {
  std::mt19937_64 rng(3);
  const auto cfg = desk_config({1, 2});
  Tensor3<WElem> t(2, cfg.base->zero());
  t(0, 1, 0) = cfg.base->one();
  t(1, 0, 0) = -cfg.base->one();
  const TorsionBuilder unscaled = [t](const std::shared_ptr<const RamCtx>& R) {
    Tensor3<RpiElem> u(2, R->zero());
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) u(i, j, k) = R->from_w(t(i, j, k));
    return TorsionSymbol::constant(R, u);
  };
  const auto report = lc_overconvergence_check(cfg, random_w_metric(*cfg.base, rng, 2, false), unscaled);
  CHECK(!report.pass());
  REQUIRE(report.first_failure() != nullptr);
  CHECK(!report.first_failure()->in_base);
}

TEST_CASE("Chern agreement across ramifications") {
  OverconvConfig scalar;
  scalar.base = make_base(5, 2, 4);
  scalar.n = 1;
  scalar.zeta_exps = {1};
  scalar.e_list = {1, 2};
  const auto r = chern_overconvergence_check(scalar, Mat<WElem>(1, 1, scalar.base->from_int(2)));
  CHECK(r.pass());
  // sqrt(2^5 / 2) near 1 is (2/5) 2^2 = -4.
  CHECK(r.entries.front().value == w_truncate(scalar.base->from_int(-4), r.precision));

  std::mt19937_64 rng(4);
  const auto cfg = desk_config({1, 2, 4});
  for (int t = 0; t < 3; ++t) CHECK(chern_overconvergence_check(cfg, random_w_metric(*cfg.base, rng, 2, false)).pass());
}

TEST_CASE("ramification lists must form a tower") {
  const auto cfg = desk_config({2, 3});
  CHECK_THROWS_AS(chern_overconvergence_check(cfg, identity(*cfg.base, 2)), Error);
}
