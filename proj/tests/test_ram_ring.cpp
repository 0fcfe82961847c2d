#include "doctest.h"
#include "pigeom/error.hpp"
#include "support.hpp"

using namespace pigeom;
using namespace test_support;

namespace {

// R_pi for p = 5, e = 2, s = 1 with zeta = (1, -1): the desk configuration.
std::shared_ptr<const RamCtx> desk_ring() { return make_ram(5, 2, 8, 2, 1, {0, 1}); }

RpiElem from_ints(const RamCtx& R, std::vector<i64> coords) {
  std::vector<WElem> w;
  for (i64 c : coords) w.push_back(R.base().from_int(c));
  return R.from_coords(w);
}

}  // namespace

TEST_CASE("frobenius lifts on pi and on W") {
  auto R = desk_ring();
  const RpiElem pi = R->pi();
  CHECK(rpi_phi(pi, 0) == pi);
  CHECK(rpi_phi(pi, 1) == -pi);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const WElem a = R->base().random(rng, 8);
    CHECK(rpi_phi(R->from_w(a), 0) == R->from_w(w_frobenius(a, 1)));
    CHECK(rpi_phi(R->from_w(a), 1) == R->from_w(w_frobenius(a, 1)));
  }
}

TEST_CASE("pi-derivation of pi") {
  auto R = desk_ring();
  const RpiElem d1 = rpi_delta(R->pi(), 0);
  const RpiElem d2 = rpi_delta(R->pi(), 1);
  CHECK(d1 == rpi_truncate(R->from_int(-24), R->cap() - 1));
  CHECK(d2 == rpi_truncate(R->from_int(-26), R->cap() - 1));
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const RpiElem z = R->from_w(random_teichmueller(R->base(), rng, false));
    CHECK(rpi_delta(z, 0).is_zero());
    CHECK(rpi_delta(z, 1).is_zero());
  }
}

TEST_CASE("words") {
  auto R = desk_ring();
  std::mt19937_64 rng(3);
  const RpiElem a = R->random(rng, R->M());
  CHECK(rpi_phi_word(a, {}) == a);
  CHECK(rpi_phi_word(a, {1}) == rpi_phi(a, 1));
  CHECK(rpi_phi_word(a, {0, 1}) == rpi_phi(rpi_phi(a, 1), 0));
  CHECK(rpi_delta_word(a, {1}) == rpi_delta(a, 1));
  const RpiElem diff = rpi_phi_word(a, {0, 1}) - rpi_phi_word(a, {1, 0});
  CHECK(rpi_val(diff) >= 1);
}

TEST_CASE("theta coordinates") {
  auto R = desk_ring();
  const auto r = rpi_theta_coords(R->p_over_pi());
  CHECK(r[0].is_zero());
  CHECK(r[1] == R->base().one());
  const WElem a = R->base().from_int(17);
  const auto ca = rpi_theta_coords(R->from_w(a));
  CHECK(ca[0] == a);
  CHECK(ca[1].is_zero());
  const auto c32 = rpi_theta_coords(from_ints(*R, {3, 2}));
  CHECK(c32[0] == R->base().from_int(3));
  CHECK(c32[1] == R->base().from_int(2));
}

TEST_CASE("valuation, division, inversion") {
  auto R = desk_ring();
  std::mt19937_64 rng(4);
  const RpiElem u = R->random_unit(rng, R->cap());
  CHECK(rpi_val(rpi_mul_pi(u, 3)) == 3);
  CHECK(rpi_div_pi(R->from_int(5), 2) == rpi_truncate(R->one(), R->cap() - 2));
  CHECK_THROWS_AS(rpi_div_pi(R->one(), 1), Error);
  const RpiElem x = R->one() + R->pi();
  CHECK(rpi_invert(x) * x == R->one());
  CHECK_THROWS_AS(rpi_invert(R->pi()), Error);
  for (int t = 0; t < 100; ++t) {
    const RpiElem a = R->random_unit(rng, R->M());
    CHECK(rpi_invert(a) * a == rpi_truncate(R->one(), R->M()));
  }
}

TEST_CASE("multiplication matches the integer model of Z_5[sqrt 5]") {
  auto R = make_ram(5, 1, 4, 2, 1, {0});
  std::mt19937_64 rng(5);
  const i64 n = 625;
  for (int t = 0; t < 200; ++t) {
    const i64 a0 = static_cast<i64>(rng() % n), a1 = static_cast<i64>(rng() % n);
    const i64 b0 = static_cast<i64>(rng() % n), b1 = static_cast<i64>(rng() % n);
    const RpiElem prod = from_ints(*R, {a0, a1}) * from_ints(*R, {b0, b1});
    const auto c = rpi_theta_coords(prod);
    CHECK(static_cast<i64>(c[0].coeffs()[0]) == (a0 * b0 + 5 * a1 * b1) % n);
    CHECK(static_cast<i64>(c[1].coeffs()[0]) == (a0 * b1 + a1 * b0) % n);
  }
}

TEST_CASE("pi-derivation laws hold at precision M-1") {
  std::mt19937_64 rng(6);
  for (auto R : {desk_ring(), make_ram(7, 1, 5, 3, 2, {0, 1, 2}), make_ram(3, 2, 6, 4, 1, {1, 3})}) {
    const int M = R->M();
    const RpiElem pi = R->pi();
    const RpiElem p_over_pi = R->p_over_pi();
    for (int t = 0; t < 500; ++t) {
      const RpiElem x = R->random(rng, M), y = R->random(rng, M);
      for (int i = 0; i < R->n(); ++i) {
        const RpiElem dx = rpi_delta(x, i), dy = rpi_delta(y, i);
        const RpiElem sum = rpi_delta(x + y, i);
        const RpiElem prod = rpi_delta(x * y, i);
        CHECK(sum.prec() == M - 1);
        CHECK(sum == dx + dy + p_over_pi * rpi_cp_carry(x, y));
        CHECK(prod == pow(x, R->ps()) * dy + pow(y, R->ps()) * dx + pi * dx * dy);
        CHECK(rpi_val(rpi_phi(x, i) - pow(x, R->ps())) >= 1);
      }
    }
  }
}

TEST_CASE("pi-derivations of pi are units and distinguish directions") {
  for (auto R : {desk_ring(), make_ram(7, 1, 5, 3, 2, {0, 1, 2}), make_ram(3, 2, 6, 4, 1, {0, 1, 2, 3})}) {
    for (int i = 0; i < R->n(); ++i) {
      CHECK(rpi_val(rpi_delta(R->pi(), i)) == 0);
      for (int j = 0; j < i; ++j) CHECK(rpi_val(rpi_delta(R->pi(), i) - rpi_delta(R->pi(), j)) == 0);
    }
  }
  auto same = make_ram(5, 2, 6, 2, 1, {1, 1});
  std::mt19937_64 rng(7);
  for (int t = 0; t < 50; ++t) {
    const RpiElem a = same->random(rng, same->M());
    CHECK(rpi_delta(a, 0) == rpi_delta(a, 1));
  }
}

TEST_CASE("commutator congruences for composite lifts") {
  std::mt19937_64 rng(8);
  for (auto R : {desk_ring(), make_ram(7, 1, 5, 3, 2, {0, 1, 2})}) {
    const int n = R->n();
    const u64 ps = R->ps();
    const RpiElem pi = R->pi();
    for (int t = 0; t < 200; ++t) {
      const RpiElem a = R->random(rng, R->M());
      const int i = static_cast<int>(rng() % static_cast<u64>(n));
      const int j = static_cast<int>(rng() % static_cast<u64>(n));
      const RpiElem dia = rpi_delta(a, i), dja = rpi_delta(a, j);
      const RpiElem dipi = rpi_delta(pi, i), djpi = rpi_delta(pi, j);
      const RpiElem comm = rpi_phi_word(a, {i, j}) - rpi_phi_word(a, {j, i});
      const RpiElem dij = rpi_delta_word(a, {i, j}), dji = rpi_delta_word(a, {j, i});
      CHECK(rpi_val(comm) >= 1);
      CHECK(rpi_val(dij - dipi * pow(dja, ps)) >= 1);
      const RpiElem comm_over_pi = rpi_div_pi(comm, 1);
      CHECK(rpi_val(comm_over_pi - (dipi * pow(dja, ps) - djpi * pow(dia, ps))) >= 1);
      CHECK(rpi_val(comm_over_pi - (dij - dji)) >= 1);
      // exact expansion of the composite derivation
      const RpiElem phi_i_a = pow(a, ps) + pi * dia;
      const RpiElem expansion = rpi_div_pi(pow(phi_i_a, ps) - pow(a, ps * ps), 1) +
                                (pow(pi, ps - 1) + dipi) * (pow(dja, ps) + pi * rpi_delta(dja, i));
      CHECK(rpi_val(dij - expansion) >= expansion.prec());
    }
  }
}

TEST_CASE("derivations of elements with prescribed first two digits") {
  std::mt19937_64 rng(9);
  auto R = desk_ring();
  const u64 ps = R->ps();
  const RpiElem pi = R->pi();
  for (int t = 0; t < 200; ++t) {
    const RpiElem z0 = R->from_w(random_teichmueller(R->base(), rng));
    const RpiElem z1 = R->from_w(random_teichmueller(R->base(), rng));
    const RpiElem a = z0 + z1 * pi + rpi_mul_pi(R->random(rng, R->M()), 2);
    for (int i = 0; i < R->n(); ++i) {
      CHECK(rpi_val(rpi_delta(a, i) - rpi_delta(pi, i) * pow(z1, ps)) >= 1);
      for (int j = 0; j < R->n(); ++j) {
        const RpiElem rhs = rpi_delta(pi, i) * pow(rpi_delta(pi, j), ps) * pow(z1, ps * ps);
        CHECK(rpi_val(rpi_delta_word(a, {i, j}) - rhs) >= 1);
      }
    }
  }
}

TEST_CASE("rejects wild or oversized configurations") {
  CHECK_THROWS_AS(make_ram(5, 1, 4, 3, 1, {0}), Error);
  CHECK_THROWS_AS(make_ram(5, 2, 4, 2, 1, {0}, 9), Error);
  CHECK_THROWS_AS(RamCtx::make(make_base(5, 2, 4), 2, 1, 2, {0}), Error);
}
