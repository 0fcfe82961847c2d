#include <map>

#include "doctest.h"
#include "pigeom/error.hpp"
#include "pigeom/series_ring.hpp"
#include "support.hpp"

using namespace pigeom;
using namespace test_support;

namespace {

std::shared_ptr<const SeriesCtx> make_series(int N, int D) {
  return SeriesCtx::make(make_ram(5, 2, 8, 2, 1, {0, 1}), N, D);
}

// Independent product: sparse maps of exponent vectors, truncated by degree.
std::map<std::vector<int>, RpiElem> oracle_product(const SeriesCtx& T, const SeriesElem& a, const SeriesElem& b) {
  std::map<std::vector<int>, RpiElem> out;
  for (size_t i = 0; i < T.size(); ++i)
    for (size_t j = 0; j < T.size(); ++j) {
      std::vector<int> sum = T.monomials()[i];
      int deg = 0;
      for (size_t v = 0; v < sum.size(); ++v) {
        sum[v] += T.monomials()[j][v];
        deg += sum[v];
      }
      if (deg > T.D()) continue;
      const RpiElem term = a.coeff(i) * b.coeff(j);
      auto it = out.find(sum);
      if (it == out.end())
        out.emplace(sum, term);
      else
        it->second = it->second + term;
    }
  return out;
}

}  // namespace

TEST_CASE("monomial bookkeeping") {
  auto T = make_series(2, 2);
  CHECK(T->size() == 15);  // 1 + 4 + 10
  CHECK(make_series(3, 2)->size() == 55);
  CHECK(make_series(2, 1)->size() == 5);
  for (size_t i = 0; i < T->size(); ++i) CHECK(T->index_of(T->monomials()[i]) == i);
  CHECK_THROWS_AS(T->index_of({3, 0, 0, 0}), Error);
  CHECK_THROWS_AS(SeriesCtx::make(make_ram(5, 2, 4, 2, 1, {0}), 2, 0), Error);
}

TEST_CASE("truncated products") {
  auto T = make_series(2, 2);
  const SeriesElem u = T->variable(0, 0);
  CHECK((T->one() + u) * (T->one() - u) == T->one() - u * u);
  CHECK(u * u * u == T->zero());
  std::mt19937_64 rng(1);
  const SeriesElem a = T->random(rng, T->ram().M());
  CHECK(a * T->one() == a);
  auto T1 = make_series(2, 1);
  CHECK(T1->variable(0, 0) * T1->variable(0, 1) == T1->zero());
}

TEST_CASE("product agrees with the sparse oracle") {
  auto T = make_series(2, 2);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const SeriesElem a = T->random(rng, T->ram().M()), b = T->random(rng, T->ram().M());
    const SeriesElem c = a * b;
    const auto expect = oracle_product(*T, a, b);
    for (size_t i = 0; i < T->size(); ++i) CHECK(c.coeff(i) == expect.at(T->monomials()[i]));
  }
}

TEST_CASE("inversion") {
  auto T = make_series(2, 2);
  const SeriesElem u = T->variable(0, 0);
  CHECK(ser_invert(T->one()) == T->one());
  CHECK(ser_invert(T->one() + u) == T->one() - u + u * u);
  std::mt19937_64 rng(3);
  const int M = T->ram().M();
  for (int t = 0; t < 50; ++t) {
    SeriesElem a = T->random(rng, M);
    if (rpi_residue(a.coeff(0)).is_zero()) a = a + T->one();
    if (rpi_residue(a.coeff(0)).is_zero()) continue;
    CHECK(ser_invert(a) * a == ser_reduce_mod(T->one(), M, false));
  }
  CHECK_THROWS_AS(ser_invert(T->constant(T->ram().pi()) + u), Error);
}

TEST_CASE("evaluation at the identity") {
  auto T = make_series(2, 2);
  const RpiElem pi = T->ram().pi();
  CHECK(ser_eval_at_one(T->one() + ser_scale(pi, T->variable(0, 0))) == T->ram().one());
  CHECK(ser_eval_at_one(T->variable(0, 1)).is_zero());
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const SeriesElem a = T->random(rng, 10), b = T->random(rng, 10);
    CHECK(ser_eval_at_one(a + b) == ser_eval_at_one(a) + ser_eval_at_one(b));
    CHECK(ser_eval_at_one(a * b) == ser_eval_at_one(a) * ser_eval_at_one(b));
  }
}

TEST_CASE("substitution is multiplicative up to the truncation order") {
  auto T = make_series(2, 2);
  std::mt19937_64 rng(5);
  const RamCtx& R = T->ram();
  for (int t = 0; t < 50; ++t) {
    std::vector<RpiElem> pt;
    for (int v = 0; v < T->num_vars(); ++v) pt.push_back(rpi_mul_pi(R.random(rng, R.M()), 1));
    const SeriesElem a = T->random(rng, R.M()), b = T->random(rng, R.M());
    const RpiElem diff = ser_eval(a * b, pt) - ser_eval(a, pt) * ser_eval(b, pt);
    CHECK(rpi_val(diff) >= T->D() + 1);
  }
}

TEST_CASE("reduction modulo pi powers and the augmentation ideal") {
  auto T = make_series(2, 2);
  std::mt19937_64 rng(6);
  const RamCtx& R = T->ram();
  const SeriesElem c = T->random(rng, R.M());
  const SeriesElem a = ser_mul_pi(c, 1) + T->variable(1, 0) * T->random(rng, R.M());
  CHECK(ser_reduce_mod(a, 1, true).is_zero());
  const SeriesElem near_one = T->one() + ser_mul_pi(T->random(rng, R.M()), 1) + T->variable(0, 1);
  CHECK(ser_reduce_mod(near_one, 1, true) == ser_reduce_mod(T->one(), 1, true));
  for (int k = 1; k < R.M(); k += 3) {
    const SeriesElem x = T->random(rng, R.M());
    for (bool P : {false, true}) CHECK(ser_reduce_mod(ser_reduce_mod(x, k, P), k, P) == ser_reduce_mod(x, k, P));
  }
}

TEST_CASE("division by pi") {
  auto T = make_series(2, 2);
  std::mt19937_64 rng(7);
  const RamCtx& R = T->ram();
  const SeriesElem a = T->random(rng, R.cap());
  CHECK(ser_div_pi(ser_mul_pi(a, 3), 3) == ser_reduce_mod(a, R.cap() - 3, false));
  CHECK(ser_div_pi(T->zero(), 2) == ser_reduce_mod(T->zero(), R.cap() - 2, false));
  CHECK_THROWS_AS(ser_div_pi(T->one() + T->variable(0, 0), 1), Error);
}

TEST_CASE("commutative ring laws on random triples") {
  auto T = make_series(2, 2);
  std::mt19937_64 rng(8);
  for (int t = 0; t < 30; ++t) {
    const SeriesElem a = T->random(rng, 12), b = T->random(rng, 12), c = T->random(rng, 12);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + (-a) == ser_reduce_mod(T->zero(), 12, false));
  }
}
