#include "doctest.h"
#include "pigeom/error.hpp"
#include "pigeom/matrix_ring.hpp"
#include "pigeom/series_ring.hpp"
#include "support.hpp"

using namespace pigeom;
using namespace test_support;

namespace {

template <class Ring, class Gen>
Mat<typename Ring::Elem> random_mat(const Ring& R, size_t n, Gen gen) {
  Mat<typename Ring::Elem> out(n, n, R.zero());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) out(i, j) = gen();
  return out;
}

template <class Ring>
void check_inverse_and_root(const Ring& R, std::mt19937_64& rng, int prec, int trials) {
  for (int t = 0; t < trials; ++t) {
    auto X = random_mat(R, 2, [&] { return R.random(rng, prec); });
    if (!fq_mat_inverse(mat_residue(R, X))) continue;
    const auto Y = mat_inv(R, X);
    CHECK(mat_is_zero(R, X * Y - identity(R, 2)));
    CHECK(mat_is_zero(R, Y * X - identity(R, 2)));
    CHECK(mat_precision(R, X * Y) == prec);

    const auto near = identity(R, 2) + mat_mul_pi(R, random_mat(R, 2, [&] { return R.random(rng, prec); }), 1);
    const auto Z = mat_sqrt_near_one(R, near);
    CHECK(mat_is_zero(R, Z * Z - near));
    CHECK(mat_valuation(R, Z - identity(R, 2)) >= 1);
    CHECK(mat_valuation(R, -Z - identity(R, 2)) == 0);
  }
}

}  // namespace

TEST_CASE("inverse examples") {
  auto R = make_ram(5, 2, 8, 2, 1, {0, 1});
  const auto I = identity(*R, 2);
  CHECK(mat_inv(*R, I) == I);
  auto X = I;
  X(0, 1) = R->pi();
  auto expect = I;
  expect(0, 1) = -R->pi();
  CHECK(mat_inv(*R, X) == expect);
  auto S = I;
  S(0, 0) = R->pi();
  CHECK_THROWS_AS(mat_inv(*R, S), Error);
}

TEST_CASE("residue inverse by Gauss-Jordan") {
  auto F = FieldCtx::make(5, 2);
  std::mt19937_64 rng(1);
  int invertible = 0;
  for (int t = 0; t < 200; ++t) {
    Mat<Fq> a(3, 3, F->zero());
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) a(i, j) = F->element(rng() % F->order());
    const Fq det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                   a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                   a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    const auto inv = fq_mat_inverse(a);
    CHECK(inv.has_value() == !det.is_zero());
    if (!inv) continue;
    ++invertible;
    const Mat<Fq> prod = a * *inv;
    for (size_t i = 0; i < 3; ++i)
      for (size_t j = 0; j < 3; ++j) CHECK(prod(i, j) == (i == j ? F->one() : F->zero()));
  }
  CHECK(invertible > 150);
}

TEST_CASE("inverse and square root over every coefficient ring") {
  std::mt19937_64 rng(2);
  auto W = make_base(5, 2, 6);
  check_inverse_and_root(*W, rng, 6, 200);
  auto R = make_ram(5, 2, 8, 2, 1, {0, 1});
  check_inverse_and_root(*R, rng, R->M(), 200);
  auto R3 = make_ram(3, 2, 6, 4, 1, {1, 3});
  check_inverse_and_root(*R3, rng, R3->M(), 100);
  auto T = SeriesCtx::make(make_ram(5, 2, 5, 2, 1, {0, 1}), 2, 2);
  check_inverse_and_root(*T, rng, T->ram().M(), 20);
}

TEST_CASE("square root examples") {
  auto W = make_base(5, 1, 3);
  Mat<WElem> y(1, 1, W->from_int(16));
  const auto z = mat_sqrt_near_one(*W, y);
  CHECK(z(0, 0) == W->from_int(121));
  CHECK(mat_sqrt_near_one(*W, identity(*W, 3)) == identity(*W, 3));
  Mat<WElem> bad(1, 1, W->from_int(4));
  CHECK_THROWS_AS(mat_sqrt_near_one(*W, bad), Error);
}

TEST_CASE("entrywise powers") {
  auto R = make_ram(5, 2, 8, 2, 1, {0, 1});
  const auto I = identity(*R, 2);
  CHECK(mat_pow_ps(*R, I) == I);
  std::mt19937_64 rng(3);
  auto D = I;
  for (size_t i = 0; i < 2; ++i) D(i, i) = R->from_w(random_teichmueller(R->base(), rng));
  const auto Dp = mat_pow_ps(*R, D);
  for (size_t i = 0; i < 2; ++i) CHECK(Dp(i, i) == rpi_phi(D(i, i), 0));
  const auto X = random_mat(*R, 2, [&] { return R->random(rng, R->M()); });
  CHECK(mat_pow_ps(*R, mat_pow_ps(*R, X)) == mat_pow_entries(X, R->ps() * R->ps()));
}

TEST_CASE("transpose and symmetry") {
  auto W = make_base(5, 2, 4);
  std::mt19937_64 rng(4);
  const auto X = random_mat(*W, 3, [&] { return W->random(rng, 4); });
  const auto Y = random_mat(*W, 3, [&] { return W->random(rng, 4); });
  CHECK(transpose(transpose(X)) == X);
  CHECK(transpose(X * Y) == transpose(Y) * transpose(X));
  CHECK(is_symmetric(X + transpose(X)));
}
