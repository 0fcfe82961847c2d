#pragma once

#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "pigeom/connections.hpp"
#include "pigeom/ram_ring.hpp"

namespace test_support {

using namespace pigeom;

inline std::shared_ptr<const BaseCtx> make_base(u64 p, int m, int K) {
  return BaseCtx::make(FieldCtx::make(p, m), K);
}

inline std::shared_ptr<const RamCtx> make_ram(u64 p, int m, int K, int e, unsigned s, std::vector<u64> exps,
                                              std::optional<int> M = std::nullopt) {
  const int n = static_cast<int>(exps.size());
  return RamCtx::make(make_base(p, m, K), e, s, n, std::move(exps), M);
}

inline WElem random_teichmueller(const BaseCtx& W, std::mt19937_64& rng, bool allow_zero = true) {
  for (;;) {
    const Fq a = W.field().element(rng() % W.field().order());
    if (!allow_zero && a.is_zero()) continue;
    return w_teichmueller(W, a);
  }
}

inline Mat<RpiElem> random_metric(const RamCtx& R, size_t n, std::mt19937_64& rng, int prec) {
  for (;;) {
    Mat<RpiElem> q(n, n, R.zero());
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a; b < n; ++b) q(a, b) = q(b, a) = R.random(rng, prec);
    if (fq_mat_inverse(mat_residue(R, q))) return q;
  }
}

inline Mat<RpiElem> teichmueller_metric(const RamCtx& R, size_t n, std::mt19937_64& rng) {
  for (;;) {
    Mat<RpiElem> q(n, n, R.zero());
    for (size_t a = 0; a < n; ++a)
      for (size_t b = a; b < n; ++b) q(a, b) = q(b, a) = R.from_w(random_teichmueller(R.base(), rng));
    if (fq_mat_inverse(mat_residue(R, q))) return q;
  }
}

// Constant antisymmetric torsion with entries in {-1, 0, 1}.
inline TorsionSymbol random_torsion(const std::shared_ptr<const RamCtx>& R, int n, std::mt19937_64& rng) {
  Tensor3<RpiElem> t(n, R->zero());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const i64 v = static_cast<i64>(rng() % 3) - 1;
        t(i, j, k) = R->from_int(v);
        t(j, i, k) = R->from_int(-v);
      }
  return TorsionSymbol::constant(R, t);
}

}  // namespace test_support
