#pragma once

// pi-connections on GL_N encoded by the matrices Lambda_i = 1 + pi Gamma_i^t.
// Every solver is generic over the coefficient ring: R_pi (pointwise, x = g)
// or the truncated series ring T (jet, x = 1 + u).

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pigeom/matrix_ring.hpp"
#include "pigeom/series_ring.hpp"

namespace pigeom {

template <class Ring>
using ElemOf = typename Ring::Elem;

// Three-index array over {0..n-1}^3.
template <class E>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int n, const E& fill) : n_(n), d_(static_cast<size_t>(n * n * n), fill) {}

  int n() const { return n_; }
  E& operator()(int i, int j, int k) { return d_[index(i, j, k)]; }
  const E& operator()(int i, int j, int k) const { return d_[index(i, j, k)]; }
  const std::vector<E>& data() const { return d_; }

 private:
  size_t index(int i, int j, int k) const { return static_cast<size_t>((i * n_ + j) * n_ + k); }

  int n_ = 0;
  std::vector<E> d_;
};

// One monomial term of a torsion entry; a factor (v, d) is (y_i)_{jk}^d with
// v = i n^2 + j n + k.
struct TorsionTerm {
  RpiElem coeff;
  std::vector<std::pair<int, unsigned>> factors;
};

// Torsion symbol of the second kind: antisymmetric L^k_{ij}, each entry a
// polynomial in the entries of n matrix arguments y_1..y_n.
class TorsionSymbol {
 public:
  // entries[(i n + j) n + k] lists the terms of L^k_{ij}.
  TorsionSymbol(std::shared_ptr<const RamCtx> ring, int n, std::vector<std::vector<TorsionTerm>> entries);

  static TorsionSymbol zero(std::shared_ptr<const RamCtx> ring, int n);
  // values(i, j, k) = L^k_{ij}.
  static TorsionSymbol constant(std::shared_ptr<const RamCtx> ring, const Tensor3<RpiElem>& values);

  const RamCtx& ring() const { return *ring_; }
  int n() const { return n_; }
  bool is_constant() const;
  const std::vector<TorsionTerm>& terms(int i, int j, int k) const {
    return entries_[static_cast<size_t>((i * n_ + j) * n_ + k)];
  }
  TorsionSymbol scaled(const RpiElem& c) const;

  // L^k_{ij}(y) at y_i = args[i], as (i, j, k).
  template <class Ring>
  Tensor3<ElemOf<Ring>> evaluate(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& args) const;
  // L^k_{ij}(1).
  Tensor3<RpiElem> at_one() const;

 private:
  std::shared_ptr<const RamCtx> ring_;
  int n_;
  std::vector<std::vector<TorsionTerm>> entries_;
};

template <class E>
struct MetricMatrices {
  std::vector<Mat<E>> A;  // A_i = x^{(p^s)t} phi_i(q) x^{(p^s)}
  Mat<E> B;               // (x^t q x)^{(p^s)}
};

template <class E>
struct Connection {
  std::vector<Mat<E>> lambdas;
  MetricMatrices<E> metric;
};

struct CheckReport {
  std::string name;
  bool pass = false;
  int valuation = 0;  // min pi-valuation of the residual, capped at its precision
  int precision = 0;
  int required = 0;
};

// Throws hypothesis_violated unless q is symmetric, singular_residue unless
// its residue is invertible.
void validate_metric(const Mat<RpiElem>& q);
Mat<RpiElem> delta_matrix(const Mat<RpiElem>& q, int i);
Mat<RpiElem> phi_matrix(const Mat<RpiElem>& q, int i);

// The coordinate matrix x = 1 + u of the jet ring.
Mat<SeriesElem> jet_coordinate(const SeriesCtx& T);

template <class Ring>
MetricMatrices<ElemOf<Ring>> metric_matrices(const Ring& R, const Mat<RpiElem>& q, const Mat<ElemOf<Ring>>& x);

// The successive-approximation solver for the metric, symmetric connection;
// returns Lambda correct modulo pi^depth.
template <class Ring>
Connection<ElemOf<Ring>> levi_civita(const Ring& R, const MetricMatrices<ElemOf<Ring>>& mats,
                                     const TorsionSymbol& L, int depth);

// Lambda_i = (A_i^{-1} B)^{1/2}.
template <class Ring>
Connection<ElemOf<Ring>> chern(const Ring& R, const MetricMatrices<ElemOf<Ring>>& mats);

// Gamma_i = ((Lambda_i - 1)/pi)^t, so Gamma^k_{ij} = (Gamma_i)_{jk}.
template <class Ring>
std::vector<Mat<ElemOf<Ring>>> christoffel_second(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas);

// (i, j, k) -> (Gamma_i)_{jk}.
template <class E>
Tensor3<E> as_tensor(const std::vector<Mat<E>>& gammas) {
  const int n = static_cast<int>(gammas.size());
  Tensor3<E> out(n, gammas.at(0)(0, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out(i, j, k) = gammas[i](static_cast<size_t>(j), static_cast<size_t>(k));
  return out;
}

// X_{ijk} = sum_m X^m_{ij} (q_{mk})^{p^s}, upper(i, j, m) = X^m_{ij}.
template <class Ring>
Tensor3<ElemOf<Ring>> lower_indices(const Ring& R, const Tensor3<ElemOf<Ring>>& upper, const Mat<RpiElem>& q);

template <class Ring>
CheckReport check_near_one(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas);
template <class Ring>
CheckReport check_metric(const Ring& R, const Connection<ElemOf<Ring>>& conn, int required);
template <class Ring>
CheckReport check_symmetric(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas, const TorsionSymbol& L,
                            int required);
template <class Ring>
CheckReport check_bq_symmetric(const Ring& R, const Connection<ElemOf<Ring>>& conn, int required);

// Jet-mode congruence reports.
// First-kind Levi-Civita symbols against the closed form in delta q and L(1), mod (pi, P).
CheckReport lcc_formula_check(const SeriesCtx& T, const Mat<RpiElem>& q, const TorsionSymbol& L,
                              const Connection<SeriesElem>& lc);
// Gamma_{ijk} = 0 mod (pi^m, P).
CheckReport lcc_depth_check(const SeriesCtx& T, const Mat<RpiElem>& q, const Connection<SeriesElem>& lc, int m);
// The three mod-(pi, P) congruences relating the Chern and Levi-Civita symbols.
std::vector<CheckReport> chern_lc_congruence_checks(const SeriesCtx& T, const Mat<RpiElem>& q, const TorsionSymbol& L,
                                                const Connection<SeriesElem>& ch, const Connection<SeriesElem>& lc);
// (B - A_i)/pi = -delta_i q mod P.
CheckReport metric_defect_check(const SeriesCtx& T, const Mat<RpiElem>& q, const MetricMatrices<SeriesElem>& mats);

}  // namespace pigeom
