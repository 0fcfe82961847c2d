#include "pigeom/connections.hpp"

#include <algorithm>
#include <map>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

const RamCtx& ram_of(const RamCtx& R) { return R; }
const RamCtx& ram_of(const SeriesCtx& T) { return T.ram(); }

template <class Ring>
ElemOf<Ring> half(const Ring& R) {
  const BaseCtx& W = R.base();
  return R.from_int(static_cast<i64>((W.p_power(W.K()) + 1) / 2));
}

RpiElem half_rpi(const RamCtx& R) { return half(R); }

template <class Ring>
Mat<ElemOf<Ring>> embed(const Ring& R, const Mat<RpiElem>& a) {
  return map(a, [&](const RpiElem& x) { return R.constant(x); });
}

// Running minimum of valuations and precisions over a residual.
template <class Ring>
struct Residual {
  explicit Residual(const Ring& R) : ring(R), val(R.cap()), prec(R.cap()) {}
  void add(const ElemOf<Ring>& x) {
    val = std::min(val, ring.valuation(x));
    prec = std::min(prec, ring.precision(x));
  }
  void add(const Mat<ElemOf<Ring>>& m) {
    for (const auto& x : m.data()) add(x);
  }
  CheckReport report(std::string name, int required) const {
    return CheckReport{std::move(name), val >= required, val, prec, required};
  }

  const Ring& ring;
  int val;
  int prec;
};

std::vector<Mat<RpiElem>> delta_matrices(const Mat<RpiElem>& q, int n) {
  std::vector<Mat<RpiElem>> out;
  for (int i = 0; i < n; ++i) out.push_back(delta_matrix(q, i));
  return out;
}

// L_{ijk}(1) lowered with (q_{mk})^{p^s}.
Tensor3<RpiElem> lowered_torsion_at_one(const TorsionSymbol& L, const Mat<RpiElem>& q) {
  const RamCtx& R = L.ring();
  return lower_indices(R, L.at_one(), q);
}

// Constant terms of a tensor over T.
Tensor3<RpiElem> constant_terms(const Tensor3<SeriesElem>& t) {
  Tensor3<RpiElem> out(t.n(), ser_eval_at_one(t.data().at(0)));
  for (int i = 0; i < t.n(); ++i)
    for (int j = 0; j < t.n(); ++j)
      for (int k = 0; k < t.n(); ++k) out(i, j, k) = ser_eval_at_one(t(i, j, k));
  return out;
}

void require_square_family(const std::vector<size_t>& sizes, size_t n, const char* what) {
  for (size_t s : sizes)
    if (s != n) throw Error(ErrorCode::hypothesis_violated, std::string(what) + " must be n x n with n directions");
}

}  // namespace

// --- torsion symbols -------------------------------------------------------

TorsionSymbol::TorsionSymbol(std::shared_ptr<const RamCtx> ring, int n, std::vector<std::vector<TorsionTerm>> entries)
    : ring_(std::move(ring)), n_(n), entries_(std::move(entries)) {
  if (!ring_) throw Error(ErrorCode::config_invalid, "torsion symbol needs a coefficient ring");
  if (n_ < 1 || entries_.size() != static_cast<size_t>(n_ * n_ * n_))
    throw Error(ErrorCode::config_invalid, "torsion symbol needs n^3 entries");
  const int vars = n_ * n_ * n_;
  for (auto& entry : entries_)
    for (auto& term : entry) {
      if (term.coeff.ctx_ptr() != ring_.get())
        throw Error(ErrorCode::context_mismatch, "torsion coefficient from another R_pi context");
      for (const auto& [v, d] : term.factors)
        if (v < 0 || v >= vars) throw Error(ErrorCode::config_invalid, "torsion variable index out of range");
      std::sort(term.factors.begin(), term.factors.end());
    }
  // L^k_{ij} + L^k_{ji} must vanish coefficientwise.
  using Monomial = std::vector<std::pair<int, unsigned>>;
  auto collect = [&](const std::vector<TorsionTerm>& terms, std::map<Monomial, RpiElem>& acc) {
    for (const auto& t : terms) {
      Monomial mono;
      for (const auto& f : t.factors) {
        if (f.second == 0) continue;
        if (!mono.empty() && mono.back().first == f.first)
          mono.back().second += f.second;
        else
          mono.push_back(f);
      }
      auto it = acc.find(mono);
      if (it == acc.end())
        acc.emplace(mono, t.coeff);
      else
        it->second = it->second + t.coeff;
    }
  };
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        std::map<Monomial, RpiElem> acc;
        collect(terms(i, j, k), acc);
        collect(terms(j, i, k), acc);
        for (const auto& [mono, c] : acc)
          if (!c.is_zero()) throw Error(ErrorCode::hypothesis_violated, "torsion symbol is not antisymmetric");
      }
}

TorsionSymbol TorsionSymbol::zero(std::shared_ptr<const RamCtx> ring, int n) {
  return TorsionSymbol(std::move(ring), n, std::vector<std::vector<TorsionTerm>>(static_cast<size_t>(n * n * n)));
}

TorsionSymbol TorsionSymbol::constant(std::shared_ptr<const RamCtx> ring, const Tensor3<RpiElem>& values) {
  const int n = values.n();
  std::vector<std::vector<TorsionTerm>> entries(static_cast<size_t>(n * n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!values(i, j, k).is_zero())
          entries[static_cast<size_t>((i * n + j) * n + k)].push_back(TorsionTerm{values(i, j, k), {}});
  return TorsionSymbol(std::move(ring), n, std::move(entries));
}

bool TorsionSymbol::is_constant() const {
  for (const auto& entry : entries_)
    for (const auto& term : entry)
      for (const auto& f : term.factors)
        if (f.second > 0) return false;
  return true;
}

TorsionSymbol TorsionSymbol::scaled(const RpiElem& c) const {
  auto entries = entries_;
  for (auto& entry : entries)
    for (auto& term : entry) term.coeff = c * term.coeff;
  return TorsionSymbol(ring_, n_, std::move(entries));
}

template <class Ring>
Tensor3<ElemOf<Ring>> TorsionSymbol::evaluate(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& args) const {
  if (&ram_of(R) != ring_.get()) throw Error(ErrorCode::context_mismatch, "torsion symbol over another R_pi");
  if (args.size() != static_cast<size_t>(n_)) throw Error(ErrorCode::config_invalid, "expected n matrix arguments");
  const size_t n = static_cast<size_t>(n_);
  Tensor3<ElemOf<Ring>> out(n_, R.zero());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        ElemOf<Ring> sum = R.zero();
        for (const auto& term : terms(i, j, k)) {
          ElemOf<Ring> t = R.constant(term.coeff);
          for (const auto& [v, d] : term.factors) {
            const size_t uv = static_cast<size_t>(v);
            t = t * pow(args[uv / (n * n)]((uv / n) % n, uv % n), d);
          }
          sum = sum + t;
        }
        out(i, j, k) = sum;
      }
  return out;
}

Tensor3<RpiElem> TorsionSymbol::at_one() const {
  return evaluate(*ring_, std::vector<Mat<RpiElem>>(static_cast<size_t>(n_), identity(*ring_, static_cast<size_t>(n_))));
}

// --- metrics ---------------------------------------------------------------

void validate_metric(const Mat<RpiElem>& q) {
  if (q.rows() == 0 || q.rows() != q.cols()) throw Error(ErrorCode::hypothesis_violated, "metric must be square");
  for (size_t a = 0; a < q.rows(); ++a)
    for (size_t b = 0; b < a; ++b)
      if (!(q(a, b) - q(b, a)).is_zero()) throw Error(ErrorCode::hypothesis_violated, "metric must be symmetric");
  const RamCtx& R = q(0, 0).ctx();
  if (!fq_mat_inverse(mat_residue(R, q)))
    throw Error(ErrorCode::singular_residue, "metric is not invertible modulo pi");
}

Mat<RpiElem> delta_matrix(const Mat<RpiElem>& q, int i) {
  return map(q, [i](const RpiElem& x) { return rpi_delta(x, i); });
}

Mat<RpiElem> phi_matrix(const Mat<RpiElem>& q, int i) {
  return map(q, [i](const RpiElem& x) { return rpi_phi(x, i); });
}

Mat<SeriesElem> jet_coordinate(const SeriesCtx& T) {
  const size_t N = static_cast<size_t>(T.N());
  Mat<SeriesElem> x(N, N, T.zero());
  for (size_t a = 0; a < N; ++a)
    for (size_t b = 0; b < N; ++b) {
      x(a, b) = T.variable(static_cast<int>(a), static_cast<int>(b));
      if (a == b) x(a, b) = x(a, b) + T.one();
    }
  return x;
}

template <class Ring>
MetricMatrices<ElemOf<Ring>> metric_matrices(const Ring& R, const Mat<RpiElem>& q, const Mat<ElemOf<Ring>>& x) {
  validate_metric(q);
  if (x.rows() != q.rows() || x.cols() != q.cols()) throw Error(ErrorCode::config_invalid, "x and q sizes differ");
  const RamCtx& ram = ram_of(R);
  const auto xp = mat_pow_ps(R, x);
  const auto xpt = transpose(xp);
  MetricMatrices<ElemOf<Ring>> out;
  for (int i = 0; i < ram.n(); ++i) out.A.push_back(xpt * embed(R, phi_matrix(q, i)) * xp);
  out.B = mat_pow_ps(R, transpose(x) * embed(R, q) * x);
  return out;
}

// --- solvers ---------------------------------------------------------------

template <class Ring>
Connection<ElemOf<Ring>> levi_civita(const Ring& R, const MetricMatrices<ElemOf<Ring>>& mats, const TorsionSymbol& L,
                                     int depth) {
  using E = ElemOf<Ring>;
  const auto& A = mats.A;
  const auto& B = mats.B;
  const int n = static_cast<int>(A.size());
  const size_t un = static_cast<size_t>(n);
  std::vector<size_t> sizes{B.rows(), B.cols(), static_cast<size_t>(L.n())};
  for (const auto& a : A) {
    sizes.push_back(a.rows());
    sizes.push_back(a.cols());
  }
  require_square_family(sizes, un, "A_i, B and the torsion symbol");
  if (!mat_is_zero(R, B - transpose(B))) throw Error(ErrorCode::hypothesis_violated, "B is not symmetric");
  for (const auto& a : A) {
    if (!mat_is_zero(R, a - transpose(a))) throw Error(ErrorCode::hypothesis_violated, "A_i is not symmetric");
    if (mat_valuation(R, a - B) < 1) throw Error(ErrorCode::hypothesis_violated, "A_i is not congruent to B mod pi");
  }
  int avail = mat_precision(R, B);
  for (const auto& a : A) avail = std::min(avail, mat_precision(R, a));
  if (depth < 1 || depth > avail)
    throw Error(ErrorCode::precision_exhausted,
                "depth " + std::to_string(depth) + " exceeds the input precision " + std::to_string(avail));

  const E two_inv = half(R);
  const auto b_inv = mat_inv(R, B);
  const auto one = identity(R, un);
  std::vector<Mat<E>> lam(un, one);
  for (int nu = 1; nu < depth; ++nu) {
    const Tensor3<E> Lval = L.evaluate(R, lam);
    std::vector<Mat<E>> C, BL;
    for (int i = 0; i < n; ++i) {
      const auto& li = lam[static_cast<size_t>(i)];
      C.push_back(mat_div_pi(R, B - transpose(li) * A[static_cast<size_t>(i)] * li, nu));
      BL.push_back(B * (li - one));
    }
    // Defect of the symmetry identity at this stage, lowered with B.
    Tensor3<E> Lnu(n, R.zero());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          E lowered = R.zero();
          for (int l = 0; l < n; ++l) lowered = lowered + Lval(i, j, l) * B(static_cast<size_t>(k), static_cast<size_t>(l));
          const E lhs = BL[static_cast<size_t>(i)](static_cast<size_t>(k), static_cast<size_t>(j)) -
                        BL[static_cast<size_t>(j)](static_cast<size_t>(k), static_cast<size_t>(i));
          Lnu(i, j, k) = R.div_pi(R.mul_pi(lowered, 1) - lhs, nu);
        }
    for (int i = 0; i < n; ++i) {
      Mat<E> S(un, un, R.zero());
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const size_t uj = static_cast<size_t>(j), uk = static_cast<size_t>(k), ui = static_cast<size_t>(i);
          const E d = C[ui](uj, uk) + C[uj](ui, uk) - C[uk](ui, uj);
          const E f = Lnu(k, i, j) + Lnu(i, j, k) - Lnu(j, k, i);
          S(uk, uj) = two_inv * (d + f);  // (D_i + F_i)^t
        }
      lam[static_cast<size_t>(i)] = lam[static_cast<size_t>(i)] + mat_mul_pi(R, b_inv * S, nu);
    }
  }
  for (auto& l : lam) l = map(l, [&](const E& x) { return R.truncate(x, depth); });
  return Connection<E>{std::move(lam), mats};
}

template <class Ring>
Connection<ElemOf<Ring>> chern(const Ring& R, const MetricMatrices<ElemOf<Ring>>& mats) {
  Connection<ElemOf<Ring>> out{{}, mats};
  for (const auto& a : mats.A) out.lambdas.push_back(mat_sqrt_near_one(R, mat_inv(R, a) * mats.B));
  return out;
}

template <class Ring>
std::vector<Mat<ElemOf<Ring>>> christoffel_second(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas) {
  std::vector<Mat<ElemOf<Ring>>> out;
  for (const auto& l : lambdas) {
    const auto t = l - identity(R, l.rows());
    if (mat_precision(R, t) < 1) throw Error(ErrorCode::precision_exhausted, "Lambda known to no pi-adic digit");
    if (mat_valuation(R, t) < 1) throw Error(ErrorCode::hypothesis_violated, "Lambda is not 1 modulo pi");
    out.push_back(transpose(mat_div_pi(R, t, 1)));
  }
  return out;
}

template <class Ring>
Tensor3<ElemOf<Ring>> lower_indices(const Ring& R, const Tensor3<ElemOf<Ring>>& upper, const Mat<RpiElem>& q) {
  const int n = upper.n();
  if (q.rows() != static_cast<size_t>(n) || q.cols() != static_cast<size_t>(n))
    throw Error(ErrorCode::config_invalid, "metric size must match the symbol");
  const auto qp = embed(R, mat_pow_entries(q, ram_of(R).ps()));
  Tensor3<ElemOf<Ring>> out(n, R.zero());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        ElemOf<Ring> sum = R.zero();
        for (int m = 0; m < n; ++m) sum = sum + upper(i, j, m) * qp(static_cast<size_t>(m), static_cast<size_t>(k));
        out(i, j, k) = sum;
      }
  return out;
}

// --- reports ---------------------------------------------------------------

template <class Ring>
CheckReport check_near_one(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas) {
  Residual<Ring> res(R);
  for (const auto& l : lambdas) res.add(l - identity(R, l.rows()));
  return res.report("Lambda = 1 mod pi", 1);
}

template <class Ring>
CheckReport check_metric(const Ring& R, const Connection<ElemOf<Ring>>& conn, int required) {
  Residual<Ring> res(R);
  for (size_t i = 0; i < conn.lambdas.size(); ++i) {
    const auto& l = conn.lambdas[i];
    res.add(transpose(l) * conn.metric.A[i] * l - conn.metric.B);
  }
  return res.report("metric: Lambda^t A Lambda = B", required);
}

template <class Ring>
CheckReport check_symmetric(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& lambdas, const TorsionSymbol& L,
                            int required) {
  const int n = static_cast<int>(lambdas.size());
  if (L.n() != n) throw Error(ErrorCode::hypothesis_violated, "symmetry needs N = n");
  const auto Lval = L.evaluate(R, lambdas);
  Residual<Ring> res(R);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j), uk = static_cast<size_t>(k);
        auto lhs = lambdas[ui](uk, uj) - lambdas[uj](uk, ui);
        if (k == j) lhs = lhs - R.one();
        if (k == i) lhs = lhs + R.one();
        res.add(lhs - R.mul_pi(Lval(i, j, k), 1));
      }
  return res.report("symmetric: antisymmetric part of Lambda = pi L(Lambda)", required);
}

template <class Ring>
CheckReport check_bq_symmetric(const Ring& R, const Connection<ElemOf<Ring>>& conn, int required) {
  Residual<Ring> res(R);
  for (size_t i = 0; i < conn.lambdas.size(); ++i) {
    const auto& l = conn.lambdas[i];
    const auto& a = conn.metric.A[i];
    res.add(a * l - transpose(l) * a);
  }
  return res.report("B_q-symmetric: A Lambda = Lambda^t A", required);
}

CheckReport lcc_formula_check(const SeriesCtx& T, const Mat<RpiElem>& q, const TorsionSymbol& L,
                              const Connection<SeriesElem>& lc) {
  const RamCtx& R = T.ram();
  const int n = static_cast<int>(lc.lambdas.size());
  const auto low = constant_terms(lower_indices(T, as_tensor(christoffel_second(T, lc.lambdas)), q));
  const auto dq = delta_matrices(q, n);
  const auto Llow = lowered_torsion_at_one(L, q);
  const RpiElem h = half_rpi(R);
  Residual<RamCtx> res(R);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const size_t ui = static_cast<size_t>(i), uj = static_cast<size_t>(j), uk = static_cast<size_t>(k);
        const RpiElem metric_part = dq[ui](uj, uk) + dq[uj](ui, uk) - dq[uk](ui, uj);
        const RpiElem torsion_part = Llow(k, i, j) + Llow(i, j, k) - Llow(j, k, i);
        res.add(low(i, j, k) - h * (torsion_part - metric_part));
      }
  return res.report("Levi-Civita first-kind symbols mod (pi, P)", 1);
}

CheckReport lcc_depth_check(const SeriesCtx& T, const Mat<RpiElem>& q, const Connection<SeriesElem>& lc, int m) {
  const auto low = constant_terms(lower_indices(T, as_tensor(christoffel_second(T, lc.lambdas)), q));
  Residual<RamCtx> res(T.ram());
  for (const auto& x : low.data()) res.add(x);
  return res.report("Levi-Civita first-kind symbols vanish mod (pi^" + std::to_string(m) + ", P)", m);
}

std::vector<CheckReport> chern_lc_congruence_checks(const SeriesCtx& T, const Mat<RpiElem>& q, const TorsionSymbol& L,
                                                const Connection<SeriesElem>& ch, const Connection<SeriesElem>& lc) {
  const RamCtx& R = T.ram();
  const int n = static_cast<int>(ch.lambdas.size());
  const auto gamma_ch = christoffel_second(T, ch.lambdas);
  const auto dq = delta_matrices(q, n);
  const RpiElem h = half_rpi(R);
  const auto qps_inv = mat_inv(R, mat_pow_entries(q, R.ps()));
  std::vector<CheckReport> out;

  Residual<RamCtx> second(R);
  for (int i = 0; i < n; ++i) {
    const auto rhs = scale(-h, dq[static_cast<size_t>(i)] * qps_inv);
    second.add(map(gamma_ch[static_cast<size_t>(i)], ser_eval_at_one) - rhs);
  }
  out.push_back(second.report("Chern second-kind symbols mod (pi, P)", 1));

  const auto low_ch = constant_terms(lower_indices(T, as_tensor(gamma_ch), q));
  Residual<RamCtx> first(R);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        first.add(low_ch(i, j, k) + h * dq[static_cast<size_t>(i)](static_cast<size_t>(j), static_cast<size_t>(k)));
  out.push_back(first.report("Chern first-kind symbols mod (pi, P)", 1));

  const auto low_lc = constant_terms(lower_indices(T, as_tensor(christoffel_second(T, lc.lambdas)), q));
  const auto Llow = lowered_torsion_at_one(L, q);
  Residual<RamCtx> relation(R);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // The Chern part enters without a factor 1/2; with one, this would
        // contradict the two congruences above.
        const RpiElem rhs = (low_ch(i, j, k) + low_ch(j, i, k) - low_ch(k, i, j)) +
                            h * (Llow(k, i, j) + Llow(i, j, k) - Llow(j, k, i));
        relation.add(low_lc(i, j, k) - rhs);
      }
  out.push_back(relation.report("Levi-Civita from Chern symbols mod (pi, P)", 1));
  return out;
}

CheckReport metric_defect_check(const SeriesCtx& T, const Mat<RpiElem>& q, const MetricMatrices<SeriesElem>& mats) {
  const RamCtx& R = T.ram();
  Residual<RamCtx> res(R);
  for (size_t i = 0; i < mats.A.size(); ++i) {
    const auto c = mat_div_pi(T, mats.B - mats.A[i], 1);
    res.add(map(c, ser_eval_at_one) + delta_matrix(q, static_cast<int>(i)));
  }
  // Exact at whatever precision the inputs carry.
  return res.report("(B - A_i)/pi = -delta_i q mod P", std::max(res.prec, 1));
}

// --- instantiations --------------------------------------------------------

#define PIGEOM_INSTANTIATE(Ring)                                                                                  \
  template Tensor3<ElemOf<Ring>> TorsionSymbol::evaluate<Ring>(const Ring&, const std::vector<Mat<ElemOf<Ring>>>&) \
      const;                                                                                                      \
  template MetricMatrices<ElemOf<Ring>> metric_matrices<Ring>(const Ring&, const Mat<RpiElem>&,                   \
                                                              const Mat<ElemOf<Ring>>&);                          \
  template Connection<ElemOf<Ring>> levi_civita<Ring>(const Ring&, const MetricMatrices<ElemOf<Ring>>&,           \
                                                      const TorsionSymbol&, int);                                 \
  template Connection<ElemOf<Ring>> chern<Ring>(const Ring&, const MetricMatrices<ElemOf<Ring>>&);               \
  template std::vector<Mat<ElemOf<Ring>>> christoffel_second<Ring>(const Ring&,                                  \
                                                                   const std::vector<Mat<ElemOf<Ring>>>&);        \
  template Tensor3<ElemOf<Ring>> lower_indices<Ring>(const Ring&, const Tensor3<ElemOf<Ring>>&,                   \
                                                     const Mat<RpiElem>&);                                        \
  template CheckReport check_near_one<Ring>(const Ring&, const std::vector<Mat<ElemOf<Ring>>>&);                 \
  template CheckReport check_metric<Ring>(const Ring&, const Connection<ElemOf<Ring>>&, int);                    \
  template CheckReport check_symmetric<Ring>(const Ring&, const std::vector<Mat<ElemOf<Ring>>>&,                 \
                                             const TorsionSymbol&, int);                                          \
  template CheckReport check_bq_symmetric<Ring>(const Ring&, const Connection<ElemOf<Ring>>&, int);

PIGEOM_INSTANTIATE(RamCtx)
PIGEOM_INSTANTIATE(SeriesCtx)

#undef PIGEOM_INSTANTIATE

}  // namespace pigeom
