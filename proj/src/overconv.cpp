#include "pigeom/overconv.hpp"

#include <algorithm>
#include <climits>
#include <optional>
#include <string>

#include "pigeom/error.hpp"

namespace pigeom {

namespace {

struct Solved {
  std::shared_ptr<const RamCtx> ram;
  std::shared_ptr<const SeriesCtx> T;
  std::vector<Mat<SeriesElem>> lambdas;
};

std::vector<std::shared_ptr<const RamCtx>> make_rings(const OverconvConfig& cfg) {
  if (!cfg.base) throw Error(ErrorCode::config_invalid, "missing base ring");
  if (cfg.e_list.empty()) throw Error(ErrorCode::config_invalid, "empty list of ramification indices");
  if (static_cast<int>(cfg.zeta_exps.size()) != cfg.n)
    throw Error(ErrorCode::config_invalid, "zeta_exps must list one exponent per direction");
  const int top = *std::max_element(cfg.e_list.begin(), cfg.e_list.end());
  std::vector<std::shared_ptr<const RamCtx>> out;
  for (int e : cfg.e_list) {
    // pi_e = pi_top^{top/e}, so phi_i(pi_e) = zeta_i^{top/e} pi_e.
    if (e < 1 || top % e != 0)
      throw Error(ErrorCode::config_invalid,
                  "ramification index " + std::to_string(e) + " does not divide " + std::to_string(top));
    std::vector<u64> exps;
    for (u64 j : cfg.zeta_exps) exps.push_back(j % static_cast<u64>(e));
    out.push_back(RamCtx::make(cfg.base, e, cfg.s, cfg.n, std::move(exps)));
  }
  return out;
}

Mat<RpiElem> embed(const RamCtx& R, const Mat<WElem>& q) {
  return map(q, [&R](const WElem& a) { return R.from_w(a); });
}

template <class Solve>
OverconvReport compare(const OverconvConfig& cfg, const Mat<WElem>& q, std::string kind, Solve solve) {
  if (static_cast<int>(q.rows()) != cfg.n || static_cast<int>(q.cols()) != cfg.n)
    throw Error(ErrorCode::config_invalid, "metric must be n x n");
  OverconvReport report;
  report.kind = std::move(kind);
  std::vector<Solved> solved;
  for (const auto& ram : make_rings(cfg)) {
    auto T = SeriesCtx::make(ram, cfg.n, cfg.D);
    const auto mats = metric_matrices(*T, embed(*ram, q), jet_coordinate(*T));
    solved.push_back(Solved{ram, T, solve(ram, *T, mats)});
    report.rings.push_back(OverconvRing{ram->e(), ram->zeta_exps(), ram->M()});
  }

  const size_t N = static_cast<size_t>(cfg.n);
  const SeriesCtx& T0 = *solved.front().T;
  report.precision = INT_MAX;
  for (const Solved& s : solved)
    for (const auto& L : s.lambdas)
      for (const SeriesElem& x : L.data())
        for (const RpiElem& c : x.coeffs()) report.precision = std::min(report.precision, rpi_theta_coords(c)[0].prec());
  for (int i = 0; i < cfg.n; ++i)
    for (size_t r = 0; r < N; ++r)
      for (size_t c = 0; c < N; ++c)
        for (size_t mono = 0; mono < T0.size(); ++mono) {
          OverconvEntry entry{i, static_cast<int>(r), static_cast<int>(c), T0.monomials()[mono], true, true,
                              report.precision, WElem{}};
          std::optional<WElem> ref;
          for (const Solved& s : solved) {
            const RpiElem x = s.lambdas[static_cast<size_t>(i)](r, c).coeff(mono);
            const auto coords = rpi_theta_coords(x);
            for (size_t l = 1; l < coords.size(); ++l)
              if (!coords[l].is_zero()) {
                entry.in_base = false;
                entry.valuation = std::min(entry.valuation, w_val(coords[l]));
              }
            const WElem w = w_truncate(coords[0], report.precision);
            if (!ref) {
              ref = w;
              entry.value = w;
            } else if (!(w == *ref)) {
              entry.agree = false;
              entry.valuation = std::min(entry.valuation, w_val(w - *ref));
            }
          }
          report.entries.push_back(std::move(entry));
        }
  return report;
}

}  // namespace

bool OverconvReport::pass() const { return first_failure() == nullptr; }

const OverconvEntry* OverconvReport::first_failure() const {
  for (const auto& e : entries)
    if (!e.in_base || !e.agree) return &e;
  return nullptr;
}

TorsionBuilder scaled_torsion(const Tensor3<WElem>& values) {
  return [values](const std::shared_ptr<const RamCtx>& R) {
    const int n = values.n();
    Tensor3<RpiElem> t(n, R->zero());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) t(i, j, k) = R->from_w(values(i, j, k));
    return TorsionSymbol::constant(R, t).scaled(R->p_over_pi());
  };
}

TorsionBuilder scaled_torsion(
    int n, const std::vector<std::vector<std::pair<WElem, std::vector<std::pair<int, unsigned>>>>>& entries) {
  return [n, entries](const std::shared_ptr<const RamCtx>& R) {
    std::vector<std::vector<TorsionTerm>> terms;
    for (const auto& entry : entries) {
      std::vector<TorsionTerm> out;
      for (const auto& [coeff, factors] : entry) out.push_back(TorsionTerm{R->from_w(coeff), factors});
      terms.push_back(std::move(out));
    }
    return TorsionSymbol(R, n, std::move(terms)).scaled(R->p_over_pi());
  };
}

OverconvReport lc_overconvergence_check(const OverconvConfig& cfg, const Mat<WElem>& q, const TorsionBuilder& torsion) {
  return compare(cfg, q, "levi-civita",
                 [&](const std::shared_ptr<const RamCtx>& ram, const SeriesCtx& T, const MetricMatrices<SeriesElem>& mats) {
                   return levi_civita(T, mats, torsion(ram), ram->M()).lambdas;
                 });
}

OverconvReport chern_overconvergence_check(const OverconvConfig& cfg, const Mat<WElem>& q) {
  return compare(cfg, q, "chern",
                 [](const std::shared_ptr<const RamCtx>&, const SeriesCtx& T, const MetricMatrices<SeriesElem>& mats) {
                   return chern(T, mats).lambdas;
                 });
}

}  // namespace pigeom
