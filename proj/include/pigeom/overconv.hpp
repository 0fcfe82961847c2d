#pragma once

// Cross-ramification comparison of Levi-Civita and Chern connections for a
// metric with coefficients in W. For every e the jet-mode solution over
// R_pi = W[pi]/(pi^e - p) is projected to its theta-coordinates; all of them
// should lie in W and coincide.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pigeom/connections.hpp"

namespace pigeom {

struct OverconvConfig {
  std::shared_ptr<const BaseCtx> base;
  unsigned s = 1;
  int n = 1;                   // Frobenius directions
  std::vector<u64> zeta_exps;  // for the largest e; reduced mod e for the others
  std::vector<int> e_list;
  int D = 1;  // jet truncation degree
};

struct OverconvEntry {
  int direction = 0, row = 0, col = 0;
  std::vector<int> monomial;  // exponents of u_{ab}
  bool in_base = true;        // higher theta-coordinates vanish in every ring
  bool agree = true;          // W-coordinates coincide across rings
  int valuation = 0;          // p-adic valuation of the largest disagreement
  WElem value;                // W-coordinate in the first ring
};

struct OverconvRing {
  int e = 0;
  std::vector<u64> zeta_exps;
  int prec_pi = 0;  // working pi-adic precision
};

struct OverconvReport {
  std::string kind;
  std::vector<OverconvRing> rings;
  int precision = 0;  // p-adic precision of the comparison
  std::vector<OverconvEntry> entries;
  bool pass() const;
  // The first entry that is not in W or disagrees; nullptr if none.
  const OverconvEntry* first_failure() const;
};

// Builds L_pi in a given ring.
using TorsionBuilder = std::function<TorsionSymbol(const std::shared_ptr<const RamCtx>&)>;

// L_pi = (p/pi) L_p for constant L_p over W; values(i, j, k) = L^k_{ij}.
TorsionBuilder scaled_torsion(const Tensor3<WElem>& values);
// L_pi = (p/pi) L_p for a polynomial L_p with coefficients over W.
TorsionBuilder scaled_torsion(int n, const std::vector<std::vector<std::pair<WElem, std::vector<std::pair<int, unsigned>>>>>& entries);

OverconvReport lc_overconvergence_check(const OverconvConfig& cfg, const Mat<WElem>& q, const TorsionBuilder& torsion);
OverconvReport chern_overconvergence_check(const OverconvConfig& cfg, const Mat<WElem>& q);

}  // namespace pigeom
