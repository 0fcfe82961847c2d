#pragma once

// JSON reading and writing for ring contexts, elements and problem data.

#include <memory>
#include <random>
#include <string>

#include "json.hpp"
#include "pigeom/connections.hpp"
#include "pigeom/delta_poly.hpp"
#include "pigeom/geodesics.hpp"

namespace pigeom::cli {

using Json = nlohmann::ordered_json;

struct RingConfig {
  std::shared_ptr<const FieldCtx> field;
  std::shared_ptr<const BaseCtx> W;
  std::shared_ptr<const RamCtx> R;
  int N = 1;
  int D = 2;
};

// Builds the tower from the "ring" object; K may be raised by guard digits.
RingConfig read_ring(const Json& ring, int extra_digits = 0);
Json ring_summary(const RingConfig& cfg);

Json to_json(const Fq& a);
Json to_json(const WElem& a);
Json to_json(const RpiElem& a);
Json to_json(const SeriesElem& a);
template <class E>
Json to_json(const Mat<E>& a) {
  Json out = Json::array();
  for (size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (size_t j = 0; j < a.cols(); ++j) row.push_back(to_json(a(i, j)));
    out.push_back(std::move(row));
  }
  return out;
}
template <class E>
Json to_json(const std::vector<E>& a) {
  Json out = Json::array();
  for (const E& x : a) out.push_back(to_json(x));
  return out;
}
template <class E>
Json to_json(const Tensor3<E>& a) {
  Json out = Json::array();
  for (int i = 0; i < a.n(); ++i) {
    Json plane = Json::array();
    for (int j = 0; j < a.n(); ++j) {
      Json row = Json::array();
      for (int k = 0; k < a.n(); ++k) row.push_back(to_json(a(i, j, k)));
      plane.push_back(std::move(row));
    }
    out.push_back(std::move(plane));
  }
  return out;
}
Json to_json(const CheckReport& c);

// Elements: an integer, a decimal string, an array of coefficients (full
// precision) or {"coeffs": [...], "prec": k}. R_pi elements also accept
// {"coords": [W, ...], "prec": k}.
Fq read_fq(const Json& j, const FieldCtx& F);
WElem read_w(const Json& j, const BaseCtx& W);
RpiElem read_rpi(const Json& j, const RamCtx& R);
FqVec read_fq_vec(const Json& j, const FieldCtx& F);
WVec read_w_vec(const Json& j, const BaseCtx& W);
Mat<WElem> read_w_mat(const Json& j, const BaseCtx& W);
Mat<RpiElem> read_rpi_mat(const Json& j, const RamCtx& R);

// "random" draws a symmetric matrix with invertible residue.
Mat<RpiElem> read_metric(const Json& j, const RamCtx& R, size_t N, std::mt19937_64& rng);
// {"kind": "zero" | "constant" | "polynomial", ...}; absent means zero.
TorsionSymbol read_torsion(const Json* j, const std::shared_ptr<const RamCtx>& R, int n);
// [{"exponents": [...], "coeff": W}, ...]
DeltaPoly read_delta_poly(const Json& j, const BaseCtx& W);

// Field access with a readable config error.
const Json& require(const Json& obj, const std::string& key);
const Json* optional_field(const Json& obj, const std::string& key);

}  // namespace pigeom::cli
