#include "io.hpp"

#include <string>

#include "pigeom/error.hpp"

namespace pigeom::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

i64 read_int(const Json& j, const std::string& what) {
  try {
    if (j.is_number_integer()) return j.get<i64>();
    if (j.is_string()) {
      size_t used = 0;
      const std::string s = j.get<std::string>();
      const i64 v = std::stoll(s, &used);
      if (used == s.size()) return v;
    }
  } catch (const std::exception&) {
  }
  bad(what + ": expected an integer or a decimal string");
}

u64 reduce(i64 v, u64 n) {
  const i64 r = v % static_cast<i64>(n);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(n) : r);
}

std::vector<u64> read_coeffs(const Json& j, u64 modulus, const std::string& what) {
  if (!j.is_array()) bad(what + ": expected an array of coefficients");
  std::vector<u64> out;
  for (const Json& c : j) out.push_back(reduce(read_int(c, what), modulus));
  return out;
}

Json coeff_strings(const Coeffs& c) {
  Json out = Json::array();
  for (u64 x : c) out.push_back(std::to_string(x));
  return out;
}

}  // namespace

const Json& require(const Json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key)) bad("missing field '" + key + "'");
  return obj.at(key);
}

const Json* optional_field(const Json& obj, const std::string& key) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return nullptr;
  return &obj.at(key);
}

RingConfig read_ring(const Json& ring, int extra_digits) {
  auto get = [&](const char* key, i64 fallback) {
    const Json* v = optional_field(ring, key);
    return v ? read_int(*v, std::string("ring.") + key) : fallback;
  };
  const i64 p = read_int(require(ring, "p"), "ring.p");
  const i64 m = get("m", 1), K = get("K", 0), e = get("e", 1), s = get("s", 1), n = get("n", 1);
  if (p < 2 || m < 1 || K < 1 || e < 1 || s < 1 || n < 1) bad("ring parameters p, m, K, e, s, n must be positive");
  std::optional<std::vector<u64>> modulus;
  if (const Json* mod = optional_field(ring, "modulus")) modulus = read_coeffs(*mod, static_cast<u64>(p), "ring.modulus");
  std::vector<u64> exps(static_cast<size_t>(n), 0);
  if (const Json* z = optional_field(ring, "zeta_exps")) {
    if (!z->is_array() || z->size() != static_cast<size_t>(n)) bad("ring.zeta_exps must list n exponents");
    for (size_t i = 0; i < z->size(); ++i) exps[i] = reduce(read_int((*z)[i], "ring.zeta_exps"), static_cast<u64>(e));
  }
  std::optional<int> prec_pi;
  if (const Json* v = optional_field(ring, "prec_pi")) prec_pi = static_cast<int>(read_int(*v, "ring.prec_pi")) + static_cast<int>(e) * extra_digits;

  RingConfig cfg;
  cfg.field = FieldCtx::make(static_cast<u64>(p), static_cast<int>(m), modulus);
  cfg.W = BaseCtx::make(cfg.field, static_cast<int>(K) + extra_digits);
  cfg.R = RamCtx::make(cfg.W, static_cast<int>(e), static_cast<unsigned>(s), static_cast<int>(n), exps, prec_pi);
  cfg.N = static_cast<int>(get("N", n));
  cfg.D = static_cast<int>(get("D", 2));
  if (cfg.N < 1 || cfg.D < 0) bad("ring.N must be positive and ring.D non-negative");
  return cfg;
}

Json ring_summary(const RingConfig& cfg) {
  const RamCtx& R = *cfg.R;
  Json out;
  out["p"] = cfg.field->p();
  out["m"] = cfg.field->m();
  out["K"] = cfg.W->K();
  out["modulus"] = coeff_strings(Coeffs(cfg.field->modulus().begin(), cfg.field->modulus().end()));
  out["generator"] = to_json(cfg.field->generator());
  out["e"] = R.e();
  out["s"] = R.s();
  out["n"] = R.n();
  out["N"] = cfg.N;
  out["zeta_exps"] = R.zeta_exps();
  out["prec_pi"] = R.M();
  out["D"] = cfg.D;
  return out;
}

Json to_json(const Fq& a) { return coeff_strings(a.coeffs()); }

Json to_json(const WElem& a) {
  Json out;
  out["coeffs"] = coeff_strings(a.coeffs());
  out["prec"] = a.prec();
  return out;
}

Json to_json(const RpiElem& a) {
  Json out;
  out["coords"] = to_json(rpi_theta_coords(a));
  out["prec"] = a.prec();
  return out;
}

Json to_json(const SeriesElem& a) {
  Json terms = Json::array();
  const SeriesCtx& T = a.ctx();
  for (size_t i = 0; i < T.size(); ++i) {
    if (a.coeff(i).is_zero()) continue;
    Json t;
    t["monomial"] = T.monomials()[i];
    t["coeff"] = to_json(a.coeff(i));
    terms.push_back(std::move(t));
  }
  Json out;
  out["terms"] = std::move(terms);
  out["prec"] = ser_prec(a);
  return out;
}

Json to_json(const CheckReport& c) {
  Json out;
  out["name"] = c.name;
  out["pass"] = c.pass;
  out["valuation"] = c.valuation;
  out["required"] = c.required;
  out["precision"] = c.precision;
  return out;
}

Fq read_fq(const Json& j, const FieldCtx& F) {
  if (j.is_array()) return F.from_coeffs(read_coeffs(j, F.p(), "residue element"));
  return F.from_int(read_int(j, "residue element"));
}

WElem read_w(const Json& j, const BaseCtx& W) {
  const u64 pK = W.p_power(W.K());
  if (j.is_array()) return W.from_coeffs(read_coeffs(j, pK, "W element"), W.K());
  if (j.is_object()) {
    const int prec = optional_field(j, "prec") ? static_cast<int>(read_int(j.at("prec"), "W element precision")) : W.K();
    if (prec < 0 || prec > W.K()) bad("W element precision out of range");
    return W.from_coeffs(read_coeffs(require(j, "coeffs"), pK, "W element"), prec);
  }
  return W.from_int(read_int(j, "W element"));
}

RpiElem read_rpi(const Json& j, const RamCtx& R) {
  if (j.is_object() && j.contains("coords")) {
    std::vector<WElem> coords;
    for (const Json& c : require(j, "coords")) coords.push_back(read_w(c, R.base()));
    RpiElem out = R.from_coords(coords);
    if (const Json* prec = optional_field(j, "prec")) {
      const int k = static_cast<int>(read_int(*prec, "R_pi element precision"));
      if (k < 0 || k > out.prec()) bad("R_pi element precision exceeds its coordinates");
      out = rpi_truncate(out, k);
    }
    return out;
  }
  return R.from_w(read_w(j, R.base()));
}

FqVec read_fq_vec(const Json& j, const FieldCtx& F) {
  if (!j.is_array()) bad("expected an array of residue elements");
  FqVec out;
  for (const Json& x : j) out.push_back(read_fq(x, F));
  return out;
}

WVec read_w_vec(const Json& j, const BaseCtx& W) {
  if (!j.is_array()) bad("expected an array of W elements");
  WVec out;
  for (const Json& x : j) out.push_back(read_w(x, W));
  return out;
}

namespace {

template <class Read>
auto read_mat(const Json& j, Read read) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) bad("expected a matrix as nested arrays");
  const size_t rows = j.size(), cols = j[0].size();
  std::vector<decltype(read(j[0][0]))> data;
  for (const Json& row : j) {
    if (!row.is_array() || row.size() != cols) bad("matrix rows have different lengths");
    for (const Json& x : row) data.push_back(read(x));
  }
  return Mat<decltype(read(j[0][0]))>(rows, cols, std::move(data));
}

}  // namespace

Mat<WElem> read_w_mat(const Json& j, const BaseCtx& W) {
  return read_mat(j, [&W](const Json& x) { return read_w(x, W); });
}

Mat<RpiElem> read_rpi_mat(const Json& j, const RamCtx& R) {
  return read_mat(j, [&R](const Json& x) { return read_rpi(x, R); });
}

Mat<RpiElem> read_metric(const Json& j, const RamCtx& R, size_t N, std::mt19937_64& rng) {
  if (j.is_string() && j.get<std::string>() == "random") {
    for (;;) {
      Mat<RpiElem> q(N, N, R.zero());
      for (size_t a = 0; a < N; ++a)
        for (size_t b = a; b < N; ++b) q(a, b) = q(b, a) = R.random(rng, R.M());
      if (fq_mat_inverse(mat_residue(R, q))) return q;
    }
  }
  Mat<RpiElem> q = read_rpi_mat(j, R);
  if (q.rows() != N || q.cols() != N) bad("metric must be N x N");
  return q;
}

TorsionSymbol read_torsion(const Json* j, const std::shared_ptr<const RamCtx>& R, int n) {
  if (!j) return TorsionSymbol::zero(R, n);
  const std::string kind = require(*j, "kind").get<std::string>();
  if (kind == "zero") return TorsionSymbol::zero(R, n);
  if (kind == "constant") {
    // values[i][j][k] = L^k_{ij}
    const Json& v = require(*j, "values");
    Tensor3<RpiElem> t(n, R->zero());
    if (!v.is_array() || v.size() != static_cast<size_t>(n)) bad("torsion values must be n x n x n");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int k = 0; k < n; ++k) t(a, b, k) = read_rpi(v.at(static_cast<size_t>(a)).at(static_cast<size_t>(b)).at(static_cast<size_t>(k)), *R);
    return TorsionSymbol::constant(R, t);
  }
  if (kind == "polynomial") {
    // Terms of L^k_{ij} for i < j; the entries with i > j follow by antisymmetry.
    std::vector<std::vector<TorsionTerm>> entries(static_cast<size_t>(n * n * n));
    for (const Json& term : require(*j, "terms")) {
      const int a = static_cast<int>(read_int(require(term, "i"), "torsion term i"));
      const int b = static_cast<int>(read_int(require(term, "j"), "torsion term j"));
      const int k = static_cast<int>(read_int(require(term, "k"), "torsion term k"));
      if (a < 0 || b < 0 || k < 0 || a >= n || b >= n || k >= n || a >= b) bad("torsion terms need 0 <= i < j < n");
      TorsionTerm t{read_rpi(require(term, "coeff"), *R), {}};
      if (const Json* f = optional_field(term, "factors"))
        for (const Json& factor : *f)
          t.factors.emplace_back(static_cast<int>(read_int(factor.at(0), "torsion factor")),
                                 static_cast<unsigned>(read_int(factor.at(1), "torsion factor")));
      entries[static_cast<size_t>((a * n + b) * n + k)].push_back(t);
      t.coeff = -t.coeff;
      entries[static_cast<size_t>((b * n + a) * n + k)].push_back(t);
    }
    return TorsionSymbol(R, n, std::move(entries));
  }
  bad("unknown torsion kind '" + kind + "'");
}

DeltaPoly read_delta_poly(const Json& j, const BaseCtx& W) {
  if (!j.is_array()) bad("delta polynomial must be a list of terms");
  DeltaPoly P(W);
  for (const Json& term : j) {
    DeltaPoly::Exponents exps;
    for (const Json& x : require(term, "exponents")) {
      const i64 v = read_int(x, "delta polynomial exponent");
      if (v < 0) bad("delta polynomial exponents must be non-negative");
      exps.push_back(static_cast<unsigned>(v));
    }
    P.add_term(std::move(exps), read_w(require(term, "coeff"), W));
  }
  return P;
}

}  // namespace pigeom::cli
