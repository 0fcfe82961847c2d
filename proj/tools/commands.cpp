#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdint>
#include <mutex>
#include <thread>

#include "pigeom/error.hpp"
#include "pigeom/jet_group.hpp"
#include "pigeom/overconv.hpp"

namespace pigeom::cli {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::config_invalid, what); }

const Json& problem_of(const Json& config) {
  static const Json empty = Json::object();
  const Json* p = optional_field(config, "problem");
  return p ? *p : empty;
}

int int_field(const Json& obj, const std::string& key, int fallback) {
  const Json* v = optional_field(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) bad("field '" + key + "' must be an integer");
  return v->get<int>();
}

std::string string_field(const Json& obj, const std::string& key, const std::string& fallback) {
  const Json* v = optional_field(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) bad("field '" + key + "' must be a string");
  return v->get<std::string>();
}

int depth_of(const Options& opts, const Json& problem, int fallback) {
  const int d = opts.depth.value_or(int_field(problem, "depth", fallback));
  if (d < 1) bad("depth must be positive");
  return d;
}

// Runs body(i) for i < count on up to jobs threads; results keep index order.
template <class T, class Body>
std::vector<T> run_samples(int count, unsigned jobs, Body body) {
  std::vector<T> out(static_cast<size_t>(std::max(count, 0)));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_lock;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        out[static_cast<size_t>(i)] = body(i);
      } catch (...) {
        std::lock_guard lock(error_lock);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < std::max(jobs, 1u); ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

std::mt19937_64 sample_rng(u64 seed, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

// Tallies of a property suite, one counter per identity.
struct Tally {
  std::vector<std::string> names;
  std::vector<int> failures;
  explicit Tally(std::vector<std::string> n) : names(std::move(n)), failures(names.size(), 0) {}
  void add(const std::vector<bool>& ok) {
    for (size_t i = 0; i < ok.size(); ++i) failures[i] += ok[i] ? 0 : 1;
  }
};

Outcome tally_outcome(Json report, const Tally& tally, int samples) {
  Outcome out;
  Json checks = Json::array();
  for (size_t i = 0; i < tally.names.size(); ++i) {
    Json c;
    c["name"] = tally.names[i];
    c["samples"] = samples;
    c["failures"] = tally.failures[i];
    c["pass"] = tally.failures[i] == 0;
    checks.push_back(std::move(c));
    if (tally.failures[i] != 0) out.failures.push_back(tally.names[i]);
  }
  report["checks"] = std::move(checks);
  out.report = std::move(report);
  return out;
}

Outcome check_outcome(Json report, const std::vector<CheckReport>& checks) {
  Outcome out;
  Json arr = Json::array();
  for (const auto& c : checks) {
    arr.push_back(to_json(c));
    if (!c.pass) out.failures.push_back(c.name);
  }
  report["checks"] = std::move(arr);
  out.report = std::move(report);
  return out;
}

CheckReport valuation_check(const std::string& name, int valuation, int precision, int required) {
  CheckReport c;
  c.name = name;
  c.valuation = valuation;
  c.precision = precision;
  c.required = required;
  c.pass = valuation >= required;
  return c;
}

CheckReport equality_check(const std::string& name, bool ok) {
  CheckReport c;
  c.name = name;
  c.pass = ok;
  return c;
}

Json header(const std::string& command, const RingConfig& ring) {
  Json report;
  report["command"] = command;
  report["ring"] = ring_summary(ring);
  return report;
}

// --- ring-info -------------------------------------------------------------

Outcome ring_info(const Json& config, const Options&) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const FieldCtx& F = *ring.field;
  const RamCtx& R = *ring.R;
  Json report = header("ring-info", ring);
  Json lift = Json::array();
  for (u64 c : ring.W->modulus_lift()) lift.push_back(std::to_string(c));
  report["modulus_lift"] = std::move(lift);
  report["tau"] = to_json(R.tau());
  Json zetas = Json::array();
  for (int i = 0; i < R.n(); ++i) zetas.push_back(to_json(R.zeta(i)));
  report["zetas"] = std::move(zetas);
  report["cap"] = R.cap();

  std::vector<CheckReport> checks;
  checks.push_back(equality_check("residue modulus is irreducible", is_irreducible(F.modulus(), F.p())));
  checks.push_back(equality_check("generator has order p^m - 1", F.order_of(F.generator()) == F.order() - 1));
  bool roots = true;
  for (int i = 0; i < R.n(); ++i) roots = roots && pow(R.zeta(i), static_cast<u64>(R.e())) == ring.W->one();
  checks.push_back(equality_check("zeta_i^e = 1", roots));
  checks.push_back(equality_check("tau is Teichmueller", w_delta(R.tau(), 1).is_zero()));
  return check_outcome(std::move(report), checks);
}

// --- derivation-check ------------------------------------------------------

Outcome derivation_check(const Json& config, const Options& opts) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const RamCtx& R = *ring.R;
  const Json& problem = problem_of(config);
  const int samples = int_field(problem, "samples", 500);
  const int congruence_samples = int_field(problem, "congruence_samples", 200);
  const int n = R.n();
  const u64 ps = R.ps();
  const RpiElem pi = R.pi(), p_over_pi = R.p_over_pi();

  Tally laws({"sum rule: delta(x + y) = delta x + delta y + (p/pi) C(x, y)",
              "product rule: delta(x y) = x^(p^s) delta y + y^(p^s) delta x + pi delta x delta y",
              "phi_i(x) = x^(p^s) mod pi", "precision of delta is M - 1"});
  const auto law_results = run_samples<std::vector<bool>>(samples, opts.jobs, [&](int idx) {
    std::mt19937_64 rng = sample_rng(opts.seed, idx);
    const RpiElem x = R.random(rng, R.M()), y = R.random(rng, R.M());
    std::vector<bool> ok(4, true);
    for (int i = 0; i < n; ++i) {
      const RpiElem dx = rpi_delta(x, i), dy = rpi_delta(y, i), sum = rpi_delta(x + y, i);
      ok[0] = ok[0] && sum == dx + dy + p_over_pi * rpi_cp_carry(x, y);
      ok[1] = ok[1] && rpi_delta(x * y, i) == pow(x, ps) * dy + pow(y, ps) * dx + pi * dx * dy;
      ok[2] = ok[2] && rpi_val(rpi_phi(x, i) - pow(x, ps)) >= 1;
      ok[3] = ok[3] && sum.prec() == R.M() - 1;
    }
    return ok;
  });
  for (const auto& ok : law_results) laws.add(ok);

  Tally congruences({"commutator [phi_i, phi_j] = 0 mod pi", "delta_ij a = delta_i(pi) (delta_j a)^(p^s) mod pi",
                "[phi_i, phi_j] a / pi = delta_ij a - delta_ji a mod pi",
                "delta_i a = delta_i(pi) z1^(p^s) mod pi for a = z0 + z1 pi + O(pi^2)"});
  const auto congruence_results = run_samples<std::vector<bool>>(congruence_samples, opts.jobs, [&](int idx) {
    std::mt19937_64 rng = sample_rng(opts.seed ^ 0x9e3779b97f4a7c15ULL, idx);
    const RpiElem a = R.random(rng, R.M());
    const int i = static_cast<int>(rng() % static_cast<u64>(n)), j = static_cast<int>(rng() % static_cast<u64>(n));
    const RpiElem dja = rpi_delta(a, j);
    const RpiElem comm = rpi_phi_word(a, {i, j}) - rpi_phi_word(a, {j, i});
    const RpiElem dij = rpi_delta_word(a, {i, j}), dji = rpi_delta_word(a, {j, i});
    std::vector<bool> ok(4, true);
    ok[0] = rpi_val(comm) >= 1;
    ok[1] = rpi_val(dij - rpi_delta(pi, i) * pow(dja, ps)) >= 1;
    ok[2] = ok[0] && rpi_val(rpi_div_pi(comm, 1) - (dij - dji)) >= 1;
    const FieldCtx& F = R.field();
    const RpiElem z0 = R.from_w(w_teichmueller(R.base(), F.element(rng() % F.order())));
    const RpiElem z1 = R.from_w(w_teichmueller(R.base(), F.element(rng() % F.order())));
    const RpiElem b = z0 + z1 * pi + rpi_mul_pi(R.random(rng, R.M()), 2);
    ok[3] = rpi_val(rpi_delta(b, i) - rpi_delta(pi, i) * pow(z1, ps)) >= 1;
    return ok;
  });
  for (const auto& ok : congruence_results) congruences.add(ok);

  Json report = header("derivation-check", ring);
  report["seed"] = std::to_string(opts.seed);
  Outcome first = tally_outcome(Json::object(), laws, samples);
  Outcome second = tally_outcome(Json::object(), congruences, congruence_samples);
  Json checks = first.report["checks"];
  for (auto& c : second.report["checks"]) checks.push_back(c);
  report["checks"] = std::move(checks);
  first.failures.insert(first.failures.end(), second.failures.begin(), second.failures.end());
  return Outcome{std::move(report), std::move(first.failures)};
}

// --- levi-civita, chern ----------------------------------------------------

i64 legendre(const FieldCtx& F, const Fq& a) {
  if (a.is_zero()) return 0;
  for (u64 x = 1; x < F.order(); ++x)
    if (F.element(x) * F.element(x) == a) return 1;
  return -1;
}

template <class Ring>
std::vector<Mat<RpiElem>> at_identity(const Ring& R, const std::vector<Mat<ElemOf<Ring>>>& gammas) {
  if constexpr (std::is_same_v<Ring, SeriesCtx>) {
    std::vector<Mat<RpiElem>> out;
    for (const auto& g : gammas) out.push_back(map(g, [](const SeriesElem& x) { return ser_eval_at_one(x); }));
    return out;
  } else {
    (void)R;
    return gammas;
  }
}

template <class Ring>
Outcome solve_connection(const std::string& command, const RingConfig& ring, const Ring& X,
                         const MetricMatrices<ElemOf<Ring>>& mats, const Mat<RpiElem>& q, const TorsionSymbol& L,
                         int depth) {
  const bool is_chern = command == "chern";
  const auto conn = is_chern ? chern(X, mats) : levi_civita(X, mats, L, depth);
  const int required = std::min(depth, ring.R->M());
  std::vector<CheckReport> checks{check_near_one(X, conn.lambdas), check_metric(X, conn, required)};
  if (is_chern)
    checks.push_back(check_bq_symmetric(X, conn, required));
  else
    checks.push_back(check_symmetric(X, conn.lambdas, L, required));
  if constexpr (std::is_same_v<Ring, SeriesCtx>) {
    checks.push_back(metric_defect_check(X, q, mats));
    if (is_chern) {
      const auto lc = levi_civita(X, mats, L, ring.R->M());
      for (auto& c : chern_lc_congruence_checks(X, q, L, conn, lc)) checks.push_back(c);
    } else {
      checks.push_back(lcc_formula_check(X, q, L, conn));
    }
  }
  Json report;
  report["lambdas"] = to_json(conn.lambdas);
  report["christoffel_at_identity"] = to_json(as_tensor(at_identity(X, christoffel_second(X, conn.lambdas))));
  return check_outcome(std::move(report), checks);
}

Outcome connection_command(const std::string& command, const Json& config, const Options& opts) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const auto& R = ring.R;
  const Json& problem = problem_of(config);
  std::mt19937_64 rng(opts.seed);
  const size_t N = static_cast<size_t>(ring.N);
  const Mat<RpiElem> q = read_metric(require(problem, "metric"), *R, N, rng);
  const TorsionSymbol L = read_torsion(optional_field(problem, "torsion"), R, R->n());
  const int depth = depth_of(opts, problem, R->M());
  const std::string mode = string_field(problem, "mode", "pointwise");

  Outcome out;
  if (mode == "jet") {
    const auto T = SeriesCtx::make(R, ring.N, ring.D);
    out = solve_connection(command, ring, *T, metric_matrices(*T, q, jet_coordinate(*T)), q, L, depth);
  } else if (mode == "pointwise") {
    const Json* point = optional_field(problem, "point");
    const Mat<RpiElem> g = point ? read_rpi_mat(*point, *R) : identity(*R, N);
    out = solve_connection(command, ring, *R, metric_matrices(*R, q, g), q, L, depth);
    out.report["point"] = to_json(g);
  } else {
    bad("mode must be 'pointwise' or 'jet'");
  }

  Json report = header(command, ring);
  report["mode"] = mode;
  report["depth"] = depth;
  report["metric"] = to_json(q);
  for (auto& [key, value] : out.report.items()) report[key] = value;

  // Scalar Chern connection over Z_p: Lambda(1) = (q/p) q^{(p-1)/2}.
  const RamCtx& Rr = *R;
  if (command == "chern" && ring.N == 1 && Rr.n() == 1 && Rr.e() == 1 && Rr.s() == 1 && ring.field->m() == 1) {
    const auto ch = chern(Rr, metric_matrices(Rr, q, identity(Rr, 1)));
    const RpiElem& lam = ch.lambdas[0](0, 0);
    const i64 symbol = legendre(*ring.field, rpi_residue(q(0, 0)));
    const u64 p = ring.field->p();
    const RpiElem expected = rpi_truncate(Rr.from_int(symbol) * pow(q(0, 0), (p - 1) / 2), lam.prec());
    Json leg;
    leg["symbol"] = symbol;
    leg["lambda"] = to_json(lam);
    leg["expected"] = to_json(expected);
    leg["pass"] = lam == expected;
    report["legendre"] = leg;
    CheckReport c = equality_check("Chern scalar: Lambda = (q/p) q^((p-1)/2)", lam == expected);
    report["checks"].push_back(to_json(c));
    if (!c.pass) out.failures.push_back(c.name);
  }
  return Outcome{std::move(report), std::move(out.failures)};
}

// --- geodesic, parallel-transport, exp-map ---------------------------------

// The connection ring carries two guard digits over the nominal K and curves
// live over W with one: d^2 c on a (K+1)-digit curve is known mod p^{K-1}.
struct CurveSetup {
  RingConfig ring;
  std::shared_ptr<const BaseCtx> W;
  GeodesicCtx ctx;
  int nominal_K;
};

CurveSetup curve_setup(const Json& config, const Options& opts) {
  const Json& ring_json = require(config, "ring");
  RingConfig ring = read_ring(ring_json, 2);
  const auto& R = ring.R;
  const Json& problem = problem_of(config);
  if (R->e() != R->n() || ring.N != R->n()) bad("geodesic equations need e = n = N");
  std::mt19937_64 rng(opts.seed);
  const size_t N = static_cast<size_t>(ring.N);
  const Mat<RpiElem> q = read_metric(require(problem, "metric"), *R, N, rng);
  const auto mats = metric_matrices(*R, q, identity(*R, N));
  const std::string kind = string_field(problem, "connection", "levi-civita");
  Connection<RpiElem> conn;
  if (kind == "levi-civita")
    conn = levi_civita(*R, mats, read_torsion(optional_field(problem, "torsion"), R, R->n()), R->M());
  else if (kind == "chern")
    conn = chern(*R, mats);
  else
    bad("connection must be 'levi-civita' or 'chern'");
  const int K = ring.W->K() - 2;
  auto W = BaseCtx::make(ring.field, K + 1);
  GeodesicCtx ctx = GeodesicCtx::from_connection(*R, conn, W);
  return CurveSetup{std::move(ring), W, std::move(ctx), K};
}

Json nominal_ring(const CurveSetup& st) {
  Json r = ring_summary(st.ring);
  r["K"] = st.nominal_K;
  r["curve_K"] = st.W->K();
  r["connection_K"] = st.ring.W->K();
  return r;
}

Outcome geodesic_command(const Json& config, const Options& opts) {
  const CurveSetup st = curve_setup(config, opts);
  const Json& problem = problem_of(config);
  const BaseCtx& W = *st.W;
  const unsigned s = st.ctx.s();
  Curve c0 = make_curve(read_w_vec(require(problem, "c0"), W), s);
  if (const Json* v0 = optional_field(problem, "v0")) c0.v = read_w_vec(*v0, W);
  if (static_cast<int>(c0.c.size()) != st.ctx.n() || c0.v.size() != c0.c.size()) bad("c0 and v0 need n entries");
  const int depth = depth_of(opts, problem, W.K());
  const Curve g = geodesic(st.ctx, c0, depth);
  const Curve from_c = make_curve(g.c, s);

  Json report;
  report["command"] = "geodesic";
  report["ring"] = nominal_ring(st);
  report["depth"] = depth;
  report["c"] = to_json(g.c);
  report["v"] = to_json(g.v);
  report["residue"] = {{"c", to_json(vec_residue(g.c))}, {"v", to_json(vec_residue(g.v))}};
  const WVec second = second_order_residual(st.ctx, g.c), first = transport_residual(st.ctx, g, g.v);
  std::vector<CheckReport> checks{
      valuation_check("geodesic: second-order equation in c", vec_valuation(second), vec_precision(second), depth - 2),
      valuation_check("geodesic: velocity parallel along c", vec_valuation(first), vec_precision(first), depth - 1),
      valuation_check("geodesic: acceleration of c", vec_valuation(acceleration(st.ctx, from_c)), depth - 2, depth - 2),
      equality_check("geodesic: initial residues preserved",
                     vec_residue(g.c) == vec_residue(c0.c) && vec_residue(g.v) == vec_residue(c0.v)),
      equality_check("geodesic: non-degenerate", is_nondegenerate(st.ctx, g))};
  return check_outcome(std::move(report), checks);
}

Outcome transport_command(const Json& config, const Options& opts) {
  const CurveSetup st = curve_setup(config, opts);
  const Json& problem = problem_of(config);
  const BaseCtx& W = *st.W;
  const Curve c = make_curve(read_w_vec(require(problem, "c"), W), st.ctx.s());
  const WVec w0 = read_w_vec(require(problem, "w0"), W);
  if (static_cast<int>(c.c.size()) != st.ctx.n() || w0.size() != c.c.size()) bad("c and w0 need n entries");
  const int depth = depth_of(opts, problem, W.K());
  const WVec w = parallel_transport(st.ctx, c, w0, depth);
  const WVec res = transport_residual(st.ctx, c, w);

  Json report;
  report["command"] = "parallel-transport";
  report["ring"] = nominal_ring(st);
  report["depth"] = depth;
  report["w"] = to_json(w);
  report["residue"] = to_json(vec_residue(w));
  std::vector<CheckReport> checks{
      valuation_check("parallel transport equation", vec_valuation(res), vec_precision(res), depth - 1),
      equality_check("parallel transport: initial residue preserved", vec_residue(w) == vec_residue(w0))};
  return check_outcome(std::move(report), checks);
}

Outcome exp_map_command(const Json& config, const Options& opts) {
  const CurveSetup st = curve_setup(config, opts);
  const Json& problem = problem_of(config);
  const BaseCtx& W = *st.W;
  const FqVec origin = read_fq_vec(require(problem, "origin"), W.field());
  const FqVec direction = read_fq_vec(require(problem, "direction"), W.field());
  const DeltaPoly P = read_delta_poly(require(problem, "P"), W);
  const int depth = depth_of(opts, problem, W.K());
  const FqVec value = exp_map(st.ctx, origin, direction, P, depth);
  const Curve g = geodesic(st.ctx, make_curve(curve_with_tangent(W, st.ctx.s(), origin, direction), st.ctx.s()), depth);
  FqVec direct;
  for (const WElem& x : g.c) direct.push_back(eval_at(P, x, st.ctx.s()));

  Json report;
  report["command"] = "exp-map";
  report["ring"] = nominal_ring(st);
  report["depth"] = depth;
  report["value"] = to_json(value);
  report["geodesic"] = {{"c", to_json(g.c)}, {"v", to_json(g.v)}};
  std::vector<CheckReport> checks{
      equality_check("exp map: P evaluated along the geodesic", value == direct),
      equality_check("exp map: geodesic starts at origin with the given direction",
                     vec_residue(g.c) == origin && vec_residue(g.v) == direction)};
  return check_outcome(std::move(report), checks);
}

// --- trans-map -------------------------------------------------------------

// Terms {"coeff": W, "u": [exponents], "u_phi": [exponents]}.
struct PolyTerm {
  WElem coeff;
  std::vector<u64> u, u_phi;
};
using Poly = std::vector<PolyTerm>;

Poly read_poly(const Json& j, const BaseCtx& W, int dim) {
  Poly out;
  auto exps = [dim](const Json* e) {
    std::vector<u64> v(static_cast<size_t>(dim), 0);
    if (!e) return v;
    if (!e->is_array() || e->size() != static_cast<size_t>(dim)) bad("ODE term exponents need dim entries");
    for (size_t i = 0; i < v.size(); ++i) v[i] = (*e)[i].get<u64>();
    return v;
  };
  for (const Json& t : j)
    out.push_back(PolyTerm{read_w(require(t, "coeff"), W), exps(optional_field(t, "u")), exps(optional_field(t, "u_phi"))});
  return out;
}

WElem eval_poly(const Poly& P, const WVec& u, const WVec& u_phi) {
  WElem acc = u.at(0).ctx().zero();
  for (const PolyTerm& t : P) {
    WElem x = t.coeff;
    for (size_t i = 0; i < u.size(); ++i) {
      if (t.u[i]) x = x * pow(u[i], t.u[i]);
      if (t.u_phi[i]) x = x * pow(u_phi[i], t.u_phi[i]);
    }
    acc = acc + x;
  }
  return acc;
}

Outcome trans_map_command(const Json& config, const Options& opts) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const BaseCtx& W = *ring.W;
  const Json& problem = problem_of(config);
  const Json& system = require(problem, "system");
  const int dim = int_field(system, "dim", 1);
  const Json& numer = require(system, "numer");
  if (dim < 1 || !numer.is_array() || numer.size() != static_cast<size_t>(dim)) bad("system.numer needs dim polynomials");
  std::vector<Poly> F;
  for (const Json& p : numer) F.push_back(read_poly(p, W, dim));
  OdeSystem sys;
  sys.dim = dim;
  sys.s = ring.R->s();
  sys.numer = [F](const WVec& u, const WVec& u_phi) {
    WVec out;
    for (const Poly& f : F) out.push_back(eval_poly(f, u, u_phi));
    return out;
  };
  if (const Json* d = optional_field(system, "denom")) {
    const Poly G = read_poly(*d, W, dim);
    sys.denom = [G](const WVec& u, const WVec& u_phi) { return eval_poly(G, u, u_phi); };
  }
  const FqVec lambda0 = read_fq_vec(require(problem, "lambda0"), W.field());
  if (lambda0.size() != static_cast<size_t>(dim)) bad("lambda0 needs dim entries");
  const DeltaPoly P = read_delta_poly(require(problem, "P"), W);
  const int depth = depth_of(opts, problem, W.K());
  const FqVec value = trans_map(sys, W, P, lambda0, depth);
  const WVec u = ode_solve(sys, vec_lift(W, lambda0), depth);
  const WVec res = ode_residual(sys, u);

  Json report = header("trans-map", ring);
  report["depth"] = depth;
  report["value"] = to_json(value);
  report["solution"] = to_json(u);
  std::vector<CheckReport> checks{
      valuation_check("ODE residual of the solution", vec_valuation(res), vec_precision(res), depth - 1),
      equality_check("solution lifts lambda0", vec_residue(u) == lambda0)};
  return check_outcome(std::move(report), checks);
}

// --- witt-coords -----------------------------------------------------------

Outcome witt_coords_command(const Json& config, const Options&) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const BaseCtx& W = *ring.W;
  const Json& problem = problem_of(config);
  const WElem a = read_w(require(problem, "a"), W);
  const int r = int_field(problem, "r", W.K() - 1);
  const auto x = witt_coords(a, r);
  const auto ghosts = ghost_components(x);
  bool round_trip = true;
  for (size_t j = 0; j < ghosts.size(); ++j)
    round_trip = round_trip && ghosts[j] == w_truncate(w_frobenius(a, static_cast<unsigned>(j)), ghosts[j].prec());

  Json report = header("witt-coords", ring);
  report["a"] = to_json(a);
  report["coords"] = to_json(x);
  report["ghosts"] = to_json(ghosts);
  return check_outcome(std::move(report), {equality_check("ghost components equal phi^j(a)", round_trip)});
}

// --- jet-group-check -------------------------------------------------------

Outcome jet_group_command(const Json& config, const Options& opts) {
  const RingConfig ring = read_ring(require(config, "ring"));
  const auto& Rp = ring.R;
  const RamCtx& R = *Rp;
  const int samples = int_field(problem_of(config), "samples", 100);
  const size_t N = static_cast<size_t>(ring.N);
  const int n = R.n();

  auto random_mat = [&](std::mt19937_64& rng, int prec) {
    Mat<RpiElem> out(N, N, R.zero());
    for (size_t i = 0; i < N; ++i)
      for (size_t j = 0; j < N; ++j) out(i, j) = R.random(rng, prec);
    return out;
  };
  auto random_unit = [&](std::mt19937_64& rng) {
    for (;;) {
      Mat<RpiElem> a = random_mat(rng, R.M());
      if (fq_mat_inverse(mat_residue(R, a))) return a;
    }
  };
  auto random_jet = [&](std::mt19937_64& rng) {
    JetPoint x{random_unit(rng), {}};
    for (int i = 0; i < n; ++i) x.a.push_back(random_mat(rng, R.M()));
    return x;
  };

  Tally tally({"jet identity", "jet associativity", "jet inverse", "kernel points multiply by a + b + pi a b",
               "g_to_G1 is a homomorphism", "log derivative of the Levi-Civita connection",
               "log derivative of the Chern connection"});
  const auto results = run_samples<std::vector<bool>>(samples, opts.jobs, [&](int idx) {
    std::mt19937_64 rng = sample_rng(opts.seed, idx);
    std::vector<bool> ok(7, true);
    const JetPoint x = random_jet(rng), y = random_jet(rng), z = random_jet(rng);
    const JetPoint one = jet_identity(R, ring.N, n);
    ok[0] = jet_equal(R, jet_mul(R, x, one), x) && jet_equal(R, jet_mul(R, one, x), x);
    ok[1] = jet_equal(R, jet_mul(R, jet_mul(R, x, y), z), jet_mul(R, x, jet_mul(R, y, z)));
    const JetPoint xi = jet_inv(R, x);
    ok[2] = jet_equal(R, jet_mul(R, x, xi), one) && jet_equal(R, jet_mul(R, xi, x), one);
    JetPoint kx = one, ky = one;
    for (size_t i = 0; i < static_cast<size_t>(n); ++i) {
      kx.a[i] = random_mat(rng, R.M());
      ky.a[i] = random_mat(rng, R.M());
    }
    const JetPoint kz = jet_mul(R, kx, ky);
    for (size_t i = 0; i < static_cast<size_t>(n); ++i) ok[3] = ok[3] && mat_is_zero(R, kz.a[i] - lie_add(R, kx.a[i], ky.a[i]));
    const Mat<RpiElem> a = random_mat(rng, R.M()), b = random_mat(rng, R.M());
    ok[4] = mat_is_zero(R, g_to_G1(R, a) * g_to_G1(R, b) - g_to_G1(R, lie_add(R, a, b)));
    if (static_cast<int>(N) == n) {
      Mat<RpiElem> q = random_mat(rng, R.M());
      for (size_t r = 0; r < N; ++r)
        for (size_t c = 0; c < r; ++c) q(r, c) = q(c, r);
      if (fq_mat_inverse(mat_residue(R, q))) {
        const Mat<RpiElem> g = random_unit(rng);
        const auto mats = metric_matrices(R, q, g);
        const auto lc = levi_civita(R, mats, TorsionSymbol::zero(Rp, n), R.M());
        const auto ch = chern(R, mats);
        auto agree = [&](const Connection<RpiElem>& conn) {
          const auto via = log_derivative(R, g, conn.lambdas), direct = christoffel_second(R, conn.lambdas);
          for (size_t i = 0; i < via.size(); ++i)
            if (!mat_is_zero(R, via[i] - direct[i])) return false;
          return true;
        };
        ok[5] = agree(lc);
        ok[6] = agree(ch);
      }
    }
    return ok;
  });
  for (const auto& ok : results) tally.add(ok);
  Json report = header("jet-group-check", ring);
  report["seed"] = std::to_string(opts.seed);
  return tally_outcome(std::move(report), tally, samples);
}

// --- overconvergence -------------------------------------------------------

Json overconv_json(const OverconvReport& r) {
  Json out;
  out["kind"] = r.kind;
  Json rings = Json::array();
  for (const auto& ring : r.rings) rings.push_back({{"e", ring.e}, {"zeta_exps", ring.zeta_exps}, {"prec_pi", ring.prec_pi}});
  out["rings"] = std::move(rings);
  out["precision"] = r.precision;
  out["pass"] = r.pass();
  Json entries = Json::array();
  auto entry_json = [](const OverconvEntry& e) {
    Json j;
    j["direction"] = e.direction;
    j["row"] = e.row;
    j["col"] = e.col;
    j["monomial"] = e.monomial;
    j["in_base"] = e.in_base;
    j["agree"] = e.agree;
    j["value"] = to_json(e.value);
    if (!e.in_base || !e.agree) j["valuation"] = e.valuation;
    return j;
  };
  for (const auto& e : r.entries) entries.push_back(entry_json(e));
  out["entries"] = std::move(entries);
  out["first_failure"] = r.first_failure() ? entry_json(*r.first_failure()) : Json();
  return out;
}

Outcome overconvergence_command(const Json& config, const Options&) {
  const Json& ring_json = require(config, "ring");
  const RingConfig ring = read_ring(ring_json);
  const Json& problem = problem_of(config);
  OverconvConfig cfg;
  cfg.base = ring.W;
  cfg.s = ring.R->s();
  cfg.n = ring.R->n();
  cfg.zeta_exps.clear();
  for (const Json& z : require(ring_json, "zeta_exps")) cfg.zeta_exps.push_back(z.get<u64>());
  for (const Json& e : require(problem, "e_list")) cfg.e_list.push_back(e.get<int>());
  cfg.D = ring.D;
  if (ring.N != cfg.n) bad("overconvergence compares connections with N = n");
  const Mat<WElem> q = read_w_mat(require(problem, "metric"), *ring.W);

  // Torsion over W: constant values[i][j][k] = L^k_{ij}, or polynomial terms as for levi-civita.
  TorsionBuilder torsion = scaled_torsion(Tensor3<WElem>(cfg.n, ring.W->zero()));
  const std::string scaling = string_field(problem, "torsion_scaling", "p_over_pi");
  if (scaling != "p_over_pi" && scaling != "none") bad("torsion_scaling must be 'p_over_pi' or 'none'");
  if (const Json* t = optional_field(problem, "torsion")) {
    const Json tj = *t;
    const bool scaled = scaling == "p_over_pi";
    torsion = [tj, scaled, n = cfg.n](const std::shared_ptr<const RamCtx>& R) {
      const TorsionSymbol L = read_torsion(&tj, R, n);
      return scaled ? L.scaled(R->p_over_pi()) : L;
    };
  }

  const std::string kind = string_field(problem, "kind", "both");
  if (kind != "levi-civita" && kind != "chern" && kind != "both") bad("kind must be 'levi-civita', 'chern' or 'both'");
  Json report = header("overconvergence", ring);
  Json results = Json::array();
  Outcome out;
  auto record = [&](const OverconvReport& r) {
    results.push_back(overconv_json(r));
    if (!r.pass()) {
      const OverconvEntry& f = *r.first_failure();
      out.failures.push_back(r.kind + ": Lambda_" + std::to_string(f.direction) + "(" + std::to_string(f.row) + "," +
                             std::to_string(f.col) + ") " + (f.in_base ? "differs across ramifications" : "is not in W") +
                             " at valuation " + std::to_string(f.valuation));
    }
  };
  if (kind != "chern") record(lc_overconvergence_check(cfg, q, torsion));
  if (kind != "levi-civita") record(chern_overconvergence_check(cfg, q));
  report["results"] = std::move(results);
  out.report = std::move(report);
  return out;
}

}  // namespace

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"ring-info", ring_info},
      {"derivation-check", derivation_check},
      {"levi-civita", [](const Json& c, const Options& o) { return connection_command("levi-civita", c, o); }},
      {"chern", [](const Json& c, const Options& o) { return connection_command("chern", c, o); }},
      {"geodesic", geodesic_command},
      {"parallel-transport", transport_command},
      {"exp-map", exp_map_command},
      {"trans-map", trans_map_command},
      {"witt-coords", witt_coords_command},
      {"jet-group-check", jet_group_command},
      {"overconvergence", overconvergence_command},
  };
  return table;
}

}  // namespace pigeom::cli
