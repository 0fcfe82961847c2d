#include "pigeom/arith.hpp"

#include "pigeom/error.hpp"

namespace pigeom {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::config_invalid: return "config-invalid";
    case ErrorCode::precision_exhausted: return "precision-exhausted";
    case ErrorCode::not_a_unit: return "not-a-unit";
    case ErrorCode::not_divisible: return "not-divisible";
    case ErrorCode::singular_residue: return "singular-residue";
    case ErrorCode::not_congruent_to_one: return "not-congruent-to-one";
    case ErrorCode::hypothesis_violated: return "hypothesis-violated";
    case ErrorCode::degenerate_denominator: return "degenerate-denominator";
    case ErrorCode::degenerate_curve: return "degenerate-curve";
    case ErrorCode::hyperplane_violation: return "hyperplane-violation";
    case ErrorCode::context_mismatch: return "context-mismatch";
  }
  return "unknown";
}

Modulus::Modulus(u64 n) : n_(n), small_(n < (u64{1} << 32)) {
  if (n == 0 || n >= kMaxModulus) throw Error(ErrorCode::config_invalid, "modulus out of range");
}

u64 Modulus::pow(u64 a, u64 e) const {
  u64 result = 1 % n_;
  u64 base = a % n_;
  while (e > 0) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

u64 Modulus::reduce(i64 a) const {
  i64 r = a % static_cast<i64>(n_);
  return static_cast<u64>(r < 0 ? r + static_cast<i64>(n_) : r);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<u64> prime_factors(u64 n) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

u64 checked_pow(u64 b, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r >= kMaxModulus / b) throw Error(ErrorCode::config_invalid, "p^K exceeds 2^62");
    r *= b;
  }
  return r;
}

u64 inverse_mod(u64 a, u64 n) {
  i64 t = 0, new_t = 1;
  i64 r = static_cast<i64>(n), new_r = static_cast<i64>(a % n);
  while (new_r != 0) {
    i64 q = r / new_r;
    i64 tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (r != 1) throw Error(ErrorCode::not_a_unit, "residue has no inverse");
  return t < 0 ? static_cast<u64>(t + static_cast<i64>(n)) : static_cast<u64>(t);
}

int valuation(u64 x, u64 p) {
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

PadicRatio::PadicRatio(u64 p, int K) : p_(p), K_(K), mod_(checked_pow(p, static_cast<unsigned>(K))) {}

void PadicRatio::mul(i64 t) {
  if (t == 0) throw Error(ErrorCode::not_divisible, "zero factor in ratio");
  bool negative = t < 0;
  u64 a = static_cast<u64>(negative ? -t : t);
  int v = valuation(a, p_);
  for (int i = 0; i < v; ++i) a /= p_;
  val_ += v;
  unit_ = mod_.mul(unit_, a % mod_.value());
  if (negative) unit_ = mod_.neg(unit_);
}

void PadicRatio::div(i64 t) {
  if (t == 0) throw Error(ErrorCode::not_divisible, "division by zero");
  bool negative = t < 0;
  u64 a = static_cast<u64>(negative ? -t : t);
  int v = valuation(a, p_);
  for (int i = 0; i < v; ++i) a /= p_;
  val_ -= v;
  unit_ = mod_.mul(unit_, inverse_mod(a % mod_.value(), mod_.value()));
  if (negative) unit_ = mod_.neg(unit_);
}

u64 PadicRatio::residue() const {
  if (val_ < 0) throw Error(ErrorCode::not_divisible, "ratio is not p-integral");
  if (val_ >= K_) return 0;
  return mod_.mul(unit_, checked_pow(p_, static_cast<unsigned>(val_)));
}

u64 binomial_over_p(u64 n, u64 k, u64 p, int K) {
  PadicRatio r(p, K);
  for (u64 i = 0; i < k; ++i) {
    r.mul(static_cast<i64>(n - i));
    r.div(static_cast<i64>(i + 1));
  }
  r.div(static_cast<i64>(p));
  return r.residue();
}

u64 binomial_half(unsigned k, u64 p, int K) {
  // binom(1/2, k) = prod_{i<k} (1 - 2i) / (2^k k!)
  PadicRatio r(p, K);
  for (unsigned i = 0; i < k; ++i) {
    r.mul(1 - 2 * static_cast<i64>(i));
    r.div(2);
    r.div(static_cast<i64>(i) + 1);
  }
  return r.residue();
}

}  // namespace pigeom
