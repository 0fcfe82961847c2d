#pragma once

// Machine-word modular arithmetic. Every modulus used by the library is a
// prime power below 2^62, so residues fit in a u64 and products in a u128.

#include <cstdint>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace pigeom {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;

// Coefficient storage for field and ring elements; inline up to 8 words.
using Coeffs = boost::container::small_vector<u64, 8>;

inline constexpr u64 kMaxModulus = u64{1} << 62;

class Modulus {
 public:
  Modulus() = default;
  explicit Modulus(u64 n);

  u64 value() const { return n_; }

  u64 add(u64 a, u64 b) const {
    u64 s = a + b;
    return s >= n_ ? s - n_ : s;
  }
  u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + (n_ - b); }
  u64 neg(u64 a) const { return a == 0 ? 0 : n_ - a; }
  u64 mul(u64 a, u64 b) const {
    if (small_) return (a * b) % n_;
    return static_cast<u64>(static_cast<u128>(a) * b % n_);
  }
  u64 pow(u64 a, u64 e) const;
  u64 reduce(i64 a) const;
  u64 reduce_u128(u128 a) const { return static_cast<u64>(a % n_); }

 private:
  u64 n_ = 1;
  bool small_ = true;
};

bool is_prime(u64 n);
std::vector<u64> prime_factors(u64 n);  // distinct, ascending

// b^e, throwing config_invalid if the result reaches kMaxModulus.
u64 checked_pow(u64 b, unsigned e);

// Inverse of a modulo n (a coprime to n); throws not_a_unit otherwise.
u64 inverse_mod(u64 a, u64 n);

// p-adic valuation of a nonzero integer.
int valuation(u64 x, u64 p);

// A rational number written as p^val * unit, with the unit a residue mod p^K.
// Used to evaluate binomial coefficients whose factorial denominators carry p.
class PadicRatio {
 public:
  PadicRatio(u64 p, int K);

  void mul(i64 t);
  void div(i64 t);
  int val() const { return val_; }
  // The value in Z/p^K; throws not_divisible if the value is not p-integral.
  u64 residue() const;

 private:
  u64 p_;
  int K_;
  Modulus mod_;
  u64 unit_ = 1;
  int val_ = 0;
};

// binom(n, k) / p mod p^K, for 0 < k < n with p | binom(n, k).
u64 binomial_over_p(u64 n, u64 k, u64 p, int K);

// The binomial coefficient binom(1/2, k) mod p^K (p odd).
u64 binomial_half(unsigned k, u64 p, int K);

}  // namespace pigeom
