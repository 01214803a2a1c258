#pragma once

// Multiplicative number theory used throughout: the character mod 4,
// 64-bit factorization, the two-squares function and the dyadic set E.

#include <cstdint>
#include <utility>
#include <vector>

#include "chatelet/int128.hpp"

namespace chatelet::arith {

struct PrimePower {
  std::uint64_t prime;
  unsigned exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorization with strictly increasing primes. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

/// Non-principal character modulo 4.
int chi(std::int64_t n);
int chi(i128 n);

/// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime(std::uint64_t n);

/// Complete factorization of n >= 1. Trial division by a small prime table,
/// then Miller-Rabin and Pollard-Brent with a fixed seed, so the output (and
/// the work done) is identical run to run. Throws std::invalid_argument on 0.
Factorization factorize(std::uint64_t n);

/// Product of prime^exponent; throws ArithmeticOverflow past 64 bits.
std::uint64_t expand(const Factorization& f);

/// All positive divisors in increasing order.
std::vector<std::uint64_t> divisors(const Factorization& f);

/// Number of (a, b) in Z^2 with a^2 + b^2 = n, via the multiplicative
/// closed form of 4 * sum_{d | n} chi(d). Throws std::invalid_argument on 0.
std::uint64_t r_two_squares(std::uint64_t n);
std::uint64_t r_two_squares(const Factorization& f);

/// 2-adic valuation; v2(0) is undefined and throws.
unsigned v2(std::uint64_t m);

/// m in E iff m = 2^l * u with u = 1 mod 4. Throws std::invalid_argument on 0.
bool in_E(std::uint64_t m);

/// Whether some positive integer congruent to res mod 2^n lies in E.
/// Requires 1 <= n <= 63 and res < 2^n.
bool in_E_mod(std::uint64_t res, unsigned n);

/// All primes <= limit, increasing (sieve of Eratosthenes).
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

}  // namespace chatelet::arith
