#pragma once

// Local densities rho(d1, d2) = #{x in [0, d1*d2)^2 : d1 | L(x), d2 | C(x)}.

#include <cstdint>

#include "chatelet/forms.hpp"
#include "chatelet/int128.hpp"

namespace chatelet::localdens {

struct DensityValue {
  std::uint64_t d1 = 1;
  std::uint64_t d2 = 1;
  u128 count = 0;
};

inline constexpr std::uint64_t kDefaultPointBudget = 100'000'000;
inline constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;

/// Plain double loop over [0, d1*d2)^2. Throws BudgetExceeded when
/// (d1*d2)^2 exceeds point_budget; d1, d2 >= 1 (else std::invalid_argument).
DensityValue rho_bruteforce(std::uint64_t d1, std::uint64_t d2, const BinaryForm& L, const BinaryForm& C,
                            std::uint64_t point_budget = kDefaultPointBudget);

/// Solutions counted on the smallest modulus that determines them.
struct PrimePowerCount {
  u128 residues = 0;     // #{x mod p^m : p^a | L(x), p^b | C(x)}
  unsigned modulus_exponent = 0;  // m = max(a, b)
};

/// Exact count for one prime-power block. Homogeneity splits x into x = 0
/// mod p (scaled down to a smaller instance) and primitive vectors, which are
/// counted as units times points of the projective line over Z/p^m. The
/// affine charts [1:t] and [s:1] (p | s) are enumerated digit by digit,
/// keeping only residues that still satisfy both divisibility conditions.
/// Throws BudgetExceeded if more than node_budget residues are visited and
/// ArithmeticOverflow if p^max(a,b) does not fit in 63 bits.
PrimePowerCount prime_power_count(std::uint64_t p, unsigned a, unsigned b, const BinaryForm& L,
                                  const BinaryForm& C, std::uint64_t node_budget = kDefaultNodeBudget);

/// rho(p^a, p^b) / p^(2(a+b)).
long double prime_power_density(std::uint64_t p, unsigned a, unsigned b, const BinaryForm& L, const BinaryForm& C,
                                std::uint64_t node_budget = kDefaultNodeBudget);

/// rho(d1, d2) assembled over the prime powers of d1*d2 (CRT). Throws
/// ArithmeticOverflow if d1*d2 or the resulting count overflows.
DensityValue rho(std::uint64_t d1, std::uint64_t d2, const BinaryForm& L, const BinaryForm& C,
                 std::uint64_t node_budget = kDefaultNodeBudget);

/// Number of points of P^1(F_p) where C vanishes: roots t of C(t, 1) plus
/// [1:0] when p divides the x1^3 coefficient. At most 3 unless C = 0 mod p,
/// in which case every one of the p + 1 points counts. Throws
/// std::invalid_argument unless p is an odd prime.
unsigned cubic_roots_mod_p(const BinaryForm& C, std::uint64_t p);

/// Odd prime where the first-order Euler factor formula applies: p does not
/// divide the content of L, the x1^3 or x2^3 coefficient of C, or the
/// discriminant of C, and rho(1, p) = 1 + (p - 1) * cubic_roots_mod_p(C, p).
bool is_good_prime(std::uint64_t p, const BinaryForm& L, const BinaryForm& C);

}  // namespace chatelet::localdens
