#include "chatelet/localdens.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "chatelet/arith.hpp"
#include "chatelet/errors.hpp"

namespace chatelet::localdens {

namespace {

std::uint64_t checked_pow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (__builtin_mul_overflow(r, p, &r) || r >= (std::uint64_t{1} << 63)) {
      throw ArithmeticOverflow(std::to_string(p) + "^" + std::to_string(e) + " exceeds 63 bits");
    }
  }
  return r;
}

u128 checked_mul128(u128 a, u128 b, const char* what) {
  u128 out;
  if (!checked_mul(a, b, out)) throw ArithmeticOverflow(std::string(what) + ": count exceeds 128 bits");
  return out;
}

// Univariate restriction of a form to an affine chart, ascending powers,
// coefficients reduced mod the working modulus.
struct ChartPoly {
  std::vector<std::uint64_t> coeffs;

  std::uint64_t eval(std::uint64_t t, std::uint64_t mod) const {
    std::uint64_t acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      acc = mulmod(acc, t, mod) + *it;
      if (acc >= mod) acc -= mod;
    }
    return acc;
  }
};

// F(1, t): coefficient of t^i is coeffs[i]. F(s, 1): coefficient of s^i is coeffs[deg - i].
ChartPoly chart(const BinaryForm& form, bool x1_fixed, std::uint64_t mod) {
  ChartPoly poly;
  const unsigned d = form.degree();
  for (unsigned i = 0; i <= d; ++i) {
    const std::int64_t c = x1_fixed ? form.coeff(i) : form.coeff(d - i);
    poly.coeffs.push_back(reduce_mod(c, mod));
  }
  return poly;
}

struct Budget {
  std::uint64_t remaining;
  void spend(std::uint64_t n) {
    if (n > remaining) {
      throw BudgetExceeded("local density enumeration exceeded its node budget");
    }
    remaining -= n;
  }
};

// #{t mod p^m : p^a | f(t), p^b | g(t)}, restricted to t = 0 mod p when
// divisible_only. Residues are grown one p-adic digit at a time.
u128 count_chart(const ChartPoly& f, const ChartPoly& g, std::uint64_t p, unsigned a, unsigned b, unsigned m,
                 bool divisible_only, Budget& budget) {
  const std::uint64_t mod = checked_pow(p, m);
  std::vector<std::uint64_t> pow_p(m + 1, 1);
  for (unsigned j = 1; j <= m; ++j) pow_p[j] = pow_p[j - 1] * p;

  auto alive = [&](std::uint64_t t, unsigned level) {
    const std::uint64_t fa = pow_p[std::min(a, level)];
    const std::uint64_t gb = pow_p[std::min(b, level)];
    return f.eval(t, mod) % fa == 0 && g.eval(t, mod) % gb == 0;
  };

  std::vector<std::uint64_t> nodes;
  if (divisible_only) {
    budget.spend(1);
    if (alive(0, 1)) nodes.push_back(0);
  } else {
    budget.spend(p);
    for (std::uint64_t t = 0; t < p; ++t) {
      if (alive(t, 1)) nodes.push_back(t);
    }
  }
  std::vector<std::uint64_t> next;
  for (unsigned level = 1; level < m && !nodes.empty(); ++level) {
    next.clear();
    budget.spend(static_cast<std::uint64_t>(nodes.size()) * p);
    for (std::uint64_t t : nodes) {
      for (std::uint64_t k = 0; k < p; ++k) {
        const std::uint64_t child = t + k * pow_p[level];
        if (alive(child, level + 1)) next.push_back(child);
      }
    }
    nodes.swap(next);
  }
  return nodes.size();
}

u128 residue_count(std::uint64_t p, unsigned a, unsigned b, const BinaryForm& L, const BinaryForm& C,
                   Budget& budget) {
  if (a == 0 && b == 0) return 1;
  const unsigned m = std::max(a, b);
  const std::uint64_t mod = checked_pow(p, m);

  const u128 affine = count_chart(chart(L, true, mod), chart(C, true, mod), p, a, b, m, false, budget);
  const u128 at_infinity = count_chart(chart(L, false, mod), chart(C, false, mod), p, a, b, m, true, budget);
  const u128 units = mod - mod / p;
  const u128 primitive = checked_mul128(units, affine + at_infinity, "prime_power_count");

  // x = p*y: L(x) = p L(y), C(x) = p^3 C(y), y mod p^(m-1).
  const unsigned a2 = a > 1 ? a - 1 : 0;
  const unsigned b2 = b > 3 ? b - 3 : 0;
  const unsigned m2 = std::max(a2, b2);
  const u128 fiber = u128{checked_pow(p, m - 1 - m2)} * checked_pow(p, m - 1 - m2);
  const u128 scaled = checked_mul128(fiber, residue_count(p, a2, b2, L, C, budget), "prime_power_count");
  u128 total;
  if (!checked_add(primitive, scaled, total)) throw ArithmeticOverflow("prime_power_count: count exceeds 128 bits");
  return total;
}

void require_odd_prime(std::uint64_t p, const char* who) {
  if (p % 2 == 0 || !arith::is_prime(p)) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(p) + " is not an odd prime");
  }
}

}  // namespace

DensityValue rho_bruteforce(std::uint64_t d1, std::uint64_t d2, const BinaryForm& L, const BinaryForm& C,
                            std::uint64_t point_budget) {
  if (d1 == 0 || d2 == 0) throw std::invalid_argument("rho_bruteforce: moduli must be positive");
  std::uint64_t side;
  u128 points = 0;
  if (__builtin_mul_overflow(d1, d2, &side) || !checked_mul(u128{side}, u128{side}, points) || points > point_budget) {
    throw BudgetExceeded("rho_bruteforce: (" + std::to_string(d1) + "*" + std::to_string(d2) +
                         ")^2 points exceed the budget of " + std::to_string(point_budget));
  }
  u128 count = 0;
  for (std::uint64_t x1 = 0; x1 < side; ++x1) {
    for (std::uint64_t x2 = 0; x2 < side; ++x2) {
      if (eval_form_mod(L, x1 % d1, x2 % d1, d1) == 0 && eval_form_mod(C, x1 % d2, x2 % d2, d2) == 0) ++count;
    }
  }
  return {d1, d2, count};
}

PrimePowerCount prime_power_count(std::uint64_t p, unsigned a, unsigned b, const BinaryForm& L,
                                  const BinaryForm& C, std::uint64_t node_budget) {
  if (!arith::is_prime(p)) throw std::invalid_argument("prime_power_count: " + std::to_string(p) + " is not prime");
  Budget budget{node_budget};
  return {residue_count(p, a, b, L, C, budget), std::max(a, b)};
}

long double prime_power_density(std::uint64_t p, unsigned a, unsigned b, const BinaryForm& L, const BinaryForm& C,
                                std::uint64_t node_budget) {
  const PrimePowerCount c = prime_power_count(p, a, b, L, C, node_budget);
  long double denom = 1.0L;
  for (unsigned i = 0; i < 2 * c.modulus_exponent; ++i) denom *= static_cast<long double>(p);
  return static_cast<long double>(c.residues) / denom;
}

DensityValue rho(std::uint64_t d1, std::uint64_t d2, const BinaryForm& L, const BinaryForm& C,
                 std::uint64_t node_budget) {
  if (d1 == 0 || d2 == 0) throw std::invalid_argument("rho: moduli must be positive");
  std::uint64_t prod;
  if (__builtin_mul_overflow(d1, d2, &prod)) throw ArithmeticOverflow("rho: d1*d2 exceeds 64 bits");
  u128 count = 1;
  for (const auto& [p, e] : arith::factorize(prod)) {
    unsigned a = 0, b = 0;
    for (std::uint64_t d = d1; d % p == 0; d /= p) ++a;
    for (std::uint64_t d = d2; d % p == 0; d /= p) ++b;
    const PrimePowerCount block = prime_power_count(p, a, b, L, C, node_budget);
    // box side p^(a+b) versus the modulus p^m the block was counted on
    const unsigned lift = a + b - block.modulus_exponent;
    u128 scaled = block.residues;
    for (unsigned i = 0; i < 2 * lift; ++i) scaled = checked_mul128(scaled, p, "rho");
    count = checked_mul128(count, scaled, "rho");
  }
  return {d1, d2, count};
}

unsigned cubic_roots_mod_p(const BinaryForm& C, std::uint64_t p) {
  require_odd_prime(p, "cubic_roots_mod_p");
  unsigned roots = reduce_mod(C.coeff(0), p) == 0 ? 1 : 0;
  const ChartPoly at_one = chart(C, false, p);  // C(t, 1)
  for (std::uint64_t t = 0; t < p; ++t) {
    if (at_one.eval(t, p) == 0) ++roots;
  }
  return roots;
}

bool is_good_prime(std::uint64_t p, const BinaryForm& L, const BinaryForm& C) {
  require_odd_prime(p, "is_good_prime");
  if (content(L) % p == 0) return false;
  if (reduce_mod(C.coeff(0), p) == 0 || reduce_mod(C.coeff(3), p) == 0) return false;
  if (C.degree() == 3 && discriminant(C) % p == 0) return false;
  const PrimePowerCount one_p = prime_power_count(p, 0, 1, L, C);
  return one_p.residues == 1 + u128{p - 1} * cubic_roots_mod_p(C, p);
}

}  // namespace chatelet::localdens
