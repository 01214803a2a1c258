#include <doctest.h>

#include <map>
#include <numeric>
#include <stdexcept>

#include "chatelet/arith.hpp"
#include "chatelet/errors.hpp"
#include "chatelet/localdens.hpp"

using namespace chatelet;
using namespace chatelet::localdens;

namespace {

const BinaryForm kL = BinaryForm::linear(1, 0);
const BinaryForm kC = BinaryForm::cubic(1, 0, 1, 1);

struct Pair {
  BinaryForm L, C;
};

std::vector<Pair> instances() {
  return {{kL, kC},
          {BinaryForm::linear(2, 1), BinaryForm::cubic(1, 1, 0, 2)},
          {BinaryForm::linear(3, 6), BinaryForm::cubic(2, 0, 3, 7)}};
}

// Independent count with a hand-written loop over the box.
std::uint64_t hand_rho(std::uint64_t d1, std::uint64_t d2, const Pair& f) {
  const std::int64_t n = static_cast<std::int64_t>(d1 * d2);
  std::uint64_t count = 0;
  for (std::int64_t x1 = 0; x1 < n; ++x1)
    for (std::int64_t x2 = 0; x2 < n; ++x2) {
      const i128 l = eval_form(f.L, IntPoint{x1, x2});
      const i128 c = eval_form(f.C, IntPoint{x1, x2});
      if (l % static_cast<i128>(d1) == 0 && c % static_cast<i128>(d2) == 0) ++count;
    }
  return count;
}

}  // namespace

TEST_CASE("rho_bruteforce examples") {
  CHECK(rho_bruteforce(1, 1, kL, kC).count == 1);
  CHECK(rho_bruteforce(5, 1, kL, kC).count == 5);
  CHECK(rho_bruteforce(1, 3, kL, kC).count == hand_rho(1, 3, instances()[0]));
  CHECK(rho_bruteforce(1, 3, kL, kC).count == 3);
  CHECK_THROWS_AS(rho_bruteforce(0, 3, kL, kC), std::invalid_argument);
  CHECK_THROWS_AS(rho_bruteforce(1000, 1000, kL, kC, 1000), BudgetExceeded);
}

TEST_CASE("rho examples") {
  CHECK(rho(6, 1, kL, kC).count == 6);
  CHECK(rho(4, 9, kL, kC).count == rho_bruteforce(4, 9, kL, kC).count);
  CHECK(rho(4, 9, kL, kC).count == 60);
  CHECK(rho(1, 1, kL, kC).count == 1);
}

TEST_CASE("rho agrees with the hand loop for small moduli") {
  for (const Pair& f : instances())
    for (std::uint64_t d1 = 1; d1 <= 12; ++d1)
      for (std::uint64_t d2 = 1; d1 * d2 <= 24; ++d2) {
        INFO("d1=" << d1 << " d2=" << d2);
        REQUIRE(rho(d1, d2, f.L, f.C).count == hand_rho(d1, d2, f));
      }
}

TEST_CASE("rho is multiplicative over coprime moduli") {
  for (const Pair& f : instances())
    for (std::uint64_t a1 = 1; a1 <= 8; ++a1)
      for (std::uint64_t a2 = 1; a1 * a2 <= 8; ++a2)
        for (std::uint64_t b1 = 1; b1 <= 9; ++b1)
          for (std::uint64_t b2 = 1; b1 * b2 <= 9; ++b2) {
            if (std::gcd(a1 * a2, b1 * b2) != 1 || a1 * a2 * b1 * b2 > 60) continue;
            const u128 whole = rho(a1 * b1, a2 * b2, f.L, f.C).count;
            const u128 split = rho(a1, a2, f.L, f.C).count * rho(b1, b2, f.L, f.C).count;
            REQUIRE(whole == split);
          }
}

TEST_CASE("prime_power_count matches plain enumeration") {
  for (const Pair& f : instances())
    for (std::uint64_t p : {2, 3, 5, 7})
      for (unsigned a = 0; a <= 3; ++a)
        for (unsigned b = 0; b <= 4; ++b) {
          std::uint64_t pa = 1, pb = 1;
          for (unsigned i = 0; i < a; ++i) pa *= p;
          for (unsigned i = 0; i < b; ++i) pb *= p;
          if (pa * pb * pa * pb > 3'000'000) continue;
          INFO("p=" << p << " a=" << a << " b=" << b);
          const auto pc = prime_power_count(p, a, b, f.L, f.C);
          CHECK(pc.modulus_exponent == std::max(a, b));
          // Each residue mod p^m lifts to p^(2(a+b-m)) points of the box.
          u128 scale = 1;
          for (unsigned i = 0; i < 2 * (a + b - pc.modulus_exponent); ++i) scale *= p;
          REQUIRE(pc.residues * scale == rho_bruteforce(pa, pb, f.L, f.C, 1'000'000'000).count);
        }
}

TEST_CASE("prime_power_count limits") {
  CHECK_THROWS_AS(prime_power_count(17, 1, 16, kL, kC), ArithmeticOverflow);
  CHECK_THROWS_AS(prime_power_count(4, 1, 1, kL, kC), std::invalid_argument);
  CHECK_THROWS_AS(prime_power_count(47, 6, 6, kL, kC, 100), BudgetExceeded);
  CHECK(prime_power_count(47, 0, 0, kL, kC).residues == 1);
}

TEST_CASE("prime_power_density is the normalised count") {
  const long double d = prime_power_density(5, 1, 2, kL, kC);
  CHECK(static_cast<double>(d) ==
        doctest::Approx(static_cast<double>(rho_bruteforce(5, 25, kL, kC).count) / (125.0 * 125.0)));
}

TEST_CASE("cubic_roots_mod_p") {
  CHECK(cubic_roots_mod_p(kC, 3) == 1);  // t = 1
  CHECK(cubic_roots_mod_p(BinaryForm::cubic(0, 1, 0, 1), 5) == 3);  // [1:0], t = 2, 3
  CHECK(cubic_roots_mod_p(BinaryForm::cubic(3, 6, 9, 12), 3) == 4);
  CHECK_THROWS_AS(cubic_roots_mod_p(kC, 2), std::invalid_argument);
  CHECK_THROWS_AS(cubic_roots_mod_p(kC, 9), std::invalid_argument);
  for (std::uint64_t p : arith::primes_up_to(200)) {
    if (p == 2) continue;
    unsigned direct = 0;
    for (std::uint64_t t = 0; t < p; ++t)
      if (eval_form_mod(kC, static_cast<std::int64_t>(t), 1, p) == 0) ++direct;
    if (eval_form_mod(kC, 1, 0, p) == 0) ++direct;
    REQUIRE(cubic_roots_mod_p(kC, p) == direct);
  }
}

TEST_CASE("good primes satisfy rho(p, 1) = p and the projective identity") {
  for (const Pair& f : instances())
    for (std::uint64_t p : arith::primes_up_to(100)) {
      if (p == 2) continue;
      if (f.L.coeff(0) % static_cast<std::int64_t>(p) != 0 || f.L.coeff(1) % static_cast<std::int64_t>(p) != 0)
        REQUIRE(rho(p, 1, f.L, f.C).count == p);
      if (!is_good_prime(p, f.L, f.C)) continue;
      REQUIRE(rho(1, p, f.L, f.C).count == 1 + (p - 1) * cubic_roots_mod_p(f.C, p));
    }
  CHECK_FALSE(is_good_prime(31, kL, kC));
  CHECK(is_good_prime(101, kL, kC));
  CHECK_FALSE(is_good_prime(3, BinaryForm::linear(3, 6), BinaryForm::cubic(2, 0, 3, 7)));
}
