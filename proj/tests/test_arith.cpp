#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "chatelet/arith.hpp"

using namespace chatelet;
using namespace chatelet::arith;

namespace {

// Definition of E: some l >= 0 with m = 2^l mod 2^(l+2).
bool in_E_by_scan(std::uint64_t m) {
  for (unsigned l = 0; l <= 64 - __builtin_clzll(m) + 2 && l < 62; ++l) {
    const std::uint64_t mod = std::uint64_t{1} << (l + 2);
    if (m % mod == (std::uint64_t{1} << l) % mod) return true;
  }
  return false;
}

std::vector<std::uint64_t> circle_counts(std::uint64_t limit) {
  std::vector<std::uint64_t> counts(limit + 1, 0);
  const auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  for (std::int64_t a = -r; a <= r; ++a) {
    for (std::int64_t b = -r; b <= r; ++b) {
      const auto n = static_cast<std::uint64_t>(a * a + b * b);
      if (n <= limit) ++counts[n];
    }
  }
  return counts;
}

}  // namespace

TEST_CASE("chi is the non-principal character mod 4") {
  CHECK(chi(std::int64_t{1}) == 1);
  CHECK(chi(std::int64_t{2}) == 0);
  CHECK(chi(std::int64_t{7}) == -1);
  CHECK(chi(std::int64_t{-1}) == -1);
  CHECK(chi(std::int64_t{-3}) == 1);
  CHECK(chi(i128{5}) == 1);
  for (std::int64_t a = 1; a < 60; ++a) {
    for (std::int64_t b = 1; b < 60; ++b) CHECK(chi(a * b) == chi(a) * chi(b));
  }
}

TEST_CASE("factorize examples") {
  CHECK(factorize(1).empty());
  CHECK(factorize(360) == Factorization{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(1'000'000'007) == Factorization{{1'000'000'007, 1}});
  CHECK(factorize(4294967291ULL * 4294967279ULL) == Factorization{{4294967279ULL, 1}, {4294967291ULL, 1}});
  CHECK(factorize(4294967291ULL * 4294967291ULL) == Factorization{{4294967291ULL, 2}});
  CHECK(factorize(std::uint64_t{1} << 63) == Factorization{{2, 63}});
  CHECK_THROWS_AS(factorize(0), std::invalid_argument);
}

TEST_CASE("is_prime agrees with a sieve and rejects strong pseudoprimes") {
  const auto primes = primes_up_to(200'000);
  std::vector<bool> flag(200'001, false);
  for (auto p : primes) flag[p] = true;
  for (std::uint64_t n = 0; n <= 200'000; ++n) REQUIRE(is_prime(n) == flag[n]);
  CHECK_FALSE(is_prime(3215031751ULL));
  CHECK_FALSE(is_prime(3825123056546413051ULL));
  CHECK(is_prime(18446744073709551557ULL));
}

TEST_CASE("factorize round-trips on random 64-bit inputs") {
  std::mt19937_64 rng(20260115);
  for (int i = 0; i < 100'000; ++i) {
    std::uint64_t n = rng() >> (rng() % 40);
    if (n == 0) n = 1;
    const auto f = factorize(n);
    REQUIRE(expand(f) == n);
    for (std::size_t k = 0; k < f.size(); ++k) {
      REQUIRE(is_prime(f[k].prime));
      if (k > 0) REQUIRE(f[k - 1].prime < f[k].prime);
    }
  }
}

TEST_CASE("factorize is deterministic") {
  const std::uint64_t n = 1000000007ULL * 998244353ULL;
  CHECK(factorize(n) == factorize(n));
}

TEST_CASE("r_two_squares examples") {
  CHECK(r_two_squares(1) == 4);
  CHECK(r_two_squares(3) == 0);
  CHECK(r_two_squares(25) == 12);
  CHECK(r_two_squares(13) == 8);
  CHECK(r_two_squares(2) == 4);
  CHECK(r_two_squares(9) == 4);
  CHECK_THROWS_AS(r_two_squares(0), std::invalid_argument);
}

TEST_CASE("r_two_squares matches the circle count and the divisor sum") {
  const std::uint64_t limit = 10'000;
  const auto counts = circle_counts(limit);
  for (std::uint64_t n = 1; n <= limit; ++n) {
    REQUIRE(r_two_squares(n) == counts[n]);
    std::int64_t s = 0;
    for (auto d : divisors(factorize(n))) s += chi(static_cast<std::int64_t>(d));
    REQUIRE(static_cast<std::int64_t>(r_two_squares(n)) == 4 * s);
  }
}

TEST_CASE("in_E examples and definitional scan") {
  CHECK(in_E(1));
  CHECK_FALSE(in_E(3));
  CHECK_FALSE(in_E(12));
  CHECK(in_E(2));
  CHECK(in_E(20));
  CHECK_THROWS_AS(in_E(0), std::invalid_argument);
  for (std::uint64_t m = 1; m <= 100'000; ++m) REQUIRE(in_E(m) == in_E_by_scan(m));
}

TEST_CASE("in_E_mod examples and lift scan") {
  CHECK(in_E_mod(1, 4));
  CHECK_FALSE(in_E_mod(3, 4));
  CHECK(in_E_mod(8, 4));
  CHECK(in_E_mod(0, 4));
  CHECK_THROWS_AS(in_E_mod(16, 4), std::invalid_argument);
  for (unsigned n = 1; n <= 10; ++n) {
    const std::uint64_t mod = std::uint64_t{1} << n;
    for (std::uint64_t res = 0; res < mod; ++res) {
      bool lift = false;
      for (std::uint64_t m = res; m <= (mod << 4) && !lift; m += mod) lift = m > 0 && in_E(m);
      REQUIRE(in_E_mod(res, n) == lift);
    }
  }
}
