#include "chatelet/arith.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "chatelet/errors.hpp"

namespace chatelet::arith {

namespace {

constexpr std::uint64_t kTrialLimit = 4096;

const std::vector<std::uint64_t>& small_primes() {
  static const std::vector<std::uint64_t> table = primes_up_to(kTrialLimit);
  return table;
}

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, unsigned s) {
  a %= n;
  if (a == 0) return false;
  std::uint64_t x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

// Brent's variant of Pollard rho. Returns a non-trivial factor of the odd
// composite n; the generator is seeded per call so results do not depend on
// call order or thread.
std::uint64_t pollard_brent(std::uint64_t n) {
  std::mt19937_64 rng(0x5eedULL ^ n);
  for (;;) {
    const std::uint64_t c = rng() % (n - 1) + 1;
    std::uint64_t y = rng() % n;
    const std::uint64_t m = 128;
    std::uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](std::uint64_t v) {
      std::uint64_t t = mulmod(v, v, n) + c;
      return t >= n || t < c ? t - n : t;
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_into(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  std::uint64_t d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace

int chi(std::int64_t n) {
  const std::int64_t r = ((n % 4) + 4) % 4;
  return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

int chi(i128 n) {
  const i128 r = ((n % 4) + 4) % 4;
  return r == 1 ? 1 : (r == 3 ? -1 : 0);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  if (n < 37 * 37) return true;
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Bases proven sufficient for all n < 2^64.
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (miller_rabin_witness(n, a, d, s)) return false;
  }
  return true;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

Factorization factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be >= 1");
  Factorization result;
  for (std::uint64_t p : small_primes()) {
    if (p * p > n) break;
    if (n % p != 0) continue;
    unsigned e = 0;
    do {
      n /= p;
      ++e;
    } while (n % p == 0);
    result.push_back({p, e});
  }
  if (n == 1) return result;
  if (n < kTrialLimit * kTrialLimit) {
    result.push_back({n, 1});
    return result;
  }
  std::vector<std::uint64_t> rest;
  factor_into(n, rest);
  std::sort(rest.begin(), rest.end());
  for (std::uint64_t p : rest) {
    if (!result.empty() && result.back().prime == p) {
      ++result.back().exponent;
    } else {
      result.push_back({p, 1});
    }
  }
  return result;
}

std::uint64_t expand(const Factorization& f) {
  std::uint64_t n = 1;
  for (const auto& [p, e] : f) {
    for (unsigned i = 0; i < e; ++i) {
      if (__builtin_mul_overflow(n, p, &n)) throw ArithmeticOverflow("expand: product exceeds 64 bits");
    }
  }
  return n;
}

std::vector<std::uint64_t> divisors(const Factorization& f) {
  std::vector<std::uint64_t> divs{1};
  for (const auto& [p, e] : f) {
    const std::size_t base = divs.size();
    std::uint64_t pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::uint64_t r_two_squares(const Factorization& f) {
  std::uint64_t r = 4;
  for (const auto& [p, e] : f) {
    if (p == 2) continue;
    if (p % 4 == 1) {
      r *= e + 1;
    } else if (e % 2 == 1) {
      return 0;
    }
  }
  return r;
}

std::uint64_t r_two_squares(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("r_two_squares: n must be >= 1");
  return r_two_squares(factorize(n));
}

unsigned v2(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("v2: argument must be nonzero");
  return static_cast<unsigned>(__builtin_ctzll(m));
}

bool in_E(std::uint64_t m) {
  if (m == 0) throw std::invalid_argument("in_E: m must be >= 1");
  return ((m >> v2(m)) & 3) == 1;
}

bool in_E_mod(std::uint64_t res, unsigned n) {
  if (n == 0 || n > 63) throw std::invalid_argument("in_E_mod: n must lie in [1, 63]");
  if (res >= (1ULL << n)) {
    throw std::invalid_argument("in_E_mod: residue " + std::to_string(res) + " out of range mod 2^" +
                                std::to_string(n));
  }
  if (res == 0) return true;
  const unsigned l = v2(res);
  if (l + 2 <= n) return ((res >> l) & 3) == 1;
  return true;  // l = n - 1: some lift res + 2^n * k has odd part 1 mod 4
}

}  // namespace chatelet::arith
