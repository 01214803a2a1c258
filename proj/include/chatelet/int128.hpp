#pragma once

#include <cstdint>
#include <string>

namespace chatelet {

using i128 = __int128;
using u128 = unsigned __int128;

// Checked primitives; each returns false when the result would wrap.
inline bool checked_mul(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool checked_add(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool checked_mul(u128 a, u128 b, u128& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool checked_add(u128 a, u128 b, u128& out) { return !__builtin_add_overflow(a, b, &out); }

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  return s;
}

inline std::string to_string(i128 v) {
  if (v < 0) return "-" + to_string(static_cast<u128>(-(v + 1)) + 1);
  return to_string(static_cast<u128>(v));
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

inline std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Non-negative residue of a signed 128-bit value.
inline std::uint64_t reduce_mod(i128 v, std::uint64_t m) {
  i128 r = v % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<std::uint64_t>(r);
}

}  // namespace chatelet
