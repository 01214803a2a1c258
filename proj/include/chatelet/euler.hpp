#pragma once

// Euler factors K_p, the 2-adic factor K_2 and the predicted leading
// constant pi^2 * vol(R) * prod_p K_p.

#include <cstdint>
#include <string>
#include <vector>

#include "chatelet/forms.hpp"

namespace chatelet::euler {

enum class FactorMethod { exact_series, first_order, two_adic };

std::string to_string(FactorMethod m);

struct EulerFactor {
  std::uint64_t p = 0;
  double value = 0.0;
  /// Largest nu1 + nu2 summed (odd p), or the 2-adic level n reached (p = 2).
  unsigned truncation_level = 0;
  double tail_bound = 0.0;
  bool exact = false;
  FactorMethod method = FactorMethod::exact_series;
  /// (1 - chi(p)/p)^2; value == prefactor * series for odd p.
  double prefactor = 1.0;
  double series = 1.0;
  /// Odd p: contribution of each shell nu1 + nu2 = k (before the prefactor).
  /// p = 2: the estimate at each level n, starting from n = 4.
  std::vector<double> history;
};

/// Default shell depth for exactly summed factors at small primes.
inline constexpr unsigned kSmallPrimeTruncation = 6;
/// Shell depth for bad primes above the small-prime threshold.
inline constexpr unsigned kBadPrimeTruncation = 4;
inline constexpr std::uint64_t kSmallPrimeThreshold = 50;
/// Tail constant for the first-order factor: the omitted second shell has at
/// most 3 + n_p <= 6 leading terms of size 1/p^2, times (1 + 1/p)^2.
inline constexpr double kFirstOrderTailConstant = 8.0;

/// (1 - chi(p)/p)^2 * sum_{nu1 + nu2 <= V} chi(p)^(nu1+nu2) rho(p^nu1, p^nu2) / p^(2 nu1 + 2 nu2).
/// tail_bound is twice the magnitude of the outermost included shell (after
/// the prefactor). Throws std::invalid_argument for V < 2 or p not an odd prime.
EulerFactor k_p(std::uint64_t p, const BinaryForm& L, const BinaryForm& C, unsigned V);

/// Thrown by k_p_large when p is not a good prime; callers fall back to k_p.
class RoutedToExact : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// First-order factor (1 - chi/p)^2 (1 + chi rho(p,1)/p^2 + chi rho(1,p)/p^2)
/// with rho(p,1) = p and rho(1,p) = 1 + (p-1) n_p; tail_bound = 8/p^2.
EulerFactor k_p_large(std::uint64_t p, const BinaryForm& L, const BinaryForm& C);

/// 4 * 2^(-2n) * #{x mod 2^n : L(x), C(x) in E mod 2^n} for n = 4, 5, ...
/// until two successive estimates differ by less than tol (exact = true) or
/// n_max is reached (exact = false). tail_bound is the last observed
/// difference. Requires 4 <= n_max <= 14 and tol > 0.
EulerFactor k_2(const BinaryForm& L, const BinaryForm& C, unsigned n_max = 12, double tol = 1e-3);

/// Raw count at one level n (1 <= n <= 16), exposed for oracles.
std::uint64_t k_2_count(const BinaryForm& L, const BinaryForm& C, unsigned n);

struct PartialProduct {
  std::uint64_t cutoff = 0;
  double product = 0.0;
};

struct ConstantOptions {
  std::uint64_t prime_cutoff = 10'000;
  unsigned truncation = kSmallPrimeTruncation;
  std::uint64_t small_prime_threshold = kSmallPrimeThreshold;
  unsigned k2_n_max = 12;
  double k2_tol = 1e-3;
};

struct ConstantReport {
  std::string instance_id;
  double volume = 0.0;
  std::uint64_t prime_cutoff = 0;
  unsigned truncation = 0;
  std::vector<EulerFactor> factors;  // p = 2 first, then odd p increasing
  double product = 0.0;
  double predicted_constant = 0.0;
  /// Heuristic magnitude of the change primes above P would make to the
  /// product: 3 * |product| * sqrt(sum_{p > P} 4/p^2), treating the
  /// first-order terms chi(p)(n_p - 1)/p as a random walk.
  double product_tail_estimate = 0.0;
  std::vector<PartialProduct> partial_products;
  std::vector<std::uint64_t> nonpositive_factors;
  std::vector<std::uint64_t> bad_primes;
};

/// Running product with an FMA-based error term, accumulated left to right.
class CompensatedProduct {
 public:
  void multiply(double x);
  double value() const { return product_ + error_; }

 private:
  double product_ = 1.0;
  double error_ = 0.0;
};

double compensated_product(const std::vector<double>& values);

/// K_2, exact series for odd p <= threshold and bad primes, first-order
/// factors elsewhere up to P. Requires P >= 100.
ConstantReport predicted_constant(const ValidatedInstance& inst, const ConstantOptions& options = {});

}  // namespace chatelet::euler
