#include "chatelet/euler.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "chatelet/arith.hpp"
#include "chatelet/localdens.hpp"

namespace chatelet::euler {

namespace {

void require_odd_prime(std::uint64_t p, const char* who) {
  if (p % 2 == 0 || !arith::is_prime(p)) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(p) + " is not an odd prime");
  }
}

double prefactor_for(std::uint64_t p) {
  const double c = arith::chi(static_cast<std::int64_t>(p % 4));
  const double f = 1.0 - c / static_cast<double>(p);
  return f * f;
}

}  // namespace

std::string to_string(FactorMethod m) {
  switch (m) {
    case FactorMethod::exact_series: return "exact_series";
    case FactorMethod::first_order: return "first_order";
    case FactorMethod::two_adic: return "two_adic";
  }
  return "unknown";
}

EulerFactor k_p(std::uint64_t p, const BinaryForm& L, const BinaryForm& C, unsigned V) {
  require_odd_prime(p, "k_p");
  if (V < 2) throw std::invalid_argument("k_p: truncation level must be at least 2");
  const int chi_p = arith::chi(static_cast<std::int64_t>(p % 4));

  EulerFactor f;
  f.p = p;
  f.truncation_level = V;
  f.method = FactorMethod::exact_series;
  f.prefactor = prefactor_for(p);

  long double series = 0.0L;
  for (unsigned shell = 0; shell <= V; ++shell) {
    long double shell_sum = 0.0L;
    for (unsigned nu1 = 0; nu1 <= shell; ++nu1) {
      shell_sum += localdens::prime_power_density(p, nu1, shell - nu1, L, C);
    }
    // chi(p^k) = chi(p)^k
    const int sign = (chi_p == -1 && shell % 2 == 1) ? -1 : 1;
    const long double signed_shell = sign * shell_sum;
    series += signed_shell;
    f.history.push_back(static_cast<double>(signed_shell));
  }
  f.series = static_cast<double>(series);
  f.value = f.prefactor * f.series;
  f.tail_bound = 2.0 * f.prefactor * std::abs(f.history.back());
  // every included density is an exact count
  f.exact = true;
  return f;
}

EulerFactor k_p_large(std::uint64_t p, const BinaryForm& L, const BinaryForm& C) {
  require_odd_prime(p, "k_p_large");
  if (!localdens::is_good_prime(p, L, C)) {
    throw RoutedToExact("k_p_large: " + std::to_string(p) + " is a bad prime; use the exact series");
  }
  const double chi_p = arith::chi(static_cast<std::int64_t>(p % 4));
  const double pd = static_cast<double>(p);
  const double rho_p1 = pd;
  const double rho_1p = 1.0 + (pd - 1.0) * localdens::cubic_roots_mod_p(C, p);

  EulerFactor f;
  f.p = p;
  f.truncation_level = 1;
  f.method = FactorMethod::first_order;
  f.prefactor = prefactor_for(p);
  f.history = {1.0, chi_p * (rho_p1 + rho_1p) / (pd * pd)};
  f.series = f.history[0] + f.history[1];
  f.value = f.prefactor * f.series;
  f.tail_bound = kFirstOrderTailConstant / (pd * pd);
  f.exact = false;
  return f;
}

std::uint64_t k_2_count(const BinaryForm& L, const BinaryForm& C, unsigned n) {
  if (n < 1 || n > 16) throw std::invalid_argument("k_2_count: level must lie in [1, 16]");
  const std::uint64_t size = std::uint64_t{1} << n;
  const std::uint64_t mask = size - 1;
  std::vector<char> in_e(size);
  for (std::uint64_t r = 0; r < size; ++r) in_e[r] = arith::in_E_mod(r, n);

  // Arithmetic mod 2^64 reduces correctly mod 2^n.
  const auto l0 = static_cast<std::uint64_t>(L.coeff(0)), l1 = static_cast<std::uint64_t>(L.coeff(1));
  const auto c0 = static_cast<std::uint64_t>(C.coeff(0)), c1 = static_cast<std::uint64_t>(C.coeff(1));
  const auto c2 = static_cast<std::uint64_t>(C.coeff(2)), c3 = static_cast<std::uint64_t>(C.coeff(3));
  std::uint64_t count = 0;
  for (std::uint64_t x1 = 0; x1 < size; ++x1) {
    const std::uint64_t a3 = c0 * x1 * x1 * x1, a2 = c1 * x1 * x1, a1 = c2 * x1;
    for (std::uint64_t x2 = 0; x2 < size; ++x2) {
      if (!in_e[(l0 * x1 + l1 * x2) & mask]) continue;
      const std::uint64_t cv = a3 + x2 * (a2 + x2 * (a1 + x2 * c3));
      count += in_e[cv & mask];
    }
  }
  return count;
}

EulerFactor k_2(const BinaryForm& L, const BinaryForm& C, unsigned n_max, double tol) {
  if (n_max < 4 || n_max > 14) throw std::invalid_argument("k_2: n_max must lie in [4, 14]");
  if (!(tol > 0.0)) throw std::invalid_argument("k_2: tol must be positive");
  EulerFactor f;
  f.p = 2;
  f.method = FactorMethod::two_adic;
  f.prefactor = 1.0;
  double previous = 0.0;
  for (unsigned n = 4; n <= n_max; ++n) {
    const double estimate = 4.0 * std::ldexp(static_cast<double>(k_2_count(L, C, n)), -2 * static_cast<int>(n));
    f.history.push_back(estimate);
    f.value = estimate;
    f.truncation_level = n;
    if (n > 4) {
      f.tail_bound = std::abs(estimate - previous);
      if (f.tail_bound < tol) {
        f.exact = true;
        break;
      }
    }
    previous = estimate;
  }
  f.series = f.value;
  return f;
}

void CompensatedProduct::multiply(double x) {
  const double p = product_ * x;
  const double err = std::fma(product_, x, -p);
  error_ = std::fma(error_, x, err);
  product_ = p;
}

double compensated_product(const std::vector<double>& values) {
  CompensatedProduct acc;
  for (double v : values) acc.multiply(v);
  return acc.value();
}

ConstantReport predicted_constant(const ValidatedInstance& inst, const ConstantOptions& options) {
  if (options.prime_cutoff < 100) throw std::invalid_argument("predicted_constant: prime cutoff must be >= 100");
  const BinaryForm& L = inst.L();
  const BinaryForm& C = inst.C();

  ConstantReport report;
  report.instance_id = inst.id();
  report.volume = static_cast<double>(region_area(inst.region()));
  report.prime_cutoff = options.prime_cutoff;
  report.truncation = options.truncation;

  std::vector<std::uint64_t> checkpoints;
  for (std::uint64_t decade = 100; decade < options.prime_cutoff; decade *= 10) {
    for (std::uint64_t mult : {1, 2, 5}) {
      if (decade * mult < options.prime_cutoff) checkpoints.push_back(decade * mult);
    }
  }
  checkpoints.push_back(options.prime_cutoff);

  CompensatedProduct acc;
  auto take = [&](EulerFactor f) {
    if (f.value <= 0.0) report.nonpositive_factors.push_back(f.p);
    acc.multiply(f.value);
    report.factors.push_back(std::move(f));
  };
  take(k_2(L, C, options.k2_n_max, options.k2_tol));

  std::size_t next_checkpoint = 0;
  for (std::uint64_t p : arith::primes_up_to(options.prime_cutoff)) {
    if (p == 2) continue;
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] < p) {
      report.partial_products.push_back({checkpoints[next_checkpoint], acc.value()});
      ++next_checkpoint;
    }
    const bool good = localdens::is_good_prime(p, L, C);
    if (!good) report.bad_primes.push_back(p);
    if (p <= options.small_prime_threshold) {
      take(k_p(p, L, C, options.truncation));
    } else if (!good) {
      take(k_p(p, L, C, kBadPrimeTruncation));
    } else {
      take(k_p_large(p, L, C));
    }
  }
  for (; next_checkpoint < checkpoints.size(); ++next_checkpoint) {
    report.partial_products.push_back({checkpoints[next_checkpoint], acc.value()});
  }

  report.product = acc.value();
  report.predicted_constant = std::numbers::pi * std::numbers::pi * report.volume * report.product;
  const double P = static_cast<double>(options.prime_cutoff);
  report.product_tail_estimate = 3.0 * std::abs(report.product) * std::sqrt(4.0 / (P * std::log(P)));
  return report;
}

}  // namespace chatelet::euler
