#include "chatelet/counter.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "chatelet/arith.hpp"
#include "chatelet/errors.hpp"

namespace chatelet::counter {

namespace {

BigInt floor_div(const Rational& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);  // always positive
  BigInt q = num / den;
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

BigInt ceil_div(const Rational& r) { return -floor_div(-r); }

constexpr double kValueLimit = 9.2e18;  // just under 2^63

}  // namespace

std::vector<LatticeSpan> lattice_points_in(const Region& region, double X, ScanOrder order) {
  if (!(X > 0.0) || !std::isfinite(X)) throw std::invalid_argument("lattice_points_in: X must be positive");
  const Rational scale = exact_rational(X);
  std::vector<RationalPoint> poly;
  for (const auto& v : region.vertices()) {
    RationalPoint p{v.x1 * scale, v.x2 * scale};
    if (order == ScanOrder::columns) std::swap(p.x1, p.x2);
    const Rational limit = Rational(std::int64_t{1} << 31);
    if (boost::multiprecision::abs(p.x1) >= limit || boost::multiprecision::abs(p.x2) >= limit) {
      throw std::invalid_argument("lattice_points_in: dilated region exceeds 31-bit coordinates");
    }
    poly.push_back(std::move(p));
  }
  Rational ymin = poly[0].x2, ymax = poly[0].x2;
  for (const auto& p : poly) {
    ymin = std::min(ymin, p.x2);
    ymax = std::max(ymax, p.x2);
  }
  std::vector<LatticeSpan> spans;
  const auto first = ceil_div(ymin).convert_to<std::int64_t>();
  const auto last = floor_div(ymax).convert_to<std::int64_t>();
  for (std::int64_t y = first; y <= last; ++y) {
    const Rational yr = y;
    std::optional<Rational> lo, hi;
    auto extend = [&](const Rational& x) {
      if (!lo || x < *lo) lo = x;
      if (!hi || x > *hi) hi = x;
    };
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const auto& a = poly[i];
      const auto& b = poly[(i + 1) % poly.size()];
      if (a.x2 == b.x2) {
        if (a.x2 == yr) {
          extend(a.x1);
          extend(b.x1);
        }
        continue;
      }
      if ((yr < a.x2 && yr < b.x2) || (yr > a.x2 && yr > b.x2)) continue;
      extend(a.x1 + (yr - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2));
    }
    if (!lo) continue;
    const auto start = ceil_div(*lo).convert_to<std::int64_t>();
    const auto stop = floor_div(*hi).convert_to<std::int64_t>();
    if (start <= stop) spans.push_back({y, start, stop, order});
  }
  return spans;
}

std::uint64_t count_points(const std::vector<LatticeSpan>& spans) {
  std::uint64_t n = 0;
  for (const auto& s : spans) n += s.size();
  return n;
}

SumResult sum_S(const ValidatedInstance& inst, double X, const SumOptions& options) {
  const BoundaryStats stats = boundary_stats(inst.region());
  const long double reach = static_cast<long double>(X) * stats.r_infinity;
  auto value_bound = [&](const BinaryForm& f) {
    long double total = 0.0L;
    for (std::int64_t c : f.coeffs()) total += std::abs(static_cast<long double>(c));
    return total * std::pow(reach, static_cast<long double>(f.degree()));
  };
  if (value_bound(inst.L()) >= kValueLimit || value_bound(inst.C()) >= kValueLimit) {
    throw ScaleLimit("sum_S: form values over the dilated region may reach 2^63 at X = " + std::to_string(X));
  }

  const std::vector<LatticeSpan> spans = lattice_points_in(inst.region(), X, options.order);
  const unsigned threads = std::max(1u, options.threads);

  struct Partial {
    u128 sum = 0;
    std::uint64_t points = 0;
    std::size_t failed_span = std::numeric_limits<std::size_t>::max();
    std::exception_ptr error;
  };
  std::vector<Partial> partials(threads);
  std::atomic<bool> stop{false};

  auto work = [&](unsigned worker) {
    Partial& out = partials[worker];
    for (std::size_t i = worker; i < spans.size() && !stop.load(std::memory_order_relaxed); i += threads) {
      try {
        for (std::int64_t t = spans[i].lo; t <= spans[i].hi; ++t) {
          const IntPoint x = spans[i].point(t);
          const i128 lv = eval_form(inst.L(), x);
          const i128 cv = eval_form(inst.C(), x);
          if (lv <= 0 || cv <= 0) {
            throw InstanceInvalid("sum_S: L or C is not positive at lattice point (" + std::to_string(x.x1) + ", " +
                                  std::to_string(x.x2) + "); L = " + to_string(lv) + ", C = " + to_string(cv));
          }
          if (lv >= (i128{1} << 63) || cv >= (i128{1} << 63)) {
            throw ScaleLimit("sum_S: form value at (" + std::to_string(x.x1) + ", " + std::to_string(x.x2) +
                             ") exceeds 63 bits");
          }
          const std::uint64_t rl = arith::r_two_squares(static_cast<std::uint64_t>(lv));
          if (rl != 0) out.sum += u128{rl} * arith::r_two_squares(static_cast<std::uint64_t>(cv));
          ++out.points;
        }
      } catch (...) {
        out.failed_span = i;
        out.error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  // Report the failure on the earliest span so the message does not depend on scheduling.
  const Partial* first_failure = nullptr;
  for (const auto& p : partials) {
    if (p.error && (!first_failure || p.failed_span < first_failure->failed_span)) first_failure = &p;
  }
  if (first_failure) std::rethrow_exception(first_failure->error);

  SumResult result;
  result.X = X;
  for (const auto& p : partials) {
    result.S += p.sum;
    result.lattice_points += p.points;
  }
  result.S_over_X2 = static_cast<double>(result.S) / (X * X);
  return result;
}

double eta_reference() { return 1.0 - (1.0 + std::log(std::log(2.0))) / std::log(2.0); }

std::vector<ConvergenceRow> convergence_table(const ValidatedInstance& inst, const std::vector<double>& X_list,
                                              const euler::ConstantReport& constant, unsigned threads) {
  for (std::size_t i = 0; i < X_list.size(); ++i) {
    if (!(X_list[i] > 0.0)) throw std::invalid_argument("convergence_table: X values must be positive");
    if (i > 0 && !(X_list[i] > X_list[i - 1])) {
      throw std::invalid_argument("convergence_table: X values must be strictly increasing");
    }
  }
  const double eta = eta_reference();
  std::vector<ConvergenceRow> rows;
  for (double X : X_list) {
    const SumResult sum = sum_S(inst, X, {threads, ScanOrder::rows});
    ConvergenceRow row;
    row.X = X;
    row.S = sum.S;
    row.predicted_main_term = constant.predicted_constant * X * X;
    row.ratio = static_cast<double>(sum.S) / row.predicted_main_term;
    row.log_X = std::log(X);
    row.eta_reference = eta;
    row.scaled_error = (1.0 - row.ratio) * std::pow(row.log_X, eta);
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConvergenceRow> convergence_table(const ValidatedInstance& inst, const std::vector<double>& X_list,
                                              const euler::ConstantOptions& options, unsigned threads) {
  return convergence_table(inst, X_list, euler::predicted_constant(inst, options), threads);
}

}  // namespace chatelet::counter
