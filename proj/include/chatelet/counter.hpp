#pragma once

// The empirical sum S(X) = sum over x in Z^2 cap XR of r(L(x)) r(C(x)) and
// its comparison with the predicted main term.

#include <cstdint>
#include <vector>

#include "chatelet/euler.hpp"
#include "chatelet/forms.hpp"
#include "chatelet/int128.hpp"

namespace chatelet::counter {

/// rows: each span fixes x2 and runs over x1; columns: fixes x1, runs over x2.
enum class ScanOrder { rows, columns };

/// Consecutive lattice points on one row (or column), bounds inclusive.
struct LatticeSpan {
  std::int64_t fixed = 0;
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  ScanOrder order = ScanOrder::rows;

  std::uint64_t size() const { return static_cast<std::uint64_t>(hi - lo + 1); }
  IntPoint point(std::int64_t t) const { return order == ScanOrder::rows ? IntPoint{t, fixed} : IntPoint{fixed, t}; }
};

/// Integer points of the closed polygon X*R, as spans between the exact
/// rational intersections of each integer row with the boundary. Throws
/// std::invalid_argument unless X > 0 and X * max|vertex coordinate| < 2^31.
std::vector<LatticeSpan> lattice_points_in(const Region& region, double X, ScanOrder order = ScanOrder::rows);

template <typename Visitor>
void for_each_point(const std::vector<LatticeSpan>& spans, Visitor&& visit) {
  for (const auto& span : spans) {
    for (std::int64_t t = span.lo; t <= span.hi; ++t) visit(span.point(t));
  }
}

std::uint64_t count_points(const std::vector<LatticeSpan>& spans);

/// |#(Z^2 cap XR) - vol(R) X^2| <= kappa * (perimeter(R) X + 1) for convex R.
inline constexpr double kLatticeCountKappa = 1.0;

struct SumResult {
  double X = 0.0;
  std::uint64_t lattice_points = 0;
  u128 S = 0;
  double S_over_X2 = 0.0;
};

struct SumOptions {
  unsigned threads = 1;
  ScanOrder order = ScanOrder::rows;
};

/// Exact S(X). Throws ScaleLimit when the a-priori bound on |L|, |C| over XR
/// (or an actual value) reaches 2^63, and InstanceInvalid when L or C is not
/// positive at some lattice point.
SumResult sum_S(const ValidatedInstance& inst, double X, const SumOptions& options = {});

/// 1 - (1 + log log 2) / log 2.
double eta_reference();

struct ConvergenceRow {
  double X = 0.0;
  u128 S = 0;
  double predicted_main_term = 0.0;
  double ratio = 0.0;
  double log_X = 0.0;
  double eta_reference = 0.0;
  /// (1 - ratio) * (log X)^eta, descriptive only.
  double scaled_error = 0.0;
};

/// One row per X using a precomputed constant. X_list must be strictly
/// increasing and positive.
std::vector<ConvergenceRow> convergence_table(const ValidatedInstance& inst, const std::vector<double>& X_list,
                                              const euler::ConstantReport& constant, unsigned threads = 1);

std::vector<ConvergenceRow> convergence_table(const ValidatedInstance& inst, const std::vector<double>& X_list,
                                              const euler::ConstantOptions& options, unsigned threads = 1);

}  // namespace chatelet::counter
