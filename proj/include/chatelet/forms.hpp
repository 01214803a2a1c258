#pragma once

// Binary forms, convex rational polygons and the hypotheses an instance must
// satisfy before any density or lattice computation runs.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "chatelet/int128.hpp"

namespace chatelet {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Exact rational value of a finite double. Throws std::invalid_argument for
/// NaN or infinity.
Rational exact_rational(double value);

struct IntPoint {
  std::int64_t x1 = 0;
  std::int64_t x2 = 0;
  friend bool operator==(const IntPoint&, const IntPoint&) = default;
};

struct RationalPoint {
  Rational x1;
  Rational x2;
};

/// Homogeneous form in (x1, x2); coeffs[i] multiplies x1^(degree-i) * x2^i.
class BinaryForm {
 public:
  /// Throws std::invalid_argument unless coeffs.size() == degree + 1, the
  /// degree is positive and some coefficient is nonzero.
  BinaryForm(unsigned degree, std::vector<std::int64_t> coeffs);

  static BinaryForm linear(std::int64_t a, std::int64_t b) { return BinaryForm(1, {a, b}); }
  static BinaryForm cubic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return BinaryForm(3, {a, b, c, d});
  }

  unsigned degree() const { return degree_; }
  std::span<const std::int64_t> coeffs() const { return coeffs_; }
  std::int64_t coeff(unsigned i) const { return coeffs_.at(i); }

  /// Human-readable, e.g. "x1^3 + x1*x2^2 + x2^3".
  std::string to_string() const;

  friend bool operator==(const BinaryForm&, const BinaryForm&) = default;

 private:
  unsigned degree_;
  std::vector<std::int64_t> coeffs_;
};

/// Largest coordinate magnitude accepted by eval_form.
inline constexpr std::int64_t kEvalCoordinateLimit = std::int64_t{1} << 31;

/// Exact value at an integer point. Requires |x1|, |x2| <= 2^31 (else
/// std::invalid_argument); throws ArithmeticOverflow if any partial product
/// leaves the signed 128-bit range.
i128 eval_form(const BinaryForm& form, IntPoint x);

/// Exact value at a rational point.
Rational eval_form(const BinaryForm& form, const RationalPoint& x);

/// Floating-point value, for grid scans only.
double eval_form_real(const BinaryForm& form, double x1, double x2);

/// Value modulo m (m >= 1) at residues x1, x2 < m; requires m < 2^63.
std::uint64_t eval_form_mod(const BinaryForm& form, std::uint64_t x1, std::uint64_t x2, std::uint64_t m);

/// gcd of the coefficients (always >= 1 for a valid form).
std::uint64_t content(const BinaryForm& form);

/// A linear form a*x1 + b*x2 dividing a cubic over Q.
struct LinearFactor {
  BigInt a;
  BigInt b;
  /// Explanation naming the factor x2 / x1 or the rational root it came from.
  std::string describe() const;
};

/// Returns a linear factor of C over Q if one exists. A zero x1^3 coefficient
/// yields x2; otherwise the rational roots p/q of C(t, 1) are searched with
/// q ranging over the divisors of the leading coefficient and p isolated
/// exactly among the integer roots of the scaled cubic.
std::optional<LinearFactor> find_linear_factor(const BinaryForm& cubic);

/// True iff the cubic has no linear factor over Q. Throws
/// std::invalid_argument when the form is not of degree 3.
bool is_irreducible_cubic(const BinaryForm& cubic);

/// Discriminant b^2c^2 - 4ac^3 - 4b^3d - 27a^2d^2 + 18abcd of a cubic form.
BigInt discriminant(const BinaryForm& cubic);

/// Convex polygon with rational vertices in counter-clockwise order, together
/// with the boundary constant c.
class Region {
 public:
  /// Throws std::invalid_argument for fewer than three vertices, repeated
  /// vertices, a clockwise, non-convex or zero-area polygon, or c <= 0.
  Region(std::vector<RationalPoint> vertices, double c);

  const std::vector<RationalPoint>& vertices() const { return vertices_; }
  double c() const { return c_; }

  /// Closed-polygon membership, exact.
  bool contains(const RationalPoint& p) const;

  /// Axis-aligned bounding box as exact rationals: {min_x1, min_x2, max_x1, max_x2}.
  struct Box {
    Rational min_x1, min_x2, max_x1, max_x2;
  };
  Box bounding_box() const;

 private:
  std::vector<RationalPoint> vertices_;
  double c_;
};

/// Shoelace area, exact.
Rational region_area(const Region& region);

struct BoundaryStats {
  double boundary_length = 0.0;
  double r_infinity = 0.0;
  bool satisfies_bound = false;
};

/// Perimeter, max over vertices of max(|x1|, |x2|), and whether the
/// perimeter is at most c * r_infinity.
BoundaryStats boundary_stats(const Region& region);

/// Validated triple shape: L of degree 1, C of degree 3. Hypotheses are not
/// checked here; see check_hypotheses / ValidatedInstance.
struct ProblemInstance {
  ProblemInstance(BinaryForm linear_form, BinaryForm cubic_form, Region region_, std::string id_ = "instance");

  BinaryForm L;
  BinaryForm C;
  Region region;
  std::string id;
};

struct PositivityOptions {
  unsigned initial_cells = 16;   // cells per axis on the first pass
  unsigned max_refinements = 4;  // each refinement doubles the cells per axis
};

struct PositivityCertificate {
  bool linear_positive = false;
  bool cubic_positive = false;
  /// Certified lower bound for C on the region (valid when cubic_positive).
  double cubic_lower_bound = 0.0;
  unsigned cells_per_axis = 0;
  std::string detail;
};

/// L is checked exactly at the vertices. C is scanned over the cells of a
/// uniform grid on the bounding box that meet the polygon; each cell is
/// bounded below by C(center) - G * half_diagonal where G bounds |grad C| on
/// the box. A non-positive exact value at a vertex or a non-positive value at
/// a cell center inside the polygon is a definite failure. Throws
/// CertificationFailed when the scan stays inconclusive after the last
/// refinement.
PositivityCertificate certify_positivity(const ProblemInstance& inst, const PositivityOptions& options = {});

/// certify_positivity reduced to a yes/no answer (still throws when inconclusive).
bool check_positivity(const ProblemInstance& inst, const PositivityOptions& options = {});

struct HypothesisReport {
  bool irreducible = false;
  std::optional<LinearFactor> factor;
  bool positive = false;
  bool positivity_inconclusive = false;
  std::string positivity_detail;
  BoundaryStats boundary;
  bool ok() const { return irreducible && positive && boundary.satisfies_bound; }
  /// One line per failed hypothesis.
  std::vector<std::string> failures() const;
};

/// Runs all three checks without throwing on a failed hypothesis.
HypothesisReport check_hypotheses(const ProblemInstance& inst, const PositivityOptions& options = {});

/// A ProblemInstance that passed check_hypotheses. Downstream computations
/// take this type so they never see an unchecked instance.
class ValidatedInstance {
 public:
  /// Throws InstanceInvalid (with the failures joined) or CertificationFailed.
  static ValidatedInstance validate(ProblemInstance inst, const PositivityOptions& options = {});

  const ProblemInstance& instance() const { return inst_; }
  const BinaryForm& L() const { return inst_.L; }
  const BinaryForm& C() const { return inst_.C; }
  const Region& region() const { return inst_.region; }
  const std::string& id() const { return inst_.id; }

 private:
  explicit ValidatedInstance(ProblemInstance inst) : inst_(std::move(inst)) {}
  ProblemInstance inst_;
};

}  // namespace chatelet
