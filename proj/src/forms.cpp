#include "chatelet/forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "chatelet/arith.hpp"
#include "chatelet/errors.hpp"

namespace chatelet {

namespace {

using Float = boost::multiprecision::cpp_bin_float_100;

std::uint64_t abs_u64(std::int64_t v) {
  return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
}

std::string monomial(unsigned e1, unsigned e2) {
  std::string s;
  auto var = [&](const char* name, unsigned e) {
    if (e == 0) return;
    if (!s.empty()) s += "*";
    s += name;
    if (e > 1) s += "^" + std::to_string(e);
  };
  var("x1", e1);
  var("x2", e2);
  return s;
}

Rational cross(const RationalPoint& o, const RationalPoint& a, const RationalPoint& b) {
  return (a.x1 - o.x1) * (b.x2 - o.x2) - (a.x2 - o.x2) * (b.x1 - o.x1);
}

double to_double(const Rational& r) { return static_cast<double>(r); }

BigInt eval_big(const BigInt& c0, const BigInt& c1, const BigInt& c2, const BigInt& c3, const BigInt& p) {
  return ((c0 * p + c1) * p + c2) * p + c3;
}

int sign(const BigInt& v) { return v.sign(); }

BigInt floor_float(const Float& f) {
  Float fl = boost::multiprecision::floor(f);
  return fl.convert_to<BigInt>();
}

// Integer roots of g(p) = a p^3 + b p^2 + c p + d in [lo, hi].
void integer_roots_of_cubic(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d, const BigInt& lo,
                            const BigInt& hi, std::vector<BigInt>& roots) {
  std::vector<BigInt> splits;
  const BigInt disc = b * b - 3 * a * c;
  if (disc >= 0) {
    const Float sq = boost::multiprecision::sqrt(Float(disc));
    const Float denom = Float(3 * a);
    splits.push_back(floor_float((Float(-b) - sq) / denom));
    splits.push_back(floor_float((Float(-b) + sq) / denom));
    std::sort(splits.begin(), splits.end());
  }
  auto consider = [&](const BigInt& p) {
    if (p < lo || p > hi) return;
    if (eval_big(a, b, c, d, p) == 0 && std::find(roots.begin(), roots.end(), p) == roots.end()) roots.push_back(p);
  };
  // Points near a critical value are checked one by one; between them g is
  // monotone, so a sign change isolates at most one root.
  std::vector<std::pair<BigInt, BigInt>> segments;
  BigInt start = lo;
  for (const BigInt& s : splits) {
    for (int k = -2; k <= 2; ++k) consider(s + k);
    if (s - 3 >= start) segments.emplace_back(start, std::min<BigInt>(s - 3, hi));
    start = std::max<BigInt>(start, s + 3);
  }
  if (start <= hi) segments.emplace_back(start, hi);
  for (auto [l, h] : segments) {
    if (l > h) continue;
    const int sl = sign(eval_big(a, b, c, d, l));
    const int sh = sign(eval_big(a, b, c, d, h));
    if (sl == 0) consider(l);
    if (sh == 0) consider(h);
    if (sl == 0 || sh == 0 || sl == sh) continue;
    while (h - l > 1) {
      const BigInt mid = l + (h - l) / 2;
      const int sm = sign(eval_big(a, b, c, d, mid));
      if (sm == 0) {
        consider(mid);
        break;
      }
      if (sm == sl) {
        l = mid;
      } else {
        h = mid;
      }
    }
  }
}

}  // namespace

Rational exact_rational(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("exact_rational: value is not finite");
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);
  // mantissa * 2^53 is an integer for every finite double
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Rational r = scaled;
  if (exponent >= 0) return r * Rational(BigInt(1) << exponent);
  return r / Rational(BigInt(1) << -exponent);
}

BinaryForm::BinaryForm(unsigned degree, std::vector<std::int64_t> coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
  if (degree_ == 0) throw std::invalid_argument("BinaryForm: degree must be positive");
  if (coeffs_.size() != degree_ + 1) {
    throw std::invalid_argument("BinaryForm: degree " + std::to_string(degree_) + " needs " +
                                std::to_string(degree_ + 1) + " coefficients, got " + std::to_string(coeffs_.size()));
  }
  if (std::all_of(coeffs_.begin(), coeffs_.end(), [](std::int64_t c) { return c == 0; })) {
    throw std::invalid_argument("BinaryForm: the zero form is not allowed");
  }
}

std::string BinaryForm::to_string() const {
  std::string s;
  for (unsigned i = 0; i <= degree_; ++i) {
    const std::int64_t c = coeffs_[i];
    if (c == 0) continue;
    const std::string mono = monomial(degree_ - i, i);
    const std::uint64_t mag = abs_u64(c);
    if (s.empty()) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    if (mag != 1) {
      s += std::to_string(mag);
      if (!mono.empty()) s += "*";
    }
    s += mono;
  }
  return s;
}

i128 eval_form(const BinaryForm& form, IntPoint x) {
  if (x.x1 > kEvalCoordinateLimit || x.x1 < -kEvalCoordinateLimit || x.x2 > kEvalCoordinateLimit ||
      x.x2 < -kEvalCoordinateLimit) {
    throw std::invalid_argument("eval_form: coordinates (" + std::to_string(x.x1) + ", " + std::to_string(x.x2) +
                                ") exceed 2^31 in magnitude");
  }
  const unsigned d = form.degree();
  i128 total = 0;
  for (unsigned i = 0; i <= d; ++i) {
    i128 term = form.coeff(i);
    bool ok = true;
    for (unsigned k = 0; k < d - i && ok; ++k) ok = checked_mul(term, i128{x.x1}, term);
    for (unsigned k = 0; k < i && ok; ++k) ok = checked_mul(term, i128{x.x2}, term);
    if (ok) ok = checked_add(total, term, total);
    if (!ok) {
      throw ArithmeticOverflow("eval_form: 128-bit overflow evaluating " + form.to_string() + " at (" +
                               std::to_string(x.x1) + ", " + std::to_string(x.x2) + ")");
    }
  }
  return total;
}

Rational eval_form(const BinaryForm& form, const RationalPoint& x) {
  const unsigned d = form.degree();
  Rational total = 0;
  for (unsigned i = 0; i <= d; ++i) {
    Rational term = form.coeff(i);
    for (unsigned k = 0; k < d - i; ++k) term *= x.x1;
    for (unsigned k = 0; k < i; ++k) term *= x.x2;
    total += term;
  }
  return total;
}

double eval_form_real(const BinaryForm& form, double x1, double x2) {
  const unsigned d = form.degree();
  double total = 0.0;
  for (unsigned i = 0; i <= d; ++i) {
    double term = static_cast<double>(form.coeff(i));
    for (unsigned k = 0; k < d - i; ++k) term *= x1;
    for (unsigned k = 0; k < i; ++k) term *= x2;
    total += term;
  }
  return total;
}

std::uint64_t eval_form_mod(const BinaryForm& form, std::uint64_t x1, std::uint64_t x2, std::uint64_t m) {
  const unsigned d = form.degree();
  std::uint64_t total = 0;
  for (unsigned i = 0; i <= d; ++i) {
    std::uint64_t term = reduce_mod(form.coeff(i), m);
    for (unsigned k = 0; k < d - i; ++k) term = mulmod(term, x1, m);
    for (unsigned k = 0; k < i; ++k) term = mulmod(term, x2, m);
    total += term;
    if (total >= m) total -= m;
  }
  return total;
}

std::uint64_t content(const BinaryForm& form) {
  std::uint64_t g = 0;
  for (std::int64_t c : form.coeffs()) g = std::gcd(g, abs_u64(c));
  return g;
}

std::string LinearFactor::describe() const {
  if (a == 0) return "the factor x2 divides the form (zero x1^3 coefficient)";
  if (b == 0) return "the factor x1 divides the form (rational root t = 0 of C(t, 1))";
  // a*x1 + b*x2 vanishes at t = x1/x2 = -b/a
  BigInt num = -b, den = a;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::ostringstream os;
  os << "rational root t = " << num;
  if (den != 1) os << "/" << den;
  os << " of C(t, 1), factor ";
  if (den != 1) os << den << "*";
  os << "x1 " << (num < 0 ? "+ " : "- ");
  const BigInt mag = num < 0 ? BigInt(-num) : num;
  if (mag != 1) os << mag << "*";
  os << "x2";
  return os.str();
}

std::optional<LinearFactor> find_linear_factor(const BinaryForm& cubic) {
  if (cubic.degree() != 3) throw std::invalid_argument("find_linear_factor: form must have degree 3");
  const BigInt c0 = cubic.coeff(0), c1 = cubic.coeff(1), c2 = cubic.coeff(2), c3 = cubic.coeff(3);
  if (c0 == 0) return LinearFactor{0, 1};
  if (c3 == 0) return LinearFactor{1, 0};
  // Rational roots p/q of c0 t^3 + c1 t^2 + c2 t + c3 have q | c0 and p | c3.
  const auto qs = arith::divisors(arith::factorize(abs_u64(cubic.coeff(0))));
  const BigInt bound = boost::multiprecision::abs(c3);
  for (std::uint64_t qv : qs) {
    const BigInt q = qv;
    // q^3 * C(p/q, 1) = c0 p^3 + c1 q p^2 + c2 q^2 p + c3 q^3
    std::vector<BigInt> roots;
    integer_roots_of_cubic(c0, c1 * q, c2 * q * q, c3 * q * q * q, -bound, bound, roots);
    if (!roots.empty()) {
      BigInt p = roots.front();
      const BigInt g = boost::multiprecision::gcd(p, q);
      // t = p/q  <=>  q*x1 - p*x2 = 0
      return LinearFactor{q / g, -(p / g)};
    }
  }
  return std::nullopt;
}

bool is_irreducible_cubic(const BinaryForm& cubic) {
  if (cubic.degree() != 3) throw std::invalid_argument("is_irreducible_cubic: form must have degree 3");
  return !find_linear_factor(cubic).has_value();
}

BigInt discriminant(const BinaryForm& cubic) {
  if (cubic.degree() != 3) throw std::invalid_argument("discriminant: form must have degree 3");
  const BigInt a = cubic.coeff(0), b = cubic.coeff(1), c = cubic.coeff(2), d = cubic.coeff(3);
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

Region::Region(std::vector<RationalPoint> vertices, double c) : vertices_(std::move(vertices)), c_(c) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw std::invalid_argument("Region: need at least 3 vertices, got " + std::to_string(n));
  if (!(c_ > 0.0) || !std::isfinite(c_)) throw std::invalid_argument("Region: boundary constant c must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (vertices_[i].x1 == vertices_[j].x1 && vertices_[i].x2 == vertices_[j].x2) {
        throw std::invalid_argument("Region: repeated vertex at index " + std::to_string(j));
      }
    }
  }
  // Convex and counter-clockwise: every vertex lies on or left of every edge.
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices_[i];
    const auto& b = vertices_[(i + 1) % n];
    for (std::size_t k = 0; k < n; ++k) {
      if (cross(a, b, vertices_[k]) < 0) {
        throw std::invalid_argument("Region: vertices must form a convex polygon in counter-clockwise order (edge " +
                                    std::to_string(i) + ")");
      }
    }
  }
  if (region_area(*this) <= 0) throw std::invalid_argument("Region: polygon has zero area");
}

bool Region::contains(const RationalPoint& p) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cross(vertices_[i], vertices_[(i + 1) % n], p) < 0) return false;
  }
  return true;
}

Region::Box Region::bounding_box() const {
  Box box{vertices_[0].x1, vertices_[0].x2, vertices_[0].x1, vertices_[0].x2};
  for (const auto& v : vertices_) {
    box.min_x1 = std::min(box.min_x1, v.x1);
    box.min_x2 = std::min(box.min_x2, v.x2);
    box.max_x1 = std::max(box.max_x1, v.x1);
    box.max_x2 = std::max(box.max_x2, v.x2);
  }
  return box;
}

Rational region_area(const Region& region) {
  const auto& v = region.vertices();
  Rational twice = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    twice += a.x1 * b.x2 - b.x1 * a.x2;
  }
  return twice / 2;
}

BoundaryStats boundary_stats(const Region& region) {
  const auto& v = region.vertices();
  long double length = 0.0L;
  Rational r_inf = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % v.size()];
    const Rational dx = b.x1 - a.x1, dy = b.x2 - a.x2;
    length += std::sqrt(static_cast<long double>(dx * dx + dy * dy));
    r_inf = std::max({r_inf, Rational(boost::multiprecision::abs(a.x1)), Rational(boost::multiprecision::abs(a.x2))});
  }
  BoundaryStats stats;
  stats.boundary_length = static_cast<double>(length);
  stats.r_infinity = to_double(r_inf);
  stats.satisfies_bound = length <= static_cast<long double>(region.c()) * static_cast<long double>(r_inf);
  return stats;
}

ProblemInstance::ProblemInstance(BinaryForm linear_form, BinaryForm cubic_form, Region region_, std::string id_)
    : L(std::move(linear_form)), C(std::move(cubic_form)), region(std::move(region_)), id(std::move(id_)) {
  if (L.degree() != 1) throw std::invalid_argument("ProblemInstance: L must be a linear form");
  if (C.degree() != 3) throw std::invalid_argument("ProblemInstance: C must be a cubic form");
}

PositivityCertificate certify_positivity(const ProblemInstance& inst, const PositivityOptions& options) {
  PositivityCertificate cert;
  const auto& verts = inst.region.vertices();

  cert.linear_positive = true;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (eval_form(inst.L, verts[i]) <= 0) {
      cert.linear_positive = false;
      cert.detail = "L = " + inst.L.to_string() + " is not positive at vertex " + std::to_string(i) + " (" +
                    verts[i].x1.str() + ", " + verts[i].x2.str() + ")";
      return cert;
    }
  }
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (eval_form(inst.C, verts[i]) <= 0) {
      cert.detail = "C = " + inst.C.to_string() + " is not positive at vertex " + std::to_string(i) + " (" +
                    verts[i].x1.str() + ", " + verts[i].x2.str() + ")";
      return cert;
    }
  }

  const Region::Box box = inst.region.bounding_box();
  const double xmin = to_double(box.min_x1), xmax = to_double(box.max_x1);
  const double ymin = to_double(box.min_x2), ymax = to_double(box.max_x2);
  const double reach = std::max({std::abs(xmin), std::abs(xmax), std::abs(ymin), std::abs(ymax)});
  std::array<double, 4> a{};
  for (unsigned i = 0; i < 4; ++i) a[i] = std::abs(static_cast<double>(inst.C.coeff(i)));
  // |dC/dx1| <= (3|c0| + 2|c1| + |c2|) M^2, |dC/dx2| <= (|c1| + 2|c2| + 3|c3|) M^2 on the box.
  const double gradient_bound =
      std::hypot((3 * a[0] + 2 * a[1] + a[2]) * reach * reach, (a[1] + 2 * a[2] + 3 * a[3]) * reach * reach);
  const double rounding_slack = 1e-12 * (a[0] + a[1] + a[2] + a[3]) * reach * reach * reach;

  std::vector<std::array<double, 2>> poly;
  for (const auto& v : verts) poly.push_back({to_double(v.x1), to_double(v.x2)});
  const double geom_eps = 1e-12 * std::max(1.0, reach);
  auto edge_side = [&](std::size_t i, double px, double py) {
    const auto& p0 = poly[i];
    const auto& p1 = poly[(i + 1) % poly.size()];
    return (p1[0] - p0[0]) * (py - p0[1]) - (p1[1] - p0[1]) * (px - p0[0]);
  };

  unsigned cells = std::max(1u, options.initial_cells);
  double best_margin = -std::numeric_limits<double>::infinity();
  for (unsigned level = 0; level <= options.max_refinements; ++level, cells *= 2) {
    const double hx = (xmax - xmin) / cells, hy = (ymax - ymin) / cells;
    const double half_diag = 0.5 * std::hypot(hx, hy);
    double lower = std::numeric_limits<double>::infinity();
    for (unsigned i = 0; i < cells; ++i) {
      const double x0 = xmin + i * hx, x1 = x0 + hx;
      for (unsigned j = 0; j < cells; ++j) {
        const double y0 = ymin + j * hy, y1 = y0 + hy;
        // Separating-axis test against each polygon edge; the box axes are
        // covered because the cell lies inside the polygon's bounding box.
        bool separated = false;
        for (std::size_t e = 0; e < poly.size() && !separated; ++e) {
          const double scale = geom_eps * (1.0 + hx + hy);
          separated = edge_side(e, x0, y0) < -scale && edge_side(e, x1, y0) < -scale &&
                      edge_side(e, x0, y1) < -scale && edge_side(e, x1, y1) < -scale;
        }
        if (separated) continue;
        const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
        const double value = eval_form_real(inst.C, cx, cy);
        if (value <= 0.0 && inst.region.contains({exact_rational(cx), exact_rational(cy)})) {
          std::ostringstream os;
          os.precision(12);
          os << "C = " << inst.C.to_string() << " takes value " << value << " <= 0 at (" << cx << ", " << cy
             << ") inside the region";
          cert.detail = os.str();
          cert.cells_per_axis = cells;
          return cert;
        }
        lower = std::min(lower, value - gradient_bound * half_diag - rounding_slack);
      }
    }
    best_margin = lower;
    if (lower > 0.0) {
      cert.cubic_positive = true;
      cert.cubic_lower_bound = lower;
      cert.cells_per_axis = cells;
      std::ostringstream os;
      os.precision(12);
      os << "L positive at all vertices; C >= " << lower << " certified on a " << cells << "x" << cells << " grid";
      cert.detail = os.str();
      return cert;
    }
  }
  std::ostringstream os;
  os.precision(12);
  os << "positivity of C could not be certified: best certified lower bound " << best_margin << " after "
     << options.max_refinements << " refinements; refine the grid further or reject the instance";
  throw CertificationFailed(os.str());
}

bool check_positivity(const ProblemInstance& inst, const PositivityOptions& options) {
  const PositivityCertificate cert = certify_positivity(inst, options);
  return cert.linear_positive && cert.cubic_positive;
}

std::vector<std::string> HypothesisReport::failures() const {
  std::vector<std::string> out;
  if (!irreducible) out.push_back("C is reducible: " + (factor ? factor->describe() : std::string("linear factor")));
  if (!positive) out.push_back("positivity: " + positivity_detail);
  if (!boundary.satisfies_bound) {
    std::ostringstream os;
    os.precision(12);
    os << "boundary length " << boundary.boundary_length << " exceeds c * r_infinity";
    out.push_back(os.str());
  }
  return out;
}

HypothesisReport check_hypotheses(const ProblemInstance& inst, const PositivityOptions& options) {
  HypothesisReport report;
  report.factor = find_linear_factor(inst.C);
  report.irreducible = !report.factor.has_value();
  try {
    const PositivityCertificate cert = certify_positivity(inst, options);
    report.positive = cert.linear_positive && cert.cubic_positive;
    report.positivity_detail = cert.detail;
  } catch (const CertificationFailed& e) {
    report.positive = false;
    report.positivity_inconclusive = true;
    report.positivity_detail = e.what();
  }
  report.boundary = boundary_stats(inst.region);
  return report;
}

ValidatedInstance ValidatedInstance::validate(ProblemInstance inst, const PositivityOptions& options) {
  const HypothesisReport report = check_hypotheses(inst, options);
  if (report.positivity_inconclusive) throw CertificationFailed(report.positivity_detail);
  if (!report.ok()) {
    std::string msg = "instance '" + inst.id + "' fails its hypotheses:";
    for (const auto& f : report.failures()) msg += " " + f + ";";
    throw InstanceInvalid(msg);
  }
  return ValidatedInstance(std::move(inst));
}

}  // namespace chatelet
