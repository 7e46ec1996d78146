// Trace coordinates on SU(2)-character varieties of F_2 and F_3.
//
// For F_3 = <A, B, C> with D = C^-1 B^-1 A^-1 the seven coordinates are
//   a = tr A, b = tr B, c = tr C, d = tr D, x = tr AB, y = tr BC, z = tr CA.
// The rank-two character variety is the region
//   V_3 = { (x1, x2, x3) in [-2,2]^3 : x1^2 + x2^2 + x3^2 - x1 x2 x3 <= 4 }.

#ifndef CHARVAR_TRACE_GEOMETRY_HPP
#define CHARVAR_TRACE_GEOMETRY_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "charvar/free_group.hpp"
#include "charvar/su2.hpp"

namespace charvar {

/// Slack used by every membership predicate in this header.
inline constexpr double kMembershipTolerance = 1e-9;
/// Maximum sup-norm error accepted by sample_fiber.
inline constexpr double kFiberTolerance = 1e-9;

struct TraceCoords3 {
  double a = 2, b = 2, c = 2, d = 2, x = 2, y = 2, z = 2;

  std::array<double, 7> as_array() const { return {a, b, c, d, x, y, z}; }
  friend bool operator==(const TraceCoords3&, const TraceCoords3&) = default;
};

/// Largest componentwise difference.
double max_abs_diff(const TraceCoords3& s, const TraceCoords3& t);

/// (tr rho(X_0), tr rho(X_1), ..., tr rho(X_n)).
struct BoundaryTraces {
  std::vector<double> values;

  int rank() const { return static_cast<int>(values.size()) - 1; }
};

/// The closed interval Y(a, d) = [y_-(a, d), y_+(a, d)].
struct TraceInterval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v, double tol = kMembershipTolerance) const {
    return v >= lo - tol && v <= hi + tol;
  }
};

/// The region of (b, c) with y in Y(b, c): b^2 + c^2 + y^2 - b c y <= 4,
/// a closed ellipse for |y| < 2 and the segment c = sign(y) b for |y| = 2.
class EllipseRegion {
public:
  /// Throws std::domain_error for |y| > 2.
  explicit EllipseRegion(double y);

  double level() const { return y_; }
  bool degenerate() const { return std::abs(y_) == 2.0; }
  /// b^2 + c^2 + y^2 - b c y - 4; nonpositive inside.
  double boundary_value(double b, double c) const;
  bool contains(double b, double c, double tol = kMembershipTolerance) const;
  /// Point on the boundary curve, parameter u in [0, 2 pi):
  /// (2 cos u, 2 cos(u - v)) with y = 2 cos v.
  std::array<double, 2> boundary_point(double u) const;

private:
  double y_;
};

/// Throws std::invalid_argument unless rho has rank 3.
TraceCoords3 trace_coords3(const Representation& rho);

/// LHS - RHS of the defining relation
///   x^2 + y^2 + z^2 + xyz = (ab + cd) x + (ad + bc) y + (ac + bd) z
///                           + 4 - a^2 - b^2 - c^2 - d^2 - abcd.
double fourholes_residual(const TraceCoords3& t);

/// x1^2 + x2^2 + x3^2 - x1 x2 x3
double v3_form(double x1, double x2, double x3);
bool v3_contains(double x1, double x2, double x3, double tol = kMembershipTolerance);

/// Throws std::domain_error for inputs outside [-2, 2].
TraceInterval y_interval(double a, double d);

/// (2(a^2+b^2+c^2+d^2) - abcd - 16)^2 - (4-a^2)(4-b^2)(4-c^2)(4-d^2)
double delta(double a, double b, double c, double d);

enum class RealizabilityMethod { discriminant, interval };

/// Throws std::invalid_argument for an unknown tag.
RealizabilityMethod parse_realizability_method(std::string_view tag);

/// discriminant: delta <= tol. interval: Y(a,d) and Y(b,c) intersect within tol.
bool boundary_realizable(double a, double b, double c, double d, RealizabilityMethod method,
                         double tol = kMembershipTolerance);

/// Y(a,d) intersected with Y(b,c); lo > hi when empty.
TraceInterval fiber_y_range(double a, double b, double c, double d);

bool ellipse_contains(double y, double b, double c, double tol = kMembershipTolerance);

/// (2, y), (y, 2), (-2, -y), (-y, -2). Throws std::domain_error for |y| >= 2.
std::array<std::array<double, 2>, 4> ellipse_tangency_points(double y);

BoundaryTraces t_boundary(const Representation& rho);

/// tr rho([X_1, X_2]) for a rank-2 representation.
double kappa(const Representation& rho);

/// An element A with tr A = a and tr(A m) = target, whose imaginary part sits
/// at azimuth `phi` around the axis of m. Requires target in Y(a, tr m)
/// (clamped within slack); throws std::domain_error otherwise.
GroupElement element_with_traces(const GroupElement& m, double a, double target, double phi);

/// Deterministic representation of F_3 with the given (a, b, c, d) and
/// y = tr BC; `phi` is the free angle of A about the axis of BC. Requires
/// y in Y(a,d) and in Y(b,c).
Representation realize_coords(double a, double b, double c, double d, double y, double phi);

class Unrealizable : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

class ExhaustedTries : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Samples a rank-3 representation with t_boundary(rho) = target, ordered
/// (t0, t1, t2, t3) = (d, a, b, c). tr BC is drawn uniformly from
/// Y(a,d) and Y(b,c), A's azimuth uniformly, and the result is conjugated by
/// a Haar element.
Representation sample_fiber(const BoundaryTraces& target, RngStream& rng, int max_tries = 64);

}  // namespace charvar

#endif  // CHARVAR_TRACE_GEOMETRY_HPP
