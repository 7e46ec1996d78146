#include "charvar/trace_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace charvar {

namespace {

void require_trace_range(double v, const char* what) {
  if (!(v >= -2.0 && v <= 2.0)) {
    throw std::domain_error(std::string(what) + ": value " + std::to_string(v) +
                            " outside [-2, 2]");
  }
}

double half_width(double a, double d) {
  return std::sqrt(std::max(0.0, (4.0 - a * a) * (4.0 - d * d)));
}

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& u, const Vec3& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

double norm(const Vec3& u) { return std::sqrt(u[0] * u[0] + u[1] * u[1] + u[2] * u[2]); }

// Orthonormal frame (e1, e2, e3) with e1 along `axis`.
std::array<Vec3, 3> frame(const Vec3& axis) {
  const double n = norm(axis);
  const Vec3 e1 = {axis[0] / n, axis[1] / n, axis[2] / n};
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(e1[i]) < std::abs(e1[k])) k = i;
  }
  Vec3 ref = {0.0, 0.0, 0.0};
  ref[k] = 1.0;
  Vec3 e2 = cross(e1, ref);
  const double n2 = norm(e2);
  e2 = {e2[0] / n2, e2[1] / n2, e2[2] / n2};
  return {e1, e2, cross(e1, e2)};
}

}  // namespace

double max_abs_diff(const TraceCoords3& s, const TraceCoords3& t) {
  const auto u = s.as_array();
  const auto v = t.as_array();
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

EllipseRegion::EllipseRegion(double y) : y_(y) { require_trace_range(y, "EllipseRegion level"); }

double EllipseRegion::boundary_value(double b, double c) const {
  return b * b + c * c + y_ * y_ - b * c * y_ - 4.0;
}

bool EllipseRegion::contains(double b, double c, double tol) const {
  if (std::abs(b) > 2.0 + tol || std::abs(c) > 2.0 + tol) return false;
  if (degenerate()) return std::abs(c - std::copysign(1.0, y_) * b) <= tol;
  return boundary_value(b, c) <= tol;
}

std::array<double, 2> EllipseRegion::boundary_point(double u) const {
  const double v = std::acos(y_ / 2.0);
  return {2.0 * std::cos(u), 2.0 * std::cos(u - v)};
}

TraceCoords3 trace_coords3(const Representation& rho) {
  if (rho.rank() != 3) throw std::invalid_argument("trace_coords3: representation rank must be 3");
  const auto& A = rho.image(1);
  const auto& B = rho.image(2);
  const auto& C = rho.image(3);
  const GroupElement AB = A * B;
  TraceCoords3 t;
  t.a = trace(A);
  t.b = trace(B);
  t.c = trace(C);
  t.d = trace(evaluate(boundary_word(3), rho));
  t.x = trace(AB);
  t.y = trace(B * C);
  t.z = trace(C * A);
  return t;
}

double fourholes_residual(const TraceCoords3& t) {
  const auto [a, b, c, d, x, y, z] = t.as_array();
  const double lhs = x * x + y * y + z * z + x * y * z;
  const double rhs = (a * b + c * d) * x + (a * d + b * c) * y + (a * c + b * d) * z +
                     (4.0 - a * a - b * b - c * c - d * d - a * b * c * d);
  return lhs - rhs;
}

double v3_form(double x1, double x2, double x3) {
  return x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 * x3;
}

bool v3_contains(double x1, double x2, double x3, double tol) {
  for (double v : {x1, x2, x3}) {
    if (std::abs(v) > 2.0 + tol) return false;
  }
  return v3_form(x1, x2, x3) <= 4.0 + tol;
}

TraceInterval y_interval(double a, double d) {
  require_trace_range(a, "y_interval");
  require_trace_range(d, "y_interval");
  const double s = half_width(a, d);
  return {(a * d - s) / 2.0, (a * d + s) / 2.0};
}

double delta(double a, double b, double c, double d) {
  const double s = 2.0 * (a * a + b * b + c * c + d * d) - a * b * c * d - 16.0;
  return s * s - (4.0 - a * a) * (4.0 - b * b) * (4.0 - c * c) * (4.0 - d * d);
}

RealizabilityMethod parse_realizability_method(std::string_view tag) {
  if (tag == "discriminant") return RealizabilityMethod::discriminant;
  if (tag == "interval") return RealizabilityMethod::interval;
  throw std::invalid_argument("unknown realizability method '" + std::string(tag) + "'");
}

TraceInterval fiber_y_range(double a, double b, double c, double d) {
  const auto ad = y_interval(a, d);
  const auto bc = y_interval(b, c);
  return {std::max(ad.lo, bc.lo), std::min(ad.hi, bc.hi)};
}

bool boundary_realizable(double a, double b, double c, double d, RealizabilityMethod method,
                         double tol) {
  switch (method) {
    case RealizabilityMethod::discriminant:
      return delta(a, b, c, d) <= tol;
    case RealizabilityMethod::interval: {
      const auto r = fiber_y_range(a, b, c, d);
      return r.lo <= r.hi + tol;
    }
  }
  throw std::invalid_argument("boundary_realizable: invalid method");
}

bool ellipse_contains(double y, double b, double c, double tol) {
  return EllipseRegion(y).contains(b, c, tol);
}

std::array<std::array<double, 2>, 4> ellipse_tangency_points(double y) {
  if (!(std::abs(y) < 2.0)) {
    throw std::domain_error("ellipse_tangency_points: requires |y| < 2");
  }
  return {{{2.0, y}, {y, 2.0}, {-2.0, -y}, {-y, -2.0}}};
}

BoundaryTraces t_boundary(const Representation& rho) {
  BoundaryTraces out;
  out.values.reserve(rho.rank() + 1);
  out.values.push_back(trace(evaluate(boundary_word(rho.rank()), rho)));
  for (const auto& g : rho.images()) out.values.push_back(trace(g));
  return out;
}

double kappa(const Representation& rho) {
  if (rho.rank() != 2) throw std::invalid_argument("kappa: representation rank must be 2");
  return trace(commutator(rho.image(1), rho.image(2)));
}

GroupElement element_with_traces(const GroupElement& m, double a, double target, double phi) {
  require_trace_range(a, "element_with_traces");
  const double w = a / 2.0;
  const double sa = std::sqrt(std::max(0.0, 1.0 - w * w));
  const Vec3 mv = m.imaginary();
  const double sm = norm(mv);
  // tr(A m) = 2 (w m0 - u . mv), so u . mv is prescribed.
  const double dot = (a * m.w() - target) / 2.0;
  const double reach = sa * sm;
  if (std::abs(dot) > reach + kMembershipTolerance) {
    throw std::domain_error("element_with_traces: target trace not attainable");
  }
  if (sa == 0.0) return GroupElement::normalized(w, 0.0, 0.0, 0.0);
  const auto [e1, e2, e3] = frame(sm > 1e-300 ? mv : Vec3{1.0, 0.0, 0.0});
  const double cos_t = reach > 0.0 ? std::clamp(dot / reach, -1.0, 1.0) : 0.0;
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  Vec3 u;
  for (int i = 0; i < 3; ++i) u[i] = sa * (cos_t * e1[i] + sin_t * (cp * e2[i] + sp * e3[i]));
  return GroupElement::normalized(w, u[0], u[1], u[2]);
}

Representation realize_coords(double a, double b, double c, double d, double y, double phi) {
  require_trace_range(b, "realize_coords");
  const double wb = b / 2.0;
  const GroupElement B = GroupElement::normalized(wb, std::sqrt(std::max(0.0, 1.0 - wb * wb)), 0.0, 0.0);
  const GroupElement C = element_with_traces(B, c, y, 0.0);
  const GroupElement A = element_with_traces(B * C, a, d, phi);
  return Representation({A, B, C});
}

Representation sample_fiber(const BoundaryTraces& target, RngStream& rng, int max_tries) {
  if (target.values.size() != 4) {
    throw std::invalid_argument("sample_fiber: target must hold four boundary traces");
  }
  for (double v : target.values) require_trace_range(v, "sample_fiber");
  const double d = target.values[0];
  const double a = target.values[1];
  const double b = target.values[2];
  const double c = target.values[3];
  const auto range = fiber_y_range(a, b, c, d);
  if (range.lo > range.hi + kMembershipTolerance) {
    throw Unrealizable("sample_fiber: boundary traces are not realizable");
  }
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    const double y = range.lo < range.hi ? rng.uniform(range.lo, range.hi)
                                         : (range.lo + range.hi) / 2.0;
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    Representation rho = conjugate(realize_coords(a, b, c, d, std::clamp(y, -2.0, 2.0), phi),
                                   haar_sample(rng));
    const auto got = t_boundary(rho);
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      err = std::max(err, std::abs(got.values[i] - target.values[i]));
    }
    if (err < kFiberTolerance) return rho;
  }
  throw ExhaustedTries("sample_fiber: no sample matched the target within tolerance");
}

}  // namespace charvar
