// Action of the automorphism alpha (A -> A, B -> B A^-1, C -> A C) on trace
// coordinates, its linear structure on the level sets of (a, d, y), and the
// linear flow whose time-s map contains it.

#ifndef CHARVAR_INDUCED_MAPS_HPP
#define CHARVAR_INDUCED_MAPS_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "charvar/free_group.hpp"
#include "charvar/trace_geometry.hpp"

namespace charvar {

/// Coordinates (x, b, c, z) on a level set of (a, d, y).
struct FiberPoint4 {
  double x = 0, b = 0, c = 0, z = 0;

  std::array<double, 4> as_array() const { return {x, b, c, z}; }
  friend bool operator==(const FiberPoint4&, const FiberPoint4&) = default;
};

struct PlanePoint {
  double x = 0, y = 0;
  friend bool operator==(const PlanePoint&, const PlanePoint&) = default;
};

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat4 = std::array<std::array<double, 4>, 4>;

/// (a, b, c, d, x, y, z) -> (a, x, ac - z, d, ax - b, y, c)
TraceCoords3 alpha_star(const TraceCoords3& t);

/// Trace coordinates of phi . rho computed by substituting the coordinate
/// words A, B, C, D, AB, BC, CA through phi^-1 and evaluating at rho.
TraceCoords3 induced_trace_coords(const Automorphism& phi, const Representation& rho);

FiberPoint4 fiber_point(const TraceCoords3& t);

/// Matrix of alpha_star on (x, b, c, z) at a = a0.
Mat4 alpha_star_block_matrix(double a0);
FiberPoint4 apply(const Mat4& m, const FiberPoint4& p);

/// L_a = [[a, -1], [1, 0]]
Mat2 La_matrix(double a);
/// (x, y) -> (a x - y, x)
PlanePoint La_apply(double a, const PlanePoint& p);
/// x^2 - a x y + y^2
double Q_eval(double a, const PlanePoint& p);

/// Eigenvalue argument of L_a, arccos(a / 2). Throws std::domain_error
/// unless |a| < 2.
double rotation_angle(double a);

/// Average angular advance of L_a iterates measured in coordinates where the
/// form Q is Euclidean. Throws std::domain_error unless |a| < 2.
double estimate_rotation_number(double a, int iterations = 4096);

/// The field A: (a0/2 x - b, x - a0/2 b, a0/2 c - z, c - a0/2 z).
FiberPoint4 field_A(double a0, const FiberPoint4& p);

/// exp(t M) applied blockwise to (x, b) and (c, z), M = [[a0/2, -1], [1, -a0/2]].
Mat2 flow_matrix(double a0, double t);
FiberPoint4 flow(double a0, double t, const FiberPoint4& p);

/// sqrt(1 - a0^2 / 4); the angular frequency of the flow for |a0| < 2.
double flow_frequency(double a0);

bool is_equilibrium(double a0, const FiberPoint4& p);

/// Time t in [0, 2 pi / omega) with (b, c) of flow(a0, t, start) equal to
/// `target` within `tol`, if the trajectory passes through it.
std::optional<double> flow_time_to(double a0, const FiberPoint4& start,
                                   const std::array<double, 2>& target, double tol = 1e-9);

/// (b, c) lies in V_3(a0, d0): Y(b, c) meets Y(a0, d0).
bool in_fiber(double a0, double d0, double b, double c);

/// Point over (b, c) with tr BC = y; phi selects the point on the circle of
/// such lifts.
FiberPoint4 lift(double a0, double d0, double b, double c, double y, double phi);

struct FlowSegment {
  double y = 0;    ///< tr BC along the segment
  double phi = 0;  ///< lift angle at the start
  double t = 0;    ///< flow time
  std::array<double, 2> from{};
  std::array<double, 2> to{};
};

struct ProbeParams {
  double epsilon = 1e-3;
  int max_segments = 4;
  int intermediate_tries = 24;
  int grid_y = 12;
  int grid_phi = 24;
  std::uint64_t seed = 0;
};

struct ProbeResult {
  bool connected = false;
  std::vector<FlowSegment> chain;
  double final_distance = 0;
  std::string diagnostics;
};

/// Searches for a chain of flow segments, each starting from some lift of the
/// current point, that carries p to within epsilon of q inside V_3(a0, d0).
/// A failed search is reported through `connected == false`. Throws
/// std::domain_error unless |a0|, |d0| < 2 and p, q lie in the fiber.
ProbeResult fiber_connectivity_probe(double a0, double d0, const std::array<double, 2>& p,
                                     const std::array<double, 2>& q, const ProbeParams& params = {});

}  // namespace charvar

#endif  // CHARVAR_INDUCED_MAPS_HPP
