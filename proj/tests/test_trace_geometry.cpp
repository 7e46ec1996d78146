#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "charvar/trace_geometry.hpp"
#include "oracles.hpp"

using namespace charvar;

namespace {

const GroupElement I{0, 1, 0, 0};
const GroupElement J{0, 0, 1, 0};
const GroupElement K{0, 0, 0, 1};

// Seven trace coordinates through the complex-matrix oracle.
oracle::Coords oracle_coords(const Representation& rho) {
  auto m = [&](int i) {
    const auto& g = rho.image(i);
    return oracle::to_matrix(g.w(), g.x(), g.y(), g.z());
  };
  const auto A = m(1), B = m(2), C = m(3);
  const auto D = oracle::inv(oracle::mul(oracle::mul(A, B), C));
  return {oracle::tr(A), oracle::tr(B), oracle::tr(C), oracle::tr(D),
          oracle::tr(oracle::mul(A, B)), oracle::tr(oracle::mul(B, C)), oracle::tr(oracle::mul(C, A))};
}

}  // namespace

TEST_CASE("trace coordinates of the quaternion examples") {
  CHECK(trace_coords3(Representation::identity(3)) == TraceCoords3{});
  const auto t = trace_coords3(Representation({I, J, K}));
  CHECK(t == TraceCoords3{0, 0, 0, -2, 0, 0, 0});
  const auto u = trace_coords3(Representation({I, J, GroupElement::normalized(1, 1, 0, 0)}));
  const double r2 = std::sqrt(2.0);
  const std::array<double, 7> want{0, 0, r2, 0, 0, 0, -r2};
  for (int i = 0; i < 7; ++i) CHECK(u.as_array()[i] == doctest::Approx(want[i]).epsilon(1e-14));
  CHECK_THROWS_AS(trace_coords3(Representation::identity(2)), std::invalid_argument);
}

TEST_CASE("trace coordinates match the matrix oracle") {
  RngStream rng(31);
  double gap = 0;
  for (int k = 0; k < 2000; ++k) {
    const auto rho = Representation::haar(3, rng);
    const auto t = trace_coords3(rho);
    const auto o = oracle_coords(rho);
    const std::array<double, 7> ov{o.a, o.b, o.c, o.d, o.x, o.y, o.z};
    for (int i = 0; i < 7; ++i) gap = std::max(gap, std::abs(t.as_array()[i] - ov[i]));
  }
  CHECK(gap < 1e-13);
}

TEST_CASE("relation residual") {
  CHECK(fourholes_residual(TraceCoords3{}) == 0.0);
  CHECK(fourholes_residual(TraceCoords3{0, 0, 0, -2, 0, 0, 0}) == 0.0);
  RngStream rng(32);
  double worst = 0;
  for (int k = 0; k < 100000; ++k) {
    worst = std::max(worst, std::abs(fourholes_residual(trace_coords3(Representation::haar(3, rng)))));
  }
  CHECK(worst <= 1e-9);
  // A generic off-variety point.
  CHECK(std::abs(fourholes_residual(TraceCoords3{0, 0, 0, 0, 1, 1, 0.5})) > 0.1);
}

TEST_CASE("V_3 membership") {
  CHECK(v3_contains(2, 2, 2));
  CHECK(v3_contains(0, 0, 0));
  CHECK_FALSE(v3_contains(2, 2, -2));
  CHECK_FALSE(v3_contains(2.1, 0, 0));
  RngStream rng(33);
  for (int k = 0; k < 100000; ++k) {
    const auto g = haar_sample(rng), h = haar_sample(rng);
    REQUIRE(v3_contains(trace(g), trace(h), trace(g * h)));
  }
}

TEST_CASE("triples outside V_3 are not realized by pair sampling") {
  RngStream rng(34);
  int checked = 0;
  while (checked < 200) {
    const double x1 = rng.uniform(-2, 2), x2 = rng.uniform(-2, 2), x3 = rng.uniform(-2, 2);
    if (v3_contains(x1, x2, x3)) continue;
    ++checked;
    // Conditioned on tr g = x1 and tr h = x2, tr gh sweeps Y(x1, x2); x3 is outside it.
    double closest = 1e9;
    for (int t = 0; t < 1000; ++t) {
      const auto g = sample_with_trace(x1, rng), h = sample_with_trace(x2, rng);
      closest = std::min(closest, std::abs(trace(g * h) - x3));
    }
    REQUIRE(closest > 1e-9);
  }
}

TEST_CASE("y_interval endpoints") {
  auto near = [](TraceInterval r, double lo, double hi) {
    return std::abs(r.lo - lo) < 1e-15 && std::abs(r.hi - hi) < 1e-15;
  };
  CHECK(near(y_interval(0, 0), -2, 2));
  CHECK(near(y_interval(2, 2), 2, 2));
  CHECK(near(y_interval(2, -2), -2, -2));
  CHECK_THROWS_AS(y_interval(2.5, 0), std::domain_error);
  CHECK_THROWS_AS(y_interval(0, -2.01), std::domain_error);
}

TEST_CASE("y in Y(a,d) iff (a,d,y) in V_3 on a grid") {
  int mismatches = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = -2.0 + 0.04 * i, d = -2.0 + 0.04 * j;
      const auto r = y_interval(a, d);
      for (int k = 0; k <= 100; ++k) {
        const double y = -2.0 + 0.04 * k;
        mismatches += r.contains(y) != v3_contains(a, d, y);
      }
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("delta examples") {
  CHECK(delta(2, 2, 2, 2) == 0.0);
  CHECK(delta(2, 2, 2, -2) == 1024.0);
  CHECK(delta(0, 0, 0, 0) == 0.0);
}

TEST_CASE("delta factors through the interval endpoints") {
  // 4 * prod over (s, t) of (y_s(a,d) - y_t(b,c)); this is why delta changes
  // sign between overlapping and nested intervals.
  RngStream rng(35);
  for (int k = 0; k < 10000; ++k) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
    const auto p = y_interval(a, d), q = y_interval(b, c);
    const double f = 4 * (p.lo - q.lo) * (p.lo - q.hi) * (p.hi - q.lo) * (p.hi - q.hi);
    REQUIRE(delta(a, b, c, d) == doctest::Approx(f).epsilon(1e-9).scale(1));
  }
}

TEST_CASE("realizability by both methods") {
  using M = RealizabilityMethod;
  CHECK(boundary_realizable(2, 2, 2, 2, M::interval));
  CHECK(boundary_realizable(2, 2, 2, 2, M::discriminant));
  CHECK_FALSE(boundary_realizable(2, 2, 2, -2, M::interval));
  CHECK_FALSE(boundary_realizable(2, 2, 2, -2, M::discriminant));
  CHECK(boundary_realizable(0, 0, 0, 0, M::interval));
  CHECK(boundary_realizable(0, 0, 0, 0, M::discriminant));
  // Witness (i, i, j) for the all-zero quadruple.
  const auto t = t_boundary(Representation({I, I, J}));
  for (double v : t.values) CHECK(std::abs(v) < 1e-15);
  CHECK(parse_realizability_method("interval") == M::interval);
  CHECK(parse_realizability_method("discriminant") == M::discriminant);
  CHECK_THROWS_AS(parse_realizability_method("resultant"), std::invalid_argument);
}

TEST_CASE("nested intervals: interval test and witness agree, discriminant does not") {
  // (0, 1, 0, 0): Y(0,0) = [-2, 2] contains Y(1, 0) = [-sqrt3, sqrt3].
  CHECK(boundary_realizable(0, 1, 0, 0, RealizabilityMethod::interval));
  CHECK(delta(0, 1, 0, 0) == doctest::Approx(4.0));
  CHECK_FALSE(boundary_realizable(0, 1, 0, 0, RealizabilityMethod::discriminant));
  const auto rho = realize_coords(0, 1, 0, 0, 0.5, 0.3);
  const auto t = t_boundary(rho).values;
  CHECK(t[1] == doctest::Approx(0).scale(1));
  CHECK(t[2] == doctest::Approx(1));
  CHECK(t[3] == doctest::Approx(0).scale(1));
  CHECK(t[0] == doctest::Approx(0).scale(1));
}

TEST_CASE("realized boundary traces always pass the interval test") {
  RngStream rng(36);
  for (int k = 0; k < 100000; ++k) {
    const auto t = t_boundary(Representation::haar(3, rng)).values;
    REQUIRE(boundary_realizable(t[1], t[2], t[3], t[0], RealizabilityMethod::interval));
  }
}

TEST_CASE("ellipse regions") {
  CHECK(ellipse_contains(-1.2, 2, -1.2));
  CHECK(ellipse_contains(-1.2, 0, 0));
  CHECK_FALSE(ellipse_contains(2, 1, -1));
  CHECK(ellipse_contains(2, 1, 1));
  CHECK(ellipse_contains(-2, 1, -1));
  CHECK_FALSE(ellipse_contains(-2, 1, 1));
  CHECK_THROWS_AS(ellipse_contains(2.2, 0, 0), std::domain_error);
  CHECK_THROWS_AS(EllipseRegion(-3), std::domain_error);
  // Forced by SU(2): tr BC = 2 makes C = B^-1.
  RngStream rng(37);
  const auto b = haar_sample(rng);
  CHECK(ellipse_contains(2, trace(b), trace(inverse(b))));
  const EllipseRegion e(0.7);
  for (int k = 0; k < 64; ++k) {
    const auto [p, q] = e.boundary_point(2 * std::numbers::pi * k / 64);
    REQUIRE(std::abs(e.boundary_value(p, q)) < 1e-12);
  }
}

TEST_CASE("tangency points") {
  const auto pts = ellipse_tangency_points(-1.2);
  const std::array<std::array<double, 2>, 4> want{{{2, -1.2}, {-1.2, 2}, {-2, 1.2}, {1.2, -2}}};
  for (int i = 0; i < 4; ++i) {
    CHECK(pts[i][0] == doctest::Approx(want[i][0]));
    CHECK(pts[i][1] == doctest::Approx(want[i][1]));
  }
  const auto circle = ellipse_tangency_points(0);
  CHECK(circle[3][0] == 0.0);
  CHECK(circle[3][1] == -2.0);
  for (int k = 0; k < 100; ++k) {
    const double y = -1.98 + 3.96 * k / 99;
    for (const auto& [b, c] : ellipse_tangency_points(y)) {
      REQUIRE(std::abs(b * b + c * c + y * y - b * c * y - 4) < 1e-12);
      REQUIRE((std::abs(b) == 2.0 || std::abs(c) == 2.0));
    }
  }
  CHECK_THROWS_AS(ellipse_tangency_points(2.0), std::domain_error);
}

TEST_CASE("boundary traces and kappa") {
  CHECK(t_boundary(Representation::identity(3)).values == std::vector<double>{2, 2, 2, 2});
  const auto t = t_boundary(Representation({I, J, K}));
  CHECK(t.values == std::vector<double>{-2, 0, 0, 0});
  CHECK(kappa(Representation::identity(2)) == 2.0);
  CHECK(kappa(Representation({I, J})) == -2.0);
  const GroupElement g = GroupElement::normalized(0.2, 0.5, 0, 0), h = GroupElement::normalized(-0.7, 0.1, 0, 0);
  CHECK(kappa(Representation({g, h})) == doctest::Approx(2.0));
  CHECK_THROWS_AS(kappa(Representation::identity(3)), std::invalid_argument);

  RngStream rng(38);
  const auto twist = find_generator(named_generators(3), "twist(1)");
  for (int k = 0; k < 100; ++k) {
    const auto rho = Representation::haar(3, rng);
    const auto before = t_boundary(rho).values, after = t_boundary(act_on_rep(twist, rho)).values;
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(before[i] - after[i]) < 1e-12);
  }
}

TEST_CASE("kappa matches the commutator-norm identity") {
  RngStream rng(39);
  for (int k = 0; k < 1000; ++k) {
    const auto g = haar_sample(rng), h = haar_sample(rng);
    const auto u = g.imaginary(), v = h.imaginary();
    const std::array<double, 3> cr{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
    const double expect = 2 - 4 * (cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
    REQUIRE(kappa(Representation({g, h})) == doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("realize_coords hits its targets") {
  RngStream rng(40);
  for (int k = 0; k < 2000; ++k) {
    const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2), d = rng.uniform(-2, 2);
    const auto r = fiber_y_range(a, b, c, d);
    if (r.lo > r.hi) continue;
    const double y = rng.uniform(r.lo, r.hi);
    const auto t = trace_coords3(realize_coords(a, b, c, d, y, rng.uniform(0, 6.28)));
    REQUIRE(std::max({std::abs(t.a - a), std::abs(t.b - b), std::abs(t.c - c), std::abs(t.d - d),
                      std::abs(t.y - y)}) < 1e-9);
  }
  CHECK_THROWS_AS(realize_coords(2, 2, 2, -2, 2, 0), std::domain_error);
}

TEST_CASE("sample_fiber") {
  RngStream rng(41);
  const auto id = sample_fiber(BoundaryTraces{{2, 2, 2, 2}}, rng);
  for (const auto& g : id.images()) CHECK(distance(g, GroupElement::identity()) < 1e-9);
  CHECK_THROWS_AS(sample_fiber(BoundaryTraces{{-2, 2, 2, 2}}, rng), Unrealizable);
  const auto z = sample_fiber(BoundaryTraces{{0, 0, 0, 0}}, rng);
  for (double v : t_boundary(z).values) CHECK(std::abs(v) < 1e-9);
  for (int k = 0; k < 500; ++k) {
    const auto target = t_boundary(Representation::haar(3, rng));
    const auto got = t_boundary(sample_fiber(target, rng)).values;
    for (int i = 0; i < 4; ++i) REQUIRE(std::abs(got[i] - target.values[i]) < 1e-9);
  }
  CHECK_THROWS_AS(sample_fiber(BoundaryTraces{{0, 0, 0}}, rng), std::invalid_argument);
}
