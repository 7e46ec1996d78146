#include "charvar/induced_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace charvar {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_open_range(double a, const char* what) {
  if (!(std::abs(a) < 2.0)) {
    throw std::domain_error(std::string(what) + ": requires |a| < 2");
  }
}

}  // namespace

TraceCoords3 alpha_star(const TraceCoords3& t) {
  return {t.a, t.x, t.a * t.c - t.z, t.d, t.a * t.x - t.b, t.y, t.c};
}

TraceCoords3 induced_trace_coords(const Automorphism& phi, const Representation& rho) {
  if (rho.rank() != 3 || phi.rank() != 3) {
    throw std::invalid_argument("induced_trace_coords: rank must be 3");
  }
  auto tr = [&](std::initializer_list<int> letters) {
    return trace(evaluate(phi.backward().apply(Word::reduce(3, letters)), rho));
  };
  return {tr({1}), tr({2}), tr({3}), tr({-3, -2, -1}), tr({1, 2}), tr({2, 3}), tr({3, 1})};
}

FiberPoint4 fiber_point(const TraceCoords3& t) { return {t.x, t.b, t.c, t.z}; }

Mat4 alpha_star_block_matrix(double a0) {
  return {{{a0, -1.0, 0.0, 0.0}, {1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, a0, -1.0}, {0.0, 0.0, 1.0, 0.0}}};
}

FiberPoint4 apply(const Mat4& m, const FiberPoint4& p) {
  const auto v = p.as_array();
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) r[i] += m[i][j] * v[j];
  }
  return {r[0], r[1], r[2], r[3]};
}

Mat2 La_matrix(double a) { return {{{a, -1.0}, {1.0, 0.0}}}; }

PlanePoint La_apply(double a, const PlanePoint& p) { return {a * p.x - p.y, p.x}; }

double Q_eval(double a, const PlanePoint& p) { return p.x * p.x - a * p.x * p.y + p.y * p.y; }

double rotation_angle(double a) {
  require_open_range(a, "rotation_angle");
  return std::acos(a / 2.0);
}

double estimate_rotation_number(double a, int iterations) {
  require_open_range(a, "estimate_rotation_number");
  if (iterations < 1) throw std::invalid_argument("estimate_rotation_number: iterations < 1");
  const double omega = std::sqrt(1.0 - a * a / 4.0);
  // Q(x, y) = u^2 + v^2 with u = x - a y / 2, v = omega y.
  auto to_euclid = [&](const PlanePoint& p) { return PlanePoint{p.x - a * p.y / 2.0, omega * p.y}; };
  PlanePoint p{1.0, 0.0};
  PlanePoint e = to_euclid(p);
  double winding = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const PlanePoint next = La_apply(a, p);
    const PlanePoint en = to_euclid(next);
    winding += std::atan2(e.x * en.y - e.y * en.x, e.x * en.x + e.y * en.y);
    p = next;
    e = en;
    // Renormalize onto the unit Q-level set; L_a is linear so angles are unchanged.
    const double r = std::sqrt(e.x * e.x + e.y * e.y);
    p = {p.x / r, p.y / r};
    e = {e.x / r, e.y / r};
  }
  return winding / iterations;
}

FiberPoint4 field_A(double a0, const FiberPoint4& p) {
  const double h = a0 / 2.0;
  return {h * p.x - p.b, p.x - h * p.b, h * p.c - p.z, p.c - h * p.z};
}

double flow_frequency(double a0) {
  require_open_range(a0, "flow_frequency");
  return std::sqrt(1.0 - a0 * a0 / 4.0);
}

Mat2 flow_matrix(double a0, double t) {
  // M^2 = (a0^2/4 - 1) I, so exp(tM) = C(t) I + S(t) M.
  const double h = a0 / 2.0;
  const double w2 = 1.0 - h * h;
  double C, S;
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    C = std::cos(w * t);
    S = std::sin(w * t) / w;
  } else if (w2 == 0.0) {
    C = 1.0;
    S = t;
  } else {
    const double mu = std::sqrt(-w2);
    C = std::cosh(mu * t);
    S = std::sinh(mu * t) / mu;
  }
  return {{{C + S * h, -S}, {S, C - S * h}}};
}

FiberPoint4 flow(double a0, double t, const FiberPoint4& p) {
  const Mat2 E = flow_matrix(a0, t);
  return {E[0][0] * p.x + E[0][1] * p.b, E[1][0] * p.x + E[1][1] * p.b,
          E[0][0] * p.c + E[0][1] * p.z, E[1][0] * p.c + E[1][1] * p.z};
}

bool is_equilibrium(double a0, const FiberPoint4& p) {
  const auto v = field_A(a0, p).as_array();
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s) < 1e-12;
}

std::optional<double> flow_time_to(double a0, const FiberPoint4& start,
                                   const std::array<double, 2>& target, double tol) {
  const double omega = flow_frequency(a0);
  const double h = a0 / 2.0;
  // (b, c)(s) = cos(s) p + sin(s) w with s = omega t.
  const double p0 = start.b, p1 = start.c;
  const double w0 = (start.x - h * start.b) / omega;
  const double w1 = (h * start.c - start.z) / omega;
  const double det = p0 * w1 - p1 * w0;
  std::vector<double> candidates;
  if (std::abs(det) > 1e-12) {
    const double cs = (target[0] * w1 - target[1] * w0) / det;
    const double sn = (p0 * target[1] - p1 * target[0]) / det;
    candidates.push_back(std::atan2(sn, cs));
  } else {
    constexpr int kScan = 4096;
    for (int k = 0; k < kScan; ++k) candidates.push_back(kTwoPi * k / kScan);
  }
  std::optional<double> best;
  double best_err = tol;
  for (double s : candidates) {
    s = std::fmod(s, kTwoPi);
    if (s < 0.0) s += kTwoPi;
    const double t = s / omega;
    const auto q = flow(a0, t, start);
    const double err = std::max(std::abs(q.b - target[0]), std::abs(q.c - target[1]));
    if (err <= best_err) {
      best_err = err;
      best = t;
    }
  }
  return best;
}

bool in_fiber(double a0, double d0, double b, double c) {
  if (std::abs(b) > 2.0 || std::abs(c) > 2.0) return false;
  return boundary_realizable(a0, b, c, d0, RealizabilityMethod::interval);
}

FiberPoint4 lift(double a0, double d0, double b, double c, double y, double phi) {
  return fiber_point(trace_coords3(realize_coords(a0, b, c, d0, y, phi)));
}

namespace {

using Point2 = std::array<double, 2>;

double dist(const Point2& p, const Point2& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); }

struct SegmentSearch {
  double a0;
  double d0;
  double omega;

  TraceInterval y_range(const Point2& p) const {
    auto r = fiber_y_range(a0, p[0], p[1], d0);
    if (r.lo > r.hi) r.lo = r.hi = (r.lo + r.hi) / 2.0;
    return r;
  }

  Point2 endpoint(const Point2& p, double y, double phi, double s) const {
    const auto l = lift(a0, d0, p[0], p[1], y, phi);
    const auto e = flow(a0, s / omega, l);
    return {e.b, e.c};
  }

  // One flow segment from some lift of p towards q; returns the best found.
  FlowSegment solve(const Point2& p, const Point2& q, int grid_y, int grid_phi) const {
    const auto range = y_range(p);
    struct Candidate {
      double y, phi, s, err;
    };
    std::vector<Candidate> cands;
    const int ny = range.hi > range.lo ? grid_y : 1;
    constexpr int kScan = 96;
    for (int iy = 0; iy < ny; ++iy) {
      const double y = ny == 1 ? range.lo : range.lo + (range.hi - range.lo) * (iy + 0.5) / ny;
      for (int ip = 0; ip < grid_phi; ++ip) {
        const double phi = kTwoPi * ip / grid_phi;
        const auto l = lift(a0, d0, p[0], p[1], y, phi);
        const double w0 = (l.x - a0 / 2.0 * l.b) / omega;
        const double w1 = (a0 / 2.0 * l.c - l.z) / omega;
        Candidate best{y, phi, 0.0, 1e300};
        for (int k = 0; k < kScan; ++k) {
          const double s = kTwoPi * k / kScan;
          const double e0 = std::cos(s) * l.b + std::sin(s) * w0 - q[0];
          const double e1 = std::cos(s) * l.c + std::sin(s) * w1 - q[1];
          const double err = std::hypot(e0, e1);
          if (err < best.err) best = {y, phi, s, err};
        }
        cands.push_back(best);
      }
    }
    std::sort(cands.begin(), cands.end(),
              [](const Candidate& u, const Candidate& v) { return u.err < v.err; });
    cands.resize(std::min<std::size_t>(cands.size(), 8));

    FlowSegment best_seg;
    double best_err = 1e300;
    for (const auto& c : cands) {
      double v[3] = {c.y, c.phi, c.s};
      auto residual = [&](const double* u) {
        const auto e = endpoint(p, u[0], u[1], u[2]);
        return Point2{e[0] - q[0], e[1] - q[1]};
      };
      Point2 r = residual(v);
      double err = std::hypot(r[0], r[1]);
      for (int it = 0; it < 40 && err > 1e-13; ++it) {
        // Minimum-norm Gauss-Newton step for the 2x3 system.
        double J[2][3];
        for (int j = 0; j < 3; ++j) {
          const double step = 1e-7;
          double up[3] = {v[0], v[1], v[2]};
          double dn[3] = {v[0], v[1], v[2]};
          up[j] += step;
          dn[j] -= step;
          if (j == 0) {
            up[0] = std::min(up[0], range.hi);
            dn[0] = std::max(dn[0], range.lo);
          }
          const double span = up[j] - dn[j];
          if (span <= 0.0) {
            J[0][j] = J[1][j] = 0.0;
            continue;
          }
          const auto ru = residual(up);
          const auto rd = residual(dn);
          J[0][j] = (ru[0] - rd[0]) / span;
          J[1][j] = (ru[1] - rd[1]) / span;
        }
        double G[2][2] = {};
        for (int i = 0; i < 2; ++i) {
          for (int k = 0; k < 2; ++k) {
            for (int j = 0; j < 3; ++j) G[i][k] += J[i][j] * J[k][j];
          }
        }
        const double lambda = 1e-12 * (G[0][0] + G[1][1]) + 1e-300;
        G[0][0] += lambda;
        G[1][1] += lambda;
        const double det = G[0][0] * G[1][1] - G[0][1] * G[1][0];
        if (!(std::abs(det) > 0.0)) break;
        const double m0 = (G[1][1] * r[0] - G[0][1] * r[1]) / det;
        const double m1 = (G[0][0] * r[1] - G[1][0] * r[0]) / det;
        double delta[3];
        for (int j = 0; j < 3; ++j) delta[j] = -(J[0][j] * m0 + J[1][j] * m1);
        double scale = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 30; ++ls, scale /= 2.0) {
          double trial[3] = {std::clamp(v[0] + scale * delta[0], range.lo, range.hi),
                             v[1] + scale * delta[1], v[2] + scale * delta[2]};
          const auto rt = residual(trial);
          const double et = std::hypot(rt[0], rt[1]);
          if (et < err) {
            std::copy(trial, trial + 3, v);
            r = rt;
            err = et;
            improved = true;
            break;
          }
        }
        if (!improved) break;
      }
      if (err < best_err) {
        best_err = err;
        double s = std::fmod(v[2], kTwoPi);
        if (s < 0.0) s += kTwoPi;
        best_seg.y = v[0];
        best_seg.phi = std::fmod(v[1], kTwoPi);
        best_seg.t = s / omega;
        best_seg.from = p;
        best_seg.to = endpoint(p, v[0], v[1], s);
      }
      if (best_err < 1e-12) break;
    }
    return best_seg;
  }
};

}  // namespace

ProbeResult fiber_connectivity_probe(double a0, double d0, const std::array<double, 2>& p,
                                     const std::array<double, 2>& q, const ProbeParams& params) {
  require_open_range(a0, "fiber_connectivity_probe");
  require_open_range(d0, "fiber_connectivity_probe");
  if (!in_fiber(a0, d0, p[0], p[1]) || !in_fiber(a0, d0, q[0], q[1])) {
    throw std::domain_error("fiber_connectivity_probe: endpoints must lie in V_3(a0, d0)");
  }
  ProbeResult result;
  result.final_distance = dist(p, q);
  if (result.final_distance <= params.epsilon) {
    result.connected = true;
    return result;
  }
  const SegmentSearch search{a0, d0, flow_frequency(a0)};
  RngStream rng(params.seed, 0);
  int solves = 0;
  double best_distance = result.final_distance;

  auto single = [&](const Point2& from, const Point2& to) {
    ++solves;
    return search.solve(from, to, params.grid_y, params.grid_phi);
  };

  // Depth-first: direct segment, otherwise route through intermediate points.
  auto connect = [&](auto&& self, const Point2& from, int budget) -> std::optional<std::vector<FlowSegment>> {
    const auto direct = single(from, q);
    const double miss = dist(direct.to, q);
    best_distance = std::min(best_distance, miss);
    if (miss <= params.epsilon) return std::vector<FlowSegment>{direct};
    if (budget <= 1) return std::nullopt;
    const int tries = budget == params.max_segments ? params.intermediate_tries
                                                    : std::max(2, params.intermediate_tries / 4);
    for (int k = 0; k < tries; ++k) {
      Point2 mid;
      if (k == 0) {
        mid = {(from[0] + q[0]) / 2.0, (from[1] + q[1]) / 2.0};
      } else {
        do {
          mid = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        } while (!in_fiber(a0, d0, mid[0], mid[1]));
      }
      if (!in_fiber(a0, d0, mid[0], mid[1])) continue;
      const auto first = single(from, mid);
      if (dist(first.to, mid) > params.epsilon * 1e-3) continue;
      if (!in_fiber(a0, d0, first.to[0], first.to[1])) continue;
      if (auto rest = self(self, first.to, budget - 1)) {
        rest->insert(rest->begin(), first);
        return rest;
      }
    }
    return std::nullopt;
  };

  if (auto chain = connect(connect, p, params.max_segments)) {
    result.connected = true;
    result.chain = std::move(*chain);
    result.final_distance = dist(result.chain.back().to, q);
  } else {
    result.final_distance = best_distance;
  }
  std::ostringstream diag;
  diag << "segment solves: " << solves << ", closest approach: " << best_distance;
  if (!result.connected) diag << ", no chain within epsilon " << params.epsilon;
  result.diagnostics = diag.str();
  return result;
}

}  // namespace charvar
