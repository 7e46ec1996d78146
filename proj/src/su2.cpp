#include "charvar/su2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace charvar {

GroupElement::GroupElement(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    throw std::invalid_argument("GroupElement: quaternion norm " + std::to_string(n) +
                                " is not 1");
  }
  w_ = w / n;
  x_ = x / n;
  y_ = y / n;
  z_ = z / n;
}

GroupElement GroupElement::normalized(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("GroupElement::normalized: zero or non-finite quaternion");
  }
  return GroupElement(Unchecked{}, w / n, x / n, y / n, z / n);
}

double GroupElement::norm() const { return std::sqrt(w_ * w_ + x_ * x_ + y_ * y_ + z_ * z_); }

GroupElement mul(const GroupElement& g, const GroupElement& h) {
  const double w = g.w() * h.w() - g.x() * h.x() - g.y() * h.y() - g.z() * h.z();
  const double x = g.w() * h.x() + g.x() * h.w() + g.y() * h.z() - g.z() * h.y();
  const double y = g.w() * h.y() - g.x() * h.z() + g.y() * h.w() + g.z() * h.x();
  const double z = g.w() * h.z() + g.x() * h.y() - g.y() * h.x() + g.z() * h.w();
  return GroupElement::normalized(w, x, y, z);
}

GroupElement inverse(const GroupElement& g) {
  return GroupElement(GroupElement::Unchecked{}, g.w(), -g.x(), -g.y(), -g.z());
}

double trace(const GroupElement& g) { return std::clamp(2.0 * g.w(), -2.0, 2.0); }

GroupElement commutator(const GroupElement& g, const GroupElement& h) {
  return g * h * inverse(g) * inverse(h);
}

double distance(const GroupElement& g, const GroupElement& h) {
  const double dw = g.w() - h.w();
  const double dx = g.x() - h.x();
  const double dy = g.y() - h.y();
  const double dz = g.z() - h.z();
  return std::sqrt(dw * dw + dx * dx + dy * dy + dz * dz);
}

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream),
                       static_cast<std::uint32_t>(stream >> 32)};
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  auto seq = make_seed_seq(seed, stream);
  engine_.seed(seq);
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::below: empty range");
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * f;
  has_spare_ = true;
  return u * f;
}

GroupElement haar_sample(RngStream& rng) {
  for (;;) {
    const double w = rng.normal();
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    if (w * w + x * x + y * y + z * z > 1e-300) return GroupElement::normalized(w, x, y, z);
  }
}

std::array<double, 3> random_unit_vector(RngStream& rng) {
  for (;;) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    const double n = std::sqrt(x * x + y * y + z * z);
    if (n > 1e-150) return {x / n, y / n, z / n};
  }
}

GroupElement sample_with_trace(double tau, RngStream& rng) {
  if (!(tau >= -2.0 && tau <= 2.0)) {
    throw std::domain_error("sample_with_trace: trace " + std::to_string(tau) +
                            " outside [-2, 2]");
  }
  const double w = tau / 2.0;
  const double r = std::sqrt(std::max(0.0, 1.0 - w * w));
  const auto u = random_unit_vector(rng);
  return GroupElement(GroupElement::Unchecked{}, w, r * u[0], r * u[1], r * u[2]);
}

}  // namespace charvar
