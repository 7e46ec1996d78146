// SU(2) as the group of unit quaternions.
//
// An element w + x i + y j + z k with w^2 + x^2 + y^2 + z^2 = 1 corresponds to
// the matrix [[w + i x, y + i z], [-y + i z, w - i x]], so the matrix trace is
// 2w and the inverse is the quaternion conjugate.

#ifndef CHARVAR_SU2_HPP
#define CHARVAR_SU2_HPP

#include <array>
#include <cstdint>
#include <random>

namespace charvar {

/// Tolerance on |norm - 1| accepted when constructing a GroupElement.
inline constexpr double kNormTolerance = 1e-12;

class RngStream;

class GroupElement {
public:
  /// The identity.
  constexpr GroupElement() = default;

  /// Validates |q| = 1 within kNormTolerance, then renormalizes.
  /// Throws std::invalid_argument otherwise.
  GroupElement(double w, double x, double y, double z);

  static constexpr GroupElement identity() { return GroupElement{}; }
  static GroupElement minus_identity() { return {-1.0, 0.0, 0.0, 0.0}; }

  /// Renormalizes an arbitrary nonzero quaternion onto the sphere.
  static GroupElement normalized(double w, double x, double y, double z);

  constexpr double w() const { return w_; }
  constexpr double x() const { return x_; }
  constexpr double y() const { return y_; }
  constexpr double z() const { return z_; }
  constexpr std::array<double, 3> imaginary() const { return {x_, y_, z_}; }

  double norm() const;

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

private:
  friend GroupElement sample_with_trace(double tau, RngStream& rng);
  friend GroupElement inverse(const GroupElement& g);

  struct Unchecked {};
  constexpr GroupElement(Unchecked, double w, double x, double y, double z)
      : w_(w), x_(x), y_(y), z_(z) {}

  double w_ = 1.0;
  double x_ = 0.0;
  double y_ = 0.0;
  double z_ = 0.0;
};

/// Hamilton product, renormalized.
GroupElement mul(const GroupElement& g, const GroupElement& h);
inline GroupElement operator*(const GroupElement& g, const GroupElement& h) { return mul(g, h); }

GroupElement inverse(const GroupElement& g);

/// Matrix trace, 2w, clamped to [-2, 2].
double trace(const GroupElement& g);

/// g h g^-1 h^-1
GroupElement commutator(const GroupElement& g, const GroupElement& h);

/// Euclidean distance in R^4.
double distance(const GroupElement& g, const GroupElement& h);

/// Deterministic random stream identified by (seed, stream id).
///
/// The engine is std::mt19937_64 seeded through std::seed_seq with the four
/// 32-bit halves of (seed, stream). Both are fully specified by the standard,
/// and uniforms and normals are derived from raw engine output here (53-bit
/// mantissa uniforms, Marsaglia polar normals), so sample sequences do not
/// depend on the standard library implementation.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Independent stream with the same seed.
  RngStream split(std::uint64_t stream) const { return RngStream(seed_, stream); }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  double normal();

private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Haar-distributed element: four standard normals projected to S^3.
GroupElement haar_sample(RngStream& rng);

/// Uniform element of the conjugacy class tr^-1(tau). Throws
/// std::domain_error unless tau lies in [-2, 2].
GroupElement sample_with_trace(double tau, RngStream& rng);

/// Uniformly distributed unit vector in R^3.
std::array<double, 3> random_unit_vector(RngStream& rng);

}  // namespace charvar

#endif  // CHARVAR_SU2_HPP
