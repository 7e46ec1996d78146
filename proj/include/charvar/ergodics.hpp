// Random-walk orbit experiments for Aut(F_n) acting on Hom(F_n, SU(2)), the
// statistics used to compare time averages with Haar space averages, and the
// abelianized action on the torus R^n / Z^n.

#ifndef CHARVAR_ERGODICS_HPP
#define CHARVAR_ERGODICS_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "charvar/free_group.hpp"
#include "charvar/trace_geometry.hpp"

namespace charvar {

struct WalkSpec {
  int rank = 3;
  std::vector<std::string> generators;  ///< catalog or group names
  std::int64_t steps = 0;               ///< total moves, burn-in included
  std::int64_t burn_in = 1000;
  std::uint64_t seed = 0;
  int walkers = 1;
  std::vector<std::string> columns;  ///< recorded statistics; empty = defaults
  int threads = 0;                   ///< 0 = hardware concurrency
};

/// Throws std::invalid_argument on violated WalkSpec invariants.
void validate(const WalkSpec& spec);

/// Statistic names recorded by a walk of this rank:
///   t0 ... tn   boundary traces (t0 = tr X_0)
///   tr12        tr X_1 X_2
///   kappa       tr [X_1, X_2]                    (rank 2)
///   a b c d x y z residual                       (rank 3)
std::vector<std::string> available_columns(int rank);
std::vector<std::string> default_columns(int rank);

/// Values of the named statistics at rho.
std::vector<double> column_values(const Representation& rho, std::span<const std::string> columns);

/// Recorded rows, walker-major: row r belongs to walker r / rows_per_walker.
class OrbitLog {
public:
  OrbitLog(std::vector<std::string> columns, int walkers, std::int64_t burn_in,
           std::int64_t rows_per_walker);

  const std::vector<std::string>& columns() const { return columns_; }
  int walkers() const { return walkers_; }
  std::int64_t burn_in() const { return burn_in_; }
  std::int64_t rows_per_walker() const { return rows_per_walker_; }
  std::int64_t rows() const { return rows_per_walker_ * walkers_; }

  int walker(std::int64_t row) const { return static_cast<int>(row / rows_per_walker_); }
  /// Number of moves applied when the row was recorded.
  std::int64_t step(std::int64_t row) const { return burn_in_ + row % rows_per_walker_ + 1; }

  /// Throws std::invalid_argument for a column that was not recorded.
  int column_index(std::string_view name) const;
  bool has_column(std::string_view name) const;

  double value(std::int64_t row, int col) const { return values_[row * columns_.size() + col]; }
  double& value(std::int64_t row, int col) { return values_[row * columns_.size() + col]; }
  std::vector<double> column(std::string_view name) const;
  /// Values from one walker only.
  std::vector<double> column(std::string_view name, int walker) const;

  /// Statistics at the starting point of each walker.
  double initial(int walker, int col) const { return initial_[walker * columns_.size() + col]; }
  double& initial(int walker, int col) { return initial_[walker * columns_.size() + col]; }

  friend bool operator==(const OrbitLog&, const OrbitLog&) = default;

private:
  std::vector<std::string> columns_;
  int walkers_;
  std::int64_t burn_in_;
  std::int64_t rows_per_walker_;
  std::vector<double> values_;
  std::vector<double> initial_;
};

/// Header "walker,step,<columns...>", then one line per row, 17 significant digits.
void write_csv(const OrbitLog& log, std::ostream& out);

/// Each step applies a generator or its inverse, chosen uniformly, through
/// act_on_rep. Walker w draws its moves from RngStream(seed, 2 w).
OrbitLog random_walk(const Representation& start, const WalkSpec& spec);
/// One start per walker.
OrbitLog random_walk(std::span<const Representation> starts, const WalkSpec& spec);

struct Conservation {
  double max_drift = 0;
  std::vector<double> per_walker;
};

/// Largest deviation of a statistic from its starting value. The statistic
/// "t_boundary_multiset" compares sorted boundary traces. Throws
/// std::invalid_argument when the statistic was not recorded.
Conservation conservation_check(const OrbitLog& log, std::string_view statistic);

/// Fixed-bin histogram, 64 uniform bins on [-2, 2] unless stated otherwise.
class Histogram {
public:
  explicit Histogram(double lo = -2.0, double hi = 2.0, int bins = 64);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  int bins() const { return static_cast<int>(counts_.size()); }
  double edge(int k) const { return lo_ + (hi_ - lo_) * k / bins(); }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t total() const { return total_; }

  /// Throws std::domain_error outside [lo, hi] (beyond 1e-9 slack).
  void add(double v);
  /// Fraction of samples below edge k.
  double cdf_at_edge(int k) const;

private:
  double lo_;
  double hi_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Throws std::invalid_argument on an empty sample set.
Histogram histogram(std::span<const double> samples, double lo = -2.0, double hi = 2.0,
                    int bins = 64);

/// max |ECDF_1 - ECDF_2| over the shared bin edges.
double ks_distance(const Histogram& h1, const Histogram& h2);
/// max |ECDF - F| over the bin edges.
double ks_distance(const Histogram& h, const std::function<double(double)>& cdf);
/// Exact one-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// CDF of the Haar trace law (1 / 2 pi) sqrt(4 - t^2) on [-2, 2]. Throws
/// std::domain_error outside that interval.
double semicircle_cdf(double tau);

/// Rank-2 representation with kappa(rho) = t. Throws ExhaustedTries when
/// the rejection loop fails.
Representation sample_kappa_level(double t, RngStream& rng, int max_tries = 10000);

/// Walk started on kappa^-1(t). Walker w starts from a sample drawn with
/// RngStream(seed, 2 w + 1). spec.rank must be 2.
OrbitLog level_set_walk(double t, const WalkSpec& spec);

struct TorusPoint {
  std::vector<double> coords;
};

/// M p mod 1. Throws std::invalid_argument unless det M = +-1.
TorusPoint torus_step(const IntMatrix& m, const TorusPoint& p);
/// `steps` successive iterates, the start excluded.
std::vector<TorusPoint> torus_orbit(const IntMatrix& m, const TorusPoint& start, std::int64_t steps);
IntMatrix cat_map();

struct PatchingReport {
  int rank = 0;
  int pairs = 0;
  int successes = 0;
  double max_error_first = 0;
  double max_error_last = 0;
  int grid_points = 0;
  int grid_successes = 0;
};

/// rho'' with tr rho''(X_1) = tr rho(X_1) and tr rho''(X_n) = tr rho'(X_n);
/// the remaining generators are Haar. Returns rho when rho == rho'.
Representation patch_pair(const Representation& rho, const Representation& rho_prime,
                          RngStream& rng);

/// Runs patch_pair on random pairs and on a grid of (t_1, t_n) targets.
PatchingReport patching_experiment(int n, std::uint64_t seed, int pairs = 1000, int grid = 21);

}  // namespace charvar

#endif  // CHARVAR_ERGODICS_HPP
