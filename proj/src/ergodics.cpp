#include "charvar/ergodics.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <exception>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace charvar {

void validate(const WalkSpec& spec) {
  if (spec.rank < 2) throw std::invalid_argument("WalkSpec: rank must be at least 2");
  if (spec.burn_in < 0) throw std::invalid_argument("WalkSpec: burn_in must be nonnegative");
  if (spec.steps <= spec.burn_in) throw std::invalid_argument("WalkSpec: steps must exceed burn_in");
  if (spec.walkers < 1) throw std::invalid_argument("WalkSpec: walkers must be at least 1");
  if (spec.generators.empty()) throw std::invalid_argument("WalkSpec: no generators");
  const auto known = available_columns(spec.rank);
  for (const auto& c : spec.columns) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      throw std::invalid_argument("WalkSpec: unknown column '" + c + "' for rank " +
                                  std::to_string(spec.rank));
    }
  }
}

std::vector<std::string> available_columns(int rank) {
  std::vector<std::string> out;
  for (int i = 0; i <= rank; ++i) out.push_back("t" + std::to_string(i));
  out.push_back("tr12");
  if (rank == 2) out.push_back("kappa");
  if (rank == 3) {
    for (const char* c : {"a", "b", "c", "d", "x", "y", "z", "residual"}) out.emplace_back(c);
  }
  return out;
}

std::vector<std::string> default_columns(int rank) {
  if (rank == 2) return {"t0", "t1", "t2", "tr12", "kappa"};
  if (rank == 3) return {"a", "b", "c", "d", "x", "y", "z", "residual"};
  auto cols = available_columns(rank);
  return cols;
}

std::vector<double> column_values(const Representation& rho, std::span<const std::string> columns) {
  std::vector<double> out;
  out.reserve(columns.size());
  std::optional<TraceCoords3> coords;
  std::optional<BoundaryTraces> boundary;
  for (const auto& name : columns) {
    if (name.size() >= 2 && name[0] == 't' && std::isdigit(static_cast<unsigned char>(name[1]))) {
      if (!boundary) boundary = t_boundary(rho);
      out.push_back(boundary->values.at(std::stoul(name.substr(1))));
    } else if (name == "tr12") {
      out.push_back(trace(rho.image(1) * rho.image(2)));
    } else if (name == "kappa") {
      out.push_back(kappa(rho));
    } else {
      if (!coords) coords = trace_coords3(rho);
      const auto& t = *coords;
      if (name == "a") out.push_back(t.a);
      else if (name == "b") out.push_back(t.b);
      else if (name == "c") out.push_back(t.c);
      else if (name == "d") out.push_back(t.d);
      else if (name == "x") out.push_back(t.x);
      else if (name == "y") out.push_back(t.y);
      else if (name == "z") out.push_back(t.z);
      else if (name == "residual") out.push_back(fourholes_residual(t));
      else throw std::invalid_argument("unknown statistic '" + name + "'");
    }
  }
  return out;
}

OrbitLog::OrbitLog(std::vector<std::string> columns, int walkers, std::int64_t burn_in,
                   std::int64_t rows_per_walker)
    : columns_(std::move(columns)),
      walkers_(walkers),
      burn_in_(burn_in),
      rows_per_walker_(rows_per_walker),
      values_(static_cast<std::size_t>(rows_per_walker * walkers) * columns_.size()),
      initial_(static_cast<std::size_t>(walkers) * columns_.size()) {}

int OrbitLog::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return static_cast<int>(i);
  }
  throw std::invalid_argument("OrbitLog: statistic '" + std::string(name) + "' not recorded");
}

bool OrbitLog::has_column(std::string_view name) const {
  return std::find(columns_.begin(), columns_.end(), name) != columns_.end();
}

std::vector<double> OrbitLog::column(std::string_view name) const {
  const int c = column_index(name);
  std::vector<double> out(static_cast<std::size_t>(rows()));
  for (std::int64_t r = 0; r < rows(); ++r) out[r] = value(r, c);
  return out;
}

std::vector<double> OrbitLog::column(std::string_view name, int walker) const {
  const int c = column_index(name);
  std::vector<double> out(static_cast<std::size_t>(rows_per_walker_));
  const std::int64_t base = walker * rows_per_walker_;
  for (std::int64_t r = 0; r < rows_per_walker_; ++r) out[r] = value(base + r, c);
  return out;
}

void write_csv(const OrbitLog& log, std::ostream& out) {
  out << "walker,step";
  for (const auto& c : log.columns()) out << ',' << c;
  out << '\n';
  const auto old = out.precision(17);
  const int ncol = static_cast<int>(log.columns().size());
  for (std::int64_t r = 0; r < log.rows(); ++r) {
    out << log.walker(r) << ',' << log.step(r);
    for (int c = 0; c < ncol; ++c) out << ',' << log.value(r, c);
    out << '\n';
  }
  out.precision(old);
}

namespace {

template <typename Fn>
void for_each_walker(int walkers, int threads, Fn&& fn) {
  int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::clamp(n, 1, walkers);
  if (n == 1) {
    for (int w = 0; w < walkers; ++w) fn(w);
    return;
  }
  std::vector<std::jthread> pool;
  std::vector<std::exception_ptr> errors(n);
  for (int t = 0; t < n; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (int w = t; w < walkers; w += n) fn(w);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  pool.clear();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

OrbitLog random_walk(std::span<const Representation> starts, const WalkSpec& spec) {
  validate(spec);
  if (static_cast<int>(starts.size()) != spec.walkers) {
    throw std::invalid_argument("random_walk: need one start per walker");
  }
  for (const auto& s : starts) {
    if (s.rank() != spec.rank) throw std::invalid_argument("random_walk: start rank mismatch");
  }
  const auto named = resolve_generators(spec.rank, spec.generators);
  std::vector<Automorphism> moves;
  for (const auto& g : named) {
    moves.push_back(g.automorphism);
    moves.push_back(g.automorphism.inverse());
  }
  const auto columns = spec.columns.empty() ? default_columns(spec.rank) : spec.columns;
  OrbitLog log(columns, spec.walkers, spec.burn_in, spec.steps - spec.burn_in);
  const int ncol = static_cast<int>(columns.size());

  for_each_walker(spec.walkers, spec.threads, [&](int w) {
    RngStream rng(spec.seed, 2 * static_cast<std::uint64_t>(w));
    Representation rho = starts[w];
    auto init = column_values(rho, columns);
    for (int c = 0; c < ncol; ++c) log.initial(w, c) = init[c];
    std::int64_t row = w * log.rows_per_walker();
    for (std::int64_t s = 1; s <= spec.steps; ++s) {
      rho = act_on_rep(moves[rng.below(moves.size())], rho);
      if (s > spec.burn_in) {
        const auto vals = column_values(rho, columns);
        for (int c = 0; c < ncol; ++c) log.value(row, c) = vals[c];
        ++row;
      }
    }
  });
  return log;
}

OrbitLog random_walk(const Representation& start, const WalkSpec& spec) {
  validate(spec);
  std::vector<Representation> starts(spec.walkers, start);
  return random_walk(starts, spec);
}

Conservation conservation_check(const OrbitLog& log, std::string_view statistic) {
  Conservation out;
  out.per_walker.assign(log.walkers(), 0.0);
  std::vector<int> cols;
  const bool multiset = statistic == "t_boundary_multiset";
  if (multiset) {
    // Boundary traces, or their rank-3 aliases (t0, t1, t2, t3) = (d, a, b, c).
    if (log.has_column("t0")) {
      for (int i = 0; log.has_column("t" + std::to_string(i)); ++i) {
        cols.push_back(log.column_index("t" + std::to_string(i)));
      }
    } else {
      for (const char* c : {"d", "a", "b", "c"}) cols.push_back(log.column_index(c));
    }
  } else {
    cols.push_back(log.column_index(statistic));
  }
  std::vector<double> ref(cols.size()), cur(cols.size());
  for (int w = 0; w < log.walkers(); ++w) {
    for (std::size_t i = 0; i < cols.size(); ++i) ref[i] = log.initial(w, cols[i]);
    if (multiset) std::sort(ref.begin(), ref.end());
    double drift = 0.0;
    const std::int64_t base = w * log.rows_per_walker();
    for (std::int64_t r = base; r < base + log.rows_per_walker(); ++r) {
      for (std::size_t i = 0; i < cols.size(); ++i) cur[i] = log.value(r, cols[i]);
      if (multiset) std::sort(cur.begin(), cur.end());
      for (std::size_t i = 0; i < cols.size(); ++i) drift = std::max(drift, std::abs(cur[i] - ref[i]));
    }
    out.per_walker[w] = drift;
    out.max_drift = std::max(out.max_drift, drift);
  }
  return out;
}

Histogram::Histogram(double lo, double hi, int bins) : lo_(lo), hi_(hi), counts_(bins, 0) {
  if (bins < 1 || !(hi > lo)) throw std::invalid_argument("Histogram: invalid binning");
}

void Histogram::add(double v) {
  constexpr double kSlack = 1e-9;
  if (!(v >= lo_ - kSlack && v <= hi_ + kSlack)) {
    throw std::domain_error("Histogram: sample " + std::to_string(v) + " outside range");
  }
  auto k = static_cast<int>(std::floor((v - lo_) / (hi_ - lo_) * bins()));
  k = std::clamp(k, 0, bins() - 1);
  ++counts_[k];
  ++total_;
}

double Histogram::cdf_at_edge(int k) const {
  if (total_ == 0) return 0.0;
  std::uint64_t below = 0;
  for (int i = 0; i < k; ++i) below += counts_[i];
  return static_cast<double>(below) / static_cast<double>(total_);
}

Histogram histogram(std::span<const double> samples, double lo, double hi, int bins) {
  if (samples.empty()) throw std::invalid_argument("histogram: empty sample set");
  Histogram h(lo, hi, bins);
  for (double v : samples) h.add(v);
  return h;
}

double ks_distance(const Histogram& h1, const Histogram& h2) {
  if (h1.bins() != h2.bins() || h1.lo() != h2.lo() || h1.hi() != h2.hi()) {
    throw std::invalid_argument("ks_distance: histograms use different bins");
  }
  if (h1.total() == 0 || h2.total() == 0) throw std::invalid_argument("ks_distance: empty histogram");
  double d = 0.0;
  std::uint64_t c1 = 0, c2 = 0;
  for (int k = 0; k < h1.bins(); ++k) {
    c1 += h1.counts()[k];
    c2 += h2.counts()[k];
    d = std::max(d, std::abs(static_cast<double>(c1) / h1.total() -
                             static_cast<double>(c2) / h2.total()));
  }
  return d;
}

double ks_distance(const Histogram& h, const std::function<double(double)>& cdf) {
  if (h.total() == 0) throw std::invalid_argument("ks_distance: empty histogram");
  double d = 0.0;
  std::uint64_t c = 0;
  for (int k = 0; k < h.bins(); ++k) {
    c += h.counts()[k];
    d = std::max(d, std::abs(static_cast<double>(c) / h.total() - cdf(h.edge(k + 1))));
  }
  return d;
}

double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw std::invalid_argument("ks_statistic: empty sample set");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double semicircle_cdf(double tau) {
  if (!(tau >= -2.0 && tau <= 2.0)) {
    throw std::domain_error("semicircle_cdf: argument outside [-2, 2]");
  }
  return 0.5 + tau * std::sqrt(4.0 - tau * tau) / (4.0 * std::numbers::pi) +
         std::asin(tau / 2.0) / std::numbers::pi;
}

Representation sample_kappa_level(double t, RngStream& rng, int max_tries) {
  if (!(t >= -2.0 && t <= 2.0)) throw std::domain_error("sample_kappa_level: level outside [-2, 2]");
  // tr[A, B] = 2 - 4 |Im A x Im B|^2.
  const double need = (2.0 - t) / 4.0;
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    GroupElement A, B;
    if (need >= 1.0 - 1e-15) {
      // Only anticommuting pairs of trace-zero elements reach -2.
      A = sample_with_trace(0.0, rng);
      B = element_with_traces(A, 0.0, 0.0, rng.uniform(0.0, 2.0 * std::numbers::pi));
    } else {
      A = haar_sample(rng);
      const GroupElement probe = haar_sample(rng);
      const double sa2 = 1.0 - A.w() * A.w();
      const double sb2 = 1.0 - probe.w() * probe.w();
      if (sa2 * sb2 <= 0.0) continue;
      const double sin2 = need / (sa2 * sb2);
      if (sin2 > 1.0) continue;
      const double cos_t = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(1.0 - sin2);
      // tr(B A) = 2 (wa wb - |ua||ub| cos)
      const double target = 2.0 * (A.w() * probe.w() - std::sqrt(sa2 * sb2) * cos_t);
      B = element_with_traces(A, trace(probe), std::clamp(target, -2.0, 2.0),
                              rng.uniform(0.0, 2.0 * std::numbers::pi));
    }
    Representation rho({A, B});
    if (std::abs(kappa(rho) - t) <= 1e-9) return rho;
  }
  throw ExhaustedTries("sample_kappa_level: rejection exhausted");
}

OrbitLog level_set_walk(double t, const WalkSpec& spec) {
  if (spec.rank != 2) throw std::invalid_argument("level_set_walk: rank must be 2");
  validate(spec);
  std::vector<Representation> starts;
  for (int w = 0; w < spec.walkers; ++w) {
    RngStream rng(spec.seed, 2 * static_cast<std::uint64_t>(w) + 1);
    starts.push_back(sample_kappa_level(t, rng));
  }
  return random_walk(starts, spec);
}

TorusPoint torus_step(const IntMatrix& m, const TorusPoint& p) {
  const auto det = determinant(m);
  if (det != 1 && det != -1) throw std::invalid_argument("torus_step: matrix is not unimodular");
  const int n = m.size();
  if (static_cast<int>(p.coords.size()) != n) throw std::invalid_argument("torus_step: size mismatch");
  TorusPoint out{std::vector<double>(n)};
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += static_cast<double>(m(i, j)) * p.coords[j];
    s -= std::floor(s);
    if (s >= 1.0) s -= 1.0;
    out.coords[i] = s;
  }
  return out;
}

std::vector<TorusPoint> torus_orbit(const IntMatrix& m, const TorusPoint& start, std::int64_t steps) {
  std::vector<TorusPoint> out;
  out.reserve(static_cast<std::size_t>(std::max<std::int64_t>(steps, 0)));
  TorusPoint p = start;
  for (std::int64_t k = 0; k < steps; ++k) {
    p = torus_step(m, p);
    out.push_back(p);
  }
  return out;
}

IntMatrix cat_map() { return IntMatrix(2, {2, 1, 1, 1}); }

namespace {

Representation patch_targets(int n, double first, double last, RngStream& rng) {
  std::vector<GroupElement> images;
  images.push_back(sample_with_trace(first, rng));
  for (int i = 2; i < n; ++i) images.push_back(haar_sample(rng));
  images.push_back(sample_with_trace(last, rng));
  return Representation(std::move(images));
}

}  // namespace

Representation patch_pair(const Representation& rho, const Representation& rho_prime,
                          RngStream& rng) {
  if (rho.rank() != rho_prime.rank() || rho.rank() < 2) {
    throw std::invalid_argument("patch_pair: ranks must agree and be at least 2");
  }
  if (rho.images() == rho_prime.images()) return rho;
  const int n = rho.rank();
  return patch_targets(n, trace(rho.image(1)), trace(rho_prime.image(n)), rng);
}

PatchingReport patching_experiment(int n, std::uint64_t seed, int pairs, int grid) {
  if (n < 2) throw std::invalid_argument("patching_experiment: rank must be at least 2");
  PatchingReport report;
  report.rank = n;
  report.pairs = pairs;
  RngStream rng(seed, 0);
  for (int k = 0; k < pairs; ++k) {
    const auto rho = Representation::haar(n, rng);
    const auto rho_prime = Representation::haar(n, rng);
    const auto joined = patch_pair(rho, rho_prime, rng);
    const double e1 = std::abs(trace(joined.image(1)) - trace(rho.image(1)));
    const double en = std::abs(trace(joined.image(n)) - trace(rho_prime.image(n)));
    report.max_error_first = std::max(report.max_error_first, e1);
    report.max_error_last = std::max(report.max_error_last, en);
    if (e1 <= 1e-9 && en <= 1e-9) ++report.successes;
  }
  if (grid >= 2) {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double t1 = -2.0 + 4.0 * i / (grid - 1);
        const double tn = -2.0 + 4.0 * j / (grid - 1);
        const auto rho = patch_targets(n, t1, tn, rng);
        ++report.grid_points;
        if (std::abs(trace(rho.image(1)) - t1) <= 1e-9 && std::abs(trace(rho.image(n)) - tn) <= 1e-9) {
          ++report.grid_successes;
        }
      }
    }
  }
  return report;
}

}  // namespace charvar
