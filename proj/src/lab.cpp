#include "charvar/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>

#include "charvar/ergodics.hpp"
#include "charvar/figures.hpp"
#include "charvar/induced_maps.hpp"
#include "charvar/trace_geometry.hpp"

namespace charvar {

namespace fs = std::filesystem;

Check make_check(std::string name, double value, std::string_view relation, double threshold) {
  bool ok = false;
  if (relation == "<=") ok = value <= threshold;
  else if (relation == "<") ok = value < threshold;
  else if (relation == ">=") ok = value >= threshold;
  else if (relation == ">") ok = value > threshold;
  else if (relation == "==") ok = value == threshold;
  else throw std::invalid_argument("make_check: unknown relation '" + std::string(relation) + "'");
  return {std::move(name), ok, value, threshold, std::string(relation)};
}

namespace {

// Everything one experiment hands back to the report writer.
struct Outcome {
  std::vector<Check> checks;
  Json results = Json::object();
  std::vector<fs::path> data_files;
};

class Context {
public:
  Context(const ExperimentManifest& m, fs::path out_dir) : m_(m), out_dir_(std::move(out_dir)) {}

  const ExperimentManifest& manifest() const { return m_; }

  fs::path data_path(std::string_view stem) const {
    std::string name = m_.outputs.data;
    if (name.empty()) name = std::string(stem) + "." + std::string(to_string(m_.outputs.format));
    return out_dir_ / name;
  }

  void write_table(const FigureData& table, std::string_view stem, Outcome& out) const {
    const auto path = data_path(stem);
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    if (m_.outputs.format == DataFormat::csv) {
      write_csv(table, f);
    } else {
      f << to_json(table).dump() << '\n';
    }
    out.data_files.push_back(path.filename());
  }

private:
  const ExperimentManifest& m_;
  fs::path out_dir_;
};

std::int64_t positive_param(const ExperimentManifest& m, std::string_view key, std::int64_t fallback) {
  const auto v = param_integer(m, key, fallback);
  if (v < 1) throw ManifestError("parameter '" + std::string(key) + "' must be positive");
  return v;
}

std::vector<std::string> generators_or(const ExperimentManifest& m, std::vector<std::string> fallback) {
  return m.generators.empty() ? fallback : m.generators;
}

FigureData orbit_table(const OrbitLog& log) {
  FigureData t;
  t.columns = {"walker", "step"};
  t.columns.insert(t.columns.end(), log.columns().begin(), log.columns().end());
  const int nc = static_cast<int>(log.columns().size());
  t.rows.reserve(static_cast<std::size_t>(log.rows()));
  for (std::int64_t r = 0; r < log.rows(); ++r) {
    std::vector<double> row{static_cast<double>(log.walker(r)), static_cast<double>(log.step(r))};
    for (int c = 0; c < nc; ++c) row.push_back(log.value(r, c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Outcome run_verify(const Context& ctx) {
  const auto& m = ctx.manifest();
  const auto samples = positive_param(m, "samples", 1000);
  Outcome out;
  RngStream rng(m.seed, 0);
  const auto catalog = named_generators(3);
  const auto& alpha = find_generator(catalog, "alpha");
  const auto& gamma = find_generator(catalog, "gamma");
  double residual = 0.0, alpha_dev = 0.0, gamma_dev = 0.0, v3_excess = 0.0;
  for (std::int64_t k = 0; k < samples; ++k) {
    const auto rho = Representation::haar(3, rng);
    const auto t = trace_coords3(rho);
    residual = std::max(residual, std::abs(fourholes_residual(t)));
    alpha_dev = std::max(alpha_dev, max_abs_diff(alpha_star(t), trace_coords3(act_on_rep(alpha, rho))));
    gamma_dev = std::max(gamma_dev, max_abs_diff(induced_trace_coords(gamma, rho),
                                                 trace_coords3(act_on_rep(gamma, rho))));
    const auto g = rho.image(1), h = rho.image(2);
    v3_excess = std::max(v3_excess, v3_form(trace(g), trace(h), trace(g * h)) - 4.0);
  }
  const double identity_residual = fourholes_residual(trace_coords3(Representation::identity(3)));
  out.checks.push_back(make_check("relation_residual", residual, "<=", 1e-9));
  out.checks.push_back(make_check("identity_residual", std::abs(identity_residual), "==", 0.0));
  out.checks.push_back(make_check("alpha_commuting_diagram", alpha_dev, "<=", 1e-9));
  out.checks.push_back(make_check("gamma_commuting_diagram", gamma_dev, "<=", 1e-9));
  out.checks.push_back(make_check("pair_traces_in_v3", v3_excess, "<=", kMembershipTolerance));
  out.results["samples"] = samples;
  return out;
}

Outcome run_orbit(const Context& ctx) {
  const auto& m = ctx.manifest();
  WalkSpec spec;
  spec.rank = m.rank;
  spec.generators = generators_or(m, {"nielsen"});
  spec.steps = param_integer(m, "steps", 11000);
  spec.burn_in = param_integer(m, "burn_in", 1000);
  spec.walkers = static_cast<int>(param_integer(m, "walkers", 1));
  spec.threads = static_cast<int>(param_integer(m, "threads", 0));
  spec.seed = m.seed;
  spec.columns = param_strings(m, "columns", default_columns(m.rank));
  const auto conserve = param_strings(m, "conserve", {});
  // Conserved statistics must be recorded.
  for (const auto& s : conserve) {
    if (s == "t_boundary_multiset") {
      for (int i = 0; i <= m.rank; ++i) {
        const auto name = "t" + std::to_string(i);
        if (std::find(spec.columns.begin(), spec.columns.end(), name) == spec.columns.end()) {
          spec.columns.push_back(name);
        }
      }
    } else if (std::find(spec.columns.begin(), spec.columns.end(), s) == spec.columns.end()) {
      spec.columns.push_back(s);
    }
  }
  try {
    validate(spec);
    resolve_generators(spec.rank, spec.generators);
  } catch (const std::invalid_argument& e) {
    throw ManifestError(e.what());
  }

  OrbitLog log = [&] {
    if (m.params.contains("kappa_level")) {
      const double t = param_number(m, "kappa_level", 0.0);
      if (m.rank != 2 || std::abs(t) > 2.0) throw ManifestError("kappa_level needs rank 2 and |t| <= 2");
      return level_set_walk(t, spec);
    }
    std::vector<Representation> starts;
    for (int w = 0; w < spec.walkers; ++w) {
      RngStream rng(m.seed, 2 * static_cast<std::uint64_t>(w) + 1);
      starts.push_back(Representation::haar(m.rank, rng));
    }
    return random_walk(starts, spec);
  }();

  Outcome out;
  const double tol = param_number(m, "tolerance", 1e-9);
  for (const auto& s : conserve) {
    out.checks.push_back(make_check("conserved:" + s, conservation_check(log, s).max_drift, "<=", tol));
  }
  if (m.params.contains("reference_ks")) {
    const auto column = param_string(m, "reference_column", m.rank == 3 ? "a" : "t1");
    if (!log.has_column(column)) throw ManifestError("reference_column '" + column + "' not recorded");
    const auto values = log.column(column);
    const double ks = ks_distance(histogram(values), semicircle_cdf);
    out.checks.push_back(make_check("semicircle_ks:" + column, ks, "<", param_number(m, "reference_ks", 0.02)));
  }
  out.results["rows"] = log.rows();
  out.results["columns"] = log.columns();
  out.results["generators"] = spec.generators;
  ctx.write_table(orbit_table(log), "orbit", out);
  return out;
}

Outcome run_membership(const Context& ctx) {
  const auto& m = ctx.manifest();
  const auto q = param_numbers(m, "quadruple", {});
  if (q.size() != 4) throw ManifestError("membership needs 'quadruple' with four entries");
  for (double v : q) {
    if (std::abs(v) > 2.0) throw ManifestError("quadruple entries must lie in [-2, 2]");
  }
  Outcome out;
  const bool by_interval = boundary_realizable(q[0], q[1], q[2], q[3], RealizabilityMethod::interval);
  const bool by_disc = boundary_realizable(q[0], q[1], q[2], q[3], RealizabilityMethod::discriminant);
  const auto ad = y_interval(q[0], q[3]);
  const auto bc = y_interval(q[1], q[2]);
  out.results["realizable"] = by_interval;
  out.results["discriminant_realizable"] = by_disc;
  out.results["delta"] = delta(q[0], q[1], q[2], q[3]);
  out.results["y_interval_ad"] = {ad.lo, ad.hi};
  out.results["y_interval_bc"] = {bc.lo, bc.hi};
  const auto expect = param_string(m, "expect", "");
  if (!expect.empty()) {
    if (expect != "realizable" && expect != "unrealizable") {
      throw ManifestError("expect must be 'realizable' or 'unrealizable'");
    }
    const bool want = expect == "realizable";
    out.checks.push_back(make_check("expected_" + expect, by_interval == want ? 1.0 : 0.0, "==", 1.0));
  }
  return out;
}

Outcome run_figure(const Context& ctx) {
  const auto& m = ctx.manifest();
  const auto kind = param_string(m, "figure", "tetrahedron");
  const int samples = static_cast<int>(positive_param(m, "samples", kind == "tetrahedron" ? 64 : 256));
  FigureData data;
  // Index of the level column used by the membership re-check, -1 for the surface.
  int level_col = -1;
  try {
    if (kind == "tetrahedron") {
      data = tetrahedron_points(samples);
    } else if (kind == "foliation") {
      data = foliation_points(static_cast<int>(positive_param(m, "levels", 9)), samples);
    } else if (kind == "ellipse") {
      data = ellipse_points(param_number(m, "y", -1.2), samples);
      level_col = 0;
    } else if (kind == "ellipse-family") {
      const auto range = param_numbers(m, "y_range", {0.0, 1.8});
      if (range.size() != 2) throw ManifestError("y_range needs two entries");
      data = ellipse_family_points(range[0], range[1], static_cast<int>(positive_param(m, "levels", 10)),
                                   samples);
      level_col = 0;
    } else {
      throw ManifestError("unknown figure '" + kind + "'");
    }
  } catch (const std::domain_error& e) {
    throw ManifestError(e.what());
  }
  Outcome out;
  double surface = 0.0, excess = 0.0;
  for (const auto& row : data.rows) {
    if (level_col < 0) {
      const std::size_t o = row.size() - 3;
      surface = std::max(surface, std::abs(v3_form(row[o], row[o + 1], row[o + 2]) - 4.0));
    } else {
      excess = std::max(excess, EllipseRegion(row[level_col]).boundary_value(row[1], row[2]));
    }
  }
  if (level_col < 0) {
    out.checks.push_back(make_check("on_surface", surface, "<", 1e-9));
  } else {
    out.checks.push_back(make_check("inside_ellipse", excess, "<=", kMembershipTolerance));
  }
  out.results["figure"] = kind;
  out.results["points"] = data.rows.size();
  ctx.write_table(data, "figure", out);
  return out;
}

Outcome run_torus(const Context& ctx) {
  const auto& m = ctx.manifest();
  std::optional<IntMatrix> matrix;
  std::string preset = param_string(m, "preset", m.params.contains("matrix") ? "" : "cat");
  if (m.params.contains("matrix")) {
    if (!preset.empty()) throw ManifestError("give either 'matrix' or 'preset'");
    const auto rows = m.params.at("matrix").get<std::vector<std::vector<std::int64_t>>>();
    const int n = static_cast<int>(rows.size());
    std::vector<std::int64_t> flat;
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != n) throw ManifestError("matrix must be square");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    if (n < 1) throw ManifestError("matrix must be nonempty");
    matrix = IntMatrix(n, flat);
  } else if (preset == "cat") {
    matrix = cat_map();
  } else if (preset == "alpha") {
    matrix = abelianization_matrix(find_generator(named_generators(3), "alpha").forward());
  } else {
    throw ManifestError("unknown torus preset '" + preset + "'");
  }
  const int n = matrix->size();
  const auto det = determinant(*matrix);
  Outcome out;
  out.checks.push_back(make_check("unimodular", std::abs(static_cast<double>(det)), "==", 1.0));
  if (!out.checks.back().passed) return out;

  std::vector<double> start = param_numbers(m, "start", {});
  if (start.empty()) {
    RngStream rng(m.seed, 0);
    for (int i = 0; i < n; ++i) start.push_back(rng.uniform());
  }
  if (static_cast<int>(start.size()) != n) throw ManifestError("start has the wrong dimension");
  const auto steps = positive_param(m, "steps", 100000);
  const auto orbit = torus_orbit(*matrix, TorusPoint{start}, steps);

  // Coordinates moved by the map; fixed coordinates carry no statistic.
  std::vector<double> fallback;
  for (int i = 0; i < n; ++i) {
    bool moved = false;
    for (int j = 0; j < n; ++j) moved |= (*matrix)(i, j) != (i == j ? 1 : 0);
    if (moved) fallback.push_back(i);
  }
  const double threshold = param_number(m, "ks_threshold", 0.02);
  const auto uniform_cdf = [](double u) { return std::clamp(u, 0.0, 1.0); };
  for (double ci : param_numbers(m, "coordinates", fallback)) {
    const int c = static_cast<int>(ci);
    if (c < 0 || c >= n || c != ci) throw ManifestError("coordinate index out of range");
    std::vector<double> values;
    values.reserve(orbit.size());
    for (const auto& p : orbit) values.push_back(p.coords[c]);
    out.checks.push_back(make_check("uniform_ks:p" + std::to_string(c),
                                    ks_distance(histogram(values, 0.0, 1.0), uniform_cdf), "<", threshold));
  }
  FigureData table;
  table.columns.push_back("step");
  for (int i = 0; i < n; ++i) table.columns.push_back("p" + std::to_string(i));
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    std::vector<double> row{static_cast<double>(k + 1)};
    row.insert(row.end(), orbit[k].coords.begin(), orbit[k].coords.end());
    table.rows.push_back(std::move(row));
  }
  out.results["dimension"] = n;
  out.results["determinant"] = det;
  ctx.write_table(table, "torus", out);
  return out;
}

Outcome run_patching(const Context& ctx) {
  const auto& m = ctx.manifest();
  if (m.rank < 4) throw ManifestError("patching needs rank >= 4");
  const auto pairs = positive_param(m, "pairs", 1000);
  const auto grid = positive_param(m, "grid", 21);
  const auto r = patching_experiment(m.rank, m.seed, static_cast<int>(pairs), static_cast<int>(grid));
  Outcome out;
  out.checks.push_back(make_check("success_rate", double(r.successes) / r.pairs, "==", 1.0));
  out.checks.push_back(
      make_check("max_trace_error", std::max(r.max_error_first, r.max_error_last), "<=", 1e-9));
  if (r.grid_points > 0) {
    out.checks.push_back(make_check("grid_coverage", double(r.grid_successes) / r.grid_points, "==", 1.0));
  }
  out.results["pairs"] = r.pairs;
  out.results["successes"] = r.successes;
  out.results["grid_points"] = r.grid_points;
  return out;
}

Outcome run_probe(const Context& ctx) {
  const auto& m = ctx.manifest();
  const double a0 = param_number(m, "a0", 0.5);
  const double d0 = param_number(m, "d0", 0.3);
  if (!(std::abs(a0) < 2.0) || !(std::abs(d0) < 2.0)) throw ManifestError("probe needs |a0|, |d0| < 2");
  const auto pairs = positive_param(m, "pairs", 100);
  ProbeParams params;
  params.epsilon = param_number(m, "epsilon", 1e-3);
  params.seed = m.seed;
  RngStream rng(m.seed, 1);
  auto draw = [&] {
    std::array<double, 2> p;
    do {
      p = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    } while (!in_fiber(a0, d0, p[0], p[1]));
    return p;
  };
  FigureData table{{"pair", "b_from", "c_from", "b_to", "c_to", "connected", "segments", "final_distance"}, {}};
  Json failures = Json::array();
  int connected = 0;
  for (std::int64_t k = 0; k < pairs; ++k) {
    const auto p = draw();
    const auto q = draw();
    params.seed = m.seed + static_cast<std::uint64_t>(k);
    const auto r = fiber_connectivity_probe(a0, d0, p, q, params);
    connected += r.connected;
    table.rows.push_back({double(k), p[0], p[1], q[0], q[1], r.connected ? 1.0 : 0.0,
                          double(r.chain.size()), r.final_distance});
    if (!r.connected) failures.push_back({{"pair", k}, {"diagnostics", r.diagnostics}});
  }
  Outcome out;
  out.checks.push_back(
      make_check("connected_rate", double(connected) / pairs, ">=", param_number(m, "target_rate", 0.95)));
  out.results["connected"] = connected;
  out.results["pairs"] = pairs;
  out.results["failures"] = failures;
  ctx.write_table(table, "probe", out);
  return out;
}

}  // namespace

RunResult run(const ExperimentManifest& manifest, const fs::path& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  fs::create_directories(out_dir);
  const Context ctx(manifest, out_dir);
  Outcome outcome;
  try {
    switch (manifest.kind) {
      case ExperimentKind::verify: outcome = run_verify(ctx); break;
      case ExperimentKind::orbit: outcome = run_orbit(ctx); break;
      case ExperimentKind::membership: outcome = run_membership(ctx); break;
      case ExperimentKind::figure: outcome = run_figure(ctx); break;
      case ExperimentKind::torus: outcome = run_torus(ctx); break;
      case ExperimentKind::patching: outcome = run_patching(ctx); break;
      case ExperimentKind::probe: outcome = run_probe(ctx); break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("parameter type error: ") + e.what());
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  RunResult result;
  Json& report = result.report;
  report["manifest"] = to_json(manifest);
  report["library_version"] = kLibraryVersion;
  Json checks = Json::array();
  bool all = true;
  for (const auto& c : outcome.checks) {
    checks.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"value", c.value},
                      {"relation", c.relation},
                      {"threshold", c.threshold}});
    all = all && c.passed;
  }
  report["checks"] = checks;
  report["passed"] = all;
  report["results"] = outcome.results;
  Json files = Json::array();
  for (const auto& f : outcome.data_files) files.push_back(f.generic_string());
  report["data_files"] = files;
  report["wall_clock_seconds"] = seconds;

  result.data_files = outcome.data_files;
  result.exit_code = all ? kExitPass : kExitCheckFailed;
  std::ofstream f(out_dir / manifest.outputs.report);
  if (!f) throw std::runtime_error("cannot write report " + (out_dir / manifest.outputs.report).string());
  f << report.dump(2) << '\n';
  return result;
}

Json strip_timing(Json report) {
  report.erase("wall_clock_seconds");
  return report;
}

}  // namespace charvar
