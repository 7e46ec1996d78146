// charvar: command-line front end for the experiment runner.

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "charvar/lab.hpp"

namespace {

using charvar::ExperimentKind;
using charvar::ExperimentManifest;
using charvar::Json;

struct Globals {
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";
};

template <typename T>
void set_if(Json& params, const char* key, const std::optional<T>& v) {
  if (v) params[key] = *v;
}

int execute(const ExperimentManifest& m, const std::string& out_dir) {
  const auto result = charvar::run(m, out_dir);
  for (const auto& c : result.report.at("checks")) {
    std::cout << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>() << "  "
              << c.at("value").dump() << ' ' << c.at("relation").get<std::string>() << ' '
              << c.at("threshold").dump() << '\n';
  }
  std::cout << "report: " << (std::filesystem::path(out_dir) / m.outputs.report).string() << '\n';
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-coordinate experiments on SU(2) character varieties of free groups"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for the report and data files")->capture_default_str();
  app.add_option("--format", g.format, "Data file format")->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  ExperimentManifest m;
  std::string manifest_path;
  std::optional<int> rank;
  std::vector<std::string> generators;

  auto* run = app.add_subcommand("run", "Run a manifest file");
  run->add_option("manifest", manifest_path, "Manifest JSON")->required();

  auto* verify = app.add_subcommand("verify", "Relation and commuting-diagram identities");
  std::optional<std::int64_t> samples;
  verify->add_option("--samples", samples);

  auto* orbit = app.add_subcommand("orbit", "Random-walk orbit of a representation");
  std::optional<std::int64_t> steps, burn_in, walkers, threads;
  std::vector<std::string> columns, conserve;
  std::optional<double> tolerance, kappa_level, reference_ks;
  std::optional<std::string> reference_column;
  orbit->add_option("--rank", rank);
  orbit->add_option("--generators", generators, "Catalog or group names")->delimiter(',');
  orbit->add_option("--steps", steps, "Total moves, burn-in included");
  orbit->add_option("--burn-in", burn_in);
  orbit->add_option("--walkers", walkers);
  orbit->add_option("--threads", threads);
  orbit->add_option("--columns", columns)->delimiter(',');
  orbit->add_option("--conserve", conserve, "Statistics expected to stay constant")->delimiter(',');
  orbit->add_option("--tolerance", tolerance);
  orbit->add_option("--kappa-level", kappa_level, "Start on a commutator-trace level set (rank 2)");
  orbit->add_option("--reference-ks", reference_ks, "KS threshold against the Haar trace law");
  orbit->add_option("--reference-column", reference_column);

  auto* membership = app.add_subcommand("membership", "Realizability of boundary traces (a, b, c, d)");
  std::vector<double> quadruple;
  std::optional<std::string> expect;
  membership->add_option("quadruple", quadruple)->expected(4)->required()->allow_extra_args(false);
  membership->add_option("--expect", expect)->check(CLI::IsMember({"realizable", "unrealizable"}));

  auto* figure = app.add_subcommand("figure", "Point lists for plotting");
  std::string figure_kind = "tetrahedron";
  std::optional<double> level_y;
  std::vector<double> y_range;
  std::optional<std::int64_t> levels, fig_samples;
  figure->add_option("kind", figure_kind)
      ->check(CLI::IsMember({"tetrahedron", "foliation", "ellipse", "ellipse-family"}));
  figure->add_option("--y", level_y);
  figure->add_option("--y-range", y_range)->expected(2);
  figure->add_option("--levels", levels);
  figure->add_option("--samples", fig_samples);

  auto* torus = app.add_subcommand("torus", "Linear automorphism orbits on the torus");
  std::optional<std::string> preset;
  std::vector<double> start;
  std::optional<std::int64_t> torus_steps;
  std::optional<double> ks_threshold;
  torus->add_option("--preset", preset)->check(CLI::IsMember({"cat", "alpha"}));
  torus->add_option("--start", start)->delimiter(',');
  torus->add_option("--steps", torus_steps);
  torus->add_option("--ks-threshold", ks_threshold);

  auto* patching = app.add_subcommand("patching", "Join two representations through shared traces");
  std::optional<std::int64_t> pairs, grid;
  patching->add_option("--rank", rank)->default_str("4");
  patching->add_option("--pairs", pairs);
  patching->add_option("--grid", grid);

  auto* probe = app.add_subcommand("probe", "Flow-segment connectivity of a level set");
  std::optional<double> a0, d0, epsilon, target_rate;
  std::optional<std::int64_t> probe_pairs;
  probe->add_option("--a0", a0);
  probe->add_option("--d0", d0);
  probe->add_option("--pairs", probe_pairs);
  probe->add_option("--epsilon", epsilon);
  probe->add_option("--target-rate", target_rate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : charvar::kExitInvalid;
  }

  try {
    if (run->parsed()) {
      auto loaded = charvar::load_manifest(manifest_path);
      return execute(loaded, g.out_dir);
    }
    Json& p = m.params;
    if (verify->parsed()) {
      m.kind = ExperimentKind::verify;
      set_if(p, "samples", samples);
    } else if (orbit->parsed()) {
      m.kind = ExperimentKind::orbit;
      set_if(p, "steps", steps);
      set_if(p, "burn_in", burn_in);
      set_if(p, "walkers", walkers);
      set_if(p, "threads", threads);
      if (!columns.empty()) p["columns"] = columns;
      if (!conserve.empty()) p["conserve"] = conserve;
      set_if(p, "tolerance", tolerance);
      set_if(p, "kappa_level", kappa_level);
      set_if(p, "reference_ks", reference_ks);
      set_if(p, "reference_column", reference_column);
    } else if (membership->parsed()) {
      m.kind = ExperimentKind::membership;
      p["quadruple"] = quadruple;
      set_if(p, "expect", expect);
    } else if (figure->parsed()) {
      m.kind = ExperimentKind::figure;
      p["figure"] = figure_kind;
      set_if(p, "y", level_y);
      if (!y_range.empty()) p["y_range"] = y_range;
      set_if(p, "levels", levels);
      set_if(p, "samples", fig_samples);
    } else if (torus->parsed()) {
      m.kind = ExperimentKind::torus;
      set_if(p, "preset", preset);
      if (!start.empty()) p["start"] = start;
      set_if(p, "steps", torus_steps);
      set_if(p, "ks_threshold", ks_threshold);
    } else if (patching->parsed()) {
      m.kind = ExperimentKind::patching;
      if (!rank) rank = 4;
      set_if(p, "pairs", pairs);
      set_if(p, "grid", grid);
    } else if (probe->parsed()) {
      m.kind = ExperimentKind::probe;
      set_if(p, "a0", a0);
      set_if(p, "d0", d0);
      set_if(p, "pairs", probe_pairs);
      set_if(p, "epsilon", epsilon);
      set_if(p, "target_rate", target_rate);
    }
    if (rank) m.rank = *rank;
    m.generators = generators;
    m.seed = g.seed;
    m.outputs.format = charvar::parse_format(g.format);
    // Round-trip through the parser so CLI runs obey the same validation.
    m = charvar::parse_manifest(charvar::to_json(m));
    return execute(m, g.out_dir);
  } catch (const charvar::ManifestError& e) {
    std::cerr << "invalid manifest: " << e.what() << '\n';
    return charvar::kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return charvar::kExitInvalid;
  }
}
