// Experiment manifests: one JSON document describing a reproducible run.
//
//   {
//     "schema_version": 1,
//     "kind": "orbit",
//     "rank": 3,
//     "generators": ["nielsen"],
//     "params": { "steps": 11000, "burn_in": 1000, "walkers": 4 },
//     "seed": 7,
//     "outputs": { "report": "report.json", "data": "orbit.csv", "format": "csv" }
//   }
//
// Unknown fields, at the top level, in "outputs" or in "params", are rejected.
// docs/formats.md lists the parameters accepted by each kind.

#ifndef CHARVAR_MANIFEST_HPP
#define CHARVAR_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace charvar {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { verify, orbit, membership, figure, torus, patching, probe };

std::string_view to_string(ExperimentKind kind);

class ManifestError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Throws ManifestError for an unknown kind.
ExperimentKind parse_kind(std::string_view name);

enum class DataFormat { csv, json };

DataFormat parse_format(std::string_view name);
std::string_view to_string(DataFormat format);

struct Outputs {
  std::string report = "report.json";
  std::string data;  ///< empty: the kind's default file name
  DataFormat format = DataFormat::csv;

  friend bool operator==(const Outputs&, const Outputs&) = default;
};

struct ExperimentManifest {
  int schema_version = kSchemaVersion;
  ExperimentKind kind = ExperimentKind::verify;
  int rank = 3;
  std::vector<std::string> generators;
  Json params = Json::object();
  std::uint64_t seed = 0;
  Outputs outputs;

  friend bool operator==(const ExperimentManifest&, const ExperimentManifest&) = default;
};

/// Strict parse; throws ManifestError on any schema violation.
ExperimentManifest parse_manifest(const Json& doc);
ExperimentManifest parse_manifest(std::string_view text);
ExperimentManifest load_manifest(const std::filesystem::path& path);

Json to_json(const ExperimentManifest& manifest);

/// Typed parameter lookup with a default.
double param_number(const ExperimentManifest& m, std::string_view key, double fallback);
std::int64_t param_integer(const ExperimentManifest& m, std::string_view key, std::int64_t fallback);
std::string param_string(const ExperimentManifest& m, std::string_view key, std::string fallback);
std::vector<double> param_numbers(const ExperimentManifest& m, std::string_view key,
                                  std::vector<double> fallback);
std::vector<std::string> param_strings(const ExperimentManifest& m, std::string_view key,
                                       std::vector<std::string> fallback);

}  // namespace charvar

#endif  // CHARVAR_MANIFEST_HPP
