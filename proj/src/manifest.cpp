#include "charvar/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace charvar {

namespace {

enum class ParamType { number, integer, string, numbers, strings, matrix };

using Schema = std::map<std::string, ParamType, std::less<>>;

const Schema& schema_for(ExperimentKind kind) {
  static const std::map<ExperimentKind, Schema> schemas = {
      {ExperimentKind::verify, {{"samples", ParamType::integer}}},
      {ExperimentKind::orbit,
       {{"steps", ParamType::integer},
        {"burn_in", ParamType::integer},
        {"walkers", ParamType::integer},
        {"threads", ParamType::integer},
        {"columns", ParamType::strings},
        {"conserve", ParamType::strings},
        {"tolerance", ParamType::number},
        {"kappa_level", ParamType::number},
        {"reference_column", ParamType::string},
        {"reference_ks", ParamType::number}}},
      {ExperimentKind::membership,
       {{"quadruple", ParamType::numbers}, {"expect", ParamType::string}}},
      {ExperimentKind::figure,
       {{"figure", ParamType::string},
        {"y", ParamType::number},
        {"y_range", ParamType::numbers},
        {"levels", ParamType::integer},
        {"samples", ParamType::integer}}},
      {ExperimentKind::torus,
       {{"preset", ParamType::string},
        {"matrix", ParamType::matrix},
        {"start", ParamType::numbers},
        {"steps", ParamType::integer},
        {"coordinates", ParamType::numbers},
        {"ks_threshold", ParamType::number}}},
      {ExperimentKind::patching, {{"pairs", ParamType::integer}, {"grid", ParamType::integer}}},
      {ExperimentKind::probe,
       {{"a0", ParamType::number},
        {"d0", ParamType::number},
        {"pairs", ParamType::integer},
        {"epsilon", ParamType::number},
        {"target_rate", ParamType::number}}},
  };
  return schemas.at(kind);
}

bool matches(const Json& v, ParamType type) {
  switch (type) {
    case ParamType::number:
      return v.is_number();
    case ParamType::integer:
      return v.is_number_integer();
    case ParamType::string:
      return v.is_string();
    case ParamType::numbers:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); });
    case ParamType::strings:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_string(); });
    case ParamType::matrix:
      return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& row) {
               return row.is_array() &&
                      std::all_of(row.begin(), row.end(), [](const Json& e) { return e.is_number_integer(); });
             });
  }
  return false;
}

void reject_unknown(const Json& obj, std::initializer_list<std::string_view> allowed, const char* where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ManifestError(std::string("unknown field '") + key + "' in " + where);
    }
  }
}

const Json* find_param(const ExperimentManifest& m, std::string_view key) {
  auto it = m.params.find(std::string(key));
  return it == m.params.end() ? nullptr : &*it;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::verify: return "verify";
    case ExperimentKind::orbit: return "orbit";
    case ExperimentKind::membership: return "membership";
    case ExperimentKind::figure: return "figure";
    case ExperimentKind::torus: return "torus";
    case ExperimentKind::patching: return "patching";
    case ExperimentKind::probe: return "probe";
  }
  return "?";
}

ExperimentKind parse_kind(std::string_view name) {
  for (auto k : {ExperimentKind::verify, ExperimentKind::orbit, ExperimentKind::membership,
                 ExperimentKind::figure, ExperimentKind::torus, ExperimentKind::patching,
                 ExperimentKind::probe}) {
    if (to_string(k) == name) return k;
  }
  throw ManifestError("unknown experiment kind '" + std::string(name) + "'");
}

DataFormat parse_format(std::string_view name) {
  if (name == "csv") return DataFormat::csv;
  if (name == "json") return DataFormat::json;
  throw ManifestError("unknown data format '" + std::string(name) + "'");
}

std::string_view to_string(DataFormat format) { return format == DataFormat::csv ? "csv" : "json"; }

ExperimentManifest parse_manifest(const Json& doc) {
  if (!doc.is_object()) throw ManifestError("manifest must be a JSON object");
  reject_unknown(doc, {"schema_version", "kind", "rank", "generators", "params", "seed", "outputs"},
                 "manifest");
  ExperimentManifest m;
  try {
    if (!doc.contains("schema_version") || !doc.contains("kind")) {
      throw ManifestError("manifest requires 'schema_version' and 'kind'");
    }
    m.schema_version = doc.at("schema_version").get<int>();
    if (m.schema_version != kSchemaVersion) {
      throw ManifestError("unsupported schema_version " + std::to_string(m.schema_version));
    }
    m.kind = parse_kind(doc.at("kind").get<std::string>());
    if (doc.contains("rank")) m.rank = doc.at("rank").get<int>();
    if (m.rank < 2) throw ManifestError("rank must be at least 2");
    if (doc.contains("generators")) m.generators = doc.at("generators").get<std::vector<std::string>>();
    if (doc.contains("seed")) {
      if (!doc.at("seed").is_number_unsigned()) throw ManifestError("seed must be a nonnegative integer");
      m.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("params")) {
      const Json& params = doc.at("params");
      if (!params.is_object()) throw ManifestError("'params' must be an object");
      const auto& schema = schema_for(m.kind);
      for (const auto& [key, value] : params.items()) {
        auto it = schema.find(key);
        if (it == schema.end()) {
          throw ManifestError("unknown parameter '" + key + "' for kind " + std::string(to_string(m.kind)));
        }
        if (!matches(value, it->second)) throw ManifestError("parameter '" + key + "' has the wrong type");
      }
      m.params = params;
    }
    if (doc.contains("outputs")) {
      const Json& out = doc.at("outputs");
      if (!out.is_object()) throw ManifestError("'outputs' must be an object");
      reject_unknown(out, {"report", "data", "format"}, "outputs");
      if (out.contains("report")) m.outputs.report = out.at("report").get<std::string>();
      if (out.contains("data")) m.outputs.data = out.at("data").get<std::string>();
      if (out.contains("format")) m.outputs.format = parse_format(out.at("format").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ManifestError(std::string("manifest type error: ") + e.what());
  }
  return m;
}

ExperimentManifest parse_manifest(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("manifest is not valid JSON: ") + e.what());
  }
  return parse_manifest(doc);
}

ExperimentManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  const std::string content = text.str();
  return parse_manifest(std::string_view(content));
}

Json to_json(const ExperimentManifest& m) {
  Json out;
  out["schema_version"] = m.schema_version;
  out["kind"] = to_string(m.kind);
  out["rank"] = m.rank;
  out["generators"] = m.generators;
  out["params"] = m.params;
  out["seed"] = m.seed;
  Json outputs;
  outputs["report"] = m.outputs.report;
  if (!m.outputs.data.empty()) outputs["data"] = m.outputs.data;
  outputs["format"] = to_string(m.outputs.format);
  out["outputs"] = outputs;
  return out;
}

double param_number(const ExperimentManifest& m, std::string_view key, double fallback) {
  const Json* v = find_param(m, key);
  return v ? v->get<double>() : fallback;
}

std::int64_t param_integer(const ExperimentManifest& m, std::string_view key, std::int64_t fallback) {
  const Json* v = find_param(m, key);
  return v ? v->get<std::int64_t>() : fallback;
}

std::string param_string(const ExperimentManifest& m, std::string_view key, std::string fallback) {
  const Json* v = find_param(m, key);
  return v ? v->get<std::string>() : fallback;
}

std::vector<double> param_numbers(const ExperimentManifest& m, std::string_view key,
                                  std::vector<double> fallback) {
  const Json* v = find_param(m, key);
  return v ? v->get<std::vector<double>>() : fallback;
}

std::vector<std::string> param_strings(const ExperimentManifest& m, std::string_view key,
                                       std::vector<std::string> fallback) {
  const Json* v = find_param(m, key);
  return v ? v->get<std::vector<std::string>>() : fallback;
}

}  // namespace charvar
