// Runs one experiment manifest: dispatch, data files, report.

#ifndef CHARVAR_LAB_HPP
#define CHARVAR_LAB_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "charvar/manifest.hpp"

namespace charvar {

inline constexpr std::string_view kLibraryVersion = "0.1.0";

enum ExitCode : int { kExitPass = 0, kExitCheckFailed = 1, kExitInvalid = 2 };

struct Check {
  std::string name;
  bool passed = false;
  double value = 0;
  double threshold = 0;
  std::string relation;  ///< "<=", "<", ">=", ">", "=="
};

/// Evaluates `value relation threshold`.
Check make_check(std::string name, double value, std::string_view relation, double threshold);

struct RunResult {
  Json report;
  std::vector<std::filesystem::path> data_files;
  int exit_code = kExitPass;
};

/// Runs the experiment, writes data files and the report under out_dir and
/// returns the report. Throws ManifestError when the manifest is valid JSON
/// but unusable for its kind (bad rank, unknown generator, bad parameter).
RunResult run(const ExperimentManifest& manifest, const std::filesystem::path& out_dir);

/// The report without wall-clock fields, for comparing runs.
Json strip_timing(Json report);

}  // namespace charvar

#endif  // CHARVAR_LAB_HPP
