#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace commlab::cli {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kThreadsVariable = "COMMLAB_NUM_THREADS";

enum ExitCode : int { ok = 0, usage = 1, parse_error = 2, validation_error = 3, numerical_error = 4 };

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::string required;  // comma-separated config keys
};

const std::vector<ExperimentInfo>& experiments();
std::string list_experiments();

struct Report {
  std::string experiment;
  std::vector<std::string> notes;  // extra '#' lines after the standard header
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Shortest round-trip decimal form, locale independent.
std::string format_number(double value);

// Parses, validates and runs the config at `config_path`, then writes the CSV
// atomically. Errors are reported on `err` as one JSON object per line.
int run(const std::string& config_path, const std::optional<std::string>& output_override, std::ostream& err);

// Entry point shared by the binary: `run <config> [--output path]` or `list`.
int main_entry(int argc, char** argv);

}  // namespace commlab::cli
