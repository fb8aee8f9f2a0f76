#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leanreg/confidence.hpp"
#include "leanreg/lab.hpp"
#include "leanreg/linalg.hpp"
#include "leanreg/projection.hpp"

namespace leanreg::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Command { Fit, Pcor, Simulate, Verify };

std::string_view to_string(Command c);

struct SimConfig {
  lab::DGPSpec spec;
  std::size_t reps = 200;
  std::optional<double> eta;
};

struct RunConfig {
  Command command = Command::Fit;
  std::optional<std::string> input_path;
  std::string response_column = "0";  // header name, or 0-based index if no name matches
  bool intercept = true;
  double alpha = 0.05;
  Method method = Method::Bootstrap;
  std::size_t bootstrap_b = kDefaultBootstrapDraws;
  std::uint64_t seed = 0;
  std::optional<SimConfig> sim;
  std::optional<std::string> output_path;  // standard output when empty
  std::optional<int> threads;              // never affects results
};

/// Throws InvalidLevel / InvalidArgument / Usage.
void validate(const RunConfig& config);

/// Parses `<command> [options]`. A `--config` file is applied first and
/// explicit flags override it. Throws Usage, ParseError or FileNotFound.
RunConfig parse_args(const std::vector<std::string>& args);

/// Applies the keys of a flat JSON config document onto `config`.
void apply_config_text(const std::string& text, RunConfig& config);

struct CsvTable {
  std::vector<std::string> header;
  Matrix values;  // rows x header.size()
};

/// RFC-4180 CSV with a header row. Locations in errors are 1-based and count
/// the header as row 1.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

/// Response column by header name, or by 0-based index when no header
/// matches. Remaining columns in header order form X.
Dataset ingest_csv(const std::string& path, const std::string& response_column, bool intercept);
Dataset dataset_from_table(const CsvTable& table, const std::string& response_column, bool intercept);

/// Values are written with 17 significant digits, so re-reading is exact.
void write_csv(const std::string& path, const CsvTable& table);
/// Header "y,x1,...,xp"; the intercept column is not written.
void write_dataset_csv(const std::string& path, const Dataset& data);

/// Executes a configuration and writes the JSON report. Returns the exit code
/// (0 success, 1 usage or input error, 2 numerical error); error objects go to
/// `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full entry point: argument parsing plus run().
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leanreg::cli
