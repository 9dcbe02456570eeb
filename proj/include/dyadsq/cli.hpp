#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dyadsq/errors.hpp"

namespace dyadsq::cli {

inline constexpr const char* kToolVersion = "dyadsq 0.1.0";
inline constexpr const char* kOutputDirEnv = "DYADSQ_OUTPUT_DIR";

enum ExitStatus : int {
  kOk = 0,
  kUsage = 2,
  kInvalidParameter = 3,
  kNotCertified = 4,
  kIoFailure = 5,
  kNumericalFailure = 6,
  kHypothesisFailure = 7,
};

/// Missing or conflicting flags for the chosen command.
class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

struct RunConfig {
  std::string command;  // characteristics | square-function | scaling | divergence |
                        // extension-check | ainfty-growth
  std::string family;
  std::optional<double> p;
  std::optional<double> beta;
  std::optional<double> r;
  std::optional<std::string> beta_grid;  // "j=a..b"
  std::vector<double> beta_list;
  std::optional<int> depth;
  std::optional<int> n_max;
  std::optional<double> span;
  std::optional<int> grid_log2;  // grid step 2^-g
  std::optional<int> k_max;
  std::string out;  // empty: <DYADSQ_OUTPUT_DIR or .>/<command>.csv
  bool timestamp = true;
};

const std::vector<std::string>& commands();
const std::vector<std::string>& family_names();

/// "j=a..b" -> 1 - 2^-j, j = a..b.
std::vector<double> parse_beta_grid(const std::string& spec);

struct CsvTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::vector<std::string>> footers;  // written as "#fit,..." lines
};

/// 17 significant digits; nan and inf spelled out.
std::string format_number(double v);

std::string render_csv(const CsvTable& table);
void emit_csv(const CsvTable& table, const std::string& path);

/// Validates, computes, writes the CSV. Errors go to `err` as one line
/// "error,<kind>,<status>,<message>" and map to the exit statuses above.
int run(const RunConfig& config, std::ostream& err);

/// The table run() would write, without touching the file system. Throws.
CsvTable build_table(const RunConfig& config);

std::string output_path(const RunConfig& config);

}  // namespace dyadsq::cli
