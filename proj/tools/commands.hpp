#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvkit/analysis.hpp"

namespace rvkit::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// Resolved settings of `analyze`: file values first, flags on top.
struct AnalysisConfig {
  std::vector<std::string> inputs;
  std::string calendar_path;  // empty: default Tokyo sessions, days from the ticks
  std::string out_dir = "rvkit_out";
  AnalysisOptions options;

  static AnalysisConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Parses `1..40`, `1,5,10` or mixtures such as `1..5,10,30`.
std::vector<int> parse_delta_list(const std::string& text);

/// Files written by a successful `analyze`.
const std::vector<std::string>& analysis_outputs();

/// Entry point shared by the executable and the tests. `args` excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rvkit::cli
