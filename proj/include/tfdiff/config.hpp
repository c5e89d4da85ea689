// SPDX-License-Identifier: Apache-2.0
//
// Command-line and JSON configuration for the experiment runner.
//
//   tfdiff case1|case2|case3 [--array afmt|fibo64|tf24] [--bands 250,500]
//          [--profile ci|paper] [--seed N] [--out DIR] [--jobs N] [--config FILE]
//   tfdiff irmix --beam a.wav --diffuse r.wav [--array tf24] [--eta 0:1:0.1]
//   tfdiff fit --samples pattern.csv [--order 8] [--out coeffs.csv]
//   tfdiff layout [--array tf24] [--out layout.json]
//
// Values from --config are applied first; explicit flags override them.
#pragma once

#include "tfdiff/benchmarks.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tfdiff {

struct RunConfig {
  std::string command;    // case1, case2, case3, irmix, fit, layout, help
  std::string help_text;  // set when command == "help"
  CaseConfig case_cfg;
  std::string out_dir = "out";
  std::optional<std::string> out_file;  // fit / layout
  std::map<std::string, std::string> directivity_files;

  std::string beam_path, diffuse_path;  // irmix
  std::string samples_path;             // fit
  int fit_order = kMaxDirectivityOrder;

  // Fully resolved configuration, stable key order.
  std::string echo_json() const;
};

// Throws UsageError (bad flags or config keys), ConfigError (invalid values)
// or IoError (unreadable files).
RunConfig parse_config(const std::vector<std::string>& args);

// "lo:hi:step" or a comma-separated list.
std::vector<double> parse_range(const std::string& text);

// Runs the configured command, writing its outputs; progress goes to `log`.
void execute(const RunConfig& cfg, std::ostream& log);

}  // namespace tfdiff
