/*
 * Copyright 2026 The agreesim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AGREESIM_TOOLS_CLI_APP_H_
#define AGREESIM_TOOLS_CLI_APP_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

namespace agreesim::cli {

// Everything any subcommand can be given on the command line.
struct Invocation {
  std::string dataset;
  std::string format;
  std::string scheme;
  std::string delimiter;
  std::string matrix;
  double smoothing = 0.0;

  std::string system_model;
  std::string truth_model;
  std::string metric = "auc";
  uint64_t trials = 10000;
  uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<double> percentiles = {5.0, 50.0, 95.0};
  std::string flip_space = "binary";

  std::string preset;
  std::string config;

  std::string out;
  std::string samples_out;
  std::string markdown_out;
  std::string samples_dir;

  double score = 0.0;
  std::string samples;
  double band_low = 5.0;
  double band_high = 95.0;

  std::size_t docs = 343;
  int annotators = 3;
  std::string annotator_dist;
  std::string mode = "calibrated";
  std::vector<double> alpha;
};

// Registers all subcommands and flags on `app`, binding them to `inv`.
void BuildApp(CLI::App& app, Invocation& inv);

// One documented flag with a value that parses, for reflection tests.
struct FlagExample {
  std::string subcommand;
  std::string flag;
  std::string value;  // empty for pure switches
};
std::vector<FlagExample> DocumentedFlags();
// Minimal valid argument list (after the subcommand name) for `subcommand`.
std::vector<std::string> MinimalArgs(const std::string& subcommand);

// Parses and runs. Returns the process exit status.
int Run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace agreesim::cli

#endif  // AGREESIM_TOOLS_CLI_APP_H_
