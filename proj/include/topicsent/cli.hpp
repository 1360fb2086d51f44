// Copyright 2026 The topicsent Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TOPICSENT_CLI_HPP_
#define TOPICSENT_CLI_HPP_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "topicsent/config.hpp"

namespace topicsent::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kInvariantError = 3 };

// Artifact file name -> bytes, in write order.
using Artifacts = std::map<std::string, std::string>;

struct StageOutput {
  Artifacts artifacts;
  std::map<std::string, std::string> inputs;  // name -> content hash
  std::vector<std::string> notes;             // human-readable summary lines
};

StageOutput run_preprocess(const PipelineConfig& cfg);
StageOutput run_topics(const PipelineConfig& cfg);
StageOutput run_sentiment(const PipelineConfig& cfg);
StageOutput run_train(const PipelineConfig& cfg);
StageOutput run_evaluate(const PipelineConfig& cfg);
StageOutput run_compare(const PipelineConfig& cfg);

// Config keys a stage reads; its manifest hashes only these.
std::span<const std::string_view> config_scope(const std::string& stage);

// `<stage>.manifest.json` contents for a stage run.
std::string manifest_json(const std::string& stage, const PipelineConfig& cfg, const StageOutput& out);

// Entry point; `args` excludes the program name. Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace topicsent::cli

#endif  // TOPICSENT_CLI_HPP_
