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

#ifndef TOPICSENT_CONFIG_HPP_
#define TOPICSENT_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicsent/baselines.hpp"
#include "topicsent/lda.hpp"
#include "topicsent/lstm_train.hpp"
#include "topicsent/split.hpp"

namespace topicsent {

// Everything a pipeline run depends on. The single `seed` drives every
// stochastic stage (LDA, split, LSTM init and shuffling, SVM order).
struct PipelineConfig {
  std::filesystem::path corpus;
  std::string format = "auto";  // auto | jsonl | csv
  std::filesystem::path stopwords;   // empty: shipped English list
  std::filesystem::path lexicon;     // extra `term<TAB>strength` file
  std::filesystem::path boosters;    // extra `term<TAB>delta` file
  std::filesystem::path embeddings;  // empty: seeded random vectors
  std::filesystem::path out = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  int vocab_min_df = 5;  // LDA vocabulary
  std::size_t vocab_max_size = 0;

  lda::Hyperparams lda;
  int top_words = 10;

  bool traces = false;

  SplitOptions split;
  lstm::TrainConfig train;
  int embedding_dim = 50;
  int train_min_df = 5;  // classifier vocabulary

  baselines::CompareOptions baselines;
  bool timing = false;

  // Parses `key = value` lines ('#' comments). Relative paths resolve
  // against `base_dir`. Unknown keys and bad values throw InputError.
  static PipelineConfig parse(std::string_view text, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& path);

  // One override; same key names as the file format.
  void set(std::string_view key, std::string_view value);
  static std::vector<std::string> keys();

  // Every key in a fixed order; parse(serialize()) reproduces this config.
  std::string serialize() const;
  // FNV-1a over the serialization with input paths replaced by content
  // hashes and the output directory left out, so equal inputs give equal
  // hashes wherever they live. With `scope`, only keys equal to an entry or
  // starting with an entry that ends in '.' take part.
  std::string hash(std::span<const std::string_view> scope = {}) const;

  // Seeds and thread counts pushed into the module configs.
  lda::Hyperparams lda_params() const;
  lstm::TrainConfig train_params() const;
  SplitOptions split_params() const;
  baselines::CompareOptions compare_params() const;

  // Throws InputError for a referenced input path that does not exist or
  // for out-of-range settings.
  void validate() const;

 private:
  bool alpha_set_ = false;
};

}  // namespace topicsent

#endif  // TOPICSENT_CONFIG_HPP_
