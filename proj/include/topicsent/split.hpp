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

#ifndef TOPICSENT_SPLIT_HPP_
#define TOPICSENT_SPLIT_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "topicsent/util.hpp"

namespace topicsent {

enum class SplitPart : char { train = 'T', validation = 'V', test = 'E' };

struct SplitOptions {
  double train_fraction = 0.75;       // train + validation share of all items
  double validation_fraction = 0.10;  // carved from the training share
  std::uint64_t seed = 1;
};

// Per-class quotas summing to round(fraction * n): each class gets
// floor(fraction * n_c), and the leftover goes to the largest remainders
// (ties to the smaller class id).
std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& class_sizes, double fraction);

// Chooses a stratified subset of `pool` (indices into `labels`). Returns the
// chosen indices in ascending order.
std::vector<std::size_t> stratified_sample(std::span<const int> labels, std::span<const std::size_t> pool,
                                           double fraction, Rng& rng);

struct DataSplit {
  SplitOptions options;
  std::vector<std::string> ids;
  std::vector<int> labels;
  std::vector<SplitPart> parts;

  std::size_t count(SplitPart p) const;
  std::vector<std::size_t> indices(SplitPart p) const;
  // train + validation.
  std::vector<std::size_t> training_pool() const;

  // `# seed S train_fraction F validation_fraction G`, then
  // `id<TAB>label<TAB>part` lines with part in {T, V, E}.
  std::string serialize() const;
  static DataSplit parse(std::string_view text);
};

DataSplit make_split(std::vector<std::string> ids, std::vector<int> labels, const SplitOptions& options);

}  // namespace topicsent

#endif  // TOPICSENT_SPLIT_HPP_
