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

#include "topicsent/split.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace topicsent {

std::vector<std::size_t> stratified_quotas(const std::vector<std::size_t>& class_sizes, double fraction) {
  if (!(fraction >= 0 && fraction <= 1)) throw InputError("split fraction must lie in [0, 1]");
  const std::size_t n = std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  const auto target = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 0.5));
  std::vector<std::size_t> quota(class_sizes.size());
  std::vector<double> remainder(class_sizes.size());
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < class_sizes.size(); ++c) {
    const double exact = fraction * static_cast<double>(class_sizes[c]);
    quota[c] = static_cast<std::size_t>(std::floor(exact));
    remainder[c] = exact - static_cast<double>(quota[c]);
    assigned += quota[c];
  }
  std::vector<std::size_t> order(class_sizes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < target && i < order.size(); ++i) {
    const std::size_t c = order[i];
    if (quota[c] < class_sizes[c]) {
      ++quota[c];
      ++assigned;
    }
  }
  return quota;
}

std::vector<std::size_t> stratified_sample(std::span<const int> labels, std::span<const std::size_t> pool,
                                           double fraction, Rng& rng) {
  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i : pool) by_class[labels[i]].push_back(i);
  std::vector<std::size_t> sizes;
  for (const auto& [label, members] : by_class) sizes.push_back(members.size());
  const auto quota = stratified_quotas(sizes, fraction);
  std::vector<std::size_t> chosen;
  std::size_t c = 0;
  for (auto& [label, members] : by_class) {
    rng.shuffle(members.begin(), members.end());
    chosen.insert(chosen.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(quota[c++]));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::size_t DataSplit::count(SplitPart p) const {
  return static_cast<std::size_t>(std::count(parts.begin(), parts.end(), p));
}

std::vector<std::size_t> DataSplit::indices(SplitPart p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i] == p) out.push_back(i);
  return out;
}

std::vector<std::size_t> DataSplit::training_pool() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (parts[i] != SplitPart::test) out.push_back(i);
  return out;
}

std::string DataSplit::serialize() const {
  std::string out = "# seed " + std::to_string(options.seed) + " train_fraction " + format_double(options.train_fraction) +
                    " validation_fraction " + format_double(options.validation_fraction) + "\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i];
    out += '\t';
    out += std::to_string(labels[i]);
    out += '\t';
    out += static_cast<char>(parts[i]);
    out += '\n';
  }
  return out;
}

DataSplit DataSplit::parse(std::string_view text) {
  DataSplit s;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InputError("split file is empty");
  {
    std::istringstream h(line);
    std::string hash, k1, k2, k3;
    if (!(h >> hash >> k1 >> s.options.seed >> k2 >> s.options.train_fraction >> k3 >> s.options.validation_fraction) ||
        hash != "#" || k1 != "seed" || k2 != "train_fraction" || k3 != "validation_fraction")
      throw InputError("split file has a malformed header");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, '\t');
    int label = 0;
    if (f.size() != 3 || f[2].size() != 1 ||
        std::from_chars(f[1].data(), f[1].data() + f[1].size(), label).ec != std::errc{})
      throw InputError("split file line " + std::to_string(lineno) + " is malformed");
    const char p = f[2][0];
    if (p != 'T' && p != 'V' && p != 'E') throw InputError("split file line " + std::to_string(lineno) + " has an unknown part");
    s.ids.emplace_back(f[0]);
    s.labels.push_back(label);
    s.parts.push_back(static_cast<SplitPart>(p));
  }
  return s;
}

DataSplit make_split(std::vector<std::string> ids, std::vector<int> labels, const SplitOptions& options) {
  if (ids.size() != labels.size()) throw InputError("split ids and labels differ in length");
  if (ids.empty()) throw InputError("cannot split an empty dataset");
  DataSplit s;
  s.options = options;
  s.ids = std::move(ids);
  s.labels = std::move(labels);
  s.parts.assign(s.ids.size(), SplitPart::test);
  Rng rng(options.seed);
  std::vector<std::size_t> all(s.ids.size());
  std::iota(all.begin(), all.end(), 0);
  const auto pool = stratified_sample(s.labels, all, options.train_fraction, rng);
  for (std::size_t i : pool) s.parts[i] = SplitPart::train;
  for (std::size_t i : stratified_sample(s.labels, pool, options.validation_fraction, rng)) s.parts[i] = SplitPart::validation;
  return s;
}

}  // namespace topicsent
