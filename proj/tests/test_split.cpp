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

#include <doctest.h>

#include <cmath>
#include <numeric>

#include "topicsent/split.hpp"

using namespace topicsent;

TEST_CASE("largest-remainder quotas") {
  CHECK(stratified_quotas({4, 4}, 0.75) == std::vector<std::size_t>{3, 3});
  // 4.5 rounds to 5; equal remainders favour the lower class ids.
  CHECK(stratified_quotas({3, 3, 3}, 0.5) == std::vector<std::size_t>{2, 2, 1});
}

TEST_CASE("quota totals follow round-half-up of the overall share") {
  for (std::size_t n : {10u, 999u, 1000u, 1001u, 4567u}) {
    const std::vector<std::size_t> sizes = {n / 7, n / 3, n - n / 7 - n / 3};
    const auto q = stratified_quotas(sizes, 0.75);
    const std::size_t total = std::accumulate(q.begin(), q.end(), std::size_t{0});
    CHECK(total == static_cast<std::size_t>(std::floor(0.75 * n + 0.5)));
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      CHECK(q[c] <= sizes[c]);
      CHECK(std::abs(static_cast<double>(q[c]) - 0.75 * static_cast<double>(sizes[c])) < 1.0);
    }
  }
  // Reference dataset size: 451,554 comments -> 338,666 train, 112,888 test.
  const auto q = stratified_quotas({90000, 120000, 101554, 80000, 60000}, 0.75);
  CHECK(std::accumulate(q.begin(), q.end(), std::size_t{0}) == 338666);
  CHECK_THROWS_AS(stratified_quotas({3}, 1.5), InputError);
}

TEST_CASE("split is stratified, seeded and round-trips") {
  std::vector<std::string> ids;
  std::vector<int> labels;
  Rng rng(3);
  for (int i = 0; i < 1200; ++i) {
    ids.push_back("c" + std::to_string(i));
    labels.push_back(static_cast<int>(rng.below(5)));
  }
  SplitOptions opt;
  opt.seed = 9;
  const auto s = make_split(ids, labels, opt);
  const std::size_t pool = s.training_pool().size(), test = s.count(SplitPart::test);
  CHECK(pool + test == 1200);
  CHECK(std::abs(static_cast<double>(pool) / 1200 - 0.75) < 0.002);
  CHECK(s.count(SplitPart::validation) == static_cast<std::size_t>(std::floor(0.1 * pool + 0.5)));
  for (int c = 0; c < 5; ++c) {
    double in_class = 0, in_pool = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == c) {
        ++in_class;
        in_pool += s.parts[i] != SplitPart::test;
      }
    CHECK(std::abs(in_pool / in_class - 0.75) < 0.01);
  }
  CHECK(make_split(ids, labels, opt).parts == s.parts);
  opt.seed = 10;
  CHECK(make_split(ids, labels, opt).parts != s.parts);

  const auto text = s.serialize();
  CHECK(text.rfind("# seed 9 train_fraction 0.75 validation_fraction 0.1\n", 0) == 0);
  const auto back = DataSplit::parse(text);
  CHECK(back.ids == s.ids);
  CHECK(back.labels == s.labels);
  CHECK(back.parts == s.parts);
  CHECK(back.options.seed == 9);
  CHECK(back.serialize() == text);
}

TEST_CASE("split errors") {
  CHECK_THROWS_AS(make_split({}, {}, {}), InputError);
  CHECK_THROWS_AS(make_split({"a"}, {1, 2}, {}), InputError);
  CHECK_THROWS_AS(DataSplit::parse("garbage\n"), InputError);
  CHECK_THROWS_AS(DataSplit::parse("# seed 1 train_fraction 0.75 validation_fraction 0.1\na\t1\tX\n"), InputError);
}
