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

#include <json.hpp>

#include "topicsent/dendrogram.hpp"

using namespace topicsent;

TEST_CASE("Jensen-Shannon divergence") {
  Eigen::VectorXd p(3), q(3), r(3);
  p << 0.5, 0.5, 0;
  q << 0, 0, 1;
  r << 0.2, 0.3, 0.5;
  CHECK(jensen_shannon(p, p) == doctest::Approx(0.0));
  CHECK(jensen_shannon(p, q) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(jensen_shannon(p, r) == doctest::Approx(jensen_shannon(r, p)));
  CHECK(jensen_shannon(p, r) > 0);
  CHECK(jensen_shannon(p, r) < std::log(2.0));
}

TEST_CASE("identical rows merge at distance zero") {
  Eigen::MatrixXd phi(2, 3);
  phi << 0.2, 0.3, 0.5, 0.2, 0.3, 0.5;
  const auto t = cluster_topics(phi);
  REQUIRE(t.merges.size() == 1);
  CHECK(t.merges[0].distance == doctest::Approx(0.0));
  CHECK(t.to_newick() == "(0:0,1:0);");
}

TEST_CASE("the two similar rows merge first") {
  Eigen::MatrixXd phi(3, 4);
  phi << 0.5, 0.5, 0, 0,   //
      0, 0, 0.5, 0.5,      //
      0.5, 0.5, 0, 0;
  const auto t = cluster_topics(phi);
  REQUIRE(t.merges.size() == 2);
  CHECK(t.merges[0].left == 0);
  CHECK(t.merges[0].right == 2);
  CHECK(t.merges[0].distance == doctest::Approx(0.0));
  CHECK(t.merges[1].distance == doctest::Approx(std::log(2.0)));
  CHECK(t.merges[1].size == 3);
  CHECK(t.root() == 4);
}

TEST_CASE("equal distances resolve to smaller topic ids") {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) phi(i, i) = 1;
  const auto t = cluster_topics(phi);
  REQUIRE(t.merges.size() == 3);
  CHECK(t.merges[0].left == 0);
  CHECK(t.merges[0].right == 1);
  // Every remaining linkage is ln 2; {0,1} with 2 has the smallest ids.
  CHECK(t.merges[1].left == 4);
  CHECK(t.merges[1].right == 2);
  CHECK(t.merges[2].left == 5);
  CHECK(t.merges[2].right == 3);
}

TEST_CASE("merge heights never decrease and every leaf appears once") {
  Eigen::MatrixXd phi = Eigen::MatrixXd::Random(12, 30).cwiseAbs();
  for (int i = 0; i < phi.rows(); ++i) phi.row(i) /= phi.row(i).sum();
  const auto t = cluster_topics(phi);
  REQUIRE(t.merges.size() == 11);
  for (std::size_t i = 1; i < t.merges.size(); ++i) CHECK(t.merges[i].distance >= t.merges[i - 1].distance);
  CHECK(t.merges.back().size == 12);
  const auto nwk = t.to_newick();
  for (int leaf = 0; leaf < 12; ++leaf) {
    const std::string tag = std::to_string(leaf) + ":";
    std::size_t count = 0;
    for (std::size_t pos = 0; (pos = nwk.find(tag, pos)) != std::string::npos; ++pos)
      if (pos == 0 || nwk[pos - 1] == '(' || nwk[pos - 1] == ',') ++count;
    CHECK(count == 1);
  }
  const auto json = nlohmann::json::parse(t.to_json());
  CHECK(json["linkage"] == "average");
  CHECK(json["merges"].size() == 11);
}

TEST_CASE("a single topic gives a single leaf") {
  Eigen::MatrixXd phi(1, 3);
  phi << 0.2, 0.3, 0.5;
  const auto t = cluster_topics(phi);
  CHECK(t.merges.empty());
  CHECK(t.root() == 0);
  CHECK(t.to_newick() == "0;");
}
