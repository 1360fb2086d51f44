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

#ifndef TOPICSENT_DENDROGRAM_HPP_
#define TOPICSENT_DENDROGRAM_HPP_

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

namespace topicsent {

// Jensen-Shannon divergence in nats; ln 2 for disjoint supports.
template <typename DerivedP, typename DerivedQ>
double jensen_shannon(const Eigen::MatrixBase<DerivedP>& p, const Eigen::MatrixBase<DerivedQ>& q) {
  double js = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double a = p(i), b = q(i);
    const double m = 0.5 * (a + b);
    if (a > 0) js += 0.5 * a * std::log(a / m);
    if (b > 0) js += 0.5 * b * std::log(b / m);
  }
  return js < 0 ? 0.0 : js;
}

// Agglomerative merge tree over K leaves. Nodes 0..K-1 are leaves (topic
// ids); node K+i is the i-th merge.
struct Dendrogram {
  struct Merge {
    int left = 0;
    int right = 0;
    double distance = 0;
    int size = 0;
  };

  int leaves = 0;
  std::vector<Merge> merges;

  int root() const { return merges.empty() ? 0 : leaves + static_cast<int>(merges.size()) - 1; }
  // Branch length = parent height - child height, height = merge distance.
  std::string to_newick() const;
  std::string to_json() const;
};

// Average-linkage clustering of the rows of `phi` under Jensen-Shannon
// divergence. Equal distances resolve to the pair with the smaller topic ids.
Dendrogram cluster_topics(const Eigen::MatrixXd& phi);

}  // namespace topicsent

#endif  // TOPICSENT_DENDROGRAM_HPP_
