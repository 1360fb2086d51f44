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

#include "topicsent/dendrogram.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"
#include "topicsent/util.hpp"

namespace topicsent {

Dendrogram cluster_topics(const Eigen::MatrixXd& phi) {
  const int k = static_cast<int>(phi.rows());
  Dendrogram tree;
  tree.leaves = k;
  if (k < 2) return tree;

  Eigen::MatrixXd leaf_dist = Eigen::MatrixXd::Zero(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      leaf_dist(a, b) = leaf_dist(b, a) = jensen_shannon(phi.row(a).transpose(), phi.row(b).transpose());

  struct Cluster {
    int node;
    int min_leaf;
    std::vector<int> members;
  };
  std::vector<Cluster> active;
  for (int i = 0; i < k; ++i) active.push_back({i, i, {i}});

  // Average linkage is the mean leaf-to-leaf distance, recomputed exactly so
  // ties compare equal.
  auto linkage = [&](const Cluster& a, const Cluster& b) {
    double sum = 0;
    for (int x : a.members)
      for (int y : b.members) sum += leaf_dist(x, y);
    return sum / static_cast<double>(a.members.size() * b.members.size());
  };

  while (active.size() > 1) {
    std::size_t best_a = 0, best_b = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        const double d = linkage(active[a], active[b]);
        auto key = std::minmax(active[a].min_leaf, active[b].min_leaf);
        auto best_key = std::minmax(active[best_a].min_leaf, active[best_b].min_leaf);
        if (d < best || (d == best && key < best_key)) {
          best = d;
          best_a = a;
          best_b = b;
        }
      }
    }
    Cluster& a = active[best_a];
    Cluster& b = active[best_b];
    const bool a_first = a.min_leaf < b.min_leaf;
    Dendrogram::Merge m{a_first ? a.node : b.node, a_first ? b.node : a.node, best,
                        static_cast<int>(a.members.size() + b.members.size())};
    // Average linkage is monotone; clamp rounding so heights never decrease.
    if (!tree.merges.empty()) m.distance = std::max(m.distance, tree.merges.back().distance);
    tree.merges.push_back(m);

    Cluster merged{k + static_cast<int>(tree.merges.size()) - 1, std::min(a.min_leaf, b.min_leaf), {}};
    merged.members = a.members;
    merged.members.insert(merged.members.end(), b.members.begin(), b.members.end());
    std::sort(merged.members.begin(), merged.members.end());
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_b));
    active[best_a] = std::move(merged);
  }
  return tree;
}

namespace {

double height(const Dendrogram& t, int node) {
  return node < t.leaves ? 0.0 : t.merges[static_cast<std::size_t>(node - t.leaves)].distance;
}

void newick(const Dendrogram& t, int node, std::string& out) {
  if (node < t.leaves) {
    out += std::to_string(node);
    return;
  }
  const auto& m = t.merges[static_cast<std::size_t>(node - t.leaves)];
  out.push_back('(');
  newick(t, m.left, out);
  out += ":" + format_double(m.distance - height(t, m.left)) + ",";
  newick(t, m.right, out);
  out += ":" + format_double(m.distance - height(t, m.right)) + ")";
}

}  // namespace

std::string Dendrogram::to_newick() const {
  std::string out;
  if (leaves == 0) return ";";
  newick(*this, root(), out);
  return out + ";";
}

std::string Dendrogram::to_json() const {
  nlohmann::ordered_json j;
  j["metric"] = "jensen-shannon divergence (nats)";
  j["linkage"] = "average";
  j["tie_break"] = "smaller topic id";
  j["leaves"] = leaves;
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < merges.size(); ++i) {
    arr.push_back({{"node", leaves + static_cast<int>(i)},
                   {"left", merges[i].left},
                   {"right", merges[i].right},
                   {"distance", merges[i].distance},
                   {"size", merges[i].size}});
  }
  j["merges"] = std::move(arr);
  j["newick"] = to_newick();
  return j.dump(1) + "\n";
}

}  // namespace topicsent
