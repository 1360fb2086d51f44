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

#ifndef TOPICSENT_EMBED_HPP_
#define TOPICSENT_EMBED_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "topicsent/corpus.hpp"
#include "topicsent/util.hpp"

namespace topicsent {

// Pretrained vectors in the GloVe text layout, one `token v1 ... vd` per
// line.
class EmbeddingTable {
 public:
  using RowMatrix = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingTable() = default;
  explicit EmbeddingTable(int dim) : dim_(dim) {}

  // Plain or gzip-compressed. Throws InputError naming the line when a row
  // does not have exactly expected_dim values. Duplicate tokens keep the last
  // row and count a warning.
  static EmbeddingTable load(const std::filesystem::path& path, int expected_dim);

  void set(const std::string& token, const Eigen::Ref<const Eigen::VectorXf>& v);
  const float* find(std::string_view token) const;

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  std::size_t duplicate_warnings() const { return duplicates_; }
  // Mean of all stored vectors; zero when empty.
  Eigen::VectorXf mean() const;

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> values_;  // size() x dim_, row-major
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

template <typename Scalar>
struct EmbeddingMatrix {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> rows;  // (V + 2) x d
  std::size_t found = 0;
  double coverage = 0;  // found / V

  TokenId oov_row() const { return static_cast<TokenId>(rows.rows() - 2); }
  TokenId pad_row() const { return static_cast<TokenId>(rows.rows() - 1); }
};

// Row per vocabulary id, then the OOV row (table mean) and the all-zero pad
// row. Throws InputError for an empty table.
template <typename Scalar = double>
EmbeddingMatrix<Scalar> build_matrix(const EmbeddingTable& table, const Vocabulary& vocab) {
  if (table.size() == 0) throw InputError("embedding table is empty");
  const auto v = static_cast<Eigen::Index>(vocab.size());
  const int d = table.dim();
  EmbeddingMatrix<Scalar> m;
  m.rows.setZero(v + 2, d);
  const Eigen::VectorXf oov = table.mean();
  for (Eigen::Index i = 0; i < v; ++i) {
    if (const float* row = table.find(vocab.token(static_cast<TokenId>(i)))) {
      m.rows.row(i) = Eigen::Map<const Eigen::VectorXf>(row, d).cast<Scalar>().transpose();
      ++m.found;
    } else {
      m.rows.row(i) = oov.cast<Scalar>().transpose();
    }
  }
  m.rows.row(v) = oov.cast<Scalar>().transpose();
  m.coverage = v > 0 ? static_cast<double>(m.found) / static_cast<double>(v) : 0.0;
  return m;
}

// Seeded U(-scale, scale) table over the vocabulary, for runs without
// pretrained vectors.
EmbeddingTable random_embeddings(const Vocabulary& vocab, int dim, std::uint64_t seed, float scale = 0.1f);

}  // namespace topicsent

#endif  // TOPICSENT_EMBED_HPP_
