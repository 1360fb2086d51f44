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

#include "topicsent/embed.hpp"

#include <zlib.h>

#include <charconv>
#include <memory>

namespace topicsent {
namespace {

struct GzCloser {
  void operator()(gzFile_s* f) const { gzclose(f); }
};

// Reads one line of any length; false at EOF.
bool gz_getline(gzFile f, std::string& line) {
  line.clear();
  char buf[8192];
  while (gzgets(f, buf, sizeof buf)) {
    line += buf;
    if (!line.empty() && line.back() == '\n') {
      line.pop_back();
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
  }
  return !line.empty();
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path, int expected_dim) {
  if (expected_dim < 1) throw InputError("embedding dimension must be positive");
  std::unique_ptr<gzFile_s, GzCloser> f(gzopen(path.string().c_str(), "rb"));
  if (!f) throw InputError("cannot open embeddings " + path.string());

  EmbeddingTable table(expected_dim);
  std::string line;
  std::size_t lineno = 0;
  Eigen::VectorXf v(expected_dim);
  while (gz_getline(f.get(), line)) {
    ++lineno;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    const auto sp = rest.find(' ');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (sp == std::string_view::npos) throw InputError("embedding row without values at " + where);
    const std::string token(rest.substr(0, sp));
    rest.remove_prefix(sp + 1);
    int count = 0;
    while (!rest.empty()) {
      while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
      if (rest.empty()) break;
      float x = 0;
      auto res = std::from_chars(rest.data(), rest.data() + rest.size(), x);
      if (res.ec != std::errc()) throw InputError("non-numeric embedding value at " + where);
      if (count < expected_dim) v(count) = x;
      ++count;
      rest.remove_prefix(static_cast<std::size_t>(res.ptr - rest.data()));
      if (!rest.empty() && rest.front() != ' ') throw InputError("non-numeric embedding value at " + where);
    }
    if (count != expected_dim)
      throw InputError("embedding row has " + std::to_string(count) + " values, expected " +
                       std::to_string(expected_dim) + " at " + where);
    table.set(token, v);
  }
  return table;
}

void EmbeddingTable::set(const std::string& token, const Eigen::Ref<const Eigen::VectorXf>& v) {
  if (v.size() != dim_) throw InputError("embedding vector for '" + token + "' has the wrong dimension");
  auto [it, inserted] = index_.emplace(token, tokens_.size());
  if (inserted) {
    tokens_.push_back(token);
    values_.insert(values_.end(), v.data(), v.data() + dim_);
  } else {
    ++duplicates_;
    std::copy(v.data(), v.data() + dim_, values_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
  }
}

const float* EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? nullptr : values_.data() + it->second * static_cast<std::size_t>(dim_);
}

Eigen::VectorXf EmbeddingTable::mean() const {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
  if (tokens_.empty()) return sum.cast<float>();
  Eigen::Map<const RowMatrix> all(values_.data(), static_cast<Eigen::Index>(tokens_.size()), dim_);
  sum = all.cast<double>().colwise().sum().transpose();
  return (sum / static_cast<double>(tokens_.size())).cast<float>();
}

EmbeddingTable random_embeddings(const Vocabulary& vocab, int dim, std::uint64_t seed, float scale) {
  EmbeddingTable table(dim);
  Rng rng(seed);
  Eigen::VectorXf v(dim);
  for (const auto& tok : vocab.tokens()) {
    for (int i = 0; i < dim; ++i) v(i) = static_cast<float>(rng.uniform(-scale, scale));
    table.set(tok, v);
  }
  return table;
}

}  // namespace topicsent
