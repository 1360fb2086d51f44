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

#include <map>
#include <sstream>

#include "topicsent/lstm_train.hpp"

namespace topicsent::lstm {
namespace {

void write_tensor(std::string& out, const std::string& name, const Matrix<double>& t) {
  out += "tensor " + name + " " + std::to_string(t.rows()) + " " + std::to_string(t.cols()) + "\n";
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    for (Eigen::Index c = 0; c < t.cols(); ++c) {
      if (c) out.push_back(' ');
      out += format_double(t(r, c));
    }
    out.push_back('\n');
  }
}

std::map<std::string, std::string> parse_pairs(std::string_view line) {
  std::map<std::string, std::string> kv;
  std::istringstream ss{std::string(line)};
  std::string word;
  ss >> word;  // leading keyword
  while (ss >> word) {
    const auto eq = word.find('=');
    if (eq == std::string::npos) throw InputError("malformed model header field '" + word + "'");
    kv[word.substr(0, eq)] = word.substr(eq + 1);
  }
  return kv;
}

}  // namespace

std::string serialize_model(const Model& m, const TrainConfig& c, const std::vector<std::string>& vocab) {
  std::string out = "topicsent-lstm 1\n";
  out += "dims vocab=" + std::to_string(vocab.size()) + " input=" + std::to_string(m.input_dim()) +
         " hidden1=" + std::to_string(m.layer1.hidden()) + " hidden2=" + std::to_string(m.layer2.hidden()) +
         " classes=" + std::to_string(kNumClasses) + "\n";
  out += "config hidden1=" + std::to_string(c.hidden1) + " hidden2=" + std::to_string(c.hidden2) +
         " batch_size=" + std::to_string(c.batch_size) + " epochs=" + std::to_string(c.epochs) +
         " learning_rate=" + format_double(c.learning_rate) + " max_len=" + std::to_string(c.max_len) +
         " seed=" + std::to_string(c.seed) + " clip_norm=" + format_double(c.clip_norm) +
         " adam_beta1=" + format_double(c.adam_beta1) + " adam_beta2=" + format_double(c.adam_beta2) +
         " adam_epsilon=" + format_double(c.adam_epsilon) +
         " fine_tune_embeddings=" + std::to_string(c.fine_tune_embeddings ? 1 : 0) +
         " class_weights=" + std::to_string(c.class_weights ? 1 : 0) + " threads=" + std::to_string(c.threads) + "\n";
  out += "vocab " + std::to_string(vocab.size()) + "\n";
  for (const auto& t : vocab) out += t + "\n";
  auto layer = [&](const char* prefix, const LayerParams<double>& p) {
    const char* names[] = {"forget", "input", "output", "candidate"};
    const Gate<double>* gs[] = {&p.forget, &p.input, &p.output, &p.candidate};
    for (int k = 0; k < 4; ++k) {
      const std::string base = std::string(prefix) + "." + names[k];
      write_tensor(out, base + ".recurrent", gs[k]->recurrent);
      write_tensor(out, base + ".input", gs[k]->input);
      write_tensor(out, base + ".bias", gs[k]->bias);
    }
  };
  layer("layer1", m.layer1);
  layer("layer2", m.layer2);
  write_tensor(out, "head.weight", m.head.weight);
  write_tensor(out, "head.bias", m.head.bias);
  write_tensor(out, "embedding", m.embedding);
  return out;
}

LoadedModel parse_model(std::string_view text) {
  auto lines = split(text, '\n');
  std::size_t i = 0;
  auto next = [&]() -> std::string_view {
    if (i >= lines.size()) throw InputError("truncated model file");
    return lines[i++];
  };
  if (next() != "topicsent-lstm 1") throw InputError("not a topicsent LSTM model file");
  auto dims = parse_pairs(next());
  auto cfg = parse_pairs(next());
  LoadedModel out;
  try {
    auto& c = out.config;
    c.hidden1 = std::stoi(cfg.at("hidden1"));
    c.hidden2 = std::stoi(cfg.at("hidden2"));
    c.batch_size = std::stoi(cfg.at("batch_size"));
    c.epochs = std::stoi(cfg.at("epochs"));
    c.learning_rate = std::stod(cfg.at("learning_rate"));
    c.max_len = std::stoi(cfg.at("max_len"));
    c.seed = std::stoull(cfg.at("seed"));
    c.clip_norm = std::stod(cfg.at("clip_norm"));
    c.adam_beta1 = std::stod(cfg.at("adam_beta1"));
    c.adam_beta2 = std::stod(cfg.at("adam_beta2"));
    c.adam_epsilon = std::stod(cfg.at("adam_epsilon"));
    c.fine_tune_embeddings = cfg.at("fine_tune_embeddings") == "1";
    c.class_weights = cfg.at("class_weights") == "1";
    c.threads = std::stoi(cfg.at("threads"));
  } catch (const std::exception&) {
    throw InputError("model file config header is incomplete");
  }
  {
    std::istringstream ss{std::string(next())};
    std::string kw;
    std::size_t n = 0;
    if (!(ss >> kw >> n) || kw != "vocab") throw InputError("model file lacks a vocab block");
    for (std::size_t k = 0; k < n; ++k) out.vocab.emplace_back(next());
  }
  std::map<std::string, Matrix<double>> tensors;
  while (i < lines.size()) {
    auto line = lines[i++];
    if (line.empty()) continue;
    std::istringstream ss{std::string(line)};
    std::string kw, name;
    Eigen::Index rows = 0, cols = 0;
    if (!(ss >> kw >> name >> rows >> cols) || kw != "tensor") throw InputError("malformed tensor header");
    Matrix<double> t(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      std::istringstream row{std::string(next())};
      for (Eigen::Index c = 0; c < cols; ++c)
        if (!(row >> t(r, c))) throw InputError("short row in tensor " + name);
    }
    tensors[name] = std::move(t);
  }
  auto take = [&](const std::string& name) -> Matrix<double> {
    auto it = tensors.find(name);
    if (it == tensors.end()) throw InputError("model file lacks tensor " + name);
    return it->second;
  };
  auto take_vector = [&](const std::string& name) -> Vector<double> {
    Matrix<double> t = take(name);
    if (t.cols() != 1) throw InputError("tensor " + name + " must be a column");
    return t.col(0);
  };
  Model& m = out.model;
  m.embedding = take("embedding");
  auto layer = [&](const char* prefix, LayerParams<double>& p) {
    const char* names[] = {"forget", "input", "output", "candidate"};
    Gate<double>* gs[] = {&p.forget, &p.input, &p.output, &p.candidate};
    for (int k = 0; k < 4; ++k) {
      const std::string base = std::string(prefix) + "." + names[k];
      gs[k]->recurrent = take(base + ".recurrent");
      gs[k]->input = take(base + ".input");
      gs[k]->bias = take_vector(base + ".bias");
    }
  };
  layer("layer1", m.layer1);
  layer("layer2", m.layer2);
  m.head.weight = take("head.weight");
  m.head.bias = take_vector("head.bias");
  m.train_embeddings = out.config.fine_tune_embeddings;
  m.check_shapes();
  if (std::to_string(out.vocab.size()) != dims["vocab"] ||
      static_cast<std::size_t>(m.embedding.rows()) != out.vocab.size() + 2)
    throw InputError("model vocabulary does not match its embedding matrix");
  return out;
}

}  // namespace topicsent::lstm
