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

#ifndef TOPICSENT_LSTM_HPP_
#define TOPICSENT_LSTM_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "topicsent/corpus.hpp"
#include "topicsent/util.hpp"

namespace topicsent::lstm {

inline constexpr int kNumClasses = 5;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Derived>
auto sigmoid(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  return a.unaryExpr([](S v) {
    if (v >= S(0)) return S(1) / (S(1) + std::exp(-v));
    const S e = std::exp(v);
    return e / (S(1) + e);
  });
}

// One gate: activation(recurrent * z_prev + input * x + bias).
template <typename Scalar>
struct Gate {
  Matrix<Scalar> recurrent;  // H x H
  Matrix<Scalar> input;      // H x D
  Vector<Scalar> bias;       // H

  template <typename X, typename Z>
  Vector<Scalar> preactivation(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Z>& z_prev) const {
    return recurrent * z_prev + input * x + bias;
  }
  void set_zero(int hidden, int input_dim) {
    recurrent.setZero(hidden, hidden);
    input.setZero(hidden, input_dim);
    bias.setZero(hidden);
  }
  Gate& operator+=(const Gate& o) {
    recurrent += o.recurrent;
    input += o.input;
    bias += o.bias;
    return *this;
  }
};

template <typename Scalar>
struct LayerParams {
  Gate<Scalar> forget, input, output, candidate;

  static LayerParams zeros(int hidden, int input_dim) {
    LayerParams p;
    for (Gate<Scalar>* g : {&p.forget, &p.input, &p.output, &p.candidate}) g->set_zero(hidden, input_dim);
    return p;
  }
  int hidden() const { return static_cast<int>(forget.bias.size()); }
  int input_dim() const { return static_cast<int>(forget.input.cols()); }

  void check_shapes() const {
    const auto h = forget.bias.size();
    const auto d = forget.input.cols();
    for (const Gate<Scalar>* g : {&forget, &input, &output, &candidate}) {
      if (g->recurrent.rows() != h || g->recurrent.cols() != h || g->input.rows() != h ||
          g->input.cols() != d || g->bias.size() != h)
        throw InputError("LSTM layer parameter shapes are inconsistent");
    }
  }
  LayerParams& operator+=(const LayerParams& o) {
    forget += o.forget;
    input += o.input;
    output += o.output;
    candidate += o.candidate;
    return *this;
  }
};

// Softmax layer over the five sentiment classes, ordered very_negative,
// negative, neutral, positive, very_positive.
template <typename Scalar>
struct Head {
  Matrix<Scalar> weight;  // 5 x H
  Vector<Scalar> bias;    // 5

  Head& operator+=(const Head& o) {
    weight += o.weight;
    bias += o.bias;
    return *this;
  }
};

template <typename Scalar>
struct CellCache {
  Vector<Scalar> x, z_prev, c_prev;
  Vector<Scalar> f, i, o, candidate, c, tanh_c, z;
};

// f = σ(W_fz z + W_fx x + b_f), i and o likewise, C̃ = tanh(...),
// C = i ⊙ C̃ + f ⊙ C_prev, z = o ⊙ tanh(C).
template <typename Scalar, typename X, typename Z, typename C>
CellCache<Scalar> cell_forward(const Eigen::MatrixBase<X>& x, const Eigen::MatrixBase<Z>& z_prev,
                               const Eigen::MatrixBase<C>& c_prev, const LayerParams<Scalar>& p) {
  if (x.size() != p.input_dim() || z_prev.size() != p.hidden() || c_prev.size() != p.hidden())
    throw InputError("LSTM cell input shape mismatch");
  CellCache<Scalar> s;
  s.x = x;
  s.z_prev = z_prev;
  s.c_prev = c_prev;
  s.f = sigmoid(p.forget.preactivation(x, z_prev));
  s.i = sigmoid(p.input.preactivation(x, z_prev));
  s.o = sigmoid(p.output.preactivation(x, z_prev));
  s.candidate = p.candidate.preactivation(x, z_prev).array().tanh();
  s.c = s.i.cwiseProduct(s.candidate) + s.f.cwiseProduct(s.c_prev);
  s.tanh_c = s.c.array().tanh();
  s.z = s.o.cwiseProduct(s.tanh_c);
  return s;
}

// Gates strictly inside (0, 1), hidden output strictly inside (-1, 1).
template <typename Scalar>
bool state_in_bounds(const CellCache<Scalar>& s) {
  auto open01 = [](const Vector<Scalar>& v) { return v.size() == 0 || (v.minCoeff() > 0 && v.maxCoeff() < 1); };
  return open01(s.f) && open01(s.i) && open01(s.o) && (s.z.size() == 0 || s.z.cwiseAbs().maxCoeff() < 1);
}

// Embedding rows: one per vocabulary id, then OOV, then an all-zero pad
// row. Pad tokens are skipped entirely, so padding never changes a result.
template <typename Scalar>
struct Classifier {
  Matrix<Scalar> embedding;  // (V + 2) x D
  LayerParams<Scalar> layer1;
  LayerParams<Scalar> layer2;
  Head<Scalar> head;
  bool train_embeddings = false;

  TokenId pad_id() const { return static_cast<TokenId>(embedding.rows() - 1); }
  TokenId oov_id() const { return static_cast<TokenId>(embedding.rows() - 2); }
  int input_dim() const { return static_cast<int>(embedding.cols()); }

  static Classifier zeros(Matrix<Scalar> embedding, int hidden1, int hidden2) {
    Classifier m;
    m.embedding = std::move(embedding);
    m.layer1 = LayerParams<Scalar>::zeros(hidden1, m.input_dim());
    m.layer2 = LayerParams<Scalar>::zeros(hidden2, hidden1);
    m.head.weight.setZero(kNumClasses, hidden2);
    m.head.bias.setZero(kNumClasses);
    return m;
  }

  void check_shapes() const {
    layer1.check_shapes();
    layer2.check_shapes();
    if (embedding.rows() < 2 || layer1.input_dim() != input_dim() || layer2.input_dim() != layer1.hidden() ||
        head.weight.rows() != kNumClasses || head.weight.cols() != layer2.hidden() ||
        head.bias.size() != kNumClasses)
      throw InputError("LSTM classifier shapes are inconsistent");
  }
};

template <typename Scalar>
struct Gradients {
  LayerParams<Scalar> layer1;
  LayerParams<Scalar> layer2;
  Head<Scalar> head;
  std::map<TokenId, Vector<Scalar>> embedding;  // touched rows only

  static Gradients zeros_like(const Classifier<Scalar>& m) {
    Gradients g;
    g.layer1 = LayerParams<Scalar>::zeros(m.layer1.hidden(), m.layer1.input_dim());
    g.layer2 = LayerParams<Scalar>::zeros(m.layer2.hidden(), m.layer2.input_dim());
    g.head.weight.setZero(m.head.weight.rows(), m.head.weight.cols());
    g.head.bias.setZero(m.head.bias.size());
    return g;
  }

  Gradients& operator+=(const Gradients& o) {
    layer1 += o.layer1;
    layer2 += o.layer2;
    head += o.head;
    for (const auto& [row, v] : o.embedding) {
      auto [it, inserted] = embedding.try_emplace(row, v);
      if (!inserted) it->second += v;
    }
    return *this;
  }
};

// Calls fn(name, param_data, grad_data, size) for every dense tensor in
// declared order: layer1 f,i,o,c (recurrent, input, bias), layer2 likewise,
// then the head. Embedding rows are handled separately by callers.
template <typename Scalar, typename Fn>
void for_each_tensor(Classifier<Scalar>& m, Gradients<Scalar>& g, Fn&& fn) {
  auto layer = [&](const char* prefix, LayerParams<Scalar>& p, LayerParams<Scalar>& q) {
    const char* names[] = {"forget", "input", "output", "candidate"};
    Gate<Scalar>* ps[] = {&p.forget, &p.input, &p.output, &p.candidate};
    Gate<Scalar>* qs[] = {&q.forget, &q.input, &q.output, &q.candidate};
    for (int k = 0; k < 4; ++k) {
      const std::string base = std::string(prefix) + "." + names[k];
      fn(base + ".recurrent", ps[k]->recurrent.data(), qs[k]->recurrent.data(), ps[k]->recurrent.size());
      fn(base + ".input", ps[k]->input.data(), qs[k]->input.data(), ps[k]->input.size());
      fn(base + ".bias", ps[k]->bias.data(), qs[k]->bias.data(), ps[k]->bias.size());
    }
  };
  layer("layer1", m.layer1, g.layer1);
  layer("layer2", m.layer2, g.layer2);
  fn(std::string("head.weight"), m.head.weight.data(), g.head.weight.data(), m.head.weight.size());
  fn(std::string("head.bias"), m.head.bias.data(), g.head.bias.data(), m.head.bias.size());
}

template <typename Scalar>
struct Forward {
  std::vector<TokenId> steps;  // non-pad tokens, in order
  std::vector<CellCache<Scalar>> layer1, layer2;
  Vector<Scalar> logits;
  Vector<Scalar> probs;
  bool empty = false;  // no non-pad tokens; probs is the uniform prior
};

template <typename Derived>
Vector<typename Derived::Scalar> softmax(const Eigen::MatrixBase<Derived>& logits) {
  using S = typename Derived::Scalar;
  const S max = logits.maxCoeff();
  Vector<S> e = (logits.array() - max).exp();
  return e / e.sum();
}

// Layer 1 reads embedded tokens, layer 2 reads layer 1's hidden outputs,
// and the head reads layer 2's output at the last non-pad token. Initial
// hidden and cell states are zero.
template <typename Scalar>
Forward<Scalar> forward(const std::vector<TokenId>& tokens, const Classifier<Scalar>& m) {
  Forward<Scalar> out;
  const TokenId pad = m.pad_id();
  for (TokenId t : tokens) {
    if (t == pad) continue;
    if (t < 0 || t >= pad) throw InputError("token id outside the embedding matrix");
    out.steps.push_back(t);
  }
  if (out.steps.empty()) {
    out.empty = true;
    out.logits = Vector<Scalar>::Zero(kNumClasses);
    out.probs = Vector<Scalar>::Constant(kNumClasses, Scalar(1) / kNumClasses);
    return out;
  }
  const int h1 = m.layer1.hidden(), h2 = m.layer2.hidden();
  Vector<Scalar> z1 = Vector<Scalar>::Zero(h1), c1 = Vector<Scalar>::Zero(h1);
  Vector<Scalar> z2 = Vector<Scalar>::Zero(h2), c2 = Vector<Scalar>::Zero(h2);
  out.layer1.reserve(out.steps.size());
  out.layer2.reserve(out.steps.size());
  for (TokenId t : out.steps) {
    out.layer1.push_back(cell_forward(m.embedding.row(t).transpose(), z1, c1, m.layer1));
    z1 = out.layer1.back().z;
    c1 = out.layer1.back().c;
    out.layer2.push_back(cell_forward(z1, z2, c2, m.layer2));
    z2 = out.layer2.back().z;
    c2 = out.layer2.back().c;
  }
  out.logits = m.head.weight * z2 + m.head.bias;
  out.probs = softmax(out.logits);
  return out;
}

// Cross-entropy -log p[gold].
template <typename Derived>
typename Derived::Scalar loss(const Eigen::MatrixBase<Derived>& probs, int gold) {
  return -std::log(probs(gold));
}

namespace detail {

// Backpropagates one layer through time. `dz_out[t]` is the loss gradient
// reaching z_t from above; returns the gradient with respect to each x_t.
template <typename Scalar>
std::vector<Vector<Scalar>> layer_backward(const LayerParams<Scalar>& p, const std::vector<CellCache<Scalar>>& cache,
                                           const std::vector<Vector<Scalar>>& dz_out, LayerParams<Scalar>& grad) {
  const std::size_t steps = cache.size();
  const int h = p.hidden();
  std::vector<Vector<Scalar>> dx(steps);
  Vector<Scalar> dz_next = Vector<Scalar>::Zero(h);
  Vector<Scalar> dc_next = Vector<Scalar>::Zero(h);
  for (std::size_t t = steps; t-- > 0;) {
    const auto& s = cache[t];
    const Vector<Scalar> dz = dz_out[t] + dz_next;
    const Vector<Scalar> d_o = dz.cwiseProduct(s.tanh_c);
    const Vector<Scalar> dc =
        dz.cwiseProduct(s.o).cwiseProduct((Scalar(1) - s.tanh_c.array().square()).matrix()) + dc_next;
    const Vector<Scalar> da_f = dc.cwiseProduct(s.c_prev).cwiseProduct(s.f.cwiseProduct((Scalar(1) - s.f.array()).matrix()));
    const Vector<Scalar> da_i = dc.cwiseProduct(s.candidate).cwiseProduct(s.i.cwiseProduct((Scalar(1) - s.i.array()).matrix()));
    const Vector<Scalar> da_o = d_o.cwiseProduct(s.o.cwiseProduct((Scalar(1) - s.o.array()).matrix()));
    const Vector<Scalar> da_c = dc.cwiseProduct(s.i).cwiseProduct((Scalar(1) - s.candidate.array().square()).matrix());

    const std::pair<const Vector<Scalar>*, Gate<Scalar>*> gates[] = {
        {&da_f, &grad.forget}, {&da_i, &grad.input}, {&da_o, &grad.output}, {&da_c, &grad.candidate}};
    for (const auto& [da, g] : gates) {
      g->recurrent.noalias() += (*da) * s.z_prev.transpose();
      g->input.noalias() += (*da) * s.x.transpose();
      g->bias += *da;
    }
    dz_next = p.forget.recurrent.transpose() * da_f + p.input.recurrent.transpose() * da_i +
              p.output.recurrent.transpose() * da_o + p.candidate.recurrent.transpose() * da_c;
    dx[t] = p.forget.input.transpose() * da_f + p.input.input.transpose() * da_i +
            p.output.input.transpose() * da_o + p.candidate.input.transpose() * da_c;
    dc_next = dc.cwiseProduct(s.f);
  }
  return dx;
}

}  // namespace detail

// Gradients of `weight * loss(forward(tokens), gold)`, accumulated into
// `grad` (which must be shaped like `m`). Embedding rows are included only
// when m.train_embeddings.
template <typename Scalar>
void backward(const Classifier<Scalar>& m, const Forward<Scalar>& fwd, int gold, Gradients<Scalar>& grad,
              Scalar weight = Scalar(1)) {
  if (fwd.empty) return;
  Vector<Scalar> dlogits = fwd.probs;
  dlogits(gold) -= Scalar(1);
  dlogits *= weight;
  const std::size_t steps = fwd.steps.size();
  grad.head.weight.noalias() += dlogits * fwd.layer2.back().z.transpose();
  grad.head.bias += dlogits;

  std::vector<Vector<Scalar>> dz2(steps, Vector<Scalar>::Zero(m.layer2.hidden()));
  dz2.back() = m.head.weight.transpose() * dlogits;
  const auto dz1 = detail::layer_backward(m.layer2, fwd.layer2, dz2, grad.layer2);
  const auto dx = detail::layer_backward(m.layer1, fwd.layer1, dz1, grad.layer1);
  if (m.train_embeddings) {
    for (std::size_t t = 0; t < steps; ++t) {
      auto [it, inserted] = grad.embedding.try_emplace(fwd.steps[t], dx[t]);
      if (!inserted) it->second += dx[t];
    }
  }
}

template <typename Scalar>
Gradients<Scalar> backward(const Classifier<Scalar>& m, const Forward<Scalar>& fwd, int gold) {
  auto g = Gradients<Scalar>::zeros_like(m);
  backward(m, fwd, gold, g);
  return g;
}

// Argmax with ties to the lower class index.
template <typename Derived>
int predict_class(const Eigen::MatrixBase<Derived>& probs) {
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < probs.size(); ++k)
    if (probs(k) > probs(best)) best = k;
  return static_cast<int>(best);
}

// Keeps the first max_len tokens and left-pads to max_len.
inline std::vector<TokenId> pad_sequence(const std::vector<TokenId>& tokens, std::size_t max_len, TokenId pad) {
  std::vector<TokenId> out(max_len, pad);
  const std::size_t n = std::min(tokens.size(), max_len);
  std::copy(tokens.begin(), tokens.begin() + static_cast<std::ptrdiff_t>(n),
            out.begin() + static_cast<std::ptrdiff_t>(max_len - n));
  return out;
}

}  // namespace topicsent::lstm

#endif  // TOPICSENT_LSTM_HPP_
