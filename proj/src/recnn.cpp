// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/recnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "essayplan/error.hpp"

namespace essayplan {

namespace {

// Node states of one left-branching tree: nodes[0] is the first leaf,
// nodes[t] = tanh(Wc [nodes[t-1]; leaves[t]] + bc).
struct Tree {
  std::vector<std::span<const double>> leaves;
  std::vector<Vector> nodes;
};

Tree fold(const RecnnParams& p, const EmbeddingTable& table, std::span<const std::string> tokens) {
  Tree tree;
  for (const std::string& t : tokens) {
    auto v = table.find(t);
    if (!v.empty()) tree.leaves.push_back(v);
  }
  if (tree.leaves.empty()) throw Error("no token of the sentence is in the embedding table");
  const std::size_t d = p.dim;
  tree.nodes.emplace_back(tree.leaves[0].begin(), tree.leaves[0].end());
  for (std::size_t t = 1; t < tree.leaves.size(); ++t) {
    const Vector& left = tree.nodes.back();
    const auto right = tree.leaves[t];
    Vector next(d);
    for (std::size_t r = 0; r < d; ++r) {
      const auto w = p.composition_weights.row(r);
      double z = p.composition_bias[r];
      for (std::size_t c = 0; c < d; ++c) z += w[c] * left[c] + w[d + c] * right[c];
      next[r] = std::tanh(z);
    }
    tree.nodes.push_back(std::move(next));
  }
  return tree;
}

struct Forward {
  Vector hidden;
  std::array<double, 2> logits;
  std::array<double, 2> probabilities;
};

Forward score(const RecnnParams& p, std::span<const double> v1, std::span<const double> v2) {
  const std::size_t d = p.dim;
  Forward f;
  f.hidden.resize(p.hidden);
  for (std::size_t r = 0; r < p.hidden; ++r) {
    const auto w = p.hidden_weights.row(r);
    double z = p.hidden_bias[r];
    for (std::size_t c = 0; c < d; ++c) z += w[c] * v1[c] + w[d + c] * v2[c];
    f.hidden[r] = std::tanh(z);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    const auto w = p.output_weights.row(c);
    f.logits[c] = std::inner_product(w.begin(), w.end(), f.hidden.begin(), p.output_bias[c]);
  }
  // Two-way softmax written as a logistic of the logit difference.
  f.probabilities[1] = 1.0 / (1.0 + std::exp(f.logits[0] - f.logits[1]));
  f.probabilities[0] = 1.0 - f.probabilities[1];
  return f;
}

// -log P_label, evaluated without forming the probability.
double negative_log_probability(const std::array<double, 2>& logits, PairLabel label) {
  const double margin = label == PairLabel::TruePair ? logits[0] - logits[1] : logits[1] - logits[0];
  return margin > 0 ? margin + std::log1p(std::exp(-margin)) : std::log1p(std::exp(margin));
}

// Accumulates composition gradients for one tree given dL/d(root).
void backprop_tree(const RecnnParams& p, const Tree& tree, Vector upstream, RecnnParams& grad) {
  const std::size_t d = p.dim;
  Vector pre(d);
  for (std::size_t t = tree.nodes.size() - 1; t >= 1; --t) {
    const Vector& node = tree.nodes[t];
    const Vector& left = tree.nodes[t - 1];
    const auto right = tree.leaves[t];
    for (std::size_t r = 0; r < d; ++r) pre[r] = upstream[r] * (1.0 - node[r] * node[r]);
    Vector down(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
      auto gw = grad.composition_weights.row(r);
      const auto w = p.composition_weights.row(r);
      for (std::size_t c = 0; c < d; ++c) {
        gw[c] += pre[r] * left[c];
        gw[d + c] += pre[r] * right[c];
        down[c] += w[c] * pre[r];
      }
      grad.composition_bias[r] += pre[r];
    }
    upstream = std::move(down);
  }
}

}  // namespace

Vector compose_recursive(const RecnnParams& params, const EmbeddingTable& table,
                         std::span<const std::string> tokens) {
  if (params.dim != table.dim()) throw ValidationError("recursive network and embedding dimensions differ");
  return fold(params, table, tokens).nodes.back();
}

std::array<double, 2> pair_probabilities(const RecnnParams& params, std::span<const double> first,
                                         std::span<const double> second) {
  return score(params, first, second).probabilities;
}

double recnn_loss(const RecnnParams& params, const EmbeddingTable& table, const Sentence& first,
                  const Sentence& second, PairLabel label) {
  const Tree a = fold(params, table, first.tokens);
  const Tree b = fold(params, table, second.tokens);
  return negative_log_probability(score(params, a.nodes.back(), b.nodes.back()).logits, label);
}

RecnnLossGradient recnn_loss_gradient(const RecnnParams& params, const EmbeddingTable& table,
                                      const Sentence& first, const Sentence& second, PairLabel label) {
  const std::size_t d = params.dim;
  const Tree a = fold(params, table, first.tokens);
  const Tree b = fold(params, table, second.tokens);
  const Vector& v1 = a.nodes.back();
  const Vector& v2 = b.nodes.back();
  const Forward f = score(params, v1, v2);

  RecnnLossGradient out{negative_log_probability(f.logits, label), RecnnParams::zeros(d, params.hidden)};
  RecnnParams& g = out.gradient;

  const std::size_t target = label == PairLabel::TruePair ? 1 : 0;
  std::array<double, 2> dlogit{f.probabilities[0], f.probabilities[1]};
  dlogit[target] -= 1.0;

  Vector dhidden(params.hidden, 0.0);
  for (std::size_t c = 0; c < 2; ++c) {
    auto gw = g.output_weights.row(c);
    const auto w = params.output_weights.row(c);
    for (std::size_t r = 0; r < params.hidden; ++r) {
      gw[r] = dlogit[c] * f.hidden[r];
      dhidden[r] += w[r] * dlogit[c];
    }
    g.output_bias[c] = dlogit[c];
  }

  Vector dv1(d, 0.0), dv2(d, 0.0);
  for (std::size_t r = 0; r < params.hidden; ++r) {
    const double pre = dhidden[r] * (1.0 - f.hidden[r] * f.hidden[r]);
    auto gw = g.hidden_weights.row(r);
    const auto w = params.hidden_weights.row(r);
    for (std::size_t c = 0; c < d; ++c) {
      gw[c] = pre * v1[c];
      gw[d + c] = pre * v2[c];
      dv1[c] += w[c] * pre;
      dv2[c] += w[d + c] * pre;
    }
    g.hidden_bias[r] = pre;
  }

  backprop_tree(params, a, std::move(dv1), g);
  backprop_tree(params, b, std::move(dv2), g);
  return out;
}

RecnnTrainResult train_recnn(const Corpus& corpus, const EmbeddingTable& table,
                             const RecnnTrainConfig& config) {
  if (config.epochs == 0 || config.hidden_size == 0) {
    throw ValidationError("recursive network training needs positive epochs and hidden size");
  }
  if (!(config.learning_rate >= 0.0)) throw ValidationError("learning rate must be non-negative");

  RecnnTrainResult result{RecnnParams::uniform(table.dim(), config.hidden_size, config.init_scale, config.seed),
                          {}};
  std::vector<PairSample> samples = sample_pairs(corpus, config.negatives_per_positive, config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t step = 0; step < order.size(); ++step) {
      const PairSample& sample = samples[order[step]];
      RecnnLossGradient lg;
      try {
        lg = recnn_loss_gradient(result.params, table, *sample.first, sample.follower(), sample.label);
      } catch (const Error& e) {
        throw TrainingError("epoch " + std::to_string(epoch + 1) + ", sample " + std::to_string(step) +
                            " (document '" + sample.first->doc_id + "', sentence " +
                            std::to_string(sample.first->index) + "): " + e.what());
      }
      if (!std::isfinite(lg.loss)) {
        throw TrainingError("non-finite loss at epoch " + std::to_string(epoch + 1) + ", sample " +
                            std::to_string(step) + " (document '" + sample.first->doc_id +
                            "', sentence " + std::to_string(sample.first->index) + ")");
      }
      total += lg.loss;
      if (config.learning_rate == 0.0) continue;
      auto params = result.params.blocks();
      auto grads = std::as_const(lg.gradient).blocks();
      for (std::size_t b = 0; b < params.size(); ++b) {
        for (std::size_t i = 0; i < params[b].size(); ++i) params[b][i] -= config.learning_rate * grads[b][i];
      }
    }
    result.epoch_loss.push_back(total / static_cast<double>(samples.size()));
  }
  return result;
}

}  // namespace essayplan
