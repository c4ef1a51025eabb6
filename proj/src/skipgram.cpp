// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/skipgram.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

#include "essayplan/error.hpp"

namespace essayplan {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// d(loss)/d(u . v) for one output word with label 1 (context) or 0 (noise).
double logit_gradient(std::span<const double> center, std::span<const double> output, double label) {
  return sigmoid(dot(output, center)) - label;
}

// log(1 + exp(-x)) without overflow.
double softplus_neg(double x) { return x > 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

}  // namespace

double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const Vector> negatives) {
  double loss = softplus_neg(dot(context, center));
  for (const Vector& n : negatives) loss += softplus_neg(-dot(n, center));
  return loss;
}

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const Vector> negatives) {
  const std::size_t dim = center.size();
  SgnsGradient grad{Vector(dim, 0.0), Vector(dim, 0.0), {}};
  auto accumulate = [&](std::span<const double> output, double label, Vector& out_grad) {
    const double g = logit_gradient(center, output, label);
    for (std::size_t i = 0; i < dim; ++i) {
      grad.center[i] += g * output[i];
      out_grad[i] = g * center[i];
    }
  };
  accumulate(context, 1.0, grad.context);
  for (const Vector& n : negatives) {
    grad.negatives.emplace_back(dim, 0.0);
    accumulate(n, 0.0, grad.negatives.back());
  }
  return grad;
}

EmbeddingTable train_skipgram(const Corpus& corpus, const SkipgramConfig& config) {
  if (config.dim == 0 || config.window == 0 || config.negatives == 0 || config.epochs == 0 ||
      config.min_count == 0 || !(config.learning_rate > 0.0)) {
    throw ValidationError("skipgram configuration values must be positive");
  }
  if (corpus.empty()) throw ValidationError("skipgram training needs a non-empty corpus");

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (const auto& [word, count] : corpus.vocabulary()) {
    if (count >= config.min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) {
    throw ValidationError("no word reaches min_count " + std::to_string(config.min_count));
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < kept.size(); ++i) index.emplace(kept[i].first, i);

  std::vector<std::vector<std::size_t>> sentences;
  std::size_t total_tokens = 0;
  for (const Document& doc : corpus.documents()) {
    for (const Sentence& s : doc.sentences) {
      std::vector<std::size_t> ids;
      for (const std::string& t : s.tokens) {
        auto it = index.find(t);
        if (it != index.end()) ids.push_back(it->second);
      }
      total_tokens += ids.size();
      if (ids.size() >= 2) sentences.push_back(std::move(ids));
    }
  }

  const std::size_t vocab = kept.size();
  const std::size_t dim = config.dim;
  std::mt19937_64 rng(config.seed);

  std::vector<double> input(vocab * dim);
  std::vector<double> output(vocab * dim, 0.0);
  std::uniform_real_distribution<double> init(-0.5 / static_cast<double>(dim),
                                              0.5 / static_cast<double>(dim));
  for (double& x : input) x = init(rng);

  std::vector<double> weights;
  weights.reserve(vocab);
  for (const auto& [word, count] : kept) weights.push_back(std::pow(static_cast<double>(count), 0.75));
  std::discrete_distribution<std::size_t> noise(weights.begin(), weights.end());

  auto in_row = [&](std::size_t w) { return std::span<double>(input.data() + w * dim, dim); };
  auto out_row = [&](std::size_t w) { return std::span<double>(output.data() + w * dim, dim); };

  Vector center_grad(dim);
  const double planned = static_cast<double>(config.epochs) * static_cast<double>(total_tokens);
  double processed = 0.0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (const auto& ids : sentences) {
      for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        const double lr =
            config.learning_rate * std::max(1e-4, 1.0 - processed / std::max(planned, 1.0));
        processed += 1.0;
        const std::size_t lo = pos >= config.window ? pos - config.window : 0;
        const std::size_t hi = std::min(ids.size() - 1, pos + config.window);
        auto center = in_row(ids[pos]);
        for (std::size_t c = lo; c <= hi; ++c) {
          if (c == pos) continue;
          const std::size_t context = ids[c];
          std::fill(center_grad.begin(), center_grad.end(), 0.0);
          auto update = [&](std::size_t target, double label) {
            auto out = out_row(target);
            const double g = logit_gradient(center, out, label);
            for (std::size_t i = 0; i < dim; ++i) {
              center_grad[i] += g * out[i];
              out[i] -= lr * g * center[i];
            }
          };
          update(context, 1.0);
          for (std::size_t n = 0; n < config.negatives; ++n) {
            // Draws equal to the context or the center word are discarded.
            const std::size_t target = noise(rng);
            if (target == context || target == ids[pos]) continue;
            update(target, 0.0);
          }
          for (std::size_t i = 0; i < dim; ++i) center[i] -= lr * center_grad[i];
        }
      }
    }
  }

  EmbeddingTable table(dim);
  for (std::size_t w = 0; w < vocab; ++w) table.add(kept[w].first, in_row(w));
  return table;
}

}  // namespace essayplan
