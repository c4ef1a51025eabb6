// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "essayplan/coherence.hpp"

namespace essayplan {

/// Left-branching fold over the in-vocabulary tokens, starting from the
/// first token's embedding. Throws when every token is OOV.
Vector compose_recursive(const RecnnParams& params, const EmbeddingTable& table,
                         std::span<const std::string> tokens);

/// Softmax over the two output logits for the pair (v1, v2).
std::array<double, 2> pair_probabilities(const RecnnParams& params, std::span<const double> first,
                                         std::span<const double> second);

struct RecnnLossGradient {
  double loss = 0.0;  // -log P_label
  RecnnParams gradient;
};

/// Cross-entropy loss of one labelled pair and its gradient with respect
/// to every parameter block. Embeddings are treated as constants.
RecnnLossGradient recnn_loss_gradient(const RecnnParams& params, const EmbeddingTable& table,
                                      const Sentence& first, const Sentence& second, PairLabel label);

double recnn_loss(const RecnnParams& params, const EmbeddingTable& table, const Sentence& first,
                  const Sentence& second, PairLabel label);

struct RecnnTrainConfig {
  double learning_rate = 0.05;
  std::size_t epochs = 20;
  std::size_t hidden_size = 16;
  std::size_t negatives_per_positive = 1;
  std::uint64_t seed = 1;
  double init_scale = 0.01;
};

struct RecnnTrainResult {
  RecnnParams params;
  std::vector<double> epoch_loss;  // mean per-sample loss of each epoch
};

/// Plain SGD over the pair samples of the corpus, reshuffled every epoch.
/// Throws TrainingError on a non-finite loss.
RecnnTrainResult train_recnn(const Corpus& corpus, const EmbeddingTable& table,
                             const RecnnTrainConfig& config);

}  // namespace essayplan
