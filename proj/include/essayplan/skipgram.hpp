// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "essayplan/corpus.hpp"
#include "essayplan/embedding.hpp"

namespace essayplan {

struct SkipgramConfig {
  std::size_t dim = 50;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
};

/// Skip-gram with negative sampling. Noise words are drawn from the
/// unigram distribution raised to 0.75; draws that hit the context or
/// the center word are dropped. Context windows never cross a
/// sentence boundary. Single-threaded and deterministic for a given seed.
/// The returned table holds the input vectors, most frequent word first.
EmbeddingTable train_skipgram(const Corpus& corpus, const SkipgramConfig& config);

/// Negative-sampling objective of one (center, context) pair:
///   -log s(u_ctx . v) - sum_n log s(-u_n . v)
/// where v is the center input vector and u are output vectors.
double sgns_loss(std::span<const double> center, std::span<const double> context,
                 std::span<const Vector> negatives);

struct SgnsGradient {
  Vector center;
  Vector context;
  std::vector<Vector> negatives;
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           std::span<const Vector> negatives);

}  // namespace essayplan
