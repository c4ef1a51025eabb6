// Apache License, Version 2.0, refer to LICENSE.txt

// Test-only data generators and brute-force oracles.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "essayplan/corpus.hpp"
#include "essayplan/embedding.hpp"
#include "essayplan/ordering.hpp"

namespace essayplan::testing {

/// Builds a corpus from whitespace-separated sentences, one document per
/// inner vector; ids are "d0", "d1", ...
Corpus corpus_from(const std::vector<std::vector<std::string>>& documents);

/// 200 one-sentence documents "sun moon" interleaved with 200 "cat dog".
Corpus two_block_corpus();

/// Documents whose sentences all end with the document's marker token
/// (one of `markers`), preceded by one or two filler words.
Corpus marker_corpus(std::size_t documents, std::size_t markers, std::uint64_t seed);

/// Documents of 5..8 sentences where sentence i shares a link word with
/// sentence i+1, carries a position token "p<i>", and two noise words
/// drawn from a small shared pool.
Corpus chain_corpus(std::size_t documents, std::uint64_t seed);

/// Independent N(0, 1) vectors for every corpus word, in vocabulary order.
EmbeddingTable random_embeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed);

/// Uniform [0, 1) off-diagonal scores.
CoherenceMatrix random_matrix(std::size_t n, std::uint64_t seed);

struct BruteForceBest {
  double score;
  std::vector<std::vector<std::size_t>> optimal_orders;  // lexicographic
};

/// Enumerates every order beginning at `start` and sums scores left to
/// right.
BruteForceBest brute_force_order(const CoherenceMatrix& matrix, std::size_t start);

}  // namespace essayplan::testing
