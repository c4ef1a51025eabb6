// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "essayplan/coherence.hpp"
#include "essayplan/corpus.hpp"
#include "essayplan/matrix.hpp"

namespace essayplan {

/// Pairwise scores; entry (i, j) is f(s_i, s_j), "j follows i". The
/// diagonal is never read.
class CoherenceMatrix {
 public:
  CoherenceMatrix() = default;
  explicit CoherenceMatrix(Matrix scores);

  std::size_t size() const { return scores_.rows(); }
  double operator()(std::size_t from, std::size_t to) const { return scores_(from, to); }
  const Matrix& scores() const { return scores_; }

 private:
  Matrix scores_;
};

struct Ordering {
  std::vector<std::size_t> permutation;

  std::size_t size() const { return permutation.size(); }
  friend bool operator==(const Ordering&, const Ordering&) = default;
};

CoherenceMatrix build_matrix(std::span<const Sentence* const> sentences, const CoherenceModel& model);
CoherenceMatrix build_matrix(std::span<const Sentence> sentences, const CoherenceModel& model);

/// Sum of scores over adjacent pairs, added left to right.
double chain_score(const CoherenceMatrix& matrix, const Ordering& order);

/// Appends the unvisited sentence with the highest score from the current
/// one; ties go to the smallest index.
Ordering order_greedy(const CoherenceMatrix& matrix, std::size_t start);

inline constexpr std::size_t kDefaultExactLimit = 12;

/// Exact maximiser of the chain score over all orders beginning at
/// `start`, by dynamic programming over (visited set, last sentence).
/// Among optimal orders the lexicographically smallest is returned.
/// Throws when the matrix is larger than max_n.
Ordering order_exact_dp(const CoherenceMatrix& matrix, std::size_t start,
                        std::size_t max_n = kDefaultExactLimit);

/// Beam search over partial orders ranked by chain score, then by the
/// partial permutation in lexicographic order. Width 1 reproduces
/// order_greedy.
Ordering order_beam(const CoherenceMatrix& matrix, std::size_t start, std::size_t beam_width);

/// Fraction of the predicted order's directed adjacent pairs that are
/// also adjacent, in the same direction, in the gold order.
double bigram_accuracy(const Ordering& predicted, const Ordering& gold);
/// Number of matching directed adjacent pairs.
std::size_t bigram_matches(const Ordering& predicted, const Ordering& gold);

enum class Decoder { Greedy, ExactDp, Beam };

std::string_view to_string(Decoder decoder);
/// Accepts greedy, dp, beam.
Decoder parse_decoder(std::string_view name);

struct DecoderConfig {
  Decoder decoder = Decoder::ExactDp;
  std::size_t beam_width = 8;
  std::size_t max_exact = kDefaultExactLimit;
};

/// Runs the configured decoder. The exact decoder hands matrices larger
/// than max_exact to beam search.
Ordering decode(const CoherenceMatrix& matrix, std::size_t start, const DecoderConfig& config);

struct EvaluationConfig {
  DecoderConfig decoder;
  /// Sentences are presented to the decoder in a seeded random order so
  /// that index tie-breaking cannot reveal the gold order.
  bool shuffle = true;
  std::uint64_t seed = 1;
};

struct DocumentEvaluation {
  std::string id;
  std::size_t sentences = 0;
  std::size_t matches = 0;
  double accuracy = 0.0;
  Ordering predicted;  // in original sentence indices
};

struct EvaluationReport {
  std::string model;
  std::string decoder;
  std::vector<DocumentEvaluation> documents;
  std::size_t skipped = 0;
  double mean_accuracy = 0.0;    // unweighted mean over documents
  double pooled_accuracy = 0.0;  // matches / pairs over all documents
};

/// Orders the sentences of every holdout document from its true first
/// sentence and scores the result against the original order. Documents
/// with fewer than two sentences are skipped and counted.
EvaluationReport evaluate_holdout(const Corpus& holdout, const CoherenceModel& model,
                                  const EvaluationConfig& config);

/// {"decoder", "model", "mean_accuracy", "pooled_accuracy", "documents": [{"id", "n", "accuracy"}], "skipped"}
std::string evaluation_report_json(const EvaluationReport& report);

}  // namespace essayplan
