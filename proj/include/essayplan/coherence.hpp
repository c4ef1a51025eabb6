// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "essayplan/corpus.hpp"
#include "essayplan/embedding.hpp"
#include "essayplan/matrix.hpp"

namespace essayplan {

enum class CoherenceVariant { BowBoolean, BowFrequency, EmbedAverage, RecursiveNn };

std::string_view to_string(CoherenceVariant variant);
/// Accepts bow_boolean, bow_frequency, embed_average, recursive_nn.
CoherenceVariant parse_coherence_variant(std::string_view name);

/// Parameters of the recursive composition and the pair scorer.
///   composition: v <- tanh(composition_weights [v; w] + composition_bias)   (d x 2d)
///   hidden:      h  = tanh(hidden_weights [v1; v2] + hidden_bias)          (h x 2d)
///   output:      o  = output_weights h + output_bias                       (2 x h)
struct RecnnParams {
  std::size_t dim = 0;
  std::size_t hidden = 0;
  Matrix composition_weights;
  Vector composition_bias;
  Matrix hidden_weights;
  Vector hidden_bias;
  Matrix output_weights;
  Vector output_bias;

  static RecnnParams zeros(std::size_t dim, std::size_t hidden);
  /// Every entry uniform in [-scale, scale].
  static RecnnParams uniform(std::size_t dim, std::size_t hidden, double scale, std::uint64_t seed);

  /// The six parameter blocks in declaration order.
  std::array<std::span<double>, 6> blocks();
  std::array<std::span<const double>, 6> blocks() const;
  std::size_t num_parameters() const;

  friend bool operator==(const RecnnParams&, const RecnnParams&) = default;
};

/// Text format: header "d h", then the six blocks in row-major order,
/// one matrix row or bias vector per line.
RecnnParams read_recnn(std::istream& in);
RecnnParams load_recnn(const std::filesystem::path& path);
void write_recnn(const RecnnParams& params, std::ostream& out);
void save_recnn(const RecnnParams& params, const std::filesystem::path& path);

/// A pairwise coherence function f(s1, s2): how well s2 follows s1.
/// The embedding table is borrowed and must outlive the model.
class CoherenceModel {
 public:
  static CoherenceModel bow_boolean();
  static CoherenceModel bow_frequency();
  static CoherenceModel embed_average(const EmbeddingTable& table);
  static CoherenceModel recursive_nn(const EmbeddingTable& table, RecnnParams params);

  CoherenceVariant variant() const { return variant_; }
  const EmbeddingTable* table() const { return table_; }
  const RecnnParams* params() const { return params_ ? &*params_ : nullptr; }

 private:
  CoherenceModel(CoherenceVariant variant, const EmbeddingTable* table, std::optional<RecnnParams> params);

  CoherenceVariant variant_;
  const EmbeddingTable* table_;
  std::optional<RecnnParams> params_;
};

/// Dense sentence vector: the token average for embed_average, the
/// left-branching recursive fold for recursive_nn. OOV tokens are
/// skipped; throws when none is left or for the bag-of-words variants.
Vector compose_sentence(const Sentence& sentence, const CoherenceModel& model);

/// A sentence's representation under one model, reusable across pairs.
struct SentenceFeatures {
  std::map<std::string, double, std::less<>> bag;
  Vector vector;
};

SentenceFeatures featurize(const Sentence& sentence, const CoherenceModel& model);
double score_features(const CoherenceModel& model, const SentenceFeatures& first,
                      const SentenceFeatures& second);

/// Cosine in [-1, 1] for the bag and average variants; P(class 1) in
/// (0, 1) for recursive_nn.
double score_pair(const CoherenceModel& model, const Sentence& first, const Sentence& second);

enum class PairLabel { Corrupted = 0, TruePair = 1 };

/// A training pair. For a corrupted sample `second` is the original
/// follower and `replacement` the randomly drawn sentence that is scored.
struct PairSample {
  const Sentence* first = nullptr;
  const Sentence* second = nullptr;
  PairLabel label = PairLabel::TruePair;
  const Sentence* replacement = nullptr;

  const Sentence& follower() const { return label == PairLabel::TruePair ? *second : *replacement; }
};

/// One true pair per adjacent sentence pair, each followed by
/// `negatives_per_positive` corrupted pairs whose replacement is drawn
/// uniformly from all corpus sentences other than the true follower.
std::vector<PairSample> sample_pairs(const Corpus& corpus, std::size_t negatives_per_positive,
                                     std::uint64_t seed);

}  // namespace essayplan
