// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "essayplan/corpus.hpp"
#include "essayplan/matrix.hpp"

namespace essayplan {

struct LdaConfig {
  std::size_t num_topics = 10;
  std::optional<double> alpha;  // defaults to 50 / num_topics
  double beta = 0.01;
  std::size_t iterations = 500;
  std::uint64_t seed = 1;
};

/// Topic-word distributions phi (K x V); every row sums to one.
class LdaModel {
 public:
  LdaModel(std::vector<std::string> vocabulary, double alpha, double beta, Matrix phi);

  std::size_t num_topics() const { return phi_.rows(); }
  std::size_t vocabulary_size() const { return vocabulary_.size(); }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const Matrix& phi() const { return phi_; }

  bool contains(std::string_view word) const;
  std::size_t word_index(std::string_view word) const;  // throws OovError

  /// The word's topic distribution: phi[k][w] / sum_j phi[j][w].
  Vector topic_vector(std::string_view word) const;

 private:
  std::vector<std::string> vocabulary_;
  std::map<std::string, std::size_t, std::less<>> index_;
  double alpha_;
  double beta_;
  Matrix phi_;
};

/// Collapsed Gibbs sampler over the documents of a corpus. Each document
/// is one bag of tokens; the vocabulary is the corpus vocabulary in
/// lexicographic order.
class LdaGibbsSampler {
 public:
  LdaGibbsSampler(const Corpus& corpus, const LdaConfig& config);

  /// One full sweep over every token.
  void sweep();

  std::size_t num_tokens() const { return topic_of_.size(); }
  /// Sum over topics of n_k; always equals num_tokens().
  std::size_t assigned_tokens() const;
  const std::vector<std::size_t>& topic_totals() const { return topic_total_; }

  /// phi[k][w] = (n_kw + beta) / (n_k + V * beta) from the current state.
  LdaModel model() const;

 private:
  std::size_t topics_;
  double alpha_;
  double beta_;
  std::vector<std::string> vocabulary_;
  std::vector<std::size_t> word_of_;   // per token
  std::vector<std::size_t> doc_of_;    // per token
  std::vector<std::size_t> topic_of_;  // per token
  std::vector<std::size_t> doc_topic_;   // D x K
  std::vector<std::size_t> topic_word_;  // K x V
  std::vector<std::size_t> topic_total_;
  std::vector<double> weights_;
  std::mt19937_64 rng_;
};

LdaModel train_lda(const Corpus& corpus, const LdaConfig& config);

/// Text format: "K V alpha beta", the vocabulary line, then K rows of V
/// probabilities.
LdaModel read_lda(std::istream& in);
LdaModel load_lda(const std::filesystem::path& path);
void write_lda(const LdaModel& model, std::ostream& out);
void save_lda(const LdaModel& model, const std::filesystem::path& path);

}  // namespace essayplan
