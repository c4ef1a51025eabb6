// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "essayplan/coherence.hpp"
#include "essayplan/config.hpp"
#include "essayplan/corpus.hpp"
#include "essayplan/embedding.hpp"
#include "essayplan/ordering.hpp"
#include "essayplan/selection.hpp"
#include "essayplan/thesaurus.hpp"
#include "essayplan/topic_model.hpp"
#include "essayplan/topic_understanding.hpp"
#include "json.hpp"

namespace essayplan {

struct ResourcePaths {
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> thesaurus;
  std::optional<std::filesystem::path> lda;
  std::optional<std::filesystem::path> recnn;
  std::optional<std::filesystem::path> stopwords;
};

struct PipelineConfig {
  ExpansionBackend backend = ExpansionBackend::Embedding;
  std::size_t expansion_k = 20;
  ThesExpansionConfig thesaurus;

  Representation representation = Representation::Embedding;
  ClusterConfig cluster;

  SelectionConfig selection;
  /// Drop selected sentences whose score is not above zero.
  bool require_positive_score = true;

  SelectionMethod feedback_method = SelectionMethod::Counting;
  std::size_t feedback_rounds = 1;
  std::size_t feedback_words = 3;

  CoherenceVariant coherence = CoherenceVariant::BowBoolean;
  DecoderConfig decoder;

  ResourcePaths paths;
  std::string sentence_separator = " ";
  std::uint64_t seed = 1;

  /// Reads the namespaced keys (expansion.*, cluster.*, selection.*,
  /// feedback.*, coherence.*, ordering.*, resources.*, output.*, seed).
  static PipelineConfig from_config(const Config& config);
};

/// Everything the pipeline reads, loaded once. The corpus carries
/// position-based discourse tags.
struct PipelineResources {
  Corpus corpus;
  std::optional<EmbeddingTable> embeddings;
  std::optional<Thesaurus> thesaurus;
  std::optional<LdaModel> lda;
  std::optional<RecnnParams> recnn;
  WordSet stopwords;

  /// Loads exactly the resources the configuration needs; throws when a
  /// needed path is missing.
  static PipelineResources load(const PipelineConfig& config);

  TopicResources topic_resources(const PipelineConfig& config) const;
  CoherenceModel coherence_model(CoherenceVariant variant) const;
  const EmbeddingTable* embedding_table() const { return embeddings ? &*embeddings : nullptr; }
};

/// Applies the position tagger to every document.
Corpus tag_corpus(const Corpus& corpus);

struct Paragraph {
  Argument argument;
  std::vector<Sentence> sentences;  // decoded order
};

struct Essay {
  std::string topic;
  std::vector<Paragraph> paragraphs;

  /// Paragraphs separated by a blank line; sentences joined by `separator`.
  std::string text(std::string_view separator = " ") const;
};

struct EssayResult {
  Essay essay;
  nlohmann::ordered_json trace;
};

/// topic -> expansion -> arguments -> per-argument selection with
/// feedback rounds -> per-argument ordering -> essay. A sentence is used
/// by at most one paragraph (earlier arguments win).
EssayResult generate_essay(std::string_view topic, const PipelineConfig& config,
                           const PipelineResources& resources);

}  // namespace essayplan
