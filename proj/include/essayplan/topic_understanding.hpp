// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "essayplan/embedding.hpp"
#include "essayplan/thesaurus.hpp"
#include "essayplan/topic_model.hpp"

namespace essayplan {

enum class ExpansionBackend { Thesaurus, TopicModel, Embedding };
enum class Representation { TopicModel, Embedding };
enum class ClusterAlgorithm { KMeans, AffinityPropagation };

std::string_view to_string(ExpansionBackend backend);

/// Non-owning handles to whatever resources are loaded.
struct TopicResources {
  const Thesaurus* thesaurus = nullptr;
  const LdaModel* lda = nullptr;
  const EmbeddingTable* embeddings = nullptr;
  ThesExpansionConfig thesaurus_config;
};

/// One cluster of supporting words.
struct Argument {
  int id = 0;
  std::vector<std::string> supporting_words;  // sorted, unique
  std::optional<Vector> centroid;
};

/// Expands `topic` with the chosen backend and keeps the k most
/// confident candidates. The topic itself is never returned.
std::vector<ScoredWord> expand_topic(std::string_view topic, ExpansionBackend backend,
                                     const TopicResources& resources, std::size_t k);

struct ClusterConfig {
  ClusterAlgorithm algorithm = ClusterAlgorithm::KMeans;
  std::size_t k = 3;
  std::size_t max_iterations = 300;
  double damping = 0.9;
  std::optional<double> preference;  // empty -> median
  std::size_t min_cluster_size = 3;
  std::uint64_t seed = 1;
};

struct ClusteringOutcome {
  std::vector<Argument> arguments;
  std::vector<std::string> oov_words;
  std::size_t dropped_clusters = 0;
};

/// Embeds the words, clusters them, drops clusters smaller than
/// min_cluster_size, and orders the Arguments by size (desc) then by
/// smallest member. K-Means uses Euclidean distance; affinity propagation
/// uses cosine similarity. Throws when no word is representable.
ClusteringOutcome cluster_arguments(std::span<const std::string> words, Representation representation,
                                    const ClusterConfig& config, const TopicResources& resources);

}  // namespace essayplan
