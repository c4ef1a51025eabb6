// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/topic_understanding.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "essayplan/clustering.hpp"
#include "essayplan/error.hpp"

namespace essayplan {

std::string_view to_string(ExpansionBackend backend) {
  switch (backend) {
    case ExpansionBackend::Thesaurus: return "thes";
    case ExpansionBackend::TopicModel: return "tm";
    case ExpansionBackend::Embedding: return "we";
  }
  return "unknown";
}

namespace {

std::vector<ScoredWord> topic_model_neighbors(const LdaModel& lda, std::string_view topic,
                                              std::size_t k) {
  const Vector query = lda.topic_vector(topic);
  std::vector<ScoredWord> scored;
  for (const std::string& w : lda.vocabulary()) {
    if (w == topic) continue;
    scored.push_back({w, cosine(query, lda.topic_vector(w))});
  }
  auto by_score = [](const ScoredWord& a, const ScoredWord& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  };
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k), scored.end(),
                    by_score);
  scored.resize(k);
  return scored;
}

template <typename T>
const T& require(const T* resource, ExpansionBackend backend, const char* what) {
  if (resource == nullptr) {
    throw ValidationError(std::string("backend '") + std::string(to_string(backend)) + "' needs " + what);
  }
  return *resource;
}

}  // namespace

std::vector<ScoredWord> expand_topic(std::string_view topic, ExpansionBackend backend,
                                     const TopicResources& resources, std::size_t k) {
  if (k == 0) throw ValidationError("topic expansion must keep at least one word");
  try {
    switch (backend) {
      case ExpansionBackend::Thesaurus: {
        const auto& thesaurus = require(resources.thesaurus, backend, "a thesaurus");
        ThesExpansionConfig config = resources.thesaurus_config;
        config.max_words = std::min(config.max_words, k);
        std::vector<ScoredWord> out;
        for (auto& [word, score] : expand_thesaurus(thesaurus, topic, config)) {
          out.push_back({std::move(word), static_cast<double>(score)});
        }
        return out;
      }
      case ExpansionBackend::TopicModel:
        return topic_model_neighbors(require(resources.lda, backend, "a topic model"), topic, k);
      case ExpansionBackend::Embedding:
        return nearest_neighbors(require(resources.embeddings, backend, "word embeddings"), topic, k);
    }
  } catch (const OovError& e) {
    throw OovError(e.word(), std::string(to_string(backend)) + " expansion resource");
  }
  return {};
}

ClusteringOutcome cluster_arguments(std::span<const std::string> words, Representation representation,
                                    const ClusterConfig& config, const TopicResources& resources) {
  if (config.min_cluster_size == 0) throw ValidationError("min_cluster_size must be positive");
  ClusteringOutcome outcome;
  std::vector<std::string> kept;
  std::vector<Vector> points;
  std::set<std::string> seen;
  for (const std::string& w : words) {
    if (!seen.insert(w).second) continue;
    if (representation == Representation::Embedding) {
      if (resources.embeddings == nullptr) throw ValidationError("embedding representation needs word embeddings");
      auto v = resources.embeddings->find(w);
      if (v.empty() || std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
        outcome.oov_words.push_back(w);
        continue;
      }
      points.emplace_back(v.begin(), v.end());
    } else {
      if (resources.lda == nullptr) throw ValidationError("topic-model representation needs an LDA model");
      if (!resources.lda->contains(w)) {
        outcome.oov_words.push_back(w);
        continue;
      }
      points.push_back(resources.lda->topic_vector(w));
    }
    kept.push_back(w);
  }
  if (kept.empty()) throw Error("none of the words to cluster is representable");

  std::vector<std::vector<std::size_t>> groups;
  if (config.algorithm == ClusterAlgorithm::KMeans) {
    const std::size_t k = std::min(config.k, kept.size());
    groups = kmeans(points, k, config.max_iterations, config.seed).clusters();
  } else {
    Matrix similarity(kept.size(), kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      for (std::size_t j = 0; j < kept.size(); ++j) similarity(i, j) = cosine(points[i], points[j]);
    }
    auto ap = affinity_propagation(similarity, config.damping, config.max_iterations, config.preference);
    std::map<std::size_t, std::vector<std::size_t>> by_exemplar;
    for (std::size_t i = 0; i < kept.size(); ++i) by_exemplar[ap.exemplar_of[i]].push_back(i);
    for (auto& [exemplar, members] : by_exemplar) groups.push_back(std::move(members));
  }

  for (const auto& members : groups) {
    if (members.size() < config.min_cluster_size || members.empty()) {
      ++outcome.dropped_clusters;
      continue;
    }
    Argument arg;
    Vector centroid(points[members[0]].size(), 0.0);
    for (std::size_t i : members) {
      arg.supporting_words.push_back(kept[i]);
      for (std::size_t d = 0; d < centroid.size(); ++d) centroid[d] += points[i][d];
    }
    for (double& x : centroid) x /= static_cast<double>(members.size());
    std::sort(arg.supporting_words.begin(), arg.supporting_words.end());
    arg.centroid = std::move(centroid);
    outcome.arguments.push_back(std::move(arg));
  }
  std::sort(outcome.arguments.begin(), outcome.arguments.end(), [](const Argument& a, const Argument& b) {
    if (a.supporting_words.size() != b.supporting_words.size()) {
      return a.supporting_words.size() > b.supporting_words.size();
    }
    return a.supporting_words.front() < b.supporting_words.front();
  });
  for (std::size_t i = 0; i < outcome.arguments.size(); ++i) outcome.arguments[i].id = static_cast<int>(i);
  return outcome;
}

}  // namespace essayplan
