// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/pipeline.hpp"

#include <algorithm>
#include <set>

#include "essayplan/error.hpp"

namespace essayplan {

namespace {

ExpansionBackend parse_backend(const std::string& name) {
  if (name == "thes") return ExpansionBackend::Thesaurus;
  if (name == "tm") return ExpansionBackend::TopicModel;
  if (name == "we") return ExpansionBackend::Embedding;
  throw ValidationError("expansion.backend must be thes, tm or we, got '" + name + "'");
}

Representation parse_representation(const std::string& name) {
  if (name == "tm") return Representation::TopicModel;
  if (name == "we") return Representation::Embedding;
  throw ValidationError("cluster.representation must be tm or we, got '" + name + "'");
}

ClusterAlgorithm parse_algorithm(const std::string& name) {
  if (name == "kmeans") return ClusterAlgorithm::KMeans;
  if (name == "affinity_propagation" || name == "ap") return ClusterAlgorithm::AffinityPropagation;
  throw ValidationError("cluster.algorithm must be kmeans or affinity_propagation, got '" + name + "'");
}

SelectionMethod parse_method(std::string_view key, const std::string& name) {
  if (name == "counting") return SelectionMethod::Counting;
  if (name == "embedding") return SelectionMethod::Embedding;
  throw ValidationError(std::string(key) + " must be counting or embedding, got '" + name + "'");
}

}  // namespace

PipelineConfig PipelineConfig::from_config(const Config& c) {
  PipelineConfig p;
  p.seed = c.get_u64("seed", p.seed);

  p.backend = parse_backend(c.get_string("expansion.backend", "we"));
  p.expansion_k = c.get_size("expansion.k", p.expansion_k);
  p.thesaurus.depth = c.get_size("expansion.depth", p.thesaurus.depth);
  p.thesaurus.min_token_length = c.get_size("expansion.min_token_length", p.thesaurus.min_token_length);
  p.thesaurus.min_score = c.get_size("expansion.min_score", p.thesaurus.min_score);
  p.thesaurus.max_words = p.expansion_k;

  p.representation = parse_representation(c.get_string("cluster.representation", "we"));
  p.cluster.algorithm = parse_algorithm(c.get_string("cluster.algorithm", "kmeans"));
  p.cluster.k = c.get_size("cluster.k", p.cluster.k);
  p.cluster.max_iterations = c.get_size("cluster.max_iterations", p.cluster.max_iterations);
  p.cluster.damping = c.get_double("cluster.damping", p.cluster.damping);
  if (auto pref = c.get("cluster.preference"); pref && *pref != "median") {
    p.cluster.preference = c.get_double("cluster.preference", 0.0);
  }
  p.cluster.min_cluster_size = c.get_size("cluster.min_cluster_size", p.cluster.min_cluster_size);
  p.cluster.seed = c.get_u64("cluster.seed", p.seed);

  p.selection.method = parse_method("selection.method", c.get_string("selection.method", "counting"));
  p.selection.top_k = c.get_size("selection.top_k", p.selection.top_k);
  p.selection.max_per_document = c.get_size("selection.max_per_document", p.selection.max_per_document);
  p.selection.min_sentence_tokens = c.get_size("selection.min_sentence_tokens", p.selection.min_sentence_tokens);
  p.require_positive_score = c.get_bool("selection.require_positive", p.require_positive_score);

  p.feedback_method = parse_method("feedback.method", c.get_string("feedback.method", "counting"));
  p.feedback_rounds = c.get_size("feedback.rounds", p.feedback_rounds);
  p.feedback_words = c.get_size("feedback.words", p.feedback_words);

  p.coherence = parse_coherence_variant(c.get_string("coherence.variant", "bow_boolean"));
  p.decoder.decoder = parse_decoder(c.get_string("ordering.decoder", "dp"));
  p.decoder.beam_width = c.get_size("ordering.beam_width", p.decoder.beam_width);
  p.decoder.max_exact = c.get_size("ordering.max_exact", p.decoder.max_exact);

  auto path = [&](std::string_view key) -> std::optional<std::filesystem::path> {
    if (auto v = c.get(key); v && !v->empty()) return c.resolve(*v);
    return std::nullopt;
  };
  auto corpus = path("resources.corpus");
  if (!corpus) throw ValidationError("resources.corpus is required");
  p.paths.corpus = *corpus;
  p.paths.embeddings = path("resources.embeddings");
  p.paths.thesaurus = path("resources.thesaurus");
  p.paths.lda = path("resources.lda");
  p.paths.recnn = path("resources.recnn");
  p.paths.stopwords = path("resources.stopwords");

  p.sentence_separator = c.get_string("output.sentence_separator", p.sentence_separator);
  return p;
}

Corpus tag_corpus(const Corpus& corpus) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const Document& d : corpus.documents()) {
    docs.push_back(d.sentences.empty() ? d : tag_discourse(d));
  }
  return Corpus(std::move(docs));
}

PipelineResources PipelineResources::load(const PipelineConfig& config) {
  const bool coherence_needs_vectors = config.coherence == CoherenceVariant::EmbedAverage ||
                                       config.coherence == CoherenceVariant::RecursiveNn;
  const bool needs_embeddings = config.backend == ExpansionBackend::Embedding ||
                                config.representation == Representation::Embedding ||
                                config.selection.method == SelectionMethod::Embedding ||
                                (config.feedback_rounds > 0 && config.feedback_method == SelectionMethod::Embedding) ||
                                coherence_needs_vectors;
  const bool needs_lda =
      config.backend == ExpansionBackend::TopicModel || config.representation == Representation::TopicModel;

  auto require = [](const std::optional<std::filesystem::path>& p, const char* key) {
    if (!p) throw ValidationError(std::string(key) + " is required by the configured pipeline");
    return *p;
  };

  PipelineResources r;
  r.corpus = tag_corpus(ingest_corpus(config.paths.corpus));
  if (needs_embeddings) r.embeddings = load_embeddings(require(config.paths.embeddings, "resources.embeddings"));
  if (config.backend == ExpansionBackend::Thesaurus) {
    r.thesaurus = load_thesaurus(require(config.paths.thesaurus, "resources.thesaurus"));
  }
  if (needs_lda) r.lda = load_lda(require(config.paths.lda, "resources.lda"));
  if (config.coherence == CoherenceVariant::RecursiveNn) {
    r.recnn = load_recnn(require(config.paths.recnn, "resources.recnn"));
  }
  if (config.paths.stopwords) r.stopwords = load_stopwords(*config.paths.stopwords);
  return r;
}

TopicResources PipelineResources::topic_resources(const PipelineConfig& config) const {
  TopicResources t;
  t.thesaurus = thesaurus ? &*thesaurus : nullptr;
  t.lda = lda ? &*lda : nullptr;
  t.embeddings = embedding_table();
  t.thesaurus_config = config.thesaurus;
  return t;
}

CoherenceModel PipelineResources::coherence_model(CoherenceVariant variant) const {
  switch (variant) {
    case CoherenceVariant::BowBoolean: return CoherenceModel::bow_boolean();
    case CoherenceVariant::BowFrequency: return CoherenceModel::bow_frequency();
    case CoherenceVariant::EmbedAverage:
      if (!embeddings) throw ValidationError("embed_average coherence needs word embeddings");
      return CoherenceModel::embed_average(*embeddings);
    case CoherenceVariant::RecursiveNn:
      if (!embeddings || !recnn) throw ValidationError("recursive_nn coherence needs embeddings and parameters");
      return CoherenceModel::recursive_nn(*embeddings, *recnn);
  }
  throw ValidationError("unknown coherence variant");
}

std::string Essay::text(std::string_view separator) const {
  std::string out;
  for (std::size_t p = 0; p < paragraphs.size(); ++p) {
    if (p) out += "\n\n";
    for (std::size_t s = 0; s < paragraphs[p].sentences.size(); ++s) {
      if (s) out += separator;
      out += paragraphs[p].sentences[s].raw;
    }
  }
  out += '\n';
  return out;
}

namespace {

using SentenceKey = std::pair<std::string, std::size_t>;

SentenceKey key_of(const Sentence& s) { return {s.doc_id, s.index}; }

nlohmann::ordered_json sentence_ref(const Sentence& s) {
  return {{"doc", s.doc_id}, {"index", s.index}};
}

nlohmann::ordered_json scored_json(const std::vector<ScoredSentence>& selected) {
  auto out = nlohmann::ordered_json::array();
  for (const ScoredSentence& s : selected) {
    auto item = sentence_ref(*s.sentence);
    item["score"] = s.score;
    out.push_back(std::move(item));
  }
  return out;
}

}  // namespace

EssayResult generate_essay(std::string_view topic, const PipelineConfig& config,
                           const PipelineResources& resources) {
  using json = nlohmann::ordered_json;
  EssayResult result;
  result.essay.topic = std::string(topic);
  json& trace = result.trace;
  trace["topic"] = topic;

  const TopicResources topic_resources = resources.topic_resources(config);
  std::vector<ScoredWord> expansion;
  try {
    expansion = expand_topic(topic, config.backend, topic_resources, config.expansion_k);
  } catch (const Error& e) {
    throw Error(std::string(to_string(config.backend)) + " expansion failed: " + e.what());
  }
  json expansion_words = json::array();
  std::vector<std::string> words;
  for (const ScoredWord& w : expansion) {
    expansion_words.push_back({{"word", w.word}, {"score", w.score}});
    words.push_back(w.word);
  }
  trace["expansion"] = {{"backend", to_string(config.backend)}, {"words", std::move(expansion_words)}};
  if (words.empty()) throw Error("topic expansion of '" + std::string(topic) + "' produced no words");

  ClusteringOutcome clustering = cluster_arguments(words, config.representation, config.cluster, topic_resources);
  json arguments = json::array();
  for (const Argument& a : clustering.arguments) {
    json item = {{"id", a.id}, {"words", a.supporting_words}};
    if (a.centroid) item["centroid"] = *a.centroid;
    arguments.push_back(std::move(item));
  }
  trace["clustering"] = {{"representation", config.representation == Representation::Embedding ? "we" : "tm"},
                         {"algorithm", config.cluster.algorithm == ClusterAlgorithm::KMeans ? "kmeans"
                                                                                            : "affinity_propagation"},
                         {"oov_words", clustering.oov_words},
                         {"dropped_clusters", clustering.dropped_clusters},
                         {"arguments", std::move(arguments)}};
  if (clustering.arguments.empty()) {
    throw Error("no argument survived clustering (min_cluster_size " +
                std::to_string(config.cluster.min_cluster_size) + ")");
  }

  const EmbeddingTable* table = resources.embedding_table();
  const CoherenceModel coherence = resources.coherence_model(config.coherence);
  std::set<SentenceKey> used;

  auto select = [&](const WordSet& w) {
    SelectionConfig sc = config.selection;
    sc.top_k = config.selection.top_k + used.size();
    auto ranked = select_sentences(w, resources.corpus, sc, table);
    std::vector<ScoredSentence> kept;
    for (const ScoredSentence& s : ranked) {
      if (kept.size() == config.selection.top_k) break;
      if (used.contains(key_of(*s.sentence))) continue;
      if (config.require_positive_score && !(s.score > 0.0)) continue;
      kept.push_back(s);
    }
    return kept;
  };

  json paragraphs = json::array();
  json dropped = json::array();
  for (const Argument& argument : clustering.arguments) {
    WordSet w(argument.supporting_words.begin(), argument.supporting_words.end());
    json rounds = json::array();
    std::vector<ScoredSentence> selected = select(w);
    rounds.push_back({{"round", 0}, {"new_words", json::array()}, {"selected", scored_json(selected)}});
    for (std::size_t round = 1; round <= config.feedback_rounds && !selected.empty(); ++round) {
      auto fresh = feedback_expand(w, selected, config.feedback_method, config.feedback_words, table,
                                   resources.stopwords);
      if (fresh.empty()) break;
      w.insert(fresh.begin(), fresh.end());
      selected = select(w);
      rounds.push_back({{"round", round}, {"new_words", fresh}, {"selected", scored_json(selected)}});
    }
    if (selected.empty()) {
      dropped.push_back({{"argument", argument.id}, {"reason", "no sentence selected"}});
      continue;
    }

    std::vector<const Sentence*> sentences;
    for (const ScoredSentence& s : selected) sentences.push_back(s.sentence);
    std::size_t start = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (sentences[i]->tag == DiscourseTag::Introduction) {
        start = i;
        break;
      }
    }
    const CoherenceMatrix matrix = build_matrix(std::span<const Sentence* const>(sentences), coherence);
    const Ordering order = decode(matrix, start, config.decoder);

    Paragraph paragraph;
    paragraph.argument = argument;
    json order_json = json::array();
    for (std::size_t i : order.permutation) {
      paragraph.sentences.push_back(*sentences[i]);
      order_json.push_back(sentence_ref(*sentences[i]));
      used.insert(key_of(*sentences[i]));
    }
    paragraphs.push_back({{"argument", argument.id},
                          {"supporting_words", std::vector<std::string>(w.begin(), w.end())},
                          {"rounds", std::move(rounds)},
                          {"start", sentence_ref(*sentences[start])},
                          {"chain_score", chain_score(matrix, order)},
                          {"order", std::move(order_json)}});
    result.essay.paragraphs.push_back(std::move(paragraph));
  }
  trace["coherence"] = to_string(config.coherence);
  trace["decoder"] = to_string(config.decoder.decoder);
  trace["paragraphs"] = std::move(paragraphs);
  trace["dropped_arguments"] = std::move(dropped);
  if (result.essay.paragraphs.empty()) throw Error("every argument was dropped: no sentences selected");
  return result;
}

}  // namespace essayplan
