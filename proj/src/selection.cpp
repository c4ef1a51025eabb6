// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/selection.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "essayplan/error.hpp"

namespace essayplan {

namespace {

std::vector<std::string> as_list(const WordSet& words) { return {words.begin(), words.end()}; }

bool any_in_vocabulary(const EmbeddingTable& table, std::span<const std::string> words) {
  return std::any_of(words.begin(), words.end(), [&](const std::string& w) { return table.contains(w); });
}

}  // namespace

double score_sentence(const WordSet& words, const Sentence& sentence, SelectionMethod method,
                      const EmbeddingTable* table) {
  if (words.empty()) throw ValidationError("sentence scoring needs a non-empty word set");
  if (method == SelectionMethod::Counting) {
    std::size_t hits = 0;
    for (const std::string& w : words) {
      if (std::find(sentence.tokens.begin(), sentence.tokens.end(), w) != sentence.tokens.end()) ++hits;
    }
    return static_cast<double>(hits);
  }
  if (table == nullptr) throw ValidationError("embedding sentence scoring needs word embeddings");
  const Vector query = average_embedding(*table, as_list(words));
  const Vector sent = average_embedding(*table, sentence.tokens);
  return cosine(query, sent);
}

std::vector<ScoredSentence> select_sentences(const WordSet& words, const Corpus& corpus,
                                             const SelectionConfig& config, const EmbeddingTable* table) {
  if (config.top_k == 0) throw ValidationError("top_k must be at least 1");
  if (config.max_per_document == 0) throw ValidationError("max_per_document must be at least 1");
  if (words.empty()) throw ValidationError("sentence selection needs a non-empty word set");

  const bool embedding = config.method == SelectionMethod::Embedding;
  Vector query;
  if (embedding) {
    if (table == nullptr) throw ValidationError("embedding sentence selection needs word embeddings");
    const auto list = as_list(words);
    if (!any_in_vocabulary(*table, list)) return {};
    query = average_embedding(*table, list);
  }

  std::vector<ScoredSentence> scored;
  for (const Document& doc : corpus.documents()) {
    for (const Sentence& s : doc.sentences) {
      if (s.tokens.size() < config.min_sentence_tokens) continue;
      if (embedding) {
        if (!any_in_vocabulary(*table, s.tokens)) continue;
        const Vector v = average_embedding(*table, s.tokens);
        if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
        scored.push_back({&s, cosine(query, v)});
      } else {
        scored.push_back({&s, score_sentence(words, s, config.method)});
      }
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const ScoredSentence& a, const ScoredSentence& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.sentence->doc_id != b.sentence->doc_id) return a.sentence->doc_id < b.sentence->doc_id;
    return a.sentence->index < b.sentence->index;
  });

  std::vector<ScoredSentence> out;
  std::set<std::vector<std::string>> seen_tokens;
  std::map<std::string_view, std::size_t> per_doc;
  for (const ScoredSentence& c : scored) {
    if (out.size() == config.top_k) break;
    if (seen_tokens.contains(c.sentence->tokens)) continue;
    std::size_t& used = per_doc[c.sentence->doc_id];
    if (used == config.max_per_document) continue;
    ++used;
    seen_tokens.insert(c.sentence->tokens);
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> feedback_expand(const WordSet& words, std::span<const ScoredSentence> selected,
                                         SelectionMethod method, std::size_t k,
                                         const EmbeddingTable* table, const WordSet& stopwords) {
  if (selected.empty()) throw ValidationError("feedback expansion needs at least one selected sentence");
  std::map<std::string, std::size_t> frequency;
  for (const ScoredSentence& s : selected) {
    for (const std::string& t : s.sentence->tokens) {
      if (words.contains(t) || stopwords.contains(t)) continue;
      ++frequency[t];
    }
  }

  std::vector<ScoredWord> scored;
  if (method == SelectionMethod::Counting) {
    for (const auto& [word, count] : frequency) scored.push_back({word, static_cast<double>(count)});
  } else {
    if (table == nullptr) throw ValidationError("embedding feedback needs word embeddings");
    const auto list = as_list(words);
    if (!any_in_vocabulary(*table, list)) return {};
    const Vector centre = average_embedding(*table, list);
    if (std::all_of(centre.begin(), centre.end(), [](double x) { return x == 0.0; })) return {};
    for (const auto& [word, count] : frequency) {
      auto v = table->find(word);
      if (v.empty() || std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) continue;
      scored.push_back({word, cosine(v, centre)});
    }
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredWord& a, const ScoredWord& b) { return a.score > b.score; });
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < k; ++i) out.push_back(scored[i].word);
  return out;
}

Document tag_discourse(const Document& document) {
  Document tagged = document;
  const std::size_t n = tagged.sentences.size();
  for (std::size_t i = 0; i < n; ++i) {
    DiscourseTag tag = DiscourseTag::Prompt;
    if (i == 0) {
      tag = DiscourseTag::Introduction;
    } else if (i + 1 == n) {
      tag = DiscourseTag::Conclusion;
    }
    tagged.sentences[i].tag = tag;
  }
  return tagged;
}

WordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  WordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

}  // namespace essayplan
