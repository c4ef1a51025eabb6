// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <filesystem>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "essayplan/corpus.hpp"
#include "essayplan/embedding.hpp"

namespace essayplan {

using WordSet = std::set<std::string, std::less<>>;

enum class SelectionMethod { Counting, Embedding };

/// A sentence paired with its relevance score. `sentence` points into the
/// corpus it was selected from and must not outlive it.
struct ScoredSentence {
  const Sentence* sentence = nullptr;
  double score = 0.0;
};

struct SelectionConfig {
  SelectionMethod method = SelectionMethod::Counting;
  std::size_t top_k = 10;
  std::size_t max_per_document = 2;
  std::size_t min_sentence_tokens = 1;
  WordSet stopwords;
};

/// Counting: number of distinct members of W present in the sentence.
/// Embedding: cosine between the averaged vectors of W and of the tokens.
double score_sentence(const WordSet& words, const Sentence& sentence, SelectionMethod method,
                      const EmbeddingTable* table = nullptr);

/// Scores every sentence with at least min_sentence_tokens tokens and
/// returns them ordered by (score desc, doc id asc, index asc). Duplicate
/// token sequences keep their first occurrence, at most max_per_document
/// sentences come from one document, and the list is cut to top_k.
/// Under the embedding method, sentences without any in-vocabulary token
/// are skipped.
std::vector<ScoredSentence> select_sentences(const WordSet& words, const Corpus& corpus,
                                             const SelectionConfig& config,
                                             const EmbeddingTable* table = nullptr);

/// New supporting words drawn from the selected sentences, top-k by
/// (score desc, word asc). Counting scores a candidate by its frequency
/// in S; embedding by cosine between its vector and the mean vector of W.
std::vector<std::string> feedback_expand(const WordSet& words, std::span<const ScoredSentence> selected,
                                         SelectionMethod method, std::size_t k,
                                         const EmbeddingTable* table, const WordSet& stopwords);

/// Position heuristic: first sentence Introduction, last Conclusion,
/// everything in between Prompt.
Document tag_discourse(const Document& document);

/// One word per line; blank lines ignored.
WordSet load_stopwords(const std::filesystem::path& path);

}  // namespace essayplan
