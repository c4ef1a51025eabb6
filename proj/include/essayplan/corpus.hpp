// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace essayplan {

enum class DiscourseTag { Introduction, Prompt, Conclusion, Other };

std::string_view to_string(DiscourseTag tag);

struct Sentence {
  std::string doc_id;
  std::size_t index = 0;
  std::vector<std::string> tokens;
  std::string raw;
  std::optional<DiscourseTag> tag;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

struct Document {
  std::string id;
  std::vector<Sentence> sentences;

  friend bool operator==(const Document&, const Document&) = default;
};

using Vocabulary = std::map<std::string, std::size_t>;

/// An ordered, immutable collection of tokenized documents. The order of
/// sentences inside each document is the reference ordering.
class Corpus {
 public:
  Corpus() = default;

  /// Validates the documents and computes the vocabulary. Throws
  /// ValidationError on duplicate ids, empty token lists, or sentence
  /// indices that are not 0..n-1.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }

  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  std::size_t num_sentences() const;
  std::size_t num_tokens() const;

  const Document* find(std::string_view id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents_ == b.documents_;
  }

 private:
  std::vector<Document> documents_;
  Vocabulary vocabulary_;
};

/// Builds a Document from raw/token pairs, assigning indices 0..n-1.
Document make_document(std::string id,
                       std::vector<std::pair<std::string, std::vector<std::string>>> sentences);

/// Parses the JSON Lines corpus format. Blank lines are ignored.
Corpus read_corpus(std::istream& in);
Corpus ingest_corpus(const std::filesystem::path& path);

void write_corpus(const Corpus& corpus, std::ostream& out);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

struct HoldoutSplit {
  Corpus train;
  Corpus holdout;
};

/// Partitions documents into train and holdout. The holdout receives
/// round(fraction * N) documents, clamped to [1, N-1]. Both parts keep
/// the original document order.
HoldoutSplit split_holdout(const Corpus& corpus, double fraction, std::uint64_t seed);

}  // namespace essayplan
