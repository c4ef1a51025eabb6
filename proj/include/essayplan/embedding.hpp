// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "essayplan/matrix.hpp"

namespace essayplan {

/// Cosine similarity. Throws Error on length mismatch or a zero vector.
double cosine(std::span<const double> a, std::span<const double> b);

struct ScoredWord {
  std::string word;
  double score = 0.0;

  friend bool operator==(const ScoredWord&, const ScoredWord&) = default;
};

/// Word -> dense vector map. Rows keep insertion order, which is also
/// the order used when the table is written out.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  bool empty() const { return words_.empty(); }
  const std::vector<std::string>& words() const { return words_; }

  /// Throws ValidationError on a duplicate word or wrong length.
  void add(std::string word, std::span<const double> vector);

  bool contains(std::string_view word) const;
  /// Empty span when the word is out of vocabulary.
  std::span<const double> find(std::string_view word) const;
  /// Throws OovError when the word is out of vocabulary.
  std::span<const double> at(std::string_view word) const;

  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dim_ == b.dim_ && a.words_ == b.words_ && a.data_ == b.data_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<double> data_;
};

/// Top-k words by cosine to `word`, excluding the word itself. Ties are
/// broken by lexicographic word order.
std::vector<ScoredWord> nearest_neighbors(const EmbeddingTable& table, std::string_view word,
                                          std::size_t k);

/// Component-wise mean over the in-vocabulary words; OOV words are skipped.
/// Throws Error listing the words if none is in the table.
Vector average_embedding(const EmbeddingTable& table, std::span<const std::string> words);

/// word2vec text format.
EmbeddingTable read_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingTable& table, std::ostream& out);
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

}  // namespace essayplan
