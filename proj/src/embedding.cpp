// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "essayplan/error.hpp"

namespace essayplan {

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) throw Error("cosine: zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

EmbeddingTable::EmbeddingTable(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw ValidationError("embedding dimension must be positive");
}

void EmbeddingTable::add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw ValidationError("vector for '" + word + "' has length " +
                          std::to_string(vector.size()) + ", expected " + std::to_string(dim_));
  }
  if (index_.contains(word)) throw ValidationError("duplicate embedding for '" + word + "'");
  index_.emplace(word, words_.size());
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

bool EmbeddingTable::contains(std::string_view word) const { return index_.find(word) != index_.end(); }

std::span<const double> EmbeddingTable::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return {};
  return row(it->second);
}

std::span<const double> EmbeddingTable::at(std::string_view word) const {
  auto v = find(word);
  if (v.empty()) throw OovError(std::string(word), "embedding table");
  return v;
}

std::vector<ScoredWord> nearest_neighbors(const EmbeddingTable& table, std::string_view word,
                                          std::size_t k) {
  const auto query = table.at(word);
  std::vector<ScoredWord> scored;
  scored.reserve(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table.words()[i] == word) continue;
    auto other = table.row(i);
    if (std::all_of(other.begin(), other.end(), [](double x) { return x == 0.0; })) continue;
    scored.push_back({table.words()[i], cosine(query, other)});
  }
  auto by_score = [](const ScoredWord& a, const ScoredWord& b) {
    return a.score != b.score ? a.score > b.score : a.word < b.word;
  };
  k = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                    scored.end(), by_score);
  scored.resize(k);
  return scored;
}

Vector average_embedding(const EmbeddingTable& table, std::span<const std::string> words) {
  Vector mean(table.dim(), 0.0);
  std::size_t used = 0;
  for (const std::string& w : words) {
    auto v = table.find(w);
    if (v.empty()) continue;
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += v[i];
    ++used;
  }
  if (used == 0) {
    std::string list;
    for (const std::string& w : words) list += (list.empty() ? "" : ", ") + w;
    throw Error("no in-vocabulary word among [" + list + "]");
  }
  for (double& x : mean) x /= static_cast<double>(used);
  return mean;
}

namespace {

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError("invalid number '" + std::string(field) + "'", line_no);
  }
  return value;
}

}  // namespace

EmbeddingTable read_embeddings(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  auto header = split_spaces(line);
  if (header.size() != 2) throw ParseError("header must be '<vocab_size> <dim>'", 1);
  const auto count = parse_number<std::size_t>(header[0], 1);
  const auto dim = parse_number<std::size_t>(header[1], 1);
  if (dim == 0) throw ParseError("dimension must be positive", 1);

  EmbeddingTable table(dim);
  Vector values(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_spaces(line);
    if (fields.empty()) continue;
    if (fields.size() != dim + 1) {
      throw ParseError("expected word and " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1) + " values",
                       line_no);
    }
    for (std::size_t i = 0; i < dim; ++i) values[i] = parse_number<double>(fields[i + 1], line_no);
    std::string word(fields[0]);
    if (table.contains(word)) throw ParseError("duplicate word '" + word + "'", line_no);
    table.add(std::move(word), values);
  }
  if (table.size() != count) {
    throw ParseError("header declares " + std::to_string(count) + " words, file has " +
                         std::to_string(table.size()),
                     line_no);
  }
  if (table.empty()) throw ParseError("embedding table is empty", line_no);
  return table;
}

EmbeddingTable load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingTable& table, std::ostream& out) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.words()[i];
    for (double x : table.row(i)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    out << '\n';
  }
}

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write embedding file " + path.string());
  write_embeddings(table, out);
}

}  // namespace essayplan
