// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>

#include "essayplan/error.hpp"
#include "json.hpp"

namespace essayplan {

std::string_view to_string(DiscourseTag tag) {
  switch (tag) {
    case DiscourseTag::Introduction: return "Introduction";
    case DiscourseTag::Prompt: return "Prompt";
    case DiscourseTag::Conclusion: return "Conclusion";
    case DiscourseTag::Other: return "Other";
  }
  return "Other";
}

Corpus::Corpus(std::vector<Document> documents) : documents_(std::move(documents)) {
  std::set<std::string_view> ids;
  for (const Document& doc : documents_) {
    if (!ids.insert(doc.id).second) {
      throw ValidationError("duplicate document id '" + doc.id + "'");
    }
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
      const Sentence& s = doc.sentences[i];
      if (s.index != i) {
        throw ValidationError("document '" + doc.id + "': sentence " + std::to_string(i) +
                              " has index " + std::to_string(s.index));
      }
      if (s.doc_id != doc.id) {
        throw ValidationError("document '" + doc.id + "': sentence " + std::to_string(i) +
                              " carries doc id '" + s.doc_id + "'");
      }
      if (s.tokens.empty()) {
        throw ValidationError("document '" + doc.id + "': sentence " + std::to_string(i) +
                              " has no tokens");
      }
      for (const std::string& t : s.tokens) ++vocabulary_[t];
    }
  }
}

std::size_t Corpus::num_sentences() const {
  std::size_t n = 0;
  for (const Document& d : documents_) n += d.sentences.size();
  return n;
}

std::size_t Corpus::num_tokens() const {
  std::size_t n = 0;
  for (const auto& [word, count] : vocabulary_) n += count;
  return n;
}

const Document* Corpus::find(std::string_view id) const {
  auto it = std::find_if(documents_.begin(), documents_.end(),
                         [&](const Document& d) { return d.id == id; });
  return it == documents_.end() ? nullptr : &*it;
}

Document make_document(std::string id,
                       std::vector<std::pair<std::string, std::vector<std::string>>> sentences) {
  Document doc;
  doc.id = std::move(id);
  doc.sentences.reserve(sentences.size());
  for (auto& [raw, tokens] : sentences) {
    Sentence s;
    s.doc_id = doc.id;
    s.index = doc.sentences.size();
    s.raw = std::move(raw);
    s.tokens = std::move(tokens);
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

namespace {

Document parse_document(const std::string& line, std::size_t line_no) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
  }
  if (!record.is_object()) throw ParseError("record is not a JSON object", line_no);
  auto id = record.find("id");
  if (id == record.end() || !id->is_string()) {
    throw ParseError("missing string field 'id'", line_no);
  }
  auto sentences = record.find("sentences");
  if (sentences == record.end() || !sentences->is_array()) {
    throw ParseError("missing array field 'sentences'", line_no);
  }

  Document doc;
  doc.id = id->get<std::string>();
  for (const auto& item : *sentences) {
    const std::size_t k = doc.sentences.size();
    if (!item.is_object()) throw ParseError("sentence " + std::to_string(k) + " is not an object", line_no);
    auto raw = item.find("raw");
    auto tokens = item.find("tokens");
    if (raw == item.end() || !raw->is_string()) {
      throw ParseError("sentence " + std::to_string(k) + " lacks string field 'raw'", line_no);
    }
    if (tokens == item.end() || !tokens->is_array()) {
      throw ParseError("sentence " + std::to_string(k) + " lacks array field 'tokens'", line_no);
    }
    if (tokens->empty()) {
      throw ParseError("sentence " + std::to_string(k) + " has an empty token list", line_no);
    }
    Sentence s;
    s.doc_id = doc.id;
    s.index = k;
    s.raw = raw->get<std::string>();
    for (const auto& t : *tokens) {
      if (!t.is_string()) throw ParseError("sentence " + std::to_string(k) + " has a non-string token", line_no);
      s.tokens.push_back(t.get<std::string>());
    }
    doc.sentences.push_back(std::move(s));
  }
  return doc;
}

}  // namespace

Corpus read_corpus(std::istream& in) {
  std::vector<Document> docs;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) {
      continue;
    }
    Document doc = parse_document(line, line_no);
    if (!ids.insert(doc.id).second) {
      throw ValidationError("line " + std::to_string(line_no) + ": duplicate document id '" +
                            doc.id + "'");
    }
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs));
}

Corpus ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());
  return read_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& doc : corpus.documents()) {
    nlohmann::json sentences = nlohmann::json::array();
    for (const Sentence& s : doc.sentences) {
      sentences.push_back({{"raw", s.raw}, {"tokens", s.tokens}});
    }
    nlohmann::ordered_json record;
    record["id"] = doc.id;
    record["sentences"] = std::move(sentences);
    out << record.dump() << '\n';
  }
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write corpus file " + path.string());
  write_corpus(corpus, out);
}

HoldoutSplit split_holdout(const Corpus& corpus, double fraction, std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (n < 2) throw ValidationError("holdout split needs at least 2 documents");
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw ValidationError("holdout fraction must lie in (0, 1)");
  }
  auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  count = std::clamp<std::size_t>(count, 1, n - 1);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> in_holdout(n, false);
  for (std::size_t i = 0; i < count; ++i) in_holdout[order[i]] = true;

  std::vector<Document> train, holdout;
  for (std::size_t i = 0; i < n; ++i) {
    (in_holdout[i] ? holdout : train).push_back(corpus.documents()[i]);
  }
  return {Corpus(std::move(train)), Corpus(std::move(holdout))};
}

}  // namespace essayplan
