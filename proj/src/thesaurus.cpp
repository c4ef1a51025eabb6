// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/thesaurus.hpp"

#include <algorithm>
#include <fstream>

#include "essayplan/error.hpp"

namespace essayplan {

void Thesaurus::add(const std::string& head, Relation relation, const std::string& word) {
  if (head == word) throw ValidationError("relation of '" + head + "' to itself");
  ThesaurusEntry& entry = entries_[head];
  switch (relation) {
    case Relation::Synonym: entry.synonyms.insert(word); break;
    case Relation::Antonym: entry.antonyms.insert(word); break;
    case Relation::Hypernym: entry.hypernyms.insert(word); break;
  }
}

bool Thesaurus::contains(std::string_view head) const { return entries_.find(head) != entries_.end(); }

const ThesaurusEntry* Thesaurus::find(std::string_view head) const {
  auto it = entries_.find(head);
  return it == entries_.end() ? nullptr : &it->second;
}

Thesaurus read_thesaurus(std::istream& in) {
  Thesaurus thesaurus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3) throw ParseError("expected 3 tab-separated fields", line_no);
    if (fields[0].empty() || fields[2].empty()) throw ParseError("empty word", line_no);
    Relation relation;
    if (fields[1] == "syn") {
      relation = Relation::Synonym;
    } else if (fields[1] == "ant") {
      relation = Relation::Antonym;
    } else if (fields[1] == "hyper") {
      relation = Relation::Hypernym;
    } else {
      throw ParseError("unknown relation '" + fields[1] + "'", line_no);
    }
    try {
      thesaurus.add(fields[0], relation, fields[2]);
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return thesaurus;
}

Thesaurus load_thesaurus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open thesaurus file " + path.string());
  return read_thesaurus(in);
}

std::size_t utf8_length(std::string_view token) {
  return static_cast<std::size_t>(std::count_if(token.begin(), token.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

std::vector<std::pair<std::string, std::size_t>> expand_thesaurus(const Thesaurus& thesaurus,
                                                                   std::string_view topic,
                                                                   const ThesExpansionConfig& config) {
  if (!thesaurus.contains(topic)) {
    throw OovError(std::string(topic), "thesaurus");
  }
  if (config.depth == 0) throw ValidationError("expansion depth must be at least 1");

  enum Rule { kSynonym, kHypernym, kAntonymOfAntonym };
  // word -> set of (seed, rule) derivations
  std::map<std::string, std::set<std::pair<std::string, int>>, std::less<>> derivations;
  std::set<std::string, std::less<>> expanded{std::string(topic)};
  std::vector<std::string> seeds{std::string(topic)};

  for (std::size_t round = 0; round < config.depth && !seeds.empty(); ++round) {
    std::set<std::string> found;
    auto derive = [&](const std::string& word, const std::string& seed, int rule) {
      if (word == topic) return;
      derivations[word].emplace(seed, rule);
      found.insert(word);
    };
    for (const std::string& seed : seeds) {
      const ThesaurusEntry* entry = thesaurus.find(seed);
      if (entry == nullptr) continue;
      for (const std::string& w : entry->synonyms) derive(w, seed, kSynonym);
      for (const std::string& w : entry->hypernyms) derive(w, seed, kHypernym);
      for (const std::string& antonym : entry->antonyms) {
        const ThesaurusEntry* opposite = thesaurus.find(antonym);
        if (opposite == nullptr) continue;
        for (const std::string& w : opposite->antonyms) derive(w, seed, kAntonymOfAntonym);
      }
    }
    seeds.clear();
    for (const std::string& w : found) {
      if (expanded.insert(w).second) seeds.push_back(w);
    }
  }

  std::vector<std::pair<std::string, std::size_t>> result;
  for (const auto& [word, how] : derivations) {
    if (utf8_length(word) < config.min_token_length) continue;
    if (how.size() < config.min_score) continue;
    result.emplace_back(word, how.size());
  }
  std::stable_sort(result.begin(), result.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (result.size() > config.max_words) result.resize(config.max_words);
  return result;
}

}  // namespace essayplan
