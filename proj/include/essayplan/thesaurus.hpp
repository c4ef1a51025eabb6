// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace essayplan {

enum class Relation { Synonym, Antonym, Hypernym };

struct ThesaurusEntry {
  std::set<std::string> synonyms;
  std::set<std::string> antonyms;
  std::set<std::string> hypernyms;
};

/// Synonym/antonym/hypernym relations keyed by head word. Relations are
/// directed: "a syn b" does not imply "b syn a".
class Thesaurus {
 public:
  /// Throws ValidationError when `word == head`.
  void add(const std::string& head, Relation relation, const std::string& word);

  bool contains(std::string_view head) const;
  /// nullptr when the head has no entry.
  const ThesaurusEntry* find(std::string_view head) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, ThesaurusEntry, std::less<>> entries_;
};

/// TSV: "<head>\t<syn|ant|hyper>\t<word>" per line; '#' starts a comment line.
Thesaurus read_thesaurus(std::istream& in);
Thesaurus load_thesaurus(const std::filesystem::path& path);

struct ThesExpansionConfig {
  std::size_t depth = 1;
  std::size_t min_token_length = 2;  // in UTF-8 code points
  std::size_t min_score = 1;
  std::size_t max_words = 50;
};

/// Rule-based expansion. Each round applies three rules to every seed w:
/// synonyms(w), hypernyms(w), and antonyms(a) for a in antonyms(w). The
/// words found become the next round's seeds. A word's score is the
/// number of distinct (seed, rule) pairs that produced it. Output is
/// sorted by (score desc, word asc) and never contains the topic.
std::vector<std::pair<std::string, std::size_t>> expand_thesaurus(const Thesaurus& thesaurus,
                                                                   std::string_view topic,
                                                                   const ThesExpansionConfig& config);

/// Number of UTF-8 code points in `token`.
std::size_t utf8_length(std::string_view token);

}  // namespace essayplan
