// Apache License, Version 2.0, refer to LICENSE.txt

#include <algorithm>
#include <set>
#include <sstream>

#include "doctest.h"
#include "essayplan/error.hpp"
#include "essayplan/thesaurus.hpp"

using namespace essayplan;

namespace {

Thesaurus parse(const std::string& tsv) {
  std::istringstream in(tsv);
  return read_thesaurus(in);
}

std::set<std::string> words_of(const std::vector<std::pair<std::string, std::size_t>>& expansion) {
  std::set<std::string> out;
  for (const auto& [w, s] : expansion) out.insert(w);
  return out;
}

const char* kMood =
    "happy\tsyn\tglad\n"
    "happy\tant\tsad\n"
    "sad\tant\tjoyful\n"
    "glad\tsyn\tcheerful\n"
    "glad\thyper\temotion\n"
    "cheerful\tsyn\tsunny\n";

}  // namespace

TEST_CASE("one round applies synonym and antonym-of-antonym rules") {
  Thesaurus t = parse(kMood);
  ThesExpansionConfig config;
  auto out = expand_thesaurus(t, "happy", config);
  auto words = words_of(out);
  CHECK(words.contains("glad"));
  CHECK(words.contains("joyful"));
  CHECK_FALSE(words.contains("sad"));  // antonyms are never emitted
  CHECK_FALSE(words.contains("cheerful"));
}

TEST_CASE("propagation reaches further in later rounds") {
  Thesaurus t = parse(kMood);
  ThesExpansionConfig config;
  config.depth = 2;
  auto words = words_of(expand_thesaurus(t, "happy", config));
  CHECK(words.contains("cheerful"));
  CHECK(words.contains("emotion"));
  CHECK_FALSE(words.contains("sunny"));
  config.depth = 3;
  CHECK(words_of(expand_thesaurus(t, "happy", config)).contains("sunny"));
}

TEST_CASE("short tokens are filtered") {
  Thesaurus t = parse("topic\tsyn\tx\ntopic\tsyn\txy\n");
  ThesExpansionConfig config;
  auto words = words_of(expand_thesaurus(t, "topic", config));
  CHECK(words == std::set<std::string>{"xy"});
  // Length counts code points, not bytes.
  Thesaurus cjk = parse("\xe9\x9d\x92\xe6\x98\xa5\tsyn\t\xe5\xb9\xb4\n\xe9\x9d\x92\xe6\x98\xa5\tsyn\t\xe5\xb9\xb4\xe8\xbd\xbb\n");
  auto cjk_words = words_of(expand_thesaurus(cjk, "\xe9\x9d\x92\xe6\x98\xa5", config));
  CHECK(cjk_words == std::set<std::string>{"\xe5\xb9\xb4\xe8\xbd\xbb"});
}

TEST_CASE("scores count distinct derivations and sort") {
  Thesaurus t = parse(
      "a\tsyn\tbb\n"
      "a\thyper\tbb\n"
      "a\tsyn\tcc\n"
      "a\tsyn\tdd\n");
  ThesExpansionConfig config;
  auto out = expand_thesaurus(t, "a", config);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == std::pair<std::string, std::size_t>{"bb", 2});
  CHECK(out[1] == std::pair<std::string, std::size_t>{"cc", 1});
  CHECK(out[2] == std::pair<std::string, std::size_t>{"dd", 1});

  config.min_score = 2;
  CHECK(expand_thesaurus(t, "a", config).size() == 1);
  config.min_score = 1;
  config.max_words = 2;
  CHECK(expand_thesaurus(t, "a", config).size() == 2);
}

TEST_CASE("topic never appears and output is monotone in depth") {
  Thesaurus t = parse(
      "aa\tsyn\tbb\n"
      "bb\tsyn\taa\n"
      "bb\tsyn\tcc\n"
      "cc\tant\tdd\n"
      "dd\tant\taa\n"
      "dd\tant\tee\n"
      "cc\thyper\tff\n");
  ThesExpansionConfig config;
  std::set<std::string> previous;
  for (std::size_t depth = 1; depth <= 5; ++depth) {
    config.depth = depth;
    auto out = expand_thesaurus(t, "aa", config);
    auto words = words_of(out);
    CHECK_FALSE(words.contains("aa"));
    CHECK(std::includes(words.begin(), words.end(), previous.begin(), previous.end()));
    for (std::size_t i = 1; i < out.size(); ++i) {
      CHECK((out[i - 1].second > out[i].second ||
             (out[i - 1].second == out[i].second && out[i - 1].first < out[i].first)));
    }
    previous = words;
  }
}

TEST_CASE("errors") {
  Thesaurus t = parse(kMood);
  CHECK_THROWS_AS(expand_thesaurus(t, "absent", {}), OovError);
  CHECK_THROWS_AS(parse("a\tfoo\tb\n"), ParseError);
  CHECK_THROWS_AS(parse("a\tsyn\n"), ParseError);
  CHECK_THROWS_AS(parse("a\tsyn\ta\n"), ParseError);
}
