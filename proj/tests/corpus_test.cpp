// Apache License, Version 2.0, refer to LICENSE.txt

#include <set>
#include <sstream>

#include "doctest.h"
#include "essayplan/corpus.hpp"
#include "essayplan/error.hpp"
#include "support/synthetic.hpp"

using namespace essayplan;

TEST_CASE("ingest computes the vocabulary") {
  std::istringstream in(R"({"id": "x", "sentences": [{"raw": "a b", "tokens": ["a","b"]}, {"raw": "b c", "tokens": ["b","c"]}]})");
  Corpus corpus = read_corpus(in);
  REQUIRE(corpus.size() == 1);
  CHECK(corpus.vocabulary() == Vocabulary{{"a", 1}, {"b", 2}, {"c", 1}});
  const Sentence& s = corpus.documents()[0].sentences[1];
  CHECK(s.doc_id == "x");
  CHECK(s.index == 1);
  CHECK(s.raw == "b c");
}

TEST_CASE("empty file gives an empty corpus") {
  std::istringstream in("");
  Corpus corpus = read_corpus(in);
  CHECK(corpus.empty());
  CHECK(corpus.vocabulary().empty());
}

TEST_CASE("malformed records report their line") {
  SUBCASE("empty token list") {
    std::istringstream in("\n{\"id\": \"x\", \"sentences\": [{\"raw\": \"\", \"tokens\": []}]}\n");
    try {
      read_corpus(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("broken json") {
    std::istringstream in("{\"id\": \"x\", \"sentences\": [}\n");
    CHECK_THROWS_AS(read_corpus(in), ParseError);
  }
  SUBCASE("missing raw") {
    std::istringstream in("{\"id\": \"x\", \"sentences\": [{\"tokens\": [\"a\"]}]}\n");
    CHECK_THROWS_AS(read_corpus(in), ParseError);
  }
}

TEST_CASE("duplicate document ids are rejected") {
  std::istringstream in(
      "{\"id\": \"x\", \"sentences\": [{\"raw\": \"a\", \"tokens\": [\"a\"]}]}\n"
      "{\"id\": \"x\", \"sentences\": [{\"raw\": \"b\", \"tokens\": [\"b\"]}]}\n");
  CHECK_THROWS_AS(read_corpus(in), ValidationError);
}

TEST_CASE("write then read is lossless") {
  Corpus corpus = testing::corpus_from({{"a b", "c \"quoted\" d"}, {"\xe9\x9d\x92 \xe6\x98\xa5"}, {}});
  std::stringstream buffer;
  write_corpus(corpus, buffer);
  Corpus again = read_corpus(buffer);
  CHECK(again == corpus);
  CHECK(again.vocabulary() == corpus.vocabulary());
}

TEST_CASE("vocabulary equals the token multiset") {
  Corpus corpus = testing::chain_corpus(20, 3);
  Vocabulary counted;
  for (const Document& d : corpus.documents()) {
    for (const Sentence& s : d.sentences) {
      for (const std::string& t : s.tokens) ++counted[t];
    }
  }
  CHECK(counted == corpus.vocabulary());
}

TEST_CASE("holdout split") {
  std::vector<std::vector<std::string>> docs(10, std::vector<std::string>{"a b"});
  Corpus corpus = testing::corpus_from(docs);

  auto split = split_holdout(corpus, 0.2, 7);
  CHECK(split.train.size() == 8);
  CHECK(split.holdout.size() == 2);

  std::set<std::string> ids;
  for (const Document& d : split.train.documents()) ids.insert(d.id);
  for (const Document& d : split.holdout.documents()) CHECK(ids.insert(d.id).second);
  CHECK(ids.size() == 10);

  auto again = split_holdout(corpus, 0.2, 7);
  CHECK(again.train == split.train);
  CHECK(again.holdout == split.holdout);

  CHECK(split_holdout(corpus, 0.01, 1).holdout.size() == 1);
  CHECK(split_holdout(corpus, 0.99, 1).holdout.size() == 9);
}

TEST_CASE("holdout split needs two documents") {
  Corpus one = testing::corpus_from({{"a"}});
  CHECK_THROWS_AS(split_holdout(one, 0.5, 1), ValidationError);
  Corpus two = testing::corpus_from({{"a"}, {"b"}});
  CHECK_THROWS_AS(split_holdout(two, 1.0, 1), ValidationError);
}
