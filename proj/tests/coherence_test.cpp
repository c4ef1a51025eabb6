// Apache License, Version 2.0, refer to LICENSE.txt

#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "essayplan/coherence.hpp"
#include "essayplan/error.hpp"
#include "support/synthetic.hpp"

using namespace essayplan;

namespace {

Sentence sentence_of(std::vector<std::string> tokens) {
  Sentence s;
  s.doc_id = "d";
  s.tokens = std::move(tokens);
  return s;
}

}  // namespace

TEST_CASE("bag-of-words cosines") {
  auto boolean = CoherenceModel::bow_boolean();
  auto frequency = CoherenceModel::bow_frequency();
  CHECK(std::abs(score_pair(boolean, sentence_of({"a", "b"}), sentence_of({"a", "c"})) - 0.5) <= 1e-9);
  CHECK(std::abs(score_pair(frequency, sentence_of({"a", "a", "b"}), sentence_of({"a", "b", "b"})) - 0.8) <= 1e-9);
  CHECK(std::abs(score_pair(boolean, sentence_of({"a", "a", "b"}), sentence_of({"a", "b", "b"})) - 1.0) <= 1e-9);
  CHECK(score_pair(boolean, sentence_of({"a"}), sentence_of({"b"})) == 0.0);
}

TEST_CASE("boolean bags ignore multiplicity and self-similarity is one") {
  Corpus corpus = testing::chain_corpus(10, 6);
  auto boolean = CoherenceModel::bow_boolean();
  auto frequency = CoherenceModel::bow_frequency();
  for (const auto& d : corpus.documents()) {
    for (std::size_t i = 0; i + 1 < d.sentences.size(); ++i) {
      Sentence a = d.sentences[i];
      const Sentence& b = d.sentences[i + 1];
      const double before = score_pair(boolean, a, b);
      a.tokens.push_back(a.tokens.front());
      CHECK(score_pair(boolean, a, b) == doctest::Approx(before).epsilon(1e-12));
      CHECK(score_pair(boolean, a, a) == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(score_pair(frequency, a, a) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("composition") {
  EmbeddingTable table(2);
  table.add("a", Vector{1, 0});
  table.add("b", Vector{0, 1});
  auto average = CoherenceModel::embed_average(table);
  CHECK(compose_sentence(sentence_of({"a", "b"}), average) == Vector{0.5, 0.5});
  auto recursive = CoherenceModel::recursive_nn(table, RecnnParams::zeros(2, 3));
  CHECK(compose_sentence(sentence_of({"a"}), recursive) == Vector{1, 0});
  CHECK(compose_sentence(sentence_of({"a", "b"}), recursive) == Vector{0, 0});
  CHECK_THROWS_AS(compose_sentence(sentence_of({"zz"}), average), Error);
  CHECK_THROWS_AS(compose_sentence(sentence_of({"a"}), CoherenceModel::bow_boolean()), Error);
  CHECK_THROWS_AS(CoherenceModel::recursive_nn(table, RecnnParams::zeros(3, 3)), ValidationError);
}

TEST_CASE("zero recursive parameters give one half") {
  EmbeddingTable table(2);
  table.add("a", Vector{1, 0});
  table.add("b", Vector{0.3, 0.4});
  auto model = CoherenceModel::recursive_nn(table, RecnnParams::zeros(2, 4));
  CHECK(score_pair(model, sentence_of({"a", "b"}), sentence_of({"b"})) == 0.5);
}

TEST_CASE("embed average scores lie in [-1, 1]") {
  Corpus corpus = testing::chain_corpus(5, 1);
  EmbeddingTable table = testing::random_embeddings(corpus, 8, 2);
  auto model = CoherenceModel::embed_average(table);
  for (const auto& d : corpus.documents()) {
    for (const auto& a : d.sentences) {
      for (const auto& b : d.sentences) {
        const double s = score_pair(model, a, b);
        CHECK(s >= -1.0);
        CHECK(s <= 1.0);
        CHECK(s == score_pair(model, a, b));
      }
    }
  }
}

TEST_CASE("pair sampling") {
  Corpus three = testing::corpus_from({{"a", "b", "c"}, {"x"}});
  auto pairs = sample_pairs(three, 1, 3);
  REQUIRE(pairs.size() == 4);
  std::size_t positives = 0;
  for (const auto& p : pairs) {
    if (p.label == PairLabel::TruePair) {
      ++positives;
      CHECK(p.second->index == p.first->index + 1);
      CHECK(p.second->doc_id == p.first->doc_id);
    } else {
      CHECK(p.replacement != p.second);
      CHECK(&p.follower() == p.replacement);
    }
  }
  CHECK(positives == 2);

  Corpus corpus = testing::chain_corpus(10, 2);
  auto a = sample_pairs(corpus, 3, 9);
  auto b = sample_pairs(corpus, 3, 9);
  REQUIRE(a.size() == b.size());
  std::set<const Sentence*> replacements;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].first == b[i].first);
    CHECK(a[i].replacement == b[i].replacement);
    if (a[i].label == PairLabel::Corrupted) {
      CHECK(a[i].replacement != a[i].second);
      replacements.insert(a[i].replacement);
    }
  }
  CHECK(replacements.size() > 10);

  CHECK_THROWS_AS(sample_pairs(testing::corpus_from({{"a"}, {"b"}}), 1, 1), Error);
}

TEST_CASE("recursive parameter text format") {
  RecnnParams params = RecnnParams::uniform(3, 2, 0.5, 4);
  CHECK(params.num_parameters() == 3 * 6 + 3 + 2 * 6 + 2 + 2 * 2 + 2);
  std::stringstream buffer;
  write_recnn(params, buffer);
  CHECK(read_recnn(buffer) == params);
  std::istringstream bad("2 2\n1 2 3\n");
  CHECK_THROWS_AS(read_recnn(bad), ParseError);
}

TEST_CASE("variant names") {
  for (auto v : {CoherenceVariant::BowBoolean, CoherenceVariant::BowFrequency, CoherenceVariant::EmbedAverage,
                 CoherenceVariant::RecursiveNn}) {
    CHECK(parse_coherence_variant(to_string(v)) == v);
  }
  CHECK_THROWS_AS(parse_coherence_variant("nope"), Error);
}
