// Apache License, Version 2.0, refer to LICENSE.txt

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "essayplan/embedding.hpp"
#include "essayplan/error.hpp"

using namespace essayplan;

namespace {

EmbeddingTable table_of(std::initializer_list<std::pair<const char*, Vector>> rows) {
  EmbeddingTable table(rows.begin()->second.size());
  for (const auto& [w, v] : rows) table.add(w, v);
  return table;
}

}  // namespace

TEST_CASE("cosine") {
  CHECK(cosine(Vector{1, 0}, Vector{1, 0}) == 1.0);
  CHECK(cosine(Vector{1, 0}, Vector{0, 1}) == 0.0);
  CHECK(cosine(Vector{1, 1}, Vector{1, 0}) == doctest::Approx(0.70710678).epsilon(1e-9));
  CHECK_THROWS_AS(cosine(Vector{1, 0}, Vector{1, 0, 0}), Error);
  CHECK_THROWS_AS(cosine(Vector{0, 0}, Vector{1, 0}), Error);
}

TEST_CASE("cosine properties on random vectors") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    Vector a(6), b(6);
    for (double& x : a) x = g(rng);
    for (double& x : b) x = g(rng);
    CHECK(cosine(a, a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine(a, b) == cosine(b, a));
    Vector scaled = a;
    const double alpha = scale(rng);
    for (double& x : scaled) x *= alpha;
    CHECK(cosine(scaled, b) == doctest::Approx(cosine(a, b)).epsilon(1e-12));
    const double c = cosine(a, b);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("nearest neighbours") {
  auto table = table_of({{"a", {1, 0}}, {"b", {1, 0.01}}, {"c", {0, 1}}});
  auto top = nearest_neighbors(table, "a", 1);
  REQUIRE(top.size() == 1);
  CHECK(top[0].word == "b");
  CHECK(top[0].score == doctest::Approx(0.99995).epsilon(1e-5));

  auto all = nearest_neighbors(table, "a", 10);
  REQUIRE(all.size() == 2);
  CHECK(all[0].word == "b");
  CHECK(all[1].word == "c");
  CHECK(all[0].score >= all[1].score);

  CHECK_THROWS_AS(nearest_neighbors(table, "zzz", 1), OovError);
}

TEST_CASE("nearest neighbour ties are lexicographic") {
  auto table = table_of({{"q", {1, 0}}, {"z", {0, 1}}, {"m", {0, 2}}, {"a", {0, 3}}});
  auto top = nearest_neighbors(table, "q", 3);
  REQUIRE(top.size() == 3);
  CHECK(top[0].word == "a");
  CHECK(top[1].word == "m");
  CHECK(top[2].word == "z");
}

TEST_CASE("average embedding") {
  auto table = table_of({{"a", {1, 0}}, {"b", {0, 1}}});
  CHECK(average_embedding(table, std::vector<std::string>{"a", "b"}) == Vector{0.5, 0.5});
  CHECK(average_embedding(table, std::vector<std::string>{"a"}) == Vector{1, 0});
  CHECK(average_embedding(table, std::vector<std::string>{"a", "oov", "b"}) == Vector{0.5, 0.5});
  CHECK(average_embedding(table, std::vector<std::string>{"b", "b", "b"}) == Vector{0, 1});
  CHECK_THROWS_WITH_AS(average_embedding(table, std::vector<std::string>{"x", "y"}),
                       doctest::Contains("x, y"), Error);
}

TEST_CASE("word2vec text format round trip") {
  auto table = table_of({{"a", {0.1, -2.5e-7, 3}}, {"\xe9\x9d\x92", {1.0 / 3, 2, -4}}});
  std::stringstream buffer;
  write_embeddings(table, buffer);
  EmbeddingTable again = read_embeddings(buffer);
  REQUIRE(again.size() == 2);
  for (const std::string& w : table.words()) {
    auto x = table.at(w);
    auto y = again.at(w);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) <= 1e-6);
  }
}

TEST_CASE("word2vec parse errors carry the line") {
  SUBCASE("short row") {
    std::istringstream in("2 3\na 1 2 3\nb 1 2\n");
    try {
      read_embeddings(in);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate word") {
    std::istringstream in("2 1\na 1\na 2\n");
    CHECK_THROWS_AS(read_embeddings(in), ParseError);
  }
  SUBCASE("count mismatch") {
    std::istringstream in("3 1\na 1\nb 2\n");
    CHECK_THROWS_AS(read_embeddings(in), ParseError);
  }
}
