// Apache License, Version 2.0, refer to LICENSE.txt

#include "support/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace essayplan::testing {

Corpus corpus_from(const std::vector<std::vector<std::string>>& documents) {
  std::vector<Document> docs;
  for (std::size_t d = 0; d < documents.size(); ++d) {
    std::vector<std::pair<std::string, std::vector<std::string>>> sentences;
    for (const std::string& text : documents[d]) {
      std::istringstream in(text);
      std::vector<std::string> tokens;
      for (std::string t; in >> t;) tokens.push_back(t);
      sentences.emplace_back(text, std::move(tokens));
    }
    docs.push_back(make_document("d" + std::to_string(d), std::move(sentences)));
  }
  return Corpus(std::move(docs));
}

Corpus two_block_corpus() {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 200; ++i) {
    docs.push_back({"sun moon"});
    docs.push_back({"cat dog"});
  }
  return corpus_from(docs);
}

Corpus marker_corpus(std::size_t documents, std::size_t markers, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> filler(0, 19), marker(0, markers - 1), extra(0, 1),
      length(4, 6);
  std::vector<std::vector<std::string>> docs;
  for (std::size_t d = 0; d < documents; ++d) {
    const std::string m = "m" + std::to_string(marker(rng));
    const std::size_t n = length(rng);
    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < n; ++i) {
      std::string text = "f" + std::to_string(filler(rng));
      if (extra(rng)) text += " f" + std::to_string(filler(rng));
      sentences.push_back(text + " " + m);
    }
    docs.push_back(std::move(sentences));
  }
  return corpus_from(docs);
}

Corpus chain_corpus(std::size_t documents, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> noise(0, 19), length(5, 8);
  std::vector<std::size_t> links(60);
  std::iota(links.begin(), links.end(), 0);
  std::vector<std::vector<std::string>> docs;
  for (std::size_t d = 0; d < documents; ++d) {
    const std::size_t n = length(rng);
    std::shuffle(links.begin(), links.end(), rng);
    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < n; ++i) {
      sentences.push_back("n" + std::to_string(noise(rng)) + " l" + std::to_string(links[i]) + " n" +
                          std::to_string(noise(rng)) + " l" + std::to_string(links[i + 1]) + " p" +
                          std::to_string(i));
    }
    docs.push_back(std::move(sentences));
  }
  return corpus_from(docs);
}

EmbeddingTable random_embeddings(const Corpus& corpus, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  EmbeddingTable table(dim);
  Vector v(dim);
  for (const auto& [word, count] : corpus.vocabulary()) {
    for (double& x : v) x = gauss(rng);
    table.add(word, v);
  }
  return table;
}

CoherenceMatrix random_matrix(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Matrix m(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) m(i, j) = unit(rng);
    }
  }
  return CoherenceMatrix(std::move(m));
}

BruteForceBest brute_force_order(const CoherenceMatrix& matrix, std::size_t start) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (i != start) rest.push_back(i);
  }
  BruteForceBest best{-1e300, {}};
  do {
    std::vector<std::size_t> order{start};
    order.insert(order.end(), rest.begin(), rest.end());
    double score = 0.0;
    for (std::size_t t = 0; t + 1 < order.size(); ++t) score += matrix(order[t], order[t + 1]);
    if (score > best.score) {
      best.score = score;
      best.optimal_orders = {order};
    } else if (score == best.score) {
      best.optimal_orders.push_back(order);
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best;
}

}  // namespace essayplan::testing
