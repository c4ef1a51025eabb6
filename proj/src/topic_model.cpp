// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/topic_model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "essayplan/error.hpp"

namespace essayplan {

LdaModel::LdaModel(std::vector<std::string> vocabulary, double alpha, double beta, Matrix phi)
    : vocabulary_(std::move(vocabulary)), alpha_(alpha), beta_(beta), phi_(std::move(phi)) {
  if (vocabulary_.empty()) throw ValidationError("LDA model needs a non-empty vocabulary");
  if (phi_.cols() != vocabulary_.size() || phi_.rows() == 0) {
    throw ValidationError("phi shape does not match the vocabulary");
  }
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!index_.emplace(vocabulary_[i], i).second) {
      throw ValidationError("duplicate vocabulary word '" + vocabulary_[i] + "'");
    }
  }
}

bool LdaModel::contains(std::string_view word) const { return index_.find(word) != index_.end(); }

std::size_t LdaModel::word_index(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) throw OovError(std::string(word), "topic model vocabulary");
  return it->second;
}

Vector LdaModel::topic_vector(std::string_view word) const {
  const std::size_t w = word_index(word);
  Vector v(num_topics());
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = phi_(k, w);
    total += v[k];
  }
  for (double& x : v) x /= total;
  return v;
}

LdaGibbsSampler::LdaGibbsSampler(const Corpus& corpus, const LdaConfig& config)
    : topics_(config.num_topics),
      alpha_(config.alpha.value_or(50.0 / static_cast<double>(config.num_topics))),
      beta_(config.beta),
      rng_(config.seed) {
  if (topics_ == 0) throw ValidationError("LDA needs at least one topic");
  if (!(alpha_ > 0.0) || !(beta_ > 0.0)) throw ValidationError("LDA alpha and beta must be positive");
  if (corpus.vocabulary().empty()) throw ValidationError("LDA needs a non-empty vocabulary");

  std::unordered_map<std::string_view, std::size_t> index;
  for (const auto& [word, count] : corpus.vocabulary()) {
    index.emplace(word, vocabulary_.size());
    vocabulary_.push_back(word);
  }
  const std::size_t docs = corpus.size();
  const std::size_t vocab = vocabulary_.size();
  doc_topic_.assign(docs * topics_, 0);
  topic_word_.assign(topics_ * vocab, 0);
  topic_total_.assign(topics_, 0);
  weights_.resize(topics_);

  std::uniform_int_distribution<std::size_t> pick(0, topics_ - 1);
  for (std::size_t d = 0; d < docs; ++d) {
    for (const Sentence& s : corpus.documents()[d].sentences) {
      for (const std::string& t : s.tokens) {
        const std::size_t w = index.at(t);
        const std::size_t k = pick(rng_);
        word_of_.push_back(w);
        doc_of_.push_back(d);
        topic_of_.push_back(k);
        ++doc_topic_[d * topics_ + k];
        ++topic_word_[k * vocab + w];
        ++topic_total_[k];
      }
    }
  }
}

void LdaGibbsSampler::sweep() {
  const std::size_t vocab = vocabulary_.size();
  const double vbeta = static_cast<double>(vocab) * beta_;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < topic_of_.size(); ++i) {
    const std::size_t w = word_of_[i];
    const std::size_t d = doc_of_[i];
    std::size_t k = topic_of_[i];
    --doc_topic_[d * topics_ + k];
    --topic_word_[k * vocab + w];
    --topic_total_[k];

    double total = 0.0;
    for (std::size_t j = 0; j < topics_; ++j) {
      total += (static_cast<double>(doc_topic_[d * topics_ + j]) + alpha_) *
               (static_cast<double>(topic_word_[j * vocab + w]) + beta_) /
               (static_cast<double>(topic_total_[j]) + vbeta);
      weights_[j] = total;
    }
    const double u = unit(rng_) * total;
    k = 0;
    while (k + 1 < topics_ && weights_[k] <= u) ++k;

    topic_of_[i] = k;
    ++doc_topic_[d * topics_ + k];
    ++topic_word_[k * vocab + w];
    ++topic_total_[k];
  }
}

std::size_t LdaGibbsSampler::assigned_tokens() const {
  return std::accumulate(topic_total_.begin(), topic_total_.end(), std::size_t{0});
}

LdaModel LdaGibbsSampler::model() const {
  const std::size_t vocab = vocabulary_.size();
  Matrix phi(topics_, vocab);
  for (std::size_t k = 0; k < topics_; ++k) {
    const double denom = static_cast<double>(topic_total_[k]) + static_cast<double>(vocab) * beta_;
    for (std::size_t w = 0; w < vocab; ++w) {
      phi(k, w) = (static_cast<double>(topic_word_[k * vocab + w]) + beta_) / denom;
    }
  }
  return LdaModel(vocabulary_, alpha_, beta_, std::move(phi));
}

LdaModel train_lda(const Corpus& corpus, const LdaConfig& config) {
  LdaGibbsSampler sampler(corpus, config);
  for (std::size_t it = 0; it < config.iterations; ++it) sampler.sweep();
  return sampler.model();
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string f; in >> f;) out.push_back(f);
  return out;
}

template <typename T>
T parse_field(const std::string& f, std::size_t line_no) {
  T value{};
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    throw ParseError("invalid number '" + f + "'", line_no);
  }
  return value;
}

}  // namespace

LdaModel read_lda(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  auto header = split_line(line);
  if (header.size() != 4) throw ParseError("header must be 'K V alpha beta'", 1);
  const auto topics = parse_field<std::size_t>(header[0], 1);
  const auto vocab = parse_field<std::size_t>(header[1], 1);
  const auto alpha = parse_field<double>(header[2], 1);
  const auto beta = parse_field<double>(header[3], 1);

  if (!std::getline(in, line)) throw ParseError("missing vocabulary line", 2);
  auto words = split_line(line);
  if (words.size() != vocab) {
    throw ParseError("vocabulary line has " + std::to_string(words.size()) + " words, expected " +
                         std::to_string(vocab),
                     2);
  }
  Matrix phi(topics, vocab);
  for (std::size_t k = 0; k < topics; ++k) {
    const std::size_t line_no = k + 3;
    if (!std::getline(in, line)) throw ParseError("missing topic row", line_no);
    auto values = split_line(line);
    if (values.size() != vocab) {
      throw ParseError("topic row has " + std::to_string(values.size()) + " values, expected " +
                           std::to_string(vocab),
                       line_no);
    }
    for (std::size_t w = 0; w < vocab; ++w) phi(k, w) = parse_field<double>(values[w], line_no);
  }
  return LdaModel(std::move(words), alpha, beta, std::move(phi));
}

LdaModel load_lda(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open LDA model file " + path.string());
  return read_lda(in);
}

void write_lda(const LdaModel& model, std::ostream& out) {
  char buf[64];
  auto number = [&](double x) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string_view(buf, static_cast<std::size_t>(end - buf));
  };
  out << model.num_topics() << ' ' << model.vocabulary_size() << ' ' << number(model.alpha());
  out << ' ' << number(model.beta()) << '\n';
  for (std::size_t w = 0; w < model.vocabulary_size(); ++w) {
    out << (w ? " " : "") << model.vocabulary()[w];
  }
  out << '\n';
  for (std::size_t k = 0; k < model.num_topics(); ++k) {
    for (std::size_t w = 0; w < model.vocabulary_size(); ++w) {
      out << (w ? " " : "") << number(model.phi()(k, w));
    }
    out << '\n';
  }
}

void save_lda(const LdaModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write LDA model file " + path.string());
  write_lda(model, out);
}

}  // namespace essayplan
