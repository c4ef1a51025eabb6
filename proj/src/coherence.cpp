// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/coherence.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "essayplan/error.hpp"
#include "essayplan/recnn.hpp"

namespace essayplan {

std::string_view to_string(CoherenceVariant variant) {
  switch (variant) {
    case CoherenceVariant::BowBoolean: return "bow_boolean";
    case CoherenceVariant::BowFrequency: return "bow_frequency";
    case CoherenceVariant::EmbedAverage: return "embed_average";
    case CoherenceVariant::RecursiveNn: return "recursive_nn";
  }
  return "unknown";
}

CoherenceVariant parse_coherence_variant(std::string_view name) {
  for (auto v : {CoherenceVariant::BowBoolean, CoherenceVariant::BowFrequency,
                 CoherenceVariant::EmbedAverage, CoherenceVariant::RecursiveNn}) {
    if (name == to_string(v)) return v;
  }
  throw ValidationError("unknown coherence variant '" + std::string(name) + "'");
}

RecnnParams RecnnParams::zeros(std::size_t dim, std::size_t hidden) {
  if (dim == 0 || hidden == 0) throw ValidationError("recursive network sizes must be positive");
  RecnnParams p;
  p.dim = dim;
  p.hidden = hidden;
  p.composition_weights = Matrix(dim, 2 * dim);
  p.composition_bias.assign(dim, 0.0);
  p.hidden_weights = Matrix(hidden, 2 * dim);
  p.hidden_bias.assign(hidden, 0.0);
  p.output_weights = Matrix(2, hidden);
  p.output_bias.assign(2, 0.0);
  return p;
}

RecnnParams RecnnParams::uniform(std::size_t dim, std::size_t hidden, double scale, std::uint64_t seed) {
  RecnnParams p = zeros(dim, hidden);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> draw(-scale, scale);
  for (auto block : p.blocks()) {
    for (double& x : block) x = draw(rng);
  }
  return p;
}

std::array<std::span<double>, 6> RecnnParams::blocks() {
  return {composition_weights.data(), std::span<double>(composition_bias), hidden_weights.data(),
          std::span<double>(hidden_bias), output_weights.data(), std::span<double>(output_bias)};
}

std::array<std::span<const double>, 6> RecnnParams::blocks() const {
  return {composition_weights.data(), std::span<const double>(composition_bias), hidden_weights.data(),
          std::span<const double>(hidden_bias), output_weights.data(),
          std::span<const double>(output_bias)};
}

std::size_t RecnnParams::num_parameters() const {
  std::size_t n = 0;
  for (auto b : blocks()) n += b.size();
  return n;
}

namespace {

void write_row(std::ostream& out, std::span<const double> values) {
  char buf[64];
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[i]);
    out << (i ? " " : "") << std::string_view(buf, static_cast<std::size_t>(end - buf));
  }
  out << '\n';
}

void read_row(std::istream& in, std::span<double> values, std::size_t& line_no) {
  std::string line;
  ++line_no;
  if (!std::getline(in, line)) throw ParseError("unexpected end of file", line_no);
  std::istringstream fields(line);
  std::size_t i = 0;
  for (std::string f; fields >> f; ++i) {
    if (i >= values.size()) throw ParseError("too many values, expected " + std::to_string(values.size()), line_no);
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), values[i]);
    if (ec != std::errc() || ptr != f.data() + f.size()) throw ParseError("invalid number '" + f + "'", line_no);
  }
  if (i != values.size()) {
    throw ParseError("expected " + std::to_string(values.size()) + " values, got " + std::to_string(i), line_no);
  }
}

}  // namespace

void write_recnn(const RecnnParams& params, std::ostream& out) {
  out << params.dim << ' ' << params.hidden << '\n';
  for (const Matrix* m : {&params.composition_weights}) {
    for (std::size_t r = 0; r < m->rows(); ++r) write_row(out, m->row(r));
  }
  write_row(out, params.composition_bias);
  for (std::size_t r = 0; r < params.hidden_weights.rows(); ++r) write_row(out, params.hidden_weights.row(r));
  write_row(out, params.hidden_bias);
  for (std::size_t r = 0; r < params.output_weights.rows(); ++r) write_row(out, params.output_weights.row(r));
  write_row(out, params.output_bias);
}

RecnnParams read_recnn(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing header", 1);
  std::istringstream header(line);
  std::size_t dim = 0, hidden = 0;
  std::string extra;
  if (!(header >> dim >> hidden) || (header >> extra) || dim == 0 || hidden == 0) {
    throw ParseError("header must be 'd h' with positive sizes", 1);
  }
  RecnnParams p = RecnnParams::zeros(dim, hidden);
  std::size_t line_no = 1;
  for (std::size_t r = 0; r < dim; ++r) read_row(in, p.composition_weights.row(r), line_no);
  read_row(in, p.composition_bias, line_no);
  for (std::size_t r = 0; r < hidden; ++r) read_row(in, p.hidden_weights.row(r), line_no);
  read_row(in, p.hidden_bias, line_no);
  for (std::size_t r = 0; r < 2; ++r) read_row(in, p.output_weights.row(r), line_no);
  read_row(in, p.output_bias, line_no);
  return p;
}

RecnnParams load_recnn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open coherence model file " + path.string());
  return read_recnn(in);
}

void save_recnn(const RecnnParams& params, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write coherence model file " + path.string());
  write_recnn(params, out);
}

CoherenceModel::CoherenceModel(CoherenceVariant variant, const EmbeddingTable* table,
                               std::optional<RecnnParams> params)
    : variant_(variant), table_(table), params_(std::move(params)) {}

CoherenceModel CoherenceModel::bow_boolean() { return {CoherenceVariant::BowBoolean, nullptr, std::nullopt}; }

CoherenceModel CoherenceModel::bow_frequency() {
  return {CoherenceVariant::BowFrequency, nullptr, std::nullopt};
}

CoherenceModel CoherenceModel::embed_average(const EmbeddingTable& table) {
  return {CoherenceVariant::EmbedAverage, &table, std::nullopt};
}

CoherenceModel CoherenceModel::recursive_nn(const EmbeddingTable& table, RecnnParams params) {
  if (params.dim != table.dim()) {
    throw ValidationError("recursive network dimension " + std::to_string(params.dim) +
                          " does not match embedding dimension " + std::to_string(table.dim()));
  }
  return {CoherenceVariant::RecursiveNn, &table, std::move(params)};
}

namespace {

std::string describe(const Sentence& s) {
  return "sentence " + std::to_string(s.index) + " of document '" + s.doc_id + "'";
}

double bag_cosine(const std::map<std::string, double, std::less<>>& a,
                  const std::map<std::string, double, std::less<>>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [w, x] : a) {
    na += x * x;
    auto it = b.find(w);
    if (it != b.end()) dot += x * it->second;
  }
  for (const auto& [w, x] : b) nb += x * x;
  if (na == 0.0 || nb == 0.0) throw Error("zero bag-of-words vector");
  return dot / std::sqrt(na * nb);
}

}  // namespace

Vector compose_sentence(const Sentence& sentence, const CoherenceModel& model) {
  try {
    switch (model.variant()) {
      case CoherenceVariant::EmbedAverage:
        return average_embedding(*model.table(), sentence.tokens);
      case CoherenceVariant::RecursiveNn:
        return compose_recursive(*model.params(), *model.table(), sentence.tokens);
      default:
        throw ValidationError("bag-of-words coherence has no dense sentence vector");
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw Error(describe(sentence) + ": " + e.what());
  }
}

SentenceFeatures featurize(const Sentence& sentence, const CoherenceModel& model) {
  SentenceFeatures f;
  switch (model.variant()) {
    case CoherenceVariant::BowBoolean:
      for (const std::string& t : sentence.tokens) f.bag[t] = 1.0;
      break;
    case CoherenceVariant::BowFrequency:
      for (const std::string& t : sentence.tokens) f.bag[t] += 1.0;
      break;
    case CoherenceVariant::EmbedAverage:
    case CoherenceVariant::RecursiveNn:
      f.vector = compose_sentence(sentence, model);
      if (model.variant() == CoherenceVariant::EmbedAverage &&
          std::all_of(f.vector.begin(), f.vector.end(), [](double x) { return x == 0.0; })) {
        throw Error(describe(sentence) + ": zero sentence vector");
      }
      break;
  }
  if (f.bag.empty() && f.vector.empty()) throw Error(describe(sentence) + ": empty representation");
  return f;
}

double score_features(const CoherenceModel& model, const SentenceFeatures& first,
                      const SentenceFeatures& second) {
  switch (model.variant()) {
    case CoherenceVariant::BowBoolean:
    case CoherenceVariant::BowFrequency:
      return bag_cosine(first.bag, second.bag);
    case CoherenceVariant::EmbedAverage:
      return cosine(first.vector, second.vector);
    case CoherenceVariant::RecursiveNn:
      return pair_probabilities(*model.params(), first.vector, second.vector)[1];
  }
  return 0.0;
}

double score_pair(const CoherenceModel& model, const Sentence& first, const Sentence& second) {
  return score_features(model, featurize(first, model), featurize(second, model));
}

std::vector<PairSample> sample_pairs(const Corpus& corpus, std::size_t negatives_per_positive,
                                     std::uint64_t seed) {
  if (negatives_per_positive == 0) throw ValidationError("negatives_per_positive must be positive");
  std::vector<const Sentence*> pool;
  for (const Document& d : corpus.documents()) {
    for (const Sentence& s : d.sentences) pool.push_back(&s);
  }
  std::mt19937_64 rng(seed);
  std::vector<PairSample> samples;
  // Drawing from pool minus the true follower: pick among n-1 slots and
  // skip over the follower's position.
  std::size_t position = 0;
  for (const Document& d : corpus.documents()) {
    for (std::size_t i = 0; i + 1 < d.sentences.size(); ++i) {
      const std::size_t follower = position + i + 1;
      samples.push_back({&d.sentences[i], &d.sentences[i + 1], PairLabel::TruePair, nullptr});
      std::uniform_int_distribution<std::size_t> draw(0, pool.size() - 2);
      for (std::size_t n = 0; n < negatives_per_positive; ++n) {
        std::size_t j = draw(rng);
        if (j >= follower) ++j;
        samples.push_back({&d.sentences[i], &d.sentences[i + 1], PairLabel::Corrupted, pool[j]});
      }
    }
    position += d.sentences.size();
  }
  if (samples.empty()) throw ValidationError("corpus has no adjacent sentence pair");
  return samples;
}

}  // namespace essayplan
