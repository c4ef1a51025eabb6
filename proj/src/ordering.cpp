// Apache License, Version 2.0, refer to LICENSE.txt

#include "essayplan/ordering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "essayplan/error.hpp"
#include "json.hpp"

namespace essayplan {

CoherenceMatrix::CoherenceMatrix(Matrix scores) : scores_(std::move(scores)) {
  if (scores_.rows() != scores_.cols()) throw ValidationError("coherence matrix must be square");
  for (std::size_t i = 0; i < scores_.rows(); ++i) {
    for (std::size_t j = 0; j < scores_.cols(); ++j) {
      if (i != j && !std::isfinite(scores_(i, j))) {
        throw ValidationError("coherence matrix entry (" + std::to_string(i) + ", " + std::to_string(j) +
                              ") is not finite");
      }
    }
  }
}

CoherenceMatrix build_matrix(std::span<const Sentence* const> sentences, const CoherenceModel& model) {
  if (sentences.empty()) throw ValidationError("coherence matrix needs at least one sentence");
  const std::size_t n = sentences.size();
  std::vector<SentenceFeatures> features;
  features.reserve(n);
  for (const Sentence* s : sentences) features.push_back(featurize(*s, model));
  Matrix scores(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) scores(i, j) = score_features(model, features[i], features[j]);
    }
  }
  return CoherenceMatrix(std::move(scores));
}

CoherenceMatrix build_matrix(std::span<const Sentence> sentences, const CoherenceModel& model) {
  std::vector<const Sentence*> ptrs;
  for (const Sentence& s : sentences) ptrs.push_back(&s);
  return build_matrix(std::span<const Sentence* const>(ptrs), model);
}

double chain_score(const CoherenceMatrix& matrix, const Ordering& order) {
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < order.size(); ++t) {
    total += matrix(order.permutation[t], order.permutation[t + 1]);
  }
  return total;
}

namespace {

void check_start(const CoherenceMatrix& matrix, std::size_t start) {
  if (start >= matrix.size()) {
    throw ValidationError("start index " + std::to_string(start) + " outside a matrix of size " +
                          std::to_string(matrix.size()));
  }
}

}  // namespace

Ordering order_greedy(const CoherenceMatrix& matrix, std::size_t start) {
  check_start(matrix, start);
  const std::size_t n = matrix.size();
  std::vector<bool> visited(n, false);
  Ordering order;
  order.permutation.push_back(start);
  visited[start] = true;
  std::size_t current = start;
  while (order.size() < n) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      if (best == n || matrix(current, j) > matrix(current, best)) best = j;
    }
    visited[best] = true;
    order.permutation.push_back(best);
    current = best;
  }
  return order;
}

Ordering order_exact_dp(const CoherenceMatrix& matrix, std::size_t start, std::size_t max_n) {
  check_start(matrix, start);
  const std::size_t n = matrix.size();
  if (n > max_n) {
    throw ValidationError("exact ordering supports at most " + std::to_string(max_n) + " sentences, got " +
                          std::to_string(n) + "; use beam search instead");
  }
  if (n > 24) throw ValidationError("exact ordering is limited to 24 sentences");
  if (n == 1) return Ordering{{start}};

  // best[mask * n + last]: highest left-to-right prefix score of a path
  // that starts at `start`, visits exactly `mask`, and ends at `last`.
  const std::size_t states = std::size_t{1} << n;
  constexpr double kUnset = -std::numeric_limits<double>::infinity();
  std::vector<double> best(states * n, kUnset);
  std::vector<std::uint8_t> parent(states * n, 0);
  const std::size_t start_bit = std::size_t{1} << start;
  best[start_bit * n + start] = 0.0;

  auto prefix = [&](std::size_t mask, std::size_t last) {
    std::vector<std::size_t> path;
    while (true) {
      path.push_back(last);
      if (mask == start_bit) break;
      const std::size_t prev = parent[mask * n + last];
      mask &= ~(std::size_t{1} << last);
      last = prev;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  for (std::size_t mask = start_bit; mask < states; ++mask) {
    if (!(mask & start_bit)) continue;
    for (std::size_t last = 0; last < n; ++last) {
      const double here = best[mask * n + last];
      if (here == kUnset) continue;
      for (std::size_t next = 0; next < n; ++next) {
        const std::size_t bit = std::size_t{1} << next;
        if (mask & bit) continue;
        const std::size_t to = (mask | bit) * n + next;
        const double candidate = here + matrix(last, next);
        if (candidate > best[to]) {
          best[to] = candidate;
          parent[to] = static_cast<std::uint8_t>(last);
        } else if (candidate == best[to] && parent[to] != last) {
          auto mine = prefix(mask, last);
          auto theirs = prefix(mask | bit, next);
          theirs.pop_back();
          if (mine < theirs) parent[to] = static_cast<std::uint8_t>(last);
        }
      }
    }
  }

  const std::size_t full = states - 1;
  std::vector<std::size_t> winner;
  double winning = kUnset;
  for (std::size_t last = 0; last < n; ++last) {
    const double v = best[full * n + last];
    if (v == kUnset) continue;
    if (v > winning) {
      winning = v;
      winner = prefix(full, last);
    } else if (v == winning) {
      auto path = prefix(full, last);
      if (path < winner) winner = std::move(path);
    }
  }
  return Ordering{std::move(winner)};
}

Ordering order_beam(const CoherenceMatrix& matrix, std::size_t start, std::size_t beam_width) {
  check_start(matrix, start);
  if (beam_width == 0) throw ValidationError("beam width must be at least 1");
  const std::size_t n = matrix.size();

  struct Partial {
    std::vector<std::size_t> path;
    std::vector<bool> visited;
    double score = 0.0;
  };
  struct Candidate {
    std::size_t parent;
    std::size_t next;
    double score;  // total after appending next
    double step;   // matrix(last, next)
  };

  std::vector<Partial> beam(1);
  beam[0].path = {start};
  beam[0].visited.assign(n, false);
  beam[0].visited[start] = true;

  std::vector<Candidate> candidates;
  for (std::size_t len = 1; len < n; ++len) {
    candidates.clear();
    for (std::size_t b = 0; b < beam.size(); ++b) {
      const Partial& p = beam[b];
      const std::size_t last = p.path.back();
      for (std::size_t j = 0; j < n; ++j) {
        if (p.visited[j]) continue;
        candidates.push_back({b, j, p.score + matrix(last, j), matrix(last, j)});
      }
    }
    // Beam entries are kept sorted, so a smaller parent index means a
    // lexicographically smaller or better-ranked prefix.
    auto better = [&](const Candidate& a, const Candidate& c) {
      if (a.score != c.score) return a.score > c.score;
      if (a.parent == c.parent) {
        if (a.step != c.step) return a.step > c.step;
        return a.next < c.next;
      }
      const auto& pa = beam[a.parent].path;
      const auto& pc = beam[c.parent].path;
      if (pa != pc) return pa < pc;
      return a.next < c.next;
    };
    const std::size_t keep = std::min(beam_width, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep),
                      candidates.end(), better);
    std::vector<Partial> next_beam;
    next_beam.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) {
      const Candidate& c = candidates[i];
      Partial p = beam[c.parent];
      p.path.push_back(c.next);
      p.visited[c.next] = true;
      p.score = c.score;
      next_beam.push_back(std::move(p));
    }
    beam = std::move(next_beam);
  }
  return Ordering{beam.front().path};
}

std::size_t bigram_matches(const Ordering& predicted, const Ordering& gold) {
  const std::size_t n = gold.size();
  if (n < 2) throw ValidationError("bigram accuracy needs at least two sentences");
  if (predicted.size() != n) throw ValidationError("predicted and gold orders differ in length");
  auto sorted_pred = predicted.permutation;
  auto sorted_gold = gold.permutation;
  std::sort(sorted_pred.begin(), sorted_pred.end());
  std::sort(sorted_gold.begin(), sorted_gold.end());
  if (sorted_pred != sorted_gold || std::adjacent_find(sorted_gold.begin(), sorted_gold.end()) != sorted_gold.end()) {
    throw ValidationError("predicted and gold orders cover different sentence sets");
  }
  std::map<std::size_t, std::size_t> successor;
  for (std::size_t t = 0; t + 1 < n; ++t) successor[gold.permutation[t]] = gold.permutation[t + 1];
  std::size_t matches = 0;
  for (std::size_t t = 0; t + 1 < n; ++t) {
    auto it = successor.find(predicted.permutation[t]);
    if (it != successor.end() && it->second == predicted.permutation[t + 1]) ++matches;
  }
  return matches;
}

double bigram_accuracy(const Ordering& predicted, const Ordering& gold) {
  const std::size_t matches = bigram_matches(predicted, gold);
  return static_cast<double>(matches) / static_cast<double>(gold.size() - 1);
}

std::string_view to_string(Decoder decoder) {
  switch (decoder) {
    case Decoder::Greedy: return "greedy";
    case Decoder::ExactDp: return "dp";
    case Decoder::Beam: return "beam";
  }
  return "unknown";
}

Decoder parse_decoder(std::string_view name) {
  for (auto d : {Decoder::Greedy, Decoder::ExactDp, Decoder::Beam}) {
    if (name == to_string(d)) return d;
  }
  throw ValidationError("unknown decoder '" + std::string(name) + "'");
}

Ordering decode(const CoherenceMatrix& matrix, std::size_t start, const DecoderConfig& config) {
  switch (config.decoder) {
    case Decoder::Greedy:
      return order_greedy(matrix, start);
    case Decoder::ExactDp:
      if (matrix.size() <= config.max_exact) return order_exact_dp(matrix, start, config.max_exact);
      return order_beam(matrix, start, config.beam_width);
    case Decoder::Beam:
      return order_beam(matrix, start, config.beam_width);
  }
  return order_greedy(matrix, start);
}

EvaluationReport evaluate_holdout(const Corpus& holdout, const CoherenceModel& model,
                                  const EvaluationConfig& config) {
  EvaluationReport report;
  report.model = std::string(to_string(model.variant()));
  report.decoder = std::string(to_string(config.decoder.decoder));
  std::mt19937_64 rng(config.seed);
  std::size_t total_matches = 0, total_pairs = 0;
  double accuracy_sum = 0.0;

  for (const Document& doc : holdout.documents()) {
    const std::size_t n = doc.sentences.size();
    if (n < 2) {
      ++report.skipped;
      continue;
    }
    // presented[p] = original index of the sentence shown at position p;
    // the true first sentence keeps position 0.
    std::vector<std::size_t> presented(n);
    std::iota(presented.begin(), presented.end(), 0);
    if (config.shuffle) std::shuffle(presented.begin() + 1, presented.end(), rng);

    std::vector<const Sentence*> shown;
    for (std::size_t p : presented) shown.push_back(&doc.sentences[p]);
    const CoherenceMatrix matrix = build_matrix(std::span<const Sentence* const>(shown), model);
    const Ordering decoded = decode(matrix, 0, config.decoder);

    DocumentEvaluation eval;
    eval.id = doc.id;
    eval.sentences = n;
    for (std::size_t p : decoded.permutation) eval.predicted.permutation.push_back(presented[p]);
    Ordering gold;
    gold.permutation.resize(n);
    std::iota(gold.permutation.begin(), gold.permutation.end(), 0);
    eval.matches = bigram_matches(eval.predicted, gold);
    eval.accuracy = static_cast<double>(eval.matches) / static_cast<double>(n - 1);

    total_matches += eval.matches;
    total_pairs += n - 1;
    accuracy_sum += eval.accuracy;
    report.documents.push_back(std::move(eval));
  }
  if (report.documents.empty()) {
    throw ValidationError("holdout has no document with at least two sentences");
  }
  report.mean_accuracy = accuracy_sum / static_cast<double>(report.documents.size());
  report.pooled_accuracy = static_cast<double>(total_matches) / static_cast<double>(total_pairs);
  return report;
}

std::string evaluation_report_json(const EvaluationReport& report) {
  nlohmann::ordered_json out;
  out["decoder"] = report.decoder;
  out["model"] = report.model;
  out["mean_accuracy"] = report.mean_accuracy;
  out["pooled_accuracy"] = report.pooled_accuracy;
  auto& docs = out["documents"] = nlohmann::ordered_json::array();
  for (const DocumentEvaluation& d : report.documents) {
    docs.push_back({{"id", d.id}, {"n", d.sentences}, {"accuracy", d.accuracy}});
  }
  out["skipped"] = report.skipped;
  return out.dump(2);
}

}  // namespace essayplan
