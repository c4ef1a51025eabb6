// Apache License, Version 2.0, refer to LICENSE.txt

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "essayplan/coherence.hpp"
#include "essayplan/config.hpp"
#include "essayplan/corpus.hpp"
#include "essayplan/error.hpp"
#include "essayplan/ordering.hpp"
#include "essayplan/pipeline.hpp"
#include "essayplan/recnn.hpp"
#include "essayplan/selection.hpp"
#include "essayplan/skipgram.hpp"
#include "essayplan/topic_model.hpp"
#include "essayplan/topic_understanding.hpp"
#include "json.hpp"

using namespace essayplan;
using json = nlohmann::ordered_json;

namespace {

struct PipelineArgs {
  std::string config_path;
  std::vector<std::string> overrides;

  void attach(CLI::App* cmd) {
    cmd->add_option("-c,--config", config_path, "Pipeline configuration file")->required()->check(CLI::ExistingFile);
    cmd->add_option("-s,--set", overrides, "Override a configuration key (key=value)");
  }

  Config load() const {
    Config config = Config::load(config_path);
    for (const std::string& o : overrides) config.set_assignment(o);
    return config;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

json arguments_json(const std::vector<Argument>& arguments) {
  json out = json::array();
  for (const Argument& a : arguments) out.push_back({{"id", a.id}, {"words", a.supporting_words}});
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planning-based essay generation: topic expansion, sentence selection and ordering"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_input, ingest_output;
  auto* ingest = app.add_subcommand("ingest", "Validate a JSONL corpus and print statistics");
  ingest->add_option("input", ingest_input, "Corpus file (JSON Lines)")->required();
  ingest->add_option("-o,--output", ingest_output, "Write the normalised corpus here");

  // train-embeddings
  std::string emb_corpus, emb_output;
  SkipgramConfig sg;
  auto* train_emb = app.add_subcommand("train-embeddings", "Train skip-gram word vectors");
  train_emb->add_option("--corpus", emb_corpus)->required();
  train_emb->add_option("-o,--output", emb_output)->required();
  train_emb->add_option("--dim", sg.dim)->capture_default_str();
  train_emb->add_option("--window", sg.window)->capture_default_str();
  train_emb->add_option("--negatives", sg.negatives)->capture_default_str();
  train_emb->add_option("--epochs", sg.epochs)->capture_default_str();
  train_emb->add_option("--learning-rate", sg.learning_rate)->capture_default_str();
  train_emb->add_option("--min-count", sg.min_count)->capture_default_str();
  train_emb->add_option("--seed", sg.seed)->capture_default_str();

  // train-lda
  std::string lda_corpus, lda_output;
  LdaConfig lc;
  double lda_alpha = 0.0;
  auto* train_lda_cmd = app.add_subcommand("train-lda", "Train an LDA topic model by collapsed Gibbs sampling");
  train_lda_cmd->add_option("--corpus", lda_corpus)->required();
  train_lda_cmd->add_option("-o,--output", lda_output)->required();
  train_lda_cmd->add_option("--topics", lc.num_topics)->capture_default_str();
  auto* alpha_opt = train_lda_cmd->add_option("--alpha", lda_alpha, "Default 50 / topics");
  train_lda_cmd->add_option("--beta", lc.beta)->capture_default_str();
  train_lda_cmd->add_option("--iterations", lc.iterations)->capture_default_str();
  train_lda_cmd->add_option("--seed", lc.seed)->capture_default_str();

  // train-coherence
  std::string coh_corpus, coh_embeddings, coh_output;
  RecnnTrainConfig rc;
  auto* train_coh = app.add_subcommand("train-coherence", "Train the recursive neural coherence model");
  train_coh->add_option("--corpus", coh_corpus)->required();
  train_coh->add_option("--embeddings", coh_embeddings)->required();
  train_coh->add_option("-o,--output", coh_output)->required();
  train_coh->add_option("--learning-rate", rc.learning_rate)->capture_default_str();
  train_coh->add_option("--epochs", rc.epochs)->capture_default_str();
  train_coh->add_option("--hidden", rc.hidden_size)->capture_default_str();
  train_coh->add_option("--negatives", rc.negatives_per_positive)->capture_default_str();
  train_coh->add_option("--seed", rc.seed)->capture_default_str();

  // expand / cluster / generate
  PipelineArgs expand_args, cluster_args, select_args, generate_args, eval_args;
  std::string topic;
  auto* expand = app.add_subcommand("expand", "Print the expanded topic words with scores");
  expand_args.attach(expand);
  expand->add_option("topic", topic)->required();

  auto* cluster = app.add_subcommand("cluster", "Print the Arguments found for a topic (JSON)");
  cluster_args.attach(cluster);
  cluster->add_option("topic", topic)->required();

  std::vector<std::string> select_words;
  auto* select = app.add_subcommand("select", "Print the sentences selected for a word set");
  select_args.attach(select);
  select->add_option("words", select_words, "Supporting words")->required();

  std::string trace_path;
  auto* generate = app.add_subcommand("generate", "Generate an essay for a topic");
  generate_args.attach(generate);
  generate->add_option("topic", topic)->required();
  generate->add_option("-t,--trace", trace_path, "Write the JSON trace here");

  // eval-ordering
  std::string eval_output, eval_holdout;
  double holdout_fraction = 0.1;
  std::uint64_t split_seed = 1;
  auto* eval = app.add_subcommand("eval-ordering", "Evaluate sentence ordering on held-out documents");
  eval_args.attach(eval);
  eval->add_option("--holdout", eval_holdout, "Holdout corpus; default: split resources.corpus");
  eval->add_option("--fraction", holdout_fraction, "Holdout fraction when splitting")->capture_default_str();
  eval->add_option("--split-seed", split_seed)->capture_default_str();
  eval->add_option("-o,--output", eval_output, "Write the report JSON here (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) {
      Corpus corpus = ingest_corpus(ingest_input);
      std::cout << "documents " << corpus.size() << "\nsentences " << corpus.num_sentences() << "\ntokens "
                << corpus.num_tokens() << "\nvocabulary " << corpus.vocabulary().size() << '\n';
      if (!ingest_output.empty()) save_corpus(corpus, ingest_output);
    } else if (*train_emb) {
      EmbeddingTable table = train_skipgram(ingest_corpus(emb_corpus), sg);
      save_embeddings(table, emb_output);
      std::cout << "wrote " << table.size() << " vectors of dimension " << table.dim() << '\n';
    } else if (*train_lda_cmd) {
      if (alpha_opt->count() > 0) lc.alpha = lda_alpha;
      LdaModel model = train_lda(ingest_corpus(lda_corpus), lc);
      save_lda(model, lda_output);
      std::cout << "wrote " << model.num_topics() << " topics over " << model.vocabulary_size() << " words\n";
    } else if (*train_coh) {
      Corpus corpus = ingest_corpus(coh_corpus);
      EmbeddingTable table = load_embeddings(coh_embeddings);
      RecnnTrainResult trained = train_recnn(corpus, table, rc);
      for (std::size_t e = 0; e < trained.epoch_loss.size(); ++e) {
        std::cout << "epoch " << e + 1 << " loss " << trained.epoch_loss[e] << '\n';
      }
      save_recnn(trained.params, coh_output);
    } else if (*expand || *cluster) {
      const Config config = (*expand ? expand_args : cluster_args).load();
      const PipelineConfig pc = PipelineConfig::from_config(config);
      const PipelineResources resources = PipelineResources::load(pc);
      const TopicResources tr = resources.topic_resources(pc);
      auto words = expand_topic(topic, pc.backend, tr, pc.expansion_k);
      if (*expand) {
        for (const ScoredWord& w : words) std::cout << w.word << '\t' << w.score << '\n';
      } else {
        std::vector<std::string> list;
        for (const ScoredWord& w : words) list.push_back(w.word);
        ClusteringOutcome outcome = cluster_arguments(list, pc.representation, pc.cluster, tr);
        json out = {{"topic", topic},
                    {"arguments", arguments_json(outcome.arguments)},
                    {"oov_words", outcome.oov_words},
                    {"dropped_clusters", outcome.dropped_clusters}};
        std::cout << out.dump(2) << '\n';
      }
    } else if (*select) {
      const PipelineConfig pc = PipelineConfig::from_config(select_args.load());
      const PipelineResources resources = PipelineResources::load(pc);
      WordSet words(select_words.begin(), select_words.end());
      for (const ScoredSentence& s : select_sentences(words, resources.corpus, pc.selection, resources.embedding_table())) {
        std::cout << s.score << '\t' << s.sentence->doc_id << '\t' << s.sentence->index << '\t' << s.sentence->raw
                  << '\n';
      }
    } else if (*generate) {
      const Config config = generate_args.load();
      const PipelineConfig pc = PipelineConfig::from_config(config);
      if (trace_path.empty()) {
        if (auto t = config.get("output.trace")) trace_path = config.resolve(*t).string();
      }
      const PipelineResources resources = PipelineResources::load(pc);
      EssayResult result = generate_essay(topic, pc, resources);
      std::cout << result.essay.text(pc.sentence_separator);
      if (!trace_path.empty()) write_text(trace_path, result.trace.dump(2) + "\n");
    } else if (*eval) {
      const Config config = eval_args.load();
      const PipelineConfig pc = PipelineConfig::from_config(config);
      const PipelineResources resources = PipelineResources::load(pc);
      Corpus holdout = eval_holdout.empty() ? split_holdout(resources.corpus, holdout_fraction, split_seed).holdout
                                            : ingest_corpus(eval_holdout);
      EvaluationConfig ec;
      ec.decoder = pc.decoder;
      ec.shuffle = config.get_bool("evaluation.shuffle", true);
      ec.seed = config.get_u64("evaluation.seed", pc.seed);
      EvaluationReport report = evaluate_holdout(holdout, resources.coherence_model(pc.coherence), ec);
      const std::string text = evaluation_report_json(report) + "\n";
      if (eval_output.empty()) {
        std::cout << text;
      } else {
        write_text(eval_output, text);
        std::cout << "mean accuracy " << report.mean_accuracy << " over " << report.documents.size()
                  << " documents (" << report.skipped << " skipped)\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
