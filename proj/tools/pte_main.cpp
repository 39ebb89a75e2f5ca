// pte: command-line pipeline for predictive text embeddings.
//
//   pte build-network  corpus + labels -> vocabulary + edge-list files
//   pte train          edge lists -> word embedding file (+ manifest)
//   pte infer          embedding + text -> document vectors
//   pte eval           document vectors + labels -> micro/macro-F1 report
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pte/pte.hpp"

namespace {

using namespace pte;

class StageTimer {
 public:
  void stop(const std::string& stage) {
    auto end = std::chrono::steady_clock::now();
    timings_[stage] = std::chrono::duration<double, std::milli>(end - begin_).count();
    begin_ = end;
  }

  const std::map<std::string, double>& timings() const { return timings_; }

 private:
  std::chrono::steady_clock::time_point begin_ = std::chrono::steady_clock::now();
  std::map<std::string, double> timings_;
};

void require_file(const std::string& path, const std::string& what) {
  if (!std::filesystem::exists(path))
    throw std::invalid_argument(what + " does not exist: " + path);
}

// ---------------------------------------------------------------------------
// build-network
// ---------------------------------------------------------------------------

struct BuildOptions {
  std::string text;
  std::string labels;
  std::string nets = "ww,wd";
  std::string out_prefix;
  int window = 5;
  std::uint64_t min_count = 1;
};

int run_build_network(const BuildOptions& opt) {
  NetworkSubset subset = NetworkSubset::parse(opt.nets);
  if (!subset.any()) throw std::invalid_argument("--nets selects no network");
  if (opt.window < 1) throw std::invalid_argument("--window must be >= 1");
  if (opt.min_count < 1) throw std::invalid_argument("--min-count must be >= 1");
  if (subset.wl && opt.labels.empty())
    throw std::invalid_argument("--nets wl requires --labels");
  require_file(opt.text, "text file");
  if (!opt.labels.empty()) require_file(opt.labels, "labels file");

  StageTimer timer;
  auto docs = read_tokenized_lines(opt.text);
  Vocabulary vocab = build_vocabulary(docs, opt.min_count);
  Corpus corpus;
  for (const auto& doc : docs) corpus.documents.push_back(encode_document(doc, vocab));
  corpus.labels.assign(corpus.documents.size(), kNoLabel);
  if (!opt.labels.empty()) apply_labels_file(corpus, opt.labels);
  timer.stop("load");

  HeterogeneousTextNetwork hetnet =
      build_heterogeneous(corpus, vocab.size(), opt.window, subset);
  timer.stop("build");

  save_vocabulary(vocab, opt.out_prefix + ".vocab");
  std::cerr << "wrote " << opt.out_prefix << ".vocab (" << vocab.size() << " tokens)\n";
  for (const auto* net : {&hetnet.ww, &hetnet.wd, &hetnet.wl}) {
    if (!net->has_value()) continue;
    std::string path = opt.out_prefix + "." + kind_tag((*net)->kind) + ".edges";
    save_edge_list(**net, vocab, corpus.label_names, path);
    std::cerr << "wrote " << path << " (" << (*net)->edges.size() << " edges)\n";
  }
  timer.stop("write");
  return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOptions {
  std::string edges_prefix;
  std::string vocab;
  std::string ww_edges, wd_edges, wl_edges;
  std::string out;
  std::string manifest;
  std::string from_manifest;
  std::string init_checkpoint;
  std::string mode = "joint";
  std::string nets = "ww,wd,wl";
  bool checkpoint = false;
  TrainConfig config;
  std::int64_t finetune_samples = -1;
};

RunManifest resolve_train_manifest(const TrainOptions& opt) {
  RunManifest manifest;
  if (!opt.from_manifest.empty()) {
    require_file(opt.from_manifest, "manifest");
    manifest = RunManifest::load(opt.from_manifest);
    if (manifest.command != "train")
      throw std::invalid_argument("manifest does not describe a train run");
    return manifest;
  }

  manifest.command = "train";
  manifest.config = opt.config;
  auto mode = parse_mode(opt.mode);
  if (!mode) throw std::invalid_argument("unknown --mode: " + opt.mode);
  manifest.config.mode = *mode;
  manifest.config.subset = NetworkSubset::parse(opt.nets);
  if (opt.finetune_samples >= 0)
    manifest.config.finetune_samples = static_cast<std::uint64_t>(opt.finetune_samples);
  manifest.config.validate();

  if (opt.vocab.empty() && opt.edges_prefix.empty())
    throw std::invalid_argument("provide --edges PREFIX or an explicit --vocab");
  std::string vocab_path = opt.vocab.empty() ? opt.edges_prefix + ".vocab" : opt.vocab;
  manifest.inputs["vocab"] = {vocab_path, ""};
  auto edge_path = [&](bool wanted, const char* tag, const std::string& explicit_path) {
    if (!wanted) return;
    std::string path = explicit_path;
    if (path.empty()) {
      if (opt.edges_prefix.empty())
        throw std::invalid_argument(std::string("network '") + tag +
                                    "' requested but no --edges prefix or --" + tag +
                                    "-edges path given");
      path = opt.edges_prefix + "." + tag + ".edges";
    }
    manifest.inputs[tag] = {path, ""};
  };
  edge_path(manifest.config.subset.ww, "ww", opt.ww_edges);
  edge_path(manifest.config.subset.wd, "wd", opt.wd_edges);
  edge_path(manifest.config.subset.wl, "wl", opt.wl_edges);
  if (!opt.init_checkpoint.empty()) {
    manifest.inputs["init"] = {opt.init_checkpoint, ""};
    for (const char* suffix : {".context", ".doc", ".label"}) {
      std::string sidecar = opt.init_checkpoint + suffix;
      if (std::filesystem::exists(sidecar))
        manifest.inputs[std::string("init") + suffix] = {sidecar, ""};
    }
  }

  manifest.outputs.push_back(opt.out.empty() ? "embeddings.txt" : opt.out);
  return manifest;
}

int run_train(const TrainOptions& opt) {
  RunManifest manifest = resolve_train_manifest(opt);
  const bool replay = !opt.from_manifest.empty();
  // Checkpoint-ness survives an --out override on replay, so the rerun
  // produces the original file layout bit-exactly.
  const bool checkpoint = opt.checkpoint || (replay && manifest.outputs.size() > 1);
  if (replay && !opt.out.empty()) manifest.outputs.assign(1, opt.out);
  manifest.config.validate();
  for (auto& [role, file] : manifest.inputs) {
    require_file(file.path, "input '" + role + "'");
    std::string digest = file_digest(file.path);
    if (replay && !file.digest.empty() && digest != file.digest)
      throw std::runtime_error("input '" + role + "' (" + file.path +
                               ") does not match the manifest digest");
    file.digest = digest;
  }
  if (manifest.outputs.empty()) throw std::invalid_argument("no output path configured");

  StageTimer timer;
  Vocabulary vocab = load_vocabulary(manifest.inputs.at("vocab").path);
  HeterogeneousTextNetwork hetnet;
  hetnet.word_count = vocab.size();
  std::vector<std::string> label_names;
  auto load_net = [&](const char* tag, NetworkKind kind) -> std::optional<BipartiteNetwork> {
    auto it = manifest.inputs.find(tag);
    if (it == manifest.inputs.end()) return std::nullopt;
    auto net = load_edge_list(it->second.path, vocab,
                              kind == NetworkKind::word_label ? &label_names : nullptr);
    if (net.kind != kind)
      throw std::runtime_error(it->second.path + ": expected a " + std::string(tag) +
                               " edge list");
    return net;
  };
  hetnet.ww = load_net("ww", NetworkKind::word_word);
  hetnet.wd = load_net("wd", NetworkKind::word_doc);
  hetnet.wl = load_net("wl", NetworkKind::word_label);
  timer.stop("load");

  auto progress = [](std::uint64_t done, std::uint64_t total, float rate) {
    std::fprintf(stderr, "\rprogress %.1f%% (rate %.6f)",
                 100.0 * static_cast<double>(done) / static_cast<double>(total), rate);
    std::fflush(stderr);
  };
  EmbeddingTables tables;
  auto init_it = manifest.inputs.find("init");
  if (init_it != manifest.inputs.end()) {
    std::vector<std::string> checkpoint_labels;
    EmbeddingTables warm = load_checkpoint(init_it->second.path, vocab, &checkpoint_labels);
    if (manifest.config.subset.wl && warm.label.rows > 0 && checkpoint_labels != label_names)
      throw std::runtime_error("checkpoint label table does not match the wl edge list");
    tables = continue_training(std::move(warm), hetnet, manifest.config, progress);
  } else {
    tables = train(hetnet, manifest.config, progress);
  }
  if (manifest.config.samples >= 100000) std::fprintf(stderr, "\n");
  timer.stop("train");

  const std::string out = manifest.outputs.front();
  manifest.outputs.assign(1, out);
  if (checkpoint) {
    save_checkpoint(tables, vocab, label_names, out);
    if (tables.word_context.rows > 0) manifest.outputs.push_back(out + ".context");
    if (tables.doc.rows > 0) manifest.outputs.push_back(out + ".doc");
    if (tables.label.rows > 0) manifest.outputs.push_back(out + ".label");
  } else {
    save_embeddings(tables.word_target, vocab.id_to_token, out);
  }
  timer.stop("write");

  manifest.timings_ms = timer.timings();
  std::string manifest_path = opt.manifest.empty() ? out + ".manifest.json" : opt.manifest;
  manifest.save(manifest_path);
  std::cerr << "wrote " << out << " and " << manifest_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// infer
// ---------------------------------------------------------------------------

struct InferOptions {
  std::string embeddings;
  std::string text;
  std::string out;
};

int run_infer(const InferOptions& opt) {
  require_file(opt.embeddings, "embedding file");
  require_file(opt.text, "text file");

  auto [names, table] = load_embeddings(opt.embeddings);
  Vocabulary vocab;
  for (std::size_t i = 0; i < names.size(); ++i) {
    vocab.token_to_id.emplace(names[i], static_cast<WordId>(i));
    vocab.id_to_token.push_back(names[i]);
    vocab.counts.push_back(0);
  }
  auto docs = read_tokenized_lines(opt.text);
  std::vector<DocumentVector> vectors;
  vectors.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    vectors.push_back(embed_text(docs[i], table, vocab));
    if (vectors.back().covered_tokens == 0)
      std::cerr << "warning: document " << i << " has no in-vocabulary tokens\n";
  }
  save_document_vectors(vectors, opt.out);
  std::cerr << "wrote " << opt.out << " (" << vectors.size() << " vectors)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOptions {
  // plain mode
  std::string train_vectors, train_labels, test_vectors, test_labels;
  std::string predictions;
  std::string report_json;
  double c_reg = 1.0;
  // sweep mode
  std::string sweep;  // "", "samples", "labeled-fraction"
  std::vector<double> sweep_values;
  std::string train_text, test_text;
  std::string out;  // CSV target; stdout if empty
  std::uint64_t min_count = 1;
  std::string mode = "joint";
  std::string nets = "ww,wd,wl";
  TrainConfig config;
};

/// Positional labels for a vector file, kNoLabel where absent.
std::vector<std::int32_t> read_label_column(const std::string& path, std::size_t doc_count,
                                            std::vector<std::string>& label_names) {
  Corpus shell;
  shell.documents.resize(doc_count);
  shell.labels.assign(doc_count, kNoLabel);
  shell.label_names = label_names;
  apply_labels_file(shell, path);
  label_names = shell.label_names;
  return shell.labels;
}

int run_eval_plain(const EvalOptions& opt) {
  for (const auto& [path, what] : std::initializer_list<std::pair<std::string, std::string>>{
           {opt.train_vectors, "train-vectors"},
           {opt.train_labels, "train-labels"},
           {opt.test_vectors, "test-vectors"},
           {opt.test_labels, "test-labels"}}) {
    if (path.empty()) throw std::invalid_argument("missing --" + what);
    require_file(path, what);
  }

  auto train_x = load_document_vectors(opt.train_vectors);
  auto test_x = load_document_vectors(opt.test_vectors);
  if (train_x.empty() || test_x.empty()) throw std::runtime_error("empty document-vector file");
  if (train_x[0].size() != test_x[0].size())
    throw std::runtime_error("train/test vector dimensions differ");

  std::vector<std::string> label_names;
  auto train_y = read_label_column(opt.train_labels, train_x.size(), label_names);
  auto test_y = read_label_column(opt.test_labels, test_x.size(), label_names);

  std::vector<std::vector<double>> xs;
  std::vector<std::int32_t> ys;
  for (std::size_t i = 0; i < train_x.size(); ++i) {
    if (train_y[i] == kNoLabel) continue;
    xs.push_back(train_x[i]);
    ys.push_back(train_y[i]);
  }
  if (xs.empty()) throw std::runtime_error("no labeled training documents");
  ClassifierModel model = train_classifier(xs, ys, opt.c_reg);

  std::vector<std::int32_t> predictions, gold, all_predictions;
  for (std::size_t i = 0; i < test_x.size(); ++i) {
    std::int32_t p = predict(model, test_x[i]);
    all_predictions.push_back(p);
    if (test_y[i] == kNoLabel) continue;
    predictions.push_back(p);
    gold.push_back(test_y[i]);
  }
  if (gold.empty()) throw std::runtime_error("no labeled test documents");
  EvalReport report = evaluate(predictions, gold, label_names.size());

  std::printf("micro_f1 %.6f\n", report.micro_f1);
  std::printf("macro_f1 %.6f\n", report.macro_f1);
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& m = report.per_class[c];
    const char* name = c < label_names.size() ? label_names[c].c_str() : "?";
    std::printf("class %s precision %.6f recall %.6f f1 %.6f support %llu\n", name,
                m.precision, m.recall, m.f1, static_cast<unsigned long long>(m.support));
  }

  if (!opt.predictions.empty()) {
    std::ofstream pred_out(opt.predictions);
    if (!pred_out) throw std::runtime_error("cannot write predictions: " + opt.predictions);
    for (std::size_t i = 0; i < all_predictions.size(); ++i)
      pred_out << i << '\t' << label_names[all_predictions[i]] << '\n';
  }
  if (!opt.report_json.empty()) {
    nlohmann::json j;
    j["micro_f1"] = report.micro_f1;
    j["macro_f1"] = report.macro_f1;
    auto classes = nlohmann::json::array();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
      const auto& m = report.per_class[c];
      classes.push_back({{"label", c < label_names.size() ? label_names[c] : "?"},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"f1", m.f1},
                         {"support", m.support}});
    }
    j["classes"] = classes;
    std::ofstream json_out(opt.report_json);
    if (!json_out) throw std::runtime_error("cannot write report: " + opt.report_json);
    json_out << j.dump(2) << '\n';
  }
  return 0;
}

int run_eval_sweep(const EvalOptions& opt) {
  if (opt.sweep != "samples" && opt.sweep != "labeled-fraction")
    throw std::invalid_argument("--sweep must be 'samples' or 'labeled-fraction'");
  if (opt.sweep_values.empty()) throw std::invalid_argument("--sweep-values is required");
  for (const auto& [path, what] : std::initializer_list<std::pair<std::string, std::string>>{
           {opt.train_text, "train-text"},
           {opt.train_labels, "train-labels"},
           {opt.test_text, "test-text"},
           {opt.test_labels, "test-labels"}}) {
    if (path.empty()) throw std::invalid_argument("sweep mode requires --" + what);
    require_file(path, what);
  }
  TrainConfig config = opt.config;
  auto mode = parse_mode(opt.mode);
  if (!mode) throw std::invalid_argument("unknown --mode: " + opt.mode);
  config.mode = *mode;
  config.subset = NetworkSubset::parse(opt.nets);
  config.validate();

  auto train_docs = read_tokenized_lines(opt.train_text);
  Vocabulary vocab = build_vocabulary(train_docs, opt.min_count);
  Corpus train_corpus;
  for (const auto& d : train_docs) train_corpus.documents.push_back(encode_document(d, vocab));
  train_corpus.labels.assign(train_corpus.documents.size(), kNoLabel);
  apply_labels_file(train_corpus, opt.train_labels);

  Corpus test_corpus = load_corpus(opt.test_text, std::nullopt, vocab);
  test_corpus.label_names = train_corpus.label_names;  // shared label-id space
  apply_labels_file(test_corpus, opt.test_labels);

  std::ofstream file_out;
  std::ostream* out = &std::cout;
  if (!opt.out.empty()) {
    file_out.open(opt.out);
    if (!file_out) throw std::runtime_error("cannot write CSV: " + opt.out);
    out = &file_out;
  }
  char row[128];
  *out << "x,micro_f1,macro_f1\n";

  for (double value : opt.sweep_values) {
    TrainConfig point = config;
    Corpus corpus = train_corpus;
    if (opt.sweep == "samples") {
      point.samples = static_cast<std::uint64_t>(value);
    } else {
      if (!(value > 0.0) || value > 1.0)
        throw std::invalid_argument("labeled fractions must lie in (0, 1]");
      std::vector<std::size_t> labeled;
      for (std::size_t i = 0; i < corpus.labels.size(); ++i)
        if (corpus.labels[i] != kNoLabel) labeled.push_back(i);
      Rng rng(config.seed);
      for (std::size_t i = labeled.size(); i > 1; --i)
        std::swap(labeled[i - 1], labeled[uniform_index(rng, i)]);
      std::size_t keep =
          static_cast<std::size_t>(std::ceil(value * static_cast<double>(labeled.size())));
      for (std::size_t i = keep; i < labeled.size(); ++i)
        corpus.labels[labeled[i]] = kNoLabel;
    }
    EvalReport report = train_and_evaluate(corpus, test_corpus, vocab.size(), point, opt.c_reg);
    std::snprintf(row, sizeof(row), "%g,%.6f,%.6f\n", value, report.micro_f1, report.macro_f1);
    *out << row;
    out->flush();
  }
  return 0;
}

int run_eval(const EvalOptions& opt) {
  return opt.sweep.empty() ? run_eval_plain(opt) : run_eval_sweep(opt);
}

void add_train_config_flags(CLI::App* cmd, TrainConfig& config) {
  cmd->add_option("--dim", config.dim, "Embedding dimension")->capture_default_str();
  cmd->add_option("--samples", config.samples, "Edge-sampling iterations T")
      ->capture_default_str();
  cmd->add_option("--negatives", config.negatives, "Negative samples K per positive edge")
      ->capture_default_str();
  cmd->add_option("--rate", config.initial_rate, "Initial learning rate rho_0")
      ->capture_default_str();
  cmd->add_option("--threads", config.threads, "Trainer worker threads")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "Random seed")->capture_default_str();
  cmd->add_option("--noise-power", config.noise_power,
                  "Exponent on word degree in the noise distribution")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pte: predictive text embedding through heterogeneous text networks"};
  app.require_subcommand(1);

  BuildOptions build_opt;
  auto* build_cmd =
      app.add_subcommand("build-network", "Build vocabulary and network edge lists");
  build_cmd->add_option("--text", build_opt.text, "Corpus file, one document per line")
      ->required();
  build_cmd->add_option("--labels", build_opt.labels,
                        "Labels file (doc_index<TAB>label per line)");
  build_cmd->add_option("--nets", build_opt.nets, "Networks to build (subset of ww,wd,wl)")
      ->capture_default_str();
  build_cmd->add_option("--window", build_opt.window, "Co-occurrence window size")
      ->capture_default_str();
  build_cmd->add_option("--min-count", build_opt.min_count, "Minimum token frequency")
      ->capture_default_str();
  build_cmd->add_option("--out", build_opt.out_prefix, "Output path prefix")->required();

  TrainOptions train_opt;
  train_opt.config.samples = 1000000;
  auto* train_cmd = app.add_subcommand("train", "Train embeddings from edge lists");
  train_cmd->add_option("--edges", train_opt.edges_prefix,
                        "Prefix written by build-network (expects PREFIX.<net>.edges)");
  train_cmd->add_option("--vocab", train_opt.vocab, "Vocabulary file (default PREFIX.vocab)");
  train_cmd->add_option("--ww-edges", train_opt.ww_edges, "Explicit word-word edge list");
  train_cmd->add_option("--wd-edges", train_opt.wd_edges, "Explicit word-doc edge list");
  train_cmd->add_option("--wl-edges", train_opt.wl_edges, "Explicit word-label edge list");
  train_cmd->add_option("--nets", train_opt.nets, "Networks to train on")
      ->capture_default_str();
  train_cmd->add_option("--mode", train_opt.mode, "joint | pretrain-finetune | unsupervised")
      ->capture_default_str();
  train_cmd->add_option("--window", train_opt.config.window,
                        "Co-occurrence window (recorded in the manifest)")
      ->capture_default_str();
  train_cmd->add_option("--finetune-samples", train_opt.finetune_samples,
                        "Fine-tuning iterations (pretrain-finetune mode; default --samples)");
  train_cmd->add_option("--out", train_opt.out, "Embedding output file [embeddings.txt]");
  train_cmd->add_option("--manifest", train_opt.manifest,
                        "Manifest output path (default <out>.manifest.json)");
  train_cmd->add_flag("--checkpoint", train_opt.checkpoint,
                      "Also write context/doc/label table sidecars");
  train_cmd->add_option("--init-checkpoint", train_opt.init_checkpoint,
                        "Resume from a checkpoint written with --checkpoint");
  train_cmd->add_option("--from-manifest", train_opt.from_manifest,
                        "Re-run a recorded manifest");
  add_train_config_flags(train_cmd, train_opt.config);

  InferOptions infer_opt;
  auto* infer_cmd = app.add_subcommand("infer", "Embed documents by word-vector averaging");
  infer_cmd->add_option("--embeddings", infer_opt.embeddings, "Word embedding file")
      ->required();
  infer_cmd->add_option("--text", infer_opt.text, "Corpus file, one document per line")
      ->required();
  infer_cmd->add_option("--out", infer_opt.out, "Document-vector output file")->required();

  EvalOptions eval_opt;
  auto* eval_cmd = app.add_subcommand("eval", "One-vs-rest logistic regression evaluation");
  eval_cmd->add_option("--train-vectors", eval_opt.train_vectors, "Training document vectors");
  eval_cmd->add_option("--train-labels", eval_opt.train_labels, "Training labels file");
  eval_cmd->add_option("--test-vectors", eval_opt.test_vectors, "Test document vectors");
  eval_cmd->add_option("--test-labels", eval_opt.test_labels, "Test labels file");
  eval_cmd->add_option("--creg", eval_opt.c_reg, "LibLinear-style regularization strength C")
      ->capture_default_str();
  eval_cmd->add_option("--predictions", eval_opt.predictions,
                       "Write doc_index<TAB>label predictions here");
  eval_cmd->add_option("--report-json", eval_opt.report_json,
                       "Write a machine-readable report here");
  eval_cmd->add_option("--sweep", eval_opt.sweep,
                       "Sweep mode: 'samples' or 'labeled-fraction' (emits CSV)");
  eval_cmd->add_option("--sweep-values", eval_opt.sweep_values, "Sweep points")
      ->delimiter(',');
  eval_cmd->add_option("--train-text", eval_opt.train_text, "Training corpus (sweep mode)");
  eval_cmd->add_option("--test-text", eval_opt.test_text, "Test corpus (sweep mode)");
  eval_cmd->add_option("--out", eval_opt.out, "CSV output file (sweep mode; default stdout)");
  eval_cmd->add_option("--min-count", eval_opt.min_count, "Minimum token frequency")
      ->capture_default_str();
  eval_cmd->add_option("--mode", eval_opt.mode, "Training mode (sweep mode)")
      ->capture_default_str();
  eval_cmd->add_option("--nets", eval_opt.nets, "Network subset (sweep mode)")
      ->capture_default_str();
  eval_cmd->add_option("--window", eval_opt.config.window, "Co-occurrence window (sweep mode)")
      ->capture_default_str();
  add_train_config_flags(eval_cmd, eval_opt.config);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*build_cmd) return run_build_network(build_opt);
    if (*train_cmd) return run_train(train_opt);
    if (*infer_cmd) return run_infer(infer_opt);
    if (*eval_cmd) return run_eval(eval_opt);
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
