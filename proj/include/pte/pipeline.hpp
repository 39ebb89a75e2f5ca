#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pte/classify.hpp"
#include "pte/corpus.hpp"
#include "pte/inference.hpp"
#include "pte/textnet.hpp"
#include "pte/trainer.hpp"

namespace pte {

/// Word-vector-average features for every document of a corpus.
inline std::vector<std::vector<double>> document_features(const Corpus& corpus,
                                                          const EmbeddingTable& word_table) {
  std::vector<std::vector<double>> features;
  features.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents)
    features.push_back(embed_ids(doc, word_table).values);
  return features;
}

/// End-to-end evaluation protocol: embeddings are learned from the training
/// corpus only (test data held out from representation learning), documents on
/// both sides are embedded by word-vector averaging, a one-vs-rest logistic
/// regression is fit on the labeled training documents, and micro/macro-F1
/// are measured on the labeled test documents.
inline EvalReport evaluate_split(const EmbeddingTable& word_table, const Corpus& train_corpus,
                                 const Corpus& test_corpus, double c_reg = 1.0,
                                 int threads = 1) {
  std::vector<std::vector<double>> train_features;
  std::vector<std::int32_t> train_labels;
  for (std::size_t i = 0; i < train_corpus.documents.size(); ++i) {
    if (train_corpus.labels[i] == kNoLabel) continue;
    train_features.push_back(embed_ids(train_corpus.documents[i], word_table).values);
    train_labels.push_back(train_corpus.labels[i]);
  }
  if (train_features.empty())
    throw std::runtime_error("evaluate_split: no labeled training documents");
  ClassifierModel model = train_classifier(train_features, train_labels, c_reg, threads);

  std::vector<std::int32_t> predictions;
  std::vector<std::int32_t> gold;
  for (std::size_t i = 0; i < test_corpus.documents.size(); ++i) {
    if (test_corpus.labels[i] == kNoLabel) continue;
    auto x = embed_ids(test_corpus.documents[i], word_table).values;
    predictions.push_back(predict(model, x));
    gold.push_back(test_corpus.labels[i]);
  }
  if (gold.empty()) throw std::runtime_error("evaluate_split: no labeled test documents");
  return evaluate(predictions, gold, model.class_count());
}

/// Builds the configured networks from the training corpus, trains in the
/// configured mode, and evaluates on the test corpus. config.threads drives
/// the trainer only; the classifier fit stays single-threaded here.
inline EvalReport train_and_evaluate(const Corpus& train_corpus, const Corpus& test_corpus,
                                     std::size_t vocab_size, const TrainConfig& config,
                                     double c_reg = 1.0) {
  HeterogeneousTextNetwork hetnet =
      build_heterogeneous(train_corpus, vocab_size, config.window, config.subset);
  EmbeddingTables tables = train(hetnet, config);
  return evaluate_split(tables.word_target, train_corpus, test_corpus, c_reg, 1);
}

}  // namespace pte
