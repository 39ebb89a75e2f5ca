#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pte/corpus.hpp"
#include "pte/embedding.hpp"

namespace pte {

/// Mean of word vectors; covered_tokens counts the in-vocabulary tokens
/// (with multiplicity) the mean was taken over.
struct DocumentVector {
  std::vector<double> values;
  std::size_t covered_tokens = 0;
};

/// Text vector as the average of the vectors of its in-vocabulary words.
/// Fully out-of-vocabulary text maps to the zero vector with covered_tokens 0.
inline DocumentVector embed_text(const std::vector<std::string>& tokens,
                                 const EmbeddingTable& word_table, const Vocabulary& vocab) {
  DocumentVector doc;
  doc.values.assign(word_table.dim, 0.0);
  for (const auto& tok : tokens) {
    auto id = vocab.lookup(tok);
    if (!id) continue;
    const Real* u = word_table.row(*id);
    for (std::size_t c = 0; c < word_table.dim; ++c) doc.values[c] += u[c];
    ++doc.covered_tokens;
  }
  if (doc.covered_tokens > 0) {
    const double n = static_cast<double>(doc.covered_tokens);
    for (auto& v : doc.values) v /= n;
  }
  return doc;
}

inline DocumentVector embed_ids(const std::vector<WordId>& ids,
                                const EmbeddingTable& word_table) {
  DocumentVector doc;
  doc.values.assign(word_table.dim, 0.0);
  for (WordId id : ids) {
    const Real* u = word_table.row(id);
    for (std::size_t c = 0; c < word_table.dim; ++c) doc.values[c] += u[c];
  }
  doc.covered_tokens = ids.size();
  if (!ids.empty()) {
    const double n = static_cast<double>(ids.size());
    for (auto& v : doc.values) v /= n;
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Document-vector file format: one "doc_index v1 ... vd" line per document.
// ---------------------------------------------------------------------------

inline void save_document_vectors(const std::vector<DocumentVector>& docs,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write document vectors: " + path);
  char buf[32];
  for (std::size_t i = 0; i < docs.size(); ++i) {
    out << i;
    for (double v : docs[i].values) {
      std::snprintf(buf, sizeof(buf), "%.6f", v);
      out << ' ' << buf;
    }
    out << '\n';
  }
}

inline std::vector<std::vector<double>> load_document_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open document vectors: " + path);
  std::vector<std::vector<double>> vectors;
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::size_t index = 0;
    if (!(ls >> index) || index != vectors.size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": document indices must be dense and in order");
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    if (vectors.empty()) {
      dim = v.size();
      if (dim == 0)
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": empty vector");
    } else if (v.size() != dim) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": inconsistent vector dimension");
    }
    vectors.push_back(std::move(v));
  }
  return vectors;
}

}  // namespace pte
