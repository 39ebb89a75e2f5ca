#pragma once

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pte/corpus.hpp"
#include "pte/sampler.hpp"

namespace pte {

using Real = float;

enum class TableRole { word_target, word_context, doc, label };

/// Dense |vertices| x d matrix of vertex vectors, row-major.
struct EmbeddingTable {
  TableRole role = TableRole::word_target;
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<Real> data;

  void resize(std::size_t r, std::size_t d) {
    rows = r;
    dim = d;
    data.assign(r * d, 0.0f);
  }

  Real* row(std::size_t i) { return data.data() + i * dim; }
  const Real* row(std::size_t i) const { return data.data() + i * dim; }
};

/// The four tables of one training run. word_target is the published word
/// embedding, shared across all three networks; word_context, doc and label
/// hold the V_B sides of G_ww, G_wd and G_wl.
struct EmbeddingTables {
  EmbeddingTable word_target;
  EmbeddingTable word_context;
  EmbeddingTable doc;
  EmbeddingTable label;
};

struct VertexCounts {
  std::size_t words = 0;
  std::size_t context_words = 0;
  std::size_t docs = 0;
  std::size_t labels = 0;
};

/// Entries are i.i.d. uniform in [-0.5/d, 0.5/d]; the fill order is fixed so a
/// seed fully determines every table.
inline EmbeddingTables initialize_tables(std::size_t dim, const VertexCounts& counts,
                                         std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("initialize_tables: dimension must be >= 1");
  EmbeddingTables tables;
  tables.word_target.role = TableRole::word_target;
  tables.word_context.role = TableRole::word_context;
  tables.doc.role = TableRole::doc;
  tables.label.role = TableRole::label;
  tables.word_target.resize(counts.words, dim);
  tables.word_context.resize(counts.context_words, dim);
  tables.doc.resize(counts.docs, dim);
  tables.label.resize(counts.labels, dim);
  Rng rng(seed);
  const double scale = 1.0 / static_cast<double>(dim);
  for (EmbeddingTable* t : {&tables.word_target, &tables.word_context, &tables.doc,
                            &tables.label}) {
    for (auto& x : t->data) x = static_cast<Real>((uniform_unit(rng) - 0.5) * scale);
  }
  return tables;
}

// ---------------------------------------------------------------------------
// Embedding file format: first line "<rows> <dim>", then one
// "name v1 v2 ... vd" line per vertex with decimal floats.
// ---------------------------------------------------------------------------

inline void save_embeddings(const EmbeddingTable& table,
                            const std::vector<std::string>& row_names, const std::string& path,
                            const char* float_format = "%.6f") {
  if (row_names.size() != table.rows)
    throw std::invalid_argument("save_embeddings: name count does not match table rows");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);
  out << table.rows << ' ' << table.dim << '\n';
  char buf[48];
  for (std::size_t i = 0; i < table.rows; ++i) {
    out << row_names[i];
    const Real* v = table.row(i);
    for (std::size_t c = 0; c < table.dim; ++c) {
      std::snprintf(buf, sizeof(buf), float_format, static_cast<double>(v[c]));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

inline std::pair<std::vector<std::string>, EmbeddingTable> load_embeddings(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  std::size_t rows = 0, dim = 0;
  std::string header;
  if (!std::getline(in, header)) throw std::runtime_error("empty embedding file: " + path);
  {
    std::istringstream hs(header);
    if (!(hs >> rows >> dim) || dim == 0)
      throw std::runtime_error("bad embedding file header: " + path);
  }
  std::vector<std::string> names;
  names.reserve(rows);
  EmbeddingTable table;
  table.resize(rows, dim);
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error(path + ": expected " + std::to_string(rows) + " vector lines");
    std::istringstream ls(line);
    std::string name;
    if (!(ls >> name)) throw std::runtime_error(path + ": malformed vector line");
    Real* v = table.row(i);
    for (std::size_t c = 0; c < dim; ++c) {
      if (!(ls >> v[c]))
        throw std::runtime_error(path + ": vector for '" + name + "' has fewer than " +
                                 std::to_string(dim) + " components");
    }
    names.push_back(std::move(name));
  }
  return {std::move(names), std::move(table)};
}

inline std::vector<std::string> doc_row_names(std::size_t count) {
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 0; i < count; ++i) names.push_back("d" + std::to_string(i));
  return names;
}

/// Checkpoint = word embedding file plus sidecars for the context/doc/label
/// tables, all in the embedding file format. Values are written with nine
/// significant digits so every float round-trips exactly.
inline void save_checkpoint(const EmbeddingTables& tables, const Vocabulary& vocab,
                            const std::vector<std::string>& label_names,
                            const std::string& path) {
  const char* exact = "%.9g";
  save_embeddings(tables.word_target, vocab.id_to_token, path, exact);
  if (tables.word_context.rows > 0)
    save_embeddings(tables.word_context, vocab.id_to_token, path + ".context", exact);
  if (tables.doc.rows > 0)
    save_embeddings(tables.doc, doc_row_names(tables.doc.rows), path + ".doc", exact);
  if (tables.label.rows > 0)
    save_embeddings(tables.label, label_names, path + ".label", exact);
}

/// Loads a checkpoint written by save_checkpoint. Sidecars that do not exist
/// leave their table empty. Word and context row names must match the
/// vocabulary; label sidecar names come back through label_names.
inline EmbeddingTables load_checkpoint(const std::string& path, const Vocabulary& vocab,
                                       std::vector<std::string>* label_names = nullptr) {
  EmbeddingTables tables;
  auto load_into = [&](const std::string& file, EmbeddingTable& slot, TableRole role,
                       bool check_vocab) {
    auto [names, table] = load_embeddings(file);
    if (check_vocab && names != vocab.id_to_token)
      throw std::runtime_error(file + ": row names do not match the vocabulary");
    table.role = role;
    slot = std::move(table);
    return names;
  };
  load_into(path, tables.word_target, TableRole::word_target, true);
  std::ifstream context_probe(path + ".context");
  if (context_probe.good())
    load_into(path + ".context", tables.word_context, TableRole::word_context, true);
  std::ifstream doc_probe(path + ".doc");
  if (doc_probe.good()) load_into(path + ".doc", tables.doc, TableRole::doc, false);
  std::ifstream label_probe(path + ".label");
  if (label_probe.good()) {
    auto names = load_into(path + ".label", tables.label, TableRole::label, false);
    if (label_names) *label_names = names;
  }
  for (const EmbeddingTable* t : {&tables.word_context, &tables.doc, &tables.label}) {
    if (t->rows > 0 && t->dim != tables.word_target.dim)
      throw std::runtime_error(path + ": checkpoint tables disagree on dimension");
  }
  return tables;
}

}  // namespace pte
