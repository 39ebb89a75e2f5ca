#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pte {

using WordId = std::uint32_t;

/// Label value of an unlabeled document.
inline constexpr std::int32_t kNoLabel = -1;

inline bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

inline std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_ascii_space(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_ascii_space(line[i])) ++i;
    if (i > start) tokens.emplace_back(line.substr(start, i - start));
  }
  return tokens;
}

/// Dense token<->id map with per-id occurrence counts. Ids are assigned in
/// order of first occurrence, so construction is deterministic.
struct Vocabulary {
  std::unordered_map<std::string, WordId> token_to_id;
  std::vector<std::string> id_to_token;
  std::vector<std::uint64_t> counts;

  std::size_t size() const { return id_to_token.size(); }

  std::optional<WordId> lookup(std::string_view token) const {
    auto it = token_to_id.find(std::string(token));
    return it == token_to_id.end() ? std::nullopt : std::optional<WordId>(it->second);
  }
};

/// Integer-encoded documents plus optional per-document labels.
struct Corpus {
  std::vector<std::vector<WordId>> documents;
  std::vector<std::int32_t> labels;  // kNoLabel where unlabeled
  std::vector<std::string> label_names;

  std::size_t labeled_count() const {
    std::size_t n = 0;
    for (auto l : labels) n += (l != kNoLabel);
    return n;
  }

  std::uint64_t token_count() const {
    std::uint64_t n = 0;
    for (const auto& d : documents) n += d.size();
    return n;
  }
};

inline Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                                   std::uint64_t min_count = 1) {
  if (min_count < 1) throw std::invalid_argument("build_vocabulary: min_count must be >= 1");
  std::unordered_map<std::string, std::uint64_t> raw;
  std::vector<std::string> order;  // first-occurrence order
  for (const auto& doc : docs) {
    for (const auto& tok : doc) {
      auto [it, inserted] = raw.try_emplace(tok, 0);
      if (inserted) order.push_back(tok);
      ++it->second;
    }
  }
  Vocabulary vocab;
  for (const auto& tok : order) {
    std::uint64_t c = raw[tok];
    if (c < min_count) continue;
    vocab.token_to_id.emplace(tok, static_cast<WordId>(vocab.id_to_token.size()));
    vocab.id_to_token.push_back(tok);
    vocab.counts.push_back(c);
  }
  if (vocab.id_to_token.empty())
    throw std::runtime_error("build_vocabulary: no token reaches min_count (empty corpus)");
  return vocab;
}

/// Maps tokens to ids, silently dropping out-of-vocabulary tokens.
inline std::vector<WordId> encode_document(const std::vector<std::string>& tokens,
                                           const Vocabulary& vocab) {
  std::vector<WordId> ids;
  ids.reserve(tokens.size());
  for (const auto& tok : tokens) {
    auto it = vocab.token_to_id.find(tok);
    if (it != vocab.token_to_id.end()) ids.push_back(it->second);
  }
  return ids;
}

inline std::vector<std::vector<std::string>> read_tokenized_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open text file: " + path);
  std::vector<std::vector<std::string>> docs;
  std::string line;
  while (std::getline(in, line)) docs.push_back(tokenize(line));
  return docs;
}

/// Reads a labels sidecar ("doc_index<TAB>label_string" per line) into the
/// corpus. Documents not listed stay unlabeled. Label ids extend whatever is
/// already in corpus.label_names, so several corpora can share one id space.
inline void apply_labels_file(Corpus& corpus, const std::string& labels_path) {
  std::ifstream in(labels_path);
  if (!in) throw std::runtime_error("cannot open labels file: " + labels_path);
  std::unordered_map<std::string, std::int32_t> label_ids;
  for (std::size_t i = 0; i < corpus.label_names.size(); ++i)
    label_ids.emplace(corpus.label_names[i], static_cast<std::int32_t>(i));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
      throw std::runtime_error("malformed label record at line " + std::to_string(line_no) +
                               " of " + labels_path);
    std::size_t doc_index = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, doc_index);
    if (ec != std::errc() || ptr != line.data() + tab)
      throw std::runtime_error("malformed document index at line " + std::to_string(line_no) +
                               " of " + labels_path);
    if (doc_index >= corpus.documents.size())
      throw std::runtime_error("label record references nonexistent document " +
                               std::to_string(doc_index) + " (corpus has " +
                               std::to_string(corpus.documents.size()) + " documents)");
    if (corpus.labels[doc_index] != kNoLabel)
      throw std::runtime_error("duplicate label record for document " +
                               std::to_string(doc_index));
    std::string name = line.substr(tab + 1);
    auto [it, inserted] =
        label_ids.try_emplace(name, static_cast<std::int32_t>(corpus.label_names.size()));
    if (inserted) corpus.label_names.push_back(name);
    corpus.labels[doc_index] = it->second;
  }
}

/// Document identity is the 0-based line number in the text file.
inline Corpus load_corpus(const std::string& text_path,
                          const std::optional<std::string>& labels_path,
                          const Vocabulary& vocab) {
  Corpus corpus;
  auto docs = read_tokenized_lines(text_path);
  corpus.documents.reserve(docs.size());
  for (const auto& doc : docs) corpus.documents.push_back(encode_document(doc, vocab));
  corpus.labels.assign(corpus.documents.size(), kNoLabel);
  if (labels_path) apply_labels_file(corpus, *labels_path);
  return corpus;
}

inline void save_vocabulary(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
  for (std::size_t i = 0; i < vocab.size(); ++i)
    out << vocab.id_to_token[i] << '\t' << vocab.counts[i] << '\n';
}

inline Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  Vocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw std::runtime_error("malformed vocabulary record at line " + std::to_string(line_no));
    std::uint64_t count = 0;
    auto [ptr, ec] = std::from_chars(line.data() + tab + 1, line.data() + line.size(), count);
    if (ec != std::errc() || ptr != line.data() + line.size())
      throw std::runtime_error("malformed vocabulary count at line " + std::to_string(line_no));
    std::string token = line.substr(0, tab);
    vocab.token_to_id.emplace(token, static_cast<WordId>(vocab.id_to_token.size()));
    vocab.id_to_token.push_back(std::move(token));
    vocab.counts.push_back(count);
  }
  if (vocab.id_to_token.empty())
    throw std::runtime_error("empty vocabulary file: " + path);
  return vocab;
}

}  // namespace pte
