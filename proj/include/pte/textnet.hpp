#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "pte/corpus.hpp"

namespace pte {

enum class NetworkKind { word_word, word_doc, word_label };

inline const char* kind_tag(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::word_word: return "ww";
    case NetworkKind::word_doc: return "wd";
    case NetworkKind::word_label: return "wl";
  }
  return "?";
}

inline std::optional<NetworkKind> parse_kind_tag(std::string_view tag) {
  if (tag == "ww") return NetworkKind::word_word;
  if (tag == "wd") return NetworkKind::word_doc;
  if (tag == "wl") return NetworkKind::word_label;
  return std::nullopt;
}

struct Edge {
  std::uint32_t source;  // V_B-side vertex (context word, document, or label)
  std::uint32_t target;  // V_A-side word
  double weight;
};

/// Weighted bipartite network with words on the V_A side. Edges are
/// pre-aggregated (no duplicate source/target pair) and sorted, so the edge
/// order, and everything sampled from it, is deterministic.
struct BipartiteNetwork {
  NetworkKind kind = NetworkKind::word_word;
  std::vector<Edge> edges;
  std::size_t word_count = 0;    // |V_A|
  std::size_t source_count = 0;  // |V_B|

  bool empty() const { return edges.empty(); }

  double total_weight() const {
    double sum = 0;
    for (const auto& e : edges) sum += e.weight;
    return sum;
  }

  /// V_A-side degree: deg_i = sum of weights of edges generating word i.
  std::vector<double> word_degrees() const {
    std::vector<double> deg(word_count, 0.0);
    for (const auto& e : edges) deg[e.target] += e.weight;
    return deg;
  }
};

namespace detail {

inline std::uint64_t edge_key(std::uint32_t source, std::uint32_t target) {
  return (static_cast<std::uint64_t>(source) << 32) | target;
}

inline BipartiteNetwork finalize_network(NetworkKind kind,
                                         const std::unordered_map<std::uint64_t, double>& acc,
                                         std::size_t word_count, std::size_t source_count) {
  BipartiteNetwork net;
  net.kind = kind;
  net.word_count = word_count;
  net.source_count = source_count;
  net.edges.reserve(acc.size());
  for (const auto& [key, w] : acc)
    net.edges.push_back({static_cast<std::uint32_t>(key >> 32),
                         static_cast<std::uint32_t>(key & 0xffffffffu), w});
  std::sort(net.edges.begin(), net.edges.end(), [](const Edge& a, const Edge& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  return net;
}

}  // namespace detail

/// Word-word co-occurrence counts within a sliding window. Each ordered
/// position pair (p,q), p != q, |p-q| <= window inside one document adds 1 to
/// the directed edge word_at_p -> word_at_q; windows never cross documents.
inline BipartiteNetwork build_word_word(const Corpus& corpus, std::size_t vocab_size,
                                        int window) {
  if (window < 1) throw std::invalid_argument("build_word_word: window must be >= 1");
  std::unordered_map<std::uint64_t, double> acc;
  for (const auto& doc : corpus.documents) {
    const auto n = static_cast<std::ptrdiff_t>(doc.size());
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, p - window);
      std::ptrdiff_t hi = std::min(n - 1, p + window);
      for (std::ptrdiff_t q = lo; q <= hi; ++q) {
        if (q == p) continue;
        acc[detail::edge_key(doc[p], doc[q])] += 1.0;
      }
    }
  }
  return detail::finalize_network(NetworkKind::word_word, acc, vocab_size, vocab_size);
}

/// Edge (doc_j -> word_i) weighted by the term frequency of word i in doc j.
inline BipartiteNetwork build_word_doc(const Corpus& corpus, std::size_t vocab_size) {
  std::unordered_map<std::uint64_t, double> acc;
  for (std::size_t j = 0; j < corpus.documents.size(); ++j)
    for (WordId w : corpus.documents[j])
      acc[detail::edge_key(static_cast<std::uint32_t>(j), w)] += 1.0;
  return detail::finalize_network(NetworkKind::word_doc, acc, vocab_size,
                                  corpus.documents.size());
}

/// Edge (label_j -> word_i) weighted by the summed term frequency of word i
/// over documents labeled j. Unlabeled documents contribute nothing.
inline BipartiteNetwork build_word_label(const Corpus& corpus, std::size_t vocab_size) {
  if (corpus.labeled_count() == 0)
    throw std::runtime_error("build_word_label: corpus has no labeled documents");
  std::unordered_map<std::uint64_t, double> acc;
  for (std::size_t j = 0; j < corpus.documents.size(); ++j) {
    if (corpus.labels[j] == kNoLabel) continue;
    auto label = static_cast<std::uint32_t>(corpus.labels[j]);
    for (WordId w : corpus.documents[j]) acc[detail::edge_key(label, w)] += 1.0;
  }
  return detail::finalize_network(NetworkKind::word_label, acc, vocab_size,
                                  corpus.label_names.size());
}

/// Which of the three bipartite networks a run uses.
struct NetworkSubset {
  bool ww = false;
  bool wd = false;
  bool wl = false;

  bool any() const { return ww || wd || wl; }
  int count() const { return int(ww) + int(wd) + int(wl); }

  static NetworkSubset parse(std::string_view spec) {
    NetworkSubset subset;
    std::size_t start = 0;
    while (start <= spec.size()) {
      auto comma = spec.find(',', start);
      auto part = spec.substr(start, comma == std::string_view::npos ? spec.size() - start
                                                                     : comma - start);
      if (!part.empty()) {
        auto kind = parse_kind_tag(part);
        if (!kind) throw std::invalid_argument("unknown network kind: " + std::string(part));
        if (*kind == NetworkKind::word_word) subset.ww = true;
        if (*kind == NetworkKind::word_doc) subset.wd = true;
        if (*kind == NetworkKind::word_label) subset.wl = true;
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return subset;
  }

  std::string to_string() const {
    std::string s;
    auto add = [&s](const char* tag) {
      if (!s.empty()) s += ',';
      s += tag;
    };
    if (ww) add("ww");
    if (wd) add("wd");
    if (wl) add("wl");
    return s;
  }
};

/// Bundle of the selected networks over a shared word-id space; unselected
/// slots stay empty.
struct HeterogeneousTextNetwork {
  std::optional<BipartiteNetwork> ww;
  std::optional<BipartiteNetwork> wd;
  std::optional<BipartiteNetwork> wl;
  std::size_t word_count = 0;

  std::size_t doc_count() const { return wd ? wd->source_count : 0; }
  std::size_t label_count() const { return wl ? wl->source_count : 0; }
};

inline HeterogeneousTextNetwork build_heterogeneous(const Corpus& corpus,
                                                    std::size_t vocab_size, int window,
                                                    NetworkSubset subset) {
  if (!subset.any())
    throw std::invalid_argument("build_heterogeneous: at least one network must be selected");
  HeterogeneousTextNetwork hetnet;
  hetnet.word_count = vocab_size;
  if (subset.ww) hetnet.ww = build_word_word(corpus, vocab_size, window);
  if (subset.wd) hetnet.wd = build_word_doc(corpus, vocab_size);
  if (subset.wl) hetnet.wl = build_word_label(corpus, vocab_size);
  return hetnet;
}

// ---------------------------------------------------------------------------
// Edge-list file format: one "kind<TAB>source<TAB>target<TAB>weight" per line.
// Sources are vocabulary tokens (ww), "d<number>" document ids (wd), or label
// strings (wl); targets are always vocabulary tokens.
// ---------------------------------------------------------------------------

inline void save_edge_list(const BipartiteNetwork& net, const Vocabulary& vocab,
                           const std::vector<std::string>& label_names,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list: " + path);
  const char* tag = kind_tag(net.kind);
  char weight_buf[32];
  for (const auto& e : net.edges) {
    std::snprintf(weight_buf, sizeof(weight_buf), "%.17g", e.weight);
    out << tag << '\t';
    switch (net.kind) {
      case NetworkKind::word_word: out << vocab.id_to_token[e.source]; break;
      case NetworkKind::word_doc: out << 'd' << e.source; break;
      case NetworkKind::word_label: out << label_names[e.source]; break;
    }
    out << '\t' << vocab.id_to_token[e.target] << '\t' << weight_buf << '\n';
  }
}

/// Loads one edge-list file. label_names is populated (in file order) when the
/// file holds a word-label network.
inline BipartiteNetwork load_edge_list(const std::string& path, const Vocabulary& vocab,
                                       std::vector<std::string>* label_names = nullptr) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list: " + path);
  BipartiteNetwork net;
  net.word_count = vocab.size();
  std::unordered_map<std::string, std::uint32_t> labels;
  std::optional<NetworkKind> kind;
  std::uint32_t max_source = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 4> field;
    std::string_view rest = line;
    for (int f = 0; f < 4; ++f) {
      auto tab = rest.find('\t');
      if (f < 3 && tab == std::string_view::npos)
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected 4 tab-separated fields");
      field[f] = rest.substr(0, tab);
      rest = tab == std::string_view::npos ? std::string_view{} : rest.substr(tab + 1);
    }
    auto line_kind = parse_kind_tag(field[0]);
    if (!line_kind)
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": unknown kind tag");
    if (kind && *kind != *line_kind)
      throw std::runtime_error(path + ": mixed network kinds in one edge list");
    kind = line_kind;

    Edge edge{};
    switch (*line_kind) {
      case NetworkKind::word_word: {
        auto id = vocab.lookup(field[1]);
        if (!id)
          throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                   ": source token not in vocabulary");
        edge.source = *id;
        break;
      }
      case NetworkKind::word_doc: {
        if (field[1].size() < 2 || field[1][0] != 'd')
          throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                   ": word-doc source must look like d<number>");
        std::uint32_t doc = 0;
        auto [ptr, ec] = std::from_chars(field[1].data() + 1,
                                         field[1].data() + field[1].size(), doc);
        if (ec != std::errc() || ptr != field[1].data() + field[1].size())
          throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                   ": bad document index");
        edge.source = doc;
        break;
      }
      case NetworkKind::word_label: {
        auto [it, inserted] =
            labels.try_emplace(std::string(field[1]), static_cast<std::uint32_t>(labels.size()));
        edge.source = it->second;
        break;
      }
    }
    auto target = vocab.lookup(field[2]);
    if (!target)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": target token not in vocabulary");
    edge.target = *target;
    try {
      edge.weight = std::stod(std::string(field[3]));
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad weight");
    }
    if (!(edge.weight > 0))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": edge weight must be positive");
    max_source = std::max(max_source, edge.source);
    net.edges.push_back(edge);
  }
  if (!kind) throw std::runtime_error(path + ": empty edge list");
  net.kind = *kind;
  switch (net.kind) {
    case NetworkKind::word_word: net.source_count = vocab.size(); break;
    case NetworkKind::word_doc: net.source_count = max_source + 1; break;
    case NetworkKind::word_label: net.source_count = labels.size(); break;
  }
  if (label_names && net.kind == NetworkKind::word_label) {
    label_names->assign(labels.size(), {});
    for (const auto& [name, id] : labels) (*label_names)[id] = name;
  }
  return net;
}

}  // namespace pte
