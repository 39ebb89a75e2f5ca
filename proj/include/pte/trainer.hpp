#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pte/embedding.hpp"
#include "pte/sampler.hpp"
#include "pte/textnet.hpp"

namespace pte {

enum class TrainMode { joint, pretrain_finetune, unsupervised };

inline const char* mode_tag(TrainMode mode) {
  switch (mode) {
    case TrainMode::joint: return "joint";
    case TrainMode::pretrain_finetune: return "pretrain-finetune";
    case TrainMode::unsupervised: return "unsupervised";
  }
  return "?";
}

inline std::optional<TrainMode> parse_mode(std::string_view tag) {
  if (tag == "joint") return TrainMode::joint;
  if (tag == "pretrain-finetune") return TrainMode::pretrain_finetune;
  if (tag == "unsupervised") return TrainMode::unsupervised;
  return std::nullopt;
}

struct TrainConfig {
  std::size_t dim = 100;
  std::uint64_t samples = 1;  // T: edge-sampling iterations per phase
  // Fine-tuning phase budget in pretrain_finetune mode; defaults to samples.
  std::optional<std::uint64_t> finetune_samples;
  int negatives = 5;          // K
  float initial_rate = 0.025f;
  int window = 5;
  TrainMode mode = TrainMode::joint;
  NetworkSubset subset{true, true, true};
  int threads = 1;
  std::uint64_t seed = 1;
  double noise_power = 0.75;
  bool exact_sigmoid = false;  // exact sigma for gradient tests; lookup table otherwise

  void validate() const {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    if (negatives < 0) throw std::invalid_argument("negatives must be >= 0");
    if (!(initial_rate > 0)) throw std::invalid_argument("initial rate must be > 0");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (!subset.any()) throw std::invalid_argument("network subset must be nonempty");
    if (mode == TrainMode::unsupervised && subset.wl)
      throw std::invalid_argument("unsupervised mode cannot include the word-label network");
    if (mode == TrainMode::pretrain_finetune && !subset.wl)
      throw std::invalid_argument("pretrain-finetune mode requires the word-label network");
  }
};

/// rho_t = rho_0 * max(1 - t/T, 1e-4), non-increasing in t.
inline float learning_rate(float initial_rate, std::uint64_t step, std::uint64_t total) {
  double frac = total == 0 ? 1.0 : 1.0 - static_cast<double>(step) / static_cast<double>(total);
  return static_cast<float>(initial_rate * std::max(frac, 1e-4));
}

/// Sigmoid via a 1024-entry lookup table over [-6, 6] saturating outside, plus
/// an exact mode for gradient tests.
class Sigmoid {
 public:
  static constexpr float kBound = 6.0f;
  static constexpr int kTableSize = 1024;

  explicit Sigmoid(bool exact = false) : exact_(exact) {
    for (int k = 0; k < kTableSize; ++k) {
      double x = 2.0 * kBound * k / kTableSize - kBound;
      table_[k] = static_cast<float>(1.0 / (1.0 + std::exp(-x)));
    }
  }

  float operator()(float x) const {
    if (exact_) return static_cast<float>(1.0 / (1.0 + std::exp(-static_cast<double>(x))));
    if (x >= kBound) return 1.0f;
    if (x <= -kBound) return 0.0f;
    int k = static_cast<int>((x + kBound) * (kTableSize / (2.0f * kBound)));
    return table_[k];
  }

  bool exact() const { return exact_; }

 private:
  bool exact_;
  std::array<float, kTableSize> table_{};
};

inline constexpr float kGradientClip = 5.0f;

inline float clip_gradient(float g) { return std::clamp(g, -kGradientClip, kGradientClip); }

/// The V_B-side table a network's source vertices live in.
inline EmbeddingTable& source_table(EmbeddingTables& tables, NetworkKind kind) {
  switch (kind) {
    case NetworkKind::word_word: return tables.word_context;
    case NetworkKind::word_doc: return tables.doc;
    case NetworkKind::word_label: return tables.label;
  }
  throw std::logic_error("unreachable");
}

inline const EmbeddingTable& source_table(const EmbeddingTables& tables, NetworkKind kind) {
  return source_table(const_cast<EmbeddingTables&>(tables), kind);
}

/// One ascent step on l = log s(u_t.u_s) + sum_k log s(-u_nk.u_s) with fixed
/// negatives. Word rows update in place; the source-row gradient accumulates
/// in grad_buf and applies once at the end, so every term sees the original
/// source vector. Per-coordinate gradients are clipped to +-5.
inline void edge_step_with_negatives(EmbeddingTables& tables, NetworkKind kind,
                                     std::uint32_t source, std::uint32_t target,
                                     std::span<const std::uint32_t> negatives, float rate,
                                     const Sigmoid& sigmoid, std::vector<Real>& grad_buf) {
  EmbeddingTable& words = tables.word_target;
  Real* src = source_table(tables, kind).row(source);
  const std::size_t dim = words.dim;
  grad_buf.assign(dim, 0.0f);

  auto dyad = [&](std::uint32_t word_id, float label) {
    Real* w = words.row(word_id);
    double x = 0;
    for (std::size_t c = 0; c < dim; ++c)
      x += static_cast<double>(w[c]) * static_cast<double>(src[c]);
    if (!std::isfinite(x))
      throw std::runtime_error("edge_step: non-finite activation (net " +
                               std::string(kind_tag(kind)) + ", source " +
                               std::to_string(source) + ", word " + std::to_string(word_id) +
                               ")");
    float g = label - sigmoid(static_cast<float>(x));
    for (std::size_t c = 0; c < dim; ++c) grad_buf[c] += g * w[c];
    for (std::size_t c = 0; c < dim; ++c) w[c] += rate * clip_gradient(g * src[c]);
  };

  dyad(target, 1.0f);
  for (std::uint32_t n : negatives) dyad(n, 0.0f);
  for (std::size_t c = 0; c < dim; ++c) src[c] += rate * clip_gradient(grad_buf[c]);
}

/// Spec-level edge step: draws K negatives from the network's noise
/// distribution (never the positive target) and applies the update.
inline void edge_step(EmbeddingTables& tables, NetworkKind kind, std::uint32_t source,
                      std::uint32_t target, const NoiseDistribution& noise, int negatives,
                      float rate, const Sigmoid& sigmoid, Rng& rng,
                      std::vector<std::uint32_t>& negative_buf, std::vector<Real>& grad_buf) {
  negative_buf.clear();
  for (int k = 0; k < negatives; ++k) negative_buf.push_back(noise.sample_excluding(target, rng));
  edge_step_with_negatives(tables, kind, source, target, negative_buf, rate, sigmoid, grad_buf);
}

/// p(target | context) of the full softmax over the target-side table,
/// computed with max-subtraction. Diagnostic/oracle use only.
inline double conditional_probability(const EmbeddingTable& target_side,
                                      std::span<const Real> context_vec,
                                      std::uint32_t target_id) {
  if (context_vec.size() != target_side.dim)
    throw std::invalid_argument("conditional_probability: dimension mismatch");
  std::vector<double> dots(target_side.rows);
  double max_dot = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < target_side.rows; ++i) {
    const Real* u = target_side.row(i);
    double x = 0;
    for (std::size_t c = 0; c < target_side.dim; ++c)
      x += static_cast<double>(u[c]) * static_cast<double>(context_vec[c]);
    dots[i] = x;
    max_dot = std::max(max_dot, x);
  }
  double denom = 0;
  for (double x : dots) denom += std::exp(x - max_dot);
  return std::exp(dots[target_id] - max_dot) / denom;
}

/// Exact KL-reduction objective of one network:
/// O = -sum_{(i,j) in E} w_ij log p(target_i | source_j).
inline double exact_objective(const BipartiteNetwork& net, const EmbeddingTables& tables) {
  const EmbeddingTable& words = tables.word_target;
  const EmbeddingTable& sources = source_table(tables, net.kind);
  double objective = 0;
  std::uint32_t cached_source = 0;
  bool have_cache = false;
  std::vector<double> dots(words.rows);
  double max_dot = 0, denom = 0;
  for (const auto& e : net.edges) {
    if (!have_cache || e.source != cached_source) {
      const Real* src = sources.row(e.source);
      max_dot = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < words.rows; ++i) {
        const Real* u = words.row(i);
        double x = 0;
        for (std::size_t c = 0; c < words.dim; ++c)
          x += static_cast<double>(u[c]) * static_cast<double>(src[c]);
        dots[i] = x;
        max_dot = std::max(max_dot, x);
      }
      denom = 0;
      for (double x : dots) denom += std::exp(x - max_dot);
      cached_source = e.source;
      have_cache = true;
    }
    objective -= e.weight * (dots[e.target] - max_dot - std::log(denom));
  }
  return objective;
}

using ProgressFn = std::function<void(std::uint64_t done, std::uint64_t total, float rate)>;

namespace detail {

struct NetSlot {
  NetworkKind kind;
  EdgeSampler edges;
  NoiseDistribution noise;
};

inline std::vector<NetSlot> make_slots(const HeterogeneousTextNetwork& hetnet,
                                       NetworkSubset subset, double noise_power) {
  std::vector<NetSlot> slots;
  auto add = [&](const std::optional<BipartiteNetwork>& net, const char* tag, bool wanted) {
    if (!wanted) return;
    if (!net || net->empty())
      throw std::runtime_error(std::string("train: required network '") + tag +
                               "' is empty or missing");
    slots.push_back({net->kind, EdgeSampler(*net), NoiseDistribution(*net, noise_power)});
  };
  add(hetnet.ww, "ww", subset.ww);
  add(hetnet.wd, "wd", subset.wd);
  add(hetnet.wl, "wl", subset.wl);
  return slots;
}

/// One training phase: `iterations` rounds, each sampling one edge per slot in
/// slot order. Workers share the tables Hogwild-style (lock-free row updates,
/// benign races); the step counter is a relaxed atomic, and the learning-rate
/// schedule restarts at rho_0 for every phase. Worker w draws from a private
/// stream seeded seed + w.
inline void run_phase(EmbeddingTables& tables, const std::vector<NetSlot>& slots,
                      std::uint64_t iterations, const TrainConfig& config,
                      const Sigmoid& sigmoid, const ProgressFn& progress) {
  if (slots.empty() || iterations == 0) return;
  std::atomic<std::uint64_t> counter{0};

  auto worker = [&](int index, std::uint64_t local_iterations) {
    Rng rng(config.seed + static_cast<std::uint64_t>(index));
    std::vector<std::uint32_t> negative_buf;
    std::vector<Real> grad_buf;
    negative_buf.reserve(static_cast<std::size_t>(config.negatives));
    grad_buf.reserve(tables.word_target.dim);
    for (std::uint64_t i = 0; i < local_iterations; ++i) {
      std::uint64_t t = counter.fetch_add(1, std::memory_order_relaxed);
      float rate = learning_rate(config.initial_rate, t, iterations);
      for (const NetSlot& slot : slots) {
        auto [source, target] = slot.edges.sample(rng);
        edge_step(tables, slot.kind, source, target, slot.noise, config.negatives, rate,
                  sigmoid, rng, negative_buf, grad_buf);
      }
      if (progress && index == 0 && (i + 1) % 100000 == 0)
        progress(t + 1, iterations, rate);
    }
  };

  const int workers = std::max(1, config.threads);
  if (workers == 1) {
    worker(0, iterations);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const std::uint64_t base = iterations / workers;
    const std::uint64_t extra = iterations % workers;
    for (int w = 0; w < workers; ++w) {
      std::uint64_t n = base + (static_cast<std::uint64_t>(w) < extra ? 1 : 0);
      pool.emplace_back(worker, w, n);
    }
    for (auto& th : pool) th.join();
  }
}

inline VertexCounts counts_for(const HeterogeneousTextNetwork& hetnet, NetworkSubset subset) {
  VertexCounts counts;
  counts.words = hetnet.word_count;
  counts.context_words = subset.ww ? hetnet.word_count : 0;
  counts.docs = subset.wd ? hetnet.doc_count() : 0;
  counts.labels = subset.wl ? hetnet.label_count() : 0;
  return counts;
}

}  // namespace detail

namespace detail {

inline void run_single_phase(EmbeddingTables& tables, const HeterogeneousTextNetwork& hetnet,
                             const TrainConfig& config, const ProgressFn& progress) {
  auto slots = make_slots(hetnet, config.subset, config.noise_power);
  Sigmoid sigmoid(config.exact_sigmoid);
  run_phase(tables, slots, config.samples, config, sigmoid, progress);
}

inline void run_two_phases(EmbeddingTables& tables, const HeterogeneousTextNetwork& hetnet,
                           const TrainConfig& config, const ProgressFn& progress) {
  NetworkSubset pretrain_subset{config.subset.ww, config.subset.wd, false};
  NetworkSubset finetune_subset{false, false, true};
  auto pretrain_slots = make_slots(hetnet, pretrain_subset, config.noise_power);
  auto finetune_slots = make_slots(hetnet, finetune_subset, config.noise_power);
  Sigmoid sigmoid(config.exact_sigmoid);
  run_phase(tables, pretrain_slots, config.samples, config, sigmoid, progress);
  std::uint64_t finetune = config.finetune_samples.value_or(config.samples);
  run_phase(tables, finetune_slots, finetune, config, sigmoid, progress);
}

}  // namespace detail

/// Algorithm: T iterations, each sampling one edge per present network in
/// (ww, wd, wl) order and taking one negative-sampling step for it.
inline EmbeddingTables train_joint(const HeterogeneousTextNetwork& hetnet,
                                   const TrainConfig& config, const ProgressFn& progress = {}) {
  config.validate();
  EmbeddingTables tables =
      initialize_tables(config.dim, detail::counts_for(hetnet, config.subset), config.seed);
  detail::run_single_phase(tables, hetnet, config, progress);
  return tables;
}

/// Phase 1 alternates over the unsupervised networks of the subset for T
/// iterations; phase 2 continues on the word-label network alone, with the
/// learning-rate schedule restarted at rho_0.
inline EmbeddingTables train_pretrain_finetune(const HeterogeneousTextNetwork& hetnet,
                                               const TrainConfig& config,
                                               const ProgressFn& progress = {}) {
  config.validate();
  EmbeddingTables tables =
      initialize_tables(config.dim, detail::counts_for(hetnet, config.subset), config.seed);
  detail::run_two_phases(tables, hetnet, config, progress);
  return tables;
}

/// Mode dispatch used by the CLI and pipeline helpers.
inline EmbeddingTables train(const HeterogeneousTextNetwork& hetnet, const TrainConfig& config,
                             const ProgressFn& progress = {}) {
  if (config.mode == TrainMode::pretrain_finetune)
    return train_pretrain_finetune(hetnet, config, progress);
  return train_joint(hetnet, config, progress);
}

/// Resumes training from existing tables (a loaded checkpoint). Tables the
/// configured subset needs but the warm start lacks are freshly initialized
/// from config.seed; present ones must match the expected shapes.
inline EmbeddingTables continue_training(EmbeddingTables warm,
                                         const HeterogeneousTextNetwork& hetnet,
                                         const TrainConfig& config,
                                         const ProgressFn& progress = {}) {
  config.validate();
  VertexCounts counts = detail::counts_for(hetnet, config.subset);
  EmbeddingTables tables = initialize_tables(config.dim, counts, config.seed);
  auto overlay = [&](EmbeddingTable& dst, EmbeddingTable& src, std::size_t expected_rows,
                     const char* what) {
    if (expected_rows == 0 || src.rows == 0) return;  // unused or not in the checkpoint
    if (src.dim != config.dim)
      throw std::runtime_error(std::string("continue_training: ") + what +
                               " table dimension does not match the configuration");
    if (src.rows != expected_rows)
      throw std::runtime_error(std::string("continue_training: ") + what +
                               " table row count does not match the network");
    TableRole role = dst.role;
    dst = std::move(src);
    dst.role = role;
  };
  overlay(tables.word_target, warm.word_target, counts.words, "word");
  overlay(tables.word_context, warm.word_context, counts.context_words, "context");
  overlay(tables.doc, warm.doc, counts.docs, "doc");
  overlay(tables.label, warm.label, counts.labels, "label");
  if (config.mode == TrainMode::pretrain_finetune)
    detail::run_two_phases(tables, hetnet, config, progress);
  else
    detail::run_single_phase(tables, hetnet, config, progress);
  return tables;
}

}  // namespace pte
