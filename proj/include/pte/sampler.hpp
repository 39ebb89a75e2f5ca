#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pte/textnet.hpp"

namespace pte {

using Rng = std::mt19937_64;

/// Uniform double in [0,1) with 53 random bits; avoids the
/// implementation-defined behavior of std::uniform_real_distribution.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform index in [0,n) via Lemire's multiply-shift.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// Walker alias table: O(n) construction, O(1) draws from a fixed discrete
/// distribution proportional to the input weights.
class AliasTable {
 public:
  AliasTable() = default;

  explicit AliasTable(std::span<const double> weights) {
    if (weights.empty()) throw std::invalid_argument("AliasTable: empty weight vector");
    const std::size_t n = weights.size();
    double sum = 0;
    for (double w : weights) {
      if (!(w > 0)) throw std::invalid_argument("AliasTable: weights must be positive");
      sum += w;
    }
    prob_.resize(n);
    alias_.assign(n, 0);

    // Scale so the average cell mass is 1, then repeatedly pair one
    // underfull cell with one overfull cell.
    std::vector<double> scaled(n);
    for (std::size_t i = 0; i < n; ++i) scaled[i] = weights[i] * static_cast<double>(n) / sum;
    std::vector<std::uint32_t> small, large;
    small.reserve(n);
    large.reserve(n);
    for (std::size_t i = n; i-- > 0;) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      std::uint32_t s = small.back();
      std::uint32_t l = large.back();
      small.pop_back();
      large.pop_back();
      prob_[s] = scaled[s];
      alias_[s] = l;
      scaled[l] += scaled[s] - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    // Leftovers are cells whose mass is 1 up to rounding.
    for (std::uint32_t s : small) prob_[s] = 1.0;
    for (std::uint32_t l : large) prob_[l] = 1.0;
  }

  std::size_t size() const { return prob_.size(); }
  bool empty() const { return prob_.empty(); }

  std::size_t draw(Rng& rng) const {
    std::size_t k = uniform_index(rng, prob_.size());
    return uniform_unit(rng) < prob_[k] ? k : alias_[k];
  }

  /// Exact per-index probability implied by the table cells. Used by tests to
  /// check the table against the normalized input weights.
  std::vector<double> cell_distribution() const {
    const std::size_t n = prob_.size();
    std::vector<double> p(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      p[k] += prob_[k] / static_cast<double>(n);
      p[alias_[k]] += (1.0 - prob_[k]) / static_cast<double>(n);
    }
    return p;
  }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Samples edges of one network proportionally to edge weight.
class EdgeSampler {
 public:
  explicit EdgeSampler(const BipartiteNetwork& net) : net_(&net) {
    if (net.empty()) throw std::invalid_argument("EdgeSampler: empty network");
    std::vector<double> weights;
    weights.reserve(net.edges.size());
    for (const auto& e : net.edges) weights.push_back(e.weight);
    table_ = AliasTable(weights);
  }

  std::pair<std::uint32_t, std::uint32_t> sample(Rng& rng) const {
    const Edge& e = net_->edges[table_.draw(rng)];
    return {e.source, e.target};
  }

 private:
  const BipartiteNetwork* net_;
  AliasTable table_;
};

inline std::pair<std::uint32_t, std::uint32_t> sample_edge(const EdgeSampler& sampler,
                                                           Rng& rng) {
  return sampler.sample(rng);
}

/// Noise distribution p_n(j) over the word side of one network, with mass
/// deg_j^power. Zero-degree words are excluded from the support entirely.
class NoiseDistribution {
 public:
  NoiseDistribution(const BipartiteNetwork& net, double power) {
    auto degrees = net.word_degrees();
    std::vector<double> masses;
    for (std::uint32_t i = 0; i < degrees.size(); ++i) {
      if (degrees[i] > 0) {
        support_.push_back(i);
        masses.push_back(std::pow(degrees[i], power));
      }
    }
    if (support_.empty())
      throw std::invalid_argument("NoiseDistribution: network has no positive-degree word");
    table_ = AliasTable(masses);
  }

  std::size_t support_size() const { return support_.size(); }

  std::uint32_t sample(Rng& rng) const { return support_[table_.draw(rng)]; }

  /// Draws a word id != exclude; collisions with the positive target are
  /// resolved by re-drawing, bounded at 100 attempts.
  std::uint32_t sample_excluding(std::uint32_t exclude, Rng& rng) const {
    if (support_.size() < 2)
      throw std::runtime_error(
          "sample_negative: degenerate noise distribution (single positive-degree word)");
    for (int attempt = 0; attempt < 100; ++attempt) {
      std::uint32_t id = sample(rng);
      if (id != exclude) return id;
    }
    throw std::runtime_error("sample_negative: 100 draws collided with the excluded id");
  }

 private:
  std::vector<std::uint32_t> support_;
  AliasTable table_;
};

inline std::uint32_t sample_negative(const NoiseDistribution& noise, std::uint32_t exclude,
                                     Rng& rng) {
  return noise.sample_excluding(exclude, rng);
}

}  // namespace pte
