#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace pte {

/// One-vs-rest L2-regularized logistic regression, LibLinear parameterization:
/// per class, minimize 0.5*||w||^2 + C * sum_i log(1 + exp(-y_i * w.x_i)) with
/// the bias handled as an appended constant feature.
struct ClassifierModel {
  std::size_t dim = 0;
  std::vector<std::vector<double>> weights;  // per class, d entries
  std::vector<double> biases;                // per class
  double regularization = 1.0;

  std::size_t class_count() const { return weights.size(); }

  double score(std::size_t cls, const std::vector<double>& x) const {
    double s = biases[cls];
    for (std::size_t c = 0; c < dim; ++c) s += weights[cls][c] * x[c];
    return s;
  }
};

namespace detail {

inline double lr_objective(const std::vector<std::vector<double>>& xs,
                           const std::vector<double>& ys, const std::vector<double>& w,
                           double c_reg) {
  const std::size_t d = w.size();  // includes bias feature
  double f = 0;
  for (std::size_t c = 0; c < d; ++c) f += 0.5 * w[c] * w[c];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double z = w[d - 1];
    for (std::size_t c = 0; c + 1 < d; ++c) z += w[c] * xs[i][c];
    z *= ys[i];
    // log(1 + exp(-z)) without overflow
    f += c_reg * (z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z)));
  }
  return f;
}

inline void lr_gradient(const std::vector<std::vector<double>>& xs,
                        const std::vector<double>& ys, const std::vector<double>& w,
                        double c_reg, std::vector<double>& grad) {
  const std::size_t d = w.size();
  grad.assign(d, 0.0);
  for (std::size_t c = 0; c < d; ++c) grad[c] = w[c];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double z = w[d - 1];
    for (std::size_t c = 0; c + 1 < d; ++c) z += w[c] * xs[i][c];
    z *= ys[i];
    double sig_neg = 1.0 / (1.0 + std::exp(z));  // sigma(-z)
    double coef = -c_reg * ys[i] * sig_neg;
    for (std::size_t c = 0; c + 1 < d; ++c) grad[c] += coef * xs[i][c];
    grad[d - 1] += coef;
  }
}

/// Solves H p = -g in place via Cholesky; H is symmetric positive definite
/// (identity from the regularizer plus a PSD data term).
inline std::vector<double> solve_spd(std::vector<double> h, std::vector<double> rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t j = 0; j < n; ++j) {
    double diag = h[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= h[j * n + k] * h[j * n + k];
    if (diag <= 0) throw std::runtime_error("train_classifier: Hessian not positive definite");
    diag = std::sqrt(diag);
    h[j * n + j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = h[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= h[i * n + k] * h[j * n + k];
      h[i * n + j] = v / diag;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double v = rhs[i];
    for (std::size_t k = 0; k < i; ++k) v -= h[i * n + k] * rhs[k];
    rhs[i] = v / h[i * n + i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double v = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) v -= h[k * n + i] * rhs[k];
    rhs[i] = v / h[i * n + i];
  }
  return rhs;
}

/// Damped Newton with backtracking to gradient-norm tolerance 1e-6. Convex, so
/// the optimum is unique and the result is deterministic given data order.
inline std::vector<double> fit_binary_lr(const std::vector<std::vector<double>>& xs,
                                         const std::vector<double>& ys, double c_reg,
                                         std::vector<double>* objective_trace = nullptr) {
  const std::size_t d = xs.empty() ? 1 : xs[0].size() + 1;
  const std::size_t n = xs.size();
  std::vector<double> w(d, 0.0), grad, h(d * d);
  if (objective_trace) objective_trace->push_back(lr_objective(xs, ys, w, c_reg));
  for (int iter = 0; iter < 200; ++iter) {
    lr_gradient(xs, ys, w, c_reg, grad);
    double gnorm = 0;
    for (double g : grad) gnorm += g * g;
    if (std::sqrt(gnorm) <= 1e-6) break;

    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t c = 0; c < d; ++c) h[c * d + c] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      double z = w[d - 1];
      for (std::size_t c = 0; c + 1 < d; ++c) z += w[c] * xs[i][c];
      double sig = 1.0 / (1.0 + std::exp(-z));
      double coef = c_reg * sig * (1.0 - sig);
      // lower triangle only; x is the sample augmented with the bias 1
      for (std::size_t a = 0; a < d; ++a) {
        double xa = a + 1 < d ? xs[i][a] : 1.0;
        if (xa == 0) continue;
        for (std::size_t b = 0; b <= a; ++b) {
          double xb = b + 1 < d ? xs[i][b] : 1.0;
          h[a * d + b] += coef * xa * xb;
        }
      }
    }
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a + 1; b < d; ++b) h[a * d + b] = h[b * d + a];

    std::vector<double> rhs(d);
    for (std::size_t c = 0; c < d; ++c) rhs[c] = -grad[c];
    std::vector<double> step = solve_spd(h, std::move(rhs));

    double f0 = lr_objective(xs, ys, w, c_reg);
    double descent = 0;
    for (std::size_t c = 0; c < d; ++c) descent += grad[c] * step[c];
    double alpha = 1.0;
    std::vector<double> trial(d);
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t c = 0; c < d; ++c) trial[c] = w[c] + alpha * step[c];
      if (lr_objective(xs, ys, trial, c_reg) <= f0 + 1e-4 * alpha * descent) break;
      alpha *= 0.5;
    }
    w = trial;
    if (objective_trace) objective_trace->push_back(lr_objective(xs, ys, w, c_reg));
  }
  return w;
}

}  // namespace detail

/// Fits one binary L2-regularized logistic regression per class.
/// The per-class problems are independent, so they train in parallel.
inline ClassifierModel train_classifier(const std::vector<std::vector<double>>& features,
                                        const std::vector<std::int32_t>& labels,
                                        double c_reg = 1.0, int threads = 1) {
  if (features.empty()) throw std::invalid_argument("train_classifier: no training data");
  if (features.size() != labels.size())
    throw std::invalid_argument("train_classifier: feature/label count mismatch");
  std::int32_t max_label = -1;
  for (auto l : labels) {
    if (l < 0) throw std::invalid_argument("train_classifier: negative label");
    max_label = std::max(max_label, l);
  }
  const std::size_t classes = static_cast<std::size_t>(max_label) + 1;
  bool multi = false;
  for (auto l : labels)
    if (l != labels[0]) multi = true;
  if (!multi) throw std::invalid_argument("train_classifier: all documents share one class");
  const std::size_t dim = features[0].size();
  for (const auto& x : features) {
    if (x.size() != dim)
      throw std::invalid_argument("train_classifier: inconsistent feature dimension");
    for (double v : x)
      if (!std::isfinite(v)) throw std::invalid_argument("train_classifier: non-finite feature");
  }

  ClassifierModel model;
  model.dim = dim;
  model.regularization = c_reg;
  model.weights.assign(classes, {});
  model.biases.assign(classes, 0.0);

  auto fit_class = [&](std::size_t cls) {
    std::vector<double> ys(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
      ys[i] = labels[i] == static_cast<std::int32_t>(cls) ? 1.0 : -1.0;
    std::vector<double> w = detail::fit_binary_lr(features, ys, c_reg);
    model.biases[cls] = w.back();
    w.pop_back();
    model.weights[cls] = std::move(w);
  };

  if (threads <= 1 || classes == 1) {
    for (std::size_t cls = 0; cls < classes; ++cls) fit_class(cls);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    int workers = std::min<std::size_t>(threads, classes);
    for (int wkr = 0; wkr < workers; ++wkr)
      pool.emplace_back([&] {
        for (std::size_t cls = next.fetch_add(1); cls < classes; cls = next.fetch_add(1))
          fit_class(cls);
      });
    for (auto& th : pool) th.join();
  }
  return model;
}

/// Argmax over per-class scores w_c.x + b_c; ties break toward the lowest id.
inline std::int32_t predict(const ClassifierModel& model, const std::vector<double>& x) {
  if (x.size() != model.dim) throw std::invalid_argument("predict: dimension mismatch");
  std::size_t best = 0;
  double best_score = model.score(0, x);
  for (std::size_t cls = 1; cls < model.class_count(); ++cls) {
    double s = model.score(cls, x);
    if (s > best_score) {
      best = cls;
      best_score = s;
    }
  }
  return static_cast<std::int32_t>(best);
}

struct ClassMetrics {
  std::uint64_t support = 0;
  std::uint64_t predicted = 0;
  std::uint64_t true_positive = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct EvalReport {
  double micro_f1 = 0;
  double macro_f1 = 0;
  std::vector<ClassMetrics> per_class;
  std::vector<std::uint64_t> confusion;  // classes x classes, row = gold
  std::size_t classes = 0;

  std::uint64_t confusion_at(std::size_t gold, std::size_t pred) const {
    return confusion[gold * classes + pred];
  }
};

/// Micro-F1 from class-pooled TP/FP/FN; macro-F1 as the unweighted mean of
/// per-class F1, with zero-support zero-prediction classes scoring 0.
inline EvalReport evaluate(const std::vector<std::int32_t>& predictions,
                           const std::vector<std::int32_t>& gold,
                           std::size_t class_count = 0) {
  if (predictions.empty()) throw std::invalid_argument("evaluate: empty input");
  if (predictions.size() != gold.size())
    throw std::invalid_argument("evaluate: prediction/gold length mismatch");
  std::int32_t max_id = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] < 0 || gold[i] < 0)
      throw std::invalid_argument("evaluate: negative class id");
    max_id = std::max({max_id, predictions[i], gold[i]});
  }
  std::size_t classes = std::max(class_count, static_cast<std::size_t>(max_id) + 1);

  EvalReport report;
  report.classes = classes;
  report.confusion.assign(classes * classes, 0);
  report.per_class.assign(classes, {});
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++report.confusion[static_cast<std::size_t>(gold[i]) * classes +
                       static_cast<std::size_t>(predictions[i])];
  }

  std::uint64_t pooled_tp = 0, pooled_fp = 0, pooled_fn = 0;
  double macro_sum = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    ClassMetrics& m = report.per_class[c];
    for (std::size_t p = 0; p < classes; ++p) {
      m.support += report.confusion_at(c, p);
      m.predicted += report.confusion_at(p, c);
    }
    m.true_positive = report.confusion_at(c, c);
    std::uint64_t fp = m.predicted - m.true_positive;
    std::uint64_t fn = m.support - m.true_positive;
    pooled_tp += m.true_positive;
    pooled_fp += fp;
    pooled_fn += fn;
    m.precision = m.predicted ? static_cast<double>(m.true_positive) / m.predicted : 0.0;
    m.recall = m.support ? static_cast<double>(m.true_positive) / m.support : 0.0;
    m.f1 = (m.precision + m.recall) > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall)
                                        : 0.0;
    macro_sum += m.f1;
  }
  double denom = 2.0 * pooled_tp + pooled_fp + pooled_fn;
  report.micro_f1 = denom > 0 ? 2.0 * pooled_tp / denom : 0.0;
  report.macro_f1 = classes ? macro_sum / static_cast<double>(classes) : 0.0;
  return report;
}

}  // namespace pte
