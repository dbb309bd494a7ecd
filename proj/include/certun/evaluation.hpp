#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <type_traits>
#include <string>
#include <utility>

#include "certun/model.hpp"
#include "certun/request.hpp"

namespace certun {

/// Micro-averaged F1 over the test nodes of the objective's graph. For
/// single-label multiclass prediction this equals accuracy.
double f1_micro(const Objective& objective, std::span<const double> theta);

/// ROC-AUC of positive vs negative scores; tied scores share their average
/// rank. Throws on an empty side.
double roc_auc(std::span<const double> positives, std::span<const double> negatives);

/// Membership-inference proxy for nodes: score = -cross-entropy under theta
/// on the objective's (original) graph; AUC of unlearned vs holdout nodes.
double mi_proxy_auc(const Objective& original, std::span<const double> theta, const NodeSet& unlearned,
                    const NodeSet& holdout);

/// Link-stealing proxy: score = cosine similarity of the endpoints' softmax
/// outputs; AUC of unlearned vs non-existent edges.
double mi_proxy_auc_edges(const Objective& original, std::span<const double> theta,
                          std::span<const Edge> unlearned, std::span<const Edge> negatives);

/// `count` distinct node pairs that are not edges of g, by rejection
/// sampling from Rng(seed).
std::vector<Edge> sample_negative_edges(const AttributedGraph& g, std::size_t count, std::uint64_t seed);

/// Mean cross-entropy over the owners of the request's attribute entries,
/// evaluated on g with exactly those entries set to zero.
double attr_unlearn_loss(const ModelSpec& spec, std::span<const double> theta, const AttributedGraph& g,
                         const UnlearnRequest& req);

/// Runs `fn` and returns its result together with the monotonic wall time.
template <class Fn>
auto timed(Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<decltype(fn())>) {
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  } else {
    auto result = fn();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return std::make_pair(std::move(result), s);
  }
}

struct EvalReport {
  double f1_micro = 0.0;
  std::map<std::string, double> wall_times;
  std::optional<double> mi_auc;
  std::optional<double> attr_unlearn_loss;
};

}  // namespace certun
