#pragma once

// Brute-force reference implementations, kept independent of the library's
// computation paths. Everything here works by explicit enumeration or
// sorting and is only meant for small inputs.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "iifs/candidate.hpp"
#include "iifs/imbalance.hpp"
#include "iifs/severity_tree.hpp"

namespace testutil {

// tie-averaged ranks of all j != i by sorting the tree distances directly
inline std::vector<double> brute_rank_row(const Eigen::VectorXi& labels,
                                          const iifs::TargetTree& tree, int i) {
  const int n = static_cast<int>(labels.size());
  std::vector<std::pair<int, int>> others;  // (distance, j)
  for (int j = 0; j < n; ++j)
    if (j != i) others.emplace_back(tree.distance(labels[i], labels[j]), j);
  std::stable_sort(others.begin(), others.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> row(static_cast<std::size_t>(n), 0.0);
  std::size_t k = 0;
  while (k < others.size()) {
    std::size_t e = k;
    while (e + 1 < others.size() && others[e + 1].first == others[k].first) ++e;
    const double avg = 0.5 * (static_cast<double>(k) + static_cast<double>(e));
    for (std::size_t t = k; t <= e; ++t) row[static_cast<std::size_t>(others[t].second)] = avg;
    k = e + 1;
  }
  return row;
}

// plain-loop nearest neighbor, ties toward the smaller index
inline int brute_nn(const Eigen::MatrixXd& points, int i) {
  int best = -1;
  double best_d = 0;
  for (int j = 0; j < points.rows(); ++j) {
    if (j == i) continue;
    double d = 0;
    for (int c = 0; c < points.cols(); ++c) {
      const double diff = points(i, c) - points(j, c);
      d += diff * diff;
    }
    if (best < 0 || d < best_d) {
      best = j;
      best_d = d;
    }
  }
  return best;
}

// weighted imbalance evaluated from first principles: tie-averaged rank rows
// by sorting, within-support weights, a = 2/(m-2)
inline double brute_delta_w(const Eigen::MatrixXd& points, const Eigen::VectorXi& labels,
                            const iifs::TargetTree& tree) {
  const int m = static_cast<int>(points.rows());
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(tree.n_leaves());
  for (int i = 0; i < m; ++i) ++counts[labels[i]];
  double num = 0, den = 0;
  for (int i = 0; i < m; ++i) {
    const auto row = brute_rank_row(labels, tree, i);
    const int nn = brute_nn(points, i);
    const double w = 1.0 / counts[labels[i]];
    num += w * row[static_cast<std::size_t>(nn)];
    den += w;
  }
  return (2.0 / (m - 2)) * (num / den);
}

// every feature subset of the given size, scored exactly like the library
// scores candidates but via the brute evaluator above
struct ExhaustiveBest {
  std::vector<int> features;
  double score = 0.0;
};

inline void enumerate_subsets(const std::vector<int>& pool, int size,
                              std::vector<int>& current, std::size_t start,
                              const std::function<void(const std::vector<int>&)>& visit) {
  if (static_cast<int>(current.size()) == size) {
    visit(current);
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    current.push_back(pool[i]);
    enumerate_subsets(pool, size, current, i + 1, visit);
    current.pop_back();
  }
}

inline std::optional<ExhaustiveBest> exhaustive_best(const iifs::NormalizedView& view,
                                                     const iifs::TargetTree& tree,
                                                     const Eigen::VectorXi& labels,
                                                     const iifs::SubsetSpec& spec,
                                                     int size) {
  std::optional<ExhaustiveBest> best;
  std::vector<int> current;
  const std::vector<int> pool = view.admissible_features();
  enumerate_subsets(pool, size, current, 0, [&](const std::vector<int>& features) {
    auto outcome = iifs::make_candidate(view, features, spec, labels);
    if (!outcome.accepted()) return;
    const auto& cand = *outcome.candidate;
    Eigen::MatrixXd points(static_cast<Eigen::Index>(cand.support.size()),
                           static_cast<Eigen::Index>(cand.features.size()));
    Eigen::VectorXi support_labels(static_cast<Eigen::Index>(cand.support.size()));
    for (std::size_t s = 0; s < cand.support.size(); ++s) {
      support_labels[static_cast<Eigen::Index>(s)] = labels[cand.support[s]];
      for (std::size_t c = 0; c < cand.features.size(); ++c)
        points(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) =
            view.jittered(cand.support[s], cand.features[c]);
    }
    const double score = brute_delta_w(points, support_labels, tree);
    if (!best || score < best->score ||
        (score == best->score && features < best->features)) {
      best = ExhaustiveBest{features, score};
    }
  });
  return best;
}

}  // namespace testutil
