#include "iifs/target_ranks.hpp"

#include <algorithm>
#include <limits>
#include <vector>

#include "iifs/candidate.hpp"
#include "iifs/error.hpp"

namespace iifs {

Eigen::MatrixXd leaf_rank_table(const TargetTree& tree, const Eigen::VectorXi& counts) {
  const int L = tree.n_leaves();
  if (counts.size() != L) throw input_error("leaf_rank_table: counts size mismatch");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd table = Eigen::MatrixXd::Constant(L, L, nan);

  for (int a = 0; a < L; ++a) {
    if (counts[a] <= 0) continue;
    // leaves grouped by distance from a, nearest bucket first
    std::vector<std::pair<int, int>> by_distance;  // (distance, leaf)
    for (int b = 0; b < L; ++b)
      if (counts[b] > 0) by_distance.emplace_back(tree.distance(a, b), b);
    std::sort(by_distance.begin(), by_distance.end());

    std::size_t i = 0;
    long long offset = 0;
    while (i < by_distance.size()) {
      std::size_t j = i;
      long long bucket = 0;
      while (j < by_distance.size() && by_distance[j].first == by_distance[i].first) {
        bucket += counts[by_distance[j].second];
        ++j;
      }
      if (by_distance[i].first == 0) --bucket;  // the row record itself
      if (bucket > 0) {
        const double rank = static_cast<double>(offset) +
                            0.5 * static_cast<double>(bucket - 1);
        for (std::size_t k = i; k < j; ++k) table(a, by_distance[k].second) = rank;
      }
      offset += bucket;
      i = j;
    }
  }
  return table;
}

Eigen::MatrixXd target_ranks(const Eigen::VectorXi& labels, const TargetTree& tree) {
  const int n = static_cast<int>(labels.size());
  const Eigen::VectorXi counts = leaf_histogram(labels, tree.n_leaves());
  const Eigen::MatrixXd table = leaf_rank_table(tree, counts);
  Eigen::MatrixXd ranks = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) ranks(i, j) = table(labels[i], labels[j]);
  return ranks;
}

}  // namespace iifs
