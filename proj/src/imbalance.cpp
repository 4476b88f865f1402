#include "iifs/imbalance.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "iifs/error.hpp"
#include "iifs/target_ranks.hpp"

namespace iifs {

InputRanks input_nearest_neighbors(const NormalizedView& view,
                                   const TupleCandidate& candidate) {
  const int m = static_cast<int>(candidate.support.size());
  if (m < 2)
    throw std::invalid_argument("input_nearest_neighbors: support smaller than 2");

  const int n_feat = static_cast<int>(candidate.features.size());
  Eigen::MatrixXd points(m, n_feat);
  for (int c = 0; c < n_feat; ++c) {
    const int f = candidate.features[static_cast<std::size_t>(c)];
    for (int s = 0; s < m; ++s)
      points(s, c) = view.jittered(candidate.support[static_cast<std::size_t>(s)], f);
  }
  if (!points.allFinite())
    throw std::invalid_argument("input_nearest_neighbors: missing value inside support");

  InputRanks ranks;
  ranks.support = candidate.support;
  ranks.nn.resize(static_cast<std::size_t>(m));
  Eigen::VectorXd dist2(m);
  for (int i = 0; i < m; ++i) {
    dist2.setZero();
    for (int c = 0; c < n_feat; ++c)
      dist2.array() += (points.col(c).array() - points(i, c)).square();
    int best = -1;
    double best_d = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      if (best < 0 || dist2[j] < best_d) {
        best = j;
        best_d = dist2[j];
      }
    }
    ranks.nn[static_cast<std::size_t>(i)] = best;
  }
  return ranks;
}

ImbalanceScore classic_imbalance(const InputRanks& input,
                                 const Eigen::MatrixXd& target_rank_matrix) {
  const int m = static_cast<int>(input.support.size());
  if (target_rank_matrix.rows() != m || target_rank_matrix.cols() != m)
    throw input_error("classic_imbalance: rank matrix does not match the record set");
  double sum = 0;
  for (int i = 0; i < m; ++i)
    sum += target_rank_matrix(i, input.nn[static_cast<std::size_t>(i)]);
  ImbalanceScore score;
  score.n_used = m;
  score.normalization = 2.0 / static_cast<double>(m);
  score.value = score.normalization * (sum / static_cast<double>(m));
  return score;
}

ImbalanceScore weighted_imbalance(const InputRanks& input, const Eigen::VectorXi& labels,
                                  const TargetTree& tree) {
  const int m = static_cast<int>(input.support.size());
  if (m < 3) throw std::invalid_argument("weighted_imbalance: support smaller than 3");

  Eigen::VectorXi counts = Eigen::VectorXi::Zero(tree.n_leaves());
  for (int s : input.support) {
    const int l = labels[s];
    if (l < 0 || l >= tree.n_leaves())
      throw input_error("weighted_imbalance: label out of range");
    ++counts[l];
  }
  const Eigen::MatrixXd table = leaf_rank_table(tree, counts);

  double num = 0, den = 0;
  for (int i = 0; i < m; ++i) {
    const int la = labels[input.support[static_cast<std::size_t>(i)]];
    const int lb = labels[input.support[input.nn[static_cast<std::size_t>(i)]]];
    const double w = 1.0 / static_cast<double>(counts[la]);
    num += w * table(la, lb);
    den += w;
  }
  ImbalanceScore score;
  score.n_used = m;
  score.normalization = 2.0 / static_cast<double>(m - 2);
  score.value = score.normalization * (num / den);
  return score;
}

Eigen::MatrixXd tied_rank_matrix(const Eigen::MatrixXd& points) {
  const int m = static_cast<int>(points.rows());
  Eigen::MatrixXd ranks = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd dist2(m);
  std::vector<int> order(static_cast<std::size_t>(m > 0 ? m - 1 : 0));
  for (int i = 0; i < m; ++i) {
    dist2.setZero();
    for (int c = 0; c < points.cols(); ++c)
      dist2.array() += (points.col(c).array() - points(i, c)).square();
    int pos = 0;
    for (int j = 0; j < m; ++j)
      if (j != i) order[static_cast<std::size_t>(pos++)] = j;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return dist2[a] < dist2[b]; });
    std::size_t k = 0;
    while (k < order.size()) {
      std::size_t e = k;
      while (e + 1 < order.size() && dist2[order[e + 1]] == dist2[order[k]]) ++e;
      const double avg = 0.5 * (static_cast<double>(k) + static_cast<double>(e));
      for (std::size_t t = k; t <= e; ++t) ranks(i, order[t]) = avg;
      k = e + 1;
    }
  }
  return ranks;
}

double delta_w(const NormalizedView& view, const TupleCandidate& candidate,
               const Eigen::VectorXi& labels, const TargetTree& tree) {
  return weighted_imbalance(input_nearest_neighbors(view, candidate), labels, tree).value;
}

}  // namespace iifs
