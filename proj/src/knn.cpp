#include "iifs/knn.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "iifs/error.hpp"
#include "iifs/parallel.hpp"
#include "iifs/rng.hpp"

namespace iifs {

namespace {

// argmax over leaves of empirical/prior ratio; ties toward the larger
// neighbor count, then the smaller leaf index
int predict_from_counts(const Eigen::VectorXi& neighbor_counts,
                        const Eigen::VectorXi& pool_counts, int k_eff, int pool_total,
                        bool prior_correct) {
  const int L = static_cast<int>(neighbor_counts.size());
  int best = -1;
  double best_score = -1;
  for (int l = 0; l < L; ++l) {
    double score;
    if (prior_correct) {
      if (pool_counts[l] == 0) {
        assert(neighbor_counts[l] == 0);
        continue;
      }
      const double emp = static_cast<double>(neighbor_counts[l]) / k_eff;
      const double prior = static_cast<double>(pool_counts[l]) / pool_total;
      score = emp / prior;
    } else {
      score = static_cast<double>(neighbor_counts[l]) / k_eff;
    }
    if (best < 0 || score > best_score ||
        (score == best_score && neighbor_counts[l] > neighbor_counts[best])) {
      best = l;
      best_score = score;
    }
  }
  return best;
}

Eigen::MatrixXd gather_points(const NormalizedView& view, const std::vector<int>& records,
                              const std::vector<int>& features) {
  Eigen::MatrixXd points(static_cast<Eigen::Index>(records.size()),
                         static_cast<Eigen::Index>(features.size()));
  for (std::size_t c = 0; c < features.size(); ++c)
    for (std::size_t s = 0; s < records.size(); ++s)
      points(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) =
          view.jittered(records[s], features[c]);
  if (!points.allFinite())
    throw std::invalid_argument("k-NN: missing value inside the record pool");
  return points;
}

// positions of the k smallest dist2 entries, self excluded, ties by index
std::vector<int> k_nearest(const Eigen::VectorXd& dist2, int self, int k) {
  std::vector<int> idx;
  idx.reserve(static_cast<std::size_t>(dist2.size()));
  for (int j = 0; j < dist2.size(); ++j)
    if (j != self) idx.push_back(j);
  const auto cmp = [&](int a, int b) {
    return dist2[a] < dist2[b] || (dist2[a] == dist2[b] && a < b);
  };
  if (k < static_cast<int>(idx.size())) {
    std::nth_element(idx.begin(), idx.begin() + k, idx.end(), cmp);
    idx.resize(static_cast<std::size_t>(k));
  }
  return idx;
}

}  // namespace

PredictionReport prior_corrected_knn(const NormalizedView& view,
                                     const TupleCandidate& candidate,
                                     const Eigen::VectorXi& labels,
                                     const TargetTree& tree, const KnnConfig& config,
                                     int threads) {
  const int m = static_cast<int>(candidate.support.size());
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (m < 2) throw std::invalid_argument("k-NN needs a support of at least 2");

  const Eigen::MatrixXd points = gather_points(view, candidate.support, candidate.features);
  const int k_eff = std::min(config.k, m - 1);

  Eigen::VectorXi support_counts = Eigen::VectorXi::Zero(tree.n_leaves());
  for (int s : candidate.support) {
    const int l = labels[s];
    if (l < 0 || l >= tree.n_leaves()) throw input_error("k-NN: label out of range");
    ++support_counts[l];
  }

  PredictionReport report;
  report.k_used = k_eff;
  report.k_truncated = k_eff < config.k;
  report.majority_leaf = tree.leaf_sizes.size() > 0 ? tree.majority_leaf() : -1;
  report.rows.resize(static_cast<std::size_t>(m));

  parallel_for(m, threads, [&](int i) {
    Eigen::VectorXd dist2 = Eigen::VectorXd::Zero(m);
    for (int c = 0; c < points.cols(); ++c)
      dist2.array() += (points.col(c).array() - points(i, c)).square();
    const std::vector<int> nearest = k_nearest(dist2, i, k_eff);

    Eigen::VectorXi neighbor_counts = Eigen::VectorXi::Zero(tree.n_leaves());
    for (int j : nearest)
      ++neighbor_counts[labels[candidate.support[static_cast<std::size_t>(j)]]];

    Eigen::VectorXi pool_counts = support_counts;
    int pool_total = m;
    const int true_leaf = labels[candidate.support[static_cast<std::size_t>(i)]];
    if (config.leave_one_out) {
      --pool_counts[true_leaf];
      pool_total = m - 1;
    }
    const int predicted = predict_from_counts(neighbor_counts, pool_counts, k_eff,
                                              pool_total, config.prior_correct);
    report.rows[static_cast<std::size_t>(i)] = {
        candidate.support[static_cast<std::size_t>(i)], true_leaf, predicted,
        tree.distance(true_leaf, predicted)};
  });

  const int majority =
      report.majority_leaf >= 0 ? report.majority_leaf : [&] {
        Eigen::VectorXi h = Eigen::VectorXi::Zero(tree.n_leaves());
        for (const auto& r : report.rows) ++h[r.true_leaf];
        int best = 0;
        for (int l = 1; l < tree.n_leaves(); ++l)
          if (h[l] > h[best]) best = l;
        return best;
      }();
  report.majority_leaf = majority;
  report.levels = level_accuracies(report.rows, tree, majority);
  return report;
}

LevelAccuracies level_accuracies(const std::vector<RecordPrediction>& rows,
                                 const TargetTree& tree, int majority_leaf) {
  const int n_levels = tree.max_distance() + 1;
  LevelAccuracies acc;
  acc.overall.assign(static_cast<std::size_t>(n_levels), 0.0);
  acc.minority.assign(static_cast<std::size_t>(n_levels), 0.0);
  for (const auto& r : rows) {
    const bool minority = r.true_leaf != majority_leaf;
    ++acc.n_records;
    if (minority) ++acc.n_minority;
    for (int t = r.distance; t < n_levels; ++t) {
      acc.overall[static_cast<std::size_t>(t)] += 1.0;
      if (minority) acc.minority[static_cast<std::size_t>(t)] += 1.0;
    }
  }
  for (auto& v : acc.overall) v = acc.n_records > 0 ? v / acc.n_records : 0.0;
  for (auto& v : acc.minority)
    v = acc.n_minority > 0 ? v / acc.n_minority
                           : std::numeric_limits<double>::quiet_NaN();
  return acc;
}

PredictionReport random_neighbor_baseline(const Eigen::VectorXi& labels,
                                          const TargetTree& tree, int k,
                                          std::uint64_t seed, int n_reps) {
  const int n = static_cast<int>(labels.size());
  if (n < 2) throw std::invalid_argument("random_neighbor_baseline: needs >= 2 records");
  if (n_reps < 1) throw std::invalid_argument("random_neighbor_baseline: n_reps >= 1");
  const int k_eff = std::min(k, n - 1);

  const Eigen::VectorXi counts = leaf_histogram(labels, tree.n_leaves());
  const int majority = tree.leaf_sizes.size() > 0 ? tree.majority_leaf() : [&] {
    int best = 0;
    for (int l = 1; l < tree.n_leaves(); ++l)
      if (counts[l] > counts[best]) best = l;
    return best;
  }();

  PredictionReport report;
  report.k_used = k_eff;
  report.k_truncated = k_eff < k;
  report.majority_leaf = majority;
  report.n_reps = n_reps;

  const int n_levels = tree.max_distance() + 1;
  std::vector<double> overall_sum(static_cast<std::size_t>(n_levels), 0.0);
  std::vector<double> minority_sum(static_cast<std::size_t>(n_levels), 0.0);
  int n_minority = 0;

  for (int rep = 0; rep < n_reps; ++rep) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(rep)));
    std::vector<RecordPrediction> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXi neighbor_counts = Eigen::VectorXi::Zero(tree.n_leaves());
      for (int j : rng.sample_without_replacement(n - 1, k_eff)) {
        const int other = j >= i ? j + 1 : j;  // skip self
        ++neighbor_counts[labels[other]];
      }
      Eigen::VectorXi pool_counts = counts;
      --pool_counts[labels[i]];
      const int predicted =
          predict_from_counts(neighbor_counts, pool_counts, k_eff, n - 1, true);
      rows[static_cast<std::size_t>(i)] = {i, labels[i], predicted,
                                           tree.distance(labels[i], predicted)};
    }
    const LevelAccuracies acc = level_accuracies(rows, tree, majority);
    for (int t = 0; t < n_levels; ++t) {
      overall_sum[static_cast<std::size_t>(t)] += acc.overall[static_cast<std::size_t>(t)];
      minority_sum[static_cast<std::size_t>(t)] += acc.minority[static_cast<std::size_t>(t)];
    }
    n_minority = acc.n_minority;
    if (rep == 0) report.rows = std::move(rows);
  }

  report.levels.overall.resize(static_cast<std::size_t>(n_levels));
  report.levels.minority.resize(static_cast<std::size_t>(n_levels));
  for (int t = 0; t < n_levels; ++t) {
    report.levels.overall[static_cast<std::size_t>(t)] =
        overall_sum[static_cast<std::size_t>(t)] / n_reps;
    report.levels.minority[static_cast<std::size_t>(t)] =
        minority_sum[static_cast<std::size_t>(t)] / n_reps;
  }
  report.levels.n_records = n;
  report.levels.n_minority = n_minority;
  return report;
}

int predict_record(const NormalizedView& view, const std::vector<int>& features,
                   const std::vector<int>& pool, int record,
                   const Eigen::VectorXi& labels, const TargetTree& tree,
                   const KnnConfig& config) {
  if (pool.empty()) throw std::invalid_argument("predict_record: empty pool");
  const int k_eff = std::min(config.k, static_cast<int>(pool.size()));

  Eigen::VectorXd target(static_cast<Eigen::Index>(features.size()));
  for (std::size_t c = 0; c < features.size(); ++c) {
    target[static_cast<Eigen::Index>(c)] = view.jittered(record, features[c]);
    if (!std::isfinite(target[static_cast<Eigen::Index>(c)]))
      throw std::invalid_argument("predict_record: record missing a tuple feature");
  }
  const Eigen::MatrixXd points = gather_points(view, pool, features);
  Eigen::VectorXd dist2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(pool.size()));
  for (Eigen::Index c = 0; c < points.cols(); ++c)
    dist2.array() += (points.col(c).array() - target[c]).square();

  const std::vector<int> nearest = k_nearest(dist2, -1, k_eff);
  Eigen::VectorXi neighbor_counts = Eigen::VectorXi::Zero(tree.n_leaves());
  Eigen::VectorXi pool_counts = Eigen::VectorXi::Zero(tree.n_leaves());
  for (std::size_t j = 0; j < pool.size(); ++j) ++pool_counts[labels[pool[j]]];
  for (int j : nearest) ++neighbor_counts[labels[pool[static_cast<std::size_t>(j)]]];
  return predict_from_counts(neighbor_counts, pool_counts, k_eff,
                             static_cast<int>(pool.size()), config.prior_correct);
}

}  // namespace iifs
