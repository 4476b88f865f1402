#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "iifs/candidate.hpp"
#include "iifs/severity_tree.hpp"

namespace iifs {

struct KnnConfig {
  int k = 10;
  bool leave_one_out = true;
  // divide empirical neighbor-class frequencies by the pool prior before the
  // argmax; turning this off gives the plain majority vote
  bool prior_correct = true;
};

struct RecordPrediction {
  int record = -1;
  int true_leaf = -1;
  int predicted_leaf = -1;
  int distance = -1;  // tree distance between true and predicted leaf
};

// Fractions of records whose prediction lies within each tolerated tree
// distance; index = tolerance level. Non-decreasing in the level; the last
// level is always 1. The minority slice excludes records of the majority leaf
// and is NaN-filled when no such records exist.
struct LevelAccuracies {
  std::vector<double> overall;
  std::vector<double> minority;
  int n_records = 0;
  int n_minority = 0;
};

struct PredictionReport {
  std::vector<RecordPrediction> rows;
  LevelAccuracies levels;
  int majority_leaf = -1;
  int k_used = 0;
  bool k_truncated = false;
  int n_reps = 1;  // >1 only for averaged baselines; rows then show the first rep
};

// Leave-one-out k-NN over a candidate's support: each record's class is
// predicted from its k nearest support neighbors by the class maximizing the
// ratio of empirical neighbor-class probability to the pool prior. Ratio ties
// go to the larger neighbor count, then the smaller leaf index.
PredictionReport prior_corrected_knn(const NormalizedView& view,
                                     const TupleCandidate& candidate,
                                     const Eigen::VectorXi& labels,
                                     const TargetTree& tree, const KnnConfig& config = {},
                                     int threads = 1);

LevelAccuracies level_accuracies(const std::vector<RecordPrediction>& rows,
                                 const TargetTree& tree, int majority_leaf);

// Replaces the neighbor search with k draws without replacement from the
// other records; everything downstream is unchanged. Level accuracies are
// averaged over n_reps repetitions.
PredictionReport random_neighbor_baseline(const Eigen::VectorXi& labels,
                                          const TargetTree& tree, int k,
                                          std::uint64_t seed, int n_reps = 10);

// Single-record prediction against an explicit neighbor pool (record indices
// into the view; must not contain `record`).
int predict_record(const NormalizedView& view, const std::vector<int>& features,
                   const std::vector<int>& pool, int record,
                   const Eigen::VectorXi& labels, const TargetTree& tree,
                   const KnnConfig& config = {});

}  // namespace iifs
