#pragma once

#include <Eigen/Dense>
#include <vector>

#include "iifs/candidate.hpp"
#include "iifs/severity_tree.hpp"

namespace iifs {

// Nearest neighbor of each support record under the Euclidean distance
// restricted to one tuple's features. Jitter makes the neighbor unique;
// residual exact ties break toward the smaller index.
struct InputRanks {
  std::vector<int> support;  // ascending record indices
  std::vector<int> nn;       // nn[s] = support position of record s's nearest neighbor
};

InputRanks input_nearest_neighbors(const NormalizedView& view,
                                   const TupleCandidate& candidate);

struct ImbalanceScore {
  double value = 0.0;      // ~0 when the input space predicts the target, ~1 when not
  int n_used = 0;          // records entering the average
  double normalization = 0.0;  // the constant a; value = a * weighted mean rank
};

// Classic information imbalance: a * mean over records of the target-space
// rank of each record's input-space nearest neighbor, with a = 2/N and
// rank 0 for the nearest neighbor. `target_rank_matrix` is indexed by
// support position and must be square of matching size.
ImbalanceScore classic_imbalance(const InputRanks& input,
                                 const Eigen::MatrixXd& target_rank_matrix);

// Class-weighted variant against a degenerate tree target. Target ranks are
// tie-averaged and leaf sizes (hence weights 1/leafsize) are recomputed
// within the support, so the score is self-contained over the records it is
// evaluated on. The normalization a = 2/(N-2) calibrates a random neighbor
// assignment to an expected value of exactly 1.
ImbalanceScore weighted_imbalance(const InputRanks& input, const Eigen::VectorXi& labels,
                                  const TargetTree& tree);

// Tie-averaged Euclidean distance rank of every record pair; rows are
// records of `points`, diagonal is 0 and carries no meaning.
Eigen::MatrixXd tied_rank_matrix(const Eigen::MatrixXd& points);

// Convenience: nearest neighbors plus weighted imbalance in one call.
double delta_w(const NormalizedView& view, const TupleCandidate& candidate,
               const Eigen::VectorXi& labels, const TargetTree& tree);

}  // namespace iifs
