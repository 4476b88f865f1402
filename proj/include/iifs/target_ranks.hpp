#pragma once

#include <Eigen/Dense>

#include "iifs/severity_tree.hpp"

namespace iifs {

// Tie-averaged distance rank, with rank 0 for the nearest neighbor, of a
// leaf-b record in the sorted row of a leaf-a record, as a function of the
// per-leaf population counts. All records of leaves at equal tree distance
// from a share one averaged rank. Entries involving empty leaves are NaN.
Eigen::MatrixXd leaf_rank_table(const TargetTree& tree, const Eigen::VectorXi& counts);

// Full N-by-N tie-averaged rank matrix in the target space; diagonal is 0 and
// carries no meaning. Every row sums to (N-1)(N-2)/2.
Eigen::MatrixXd target_ranks(const Eigen::VectorXi& labels, const TargetTree& tree);

}  // namespace iifs
