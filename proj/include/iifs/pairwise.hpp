#pragma once

#include <string>
#include <vector>

#include "iifs/normalized_view.hpp"

namespace iifs {

struct PairwiseRow {
  int feature_a = -1;
  int feature_b = -1;
  double delta_ab = 0.0;  // imbalance from a's neighborhoods toward b
  double delta_ba = 0.0;
  double pearson = 0.0;
  double spearman = 0.0;
  int n_shared = 0;
  bool asymmetric = false;  // |delta_ab - delta_ba| above the threshold
};

struct SkippedPair {
  int feature_a = -1;
  int feature_b = -1;
  std::string reason;
};

struct PairwiseOptions {
  int min_overlap = 100;
  double asym_threshold = 0.1;
  int threads = 1;
};

struct PairwiseResult {
  std::vector<PairwiseRow> rows;  // sorted by min directional imbalance
  std::vector<SkippedPair> skipped;
};

// Directional information imbalance, Pearson r and Spearman rho for every
// feature pair, over the records where both features are present. Neighbor
// lookups use the jittered values; target-side ranks are tie-averaged on the
// unjittered normalized values; correlations use raw values.
PairwiseResult pairwise_feature_analysis(const NormalizedView& view,
                                         const std::vector<int>& features,
                                         const PairwiseOptions& options = {});

}  // namespace iifs
