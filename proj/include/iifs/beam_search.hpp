#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "iifs/candidate.hpp"
#include "iifs/imbalance.hpp"
#include "iifs/severity_tree.hpp"

namespace iifs {

struct BeamConfig {
  int beam_width = 55;
  int max_tuple_size = 20;
  int min_support = 100;
  double max_jsd = 0.06;
  int top_k_report = 10;
  // patient-specific search stops once extending fails to improve the best
  // score by at least this margin
  double epsilon_flat = 1e-3;
  int threads = 0;  // 0 = hardware concurrency; never affects results
};

struct ScoredTuple {
  std::vector<int> features;
  double delta_w = 0.0;
  int support_size = 0;
  double jsd = 0.0;
};

struct SizeLevel {
  int size = 0;
  std::vector<ScoredTuple> top;  // best distinct feature sets, ascending score

  const ScoredTuple& best() const { return top.front(); }
};

struct SizeCurve {
  std::vector<SizeLevel> levels;
  int optimal_size = 0;
  bool turned = false;  // the score started rising before the curve ended
};

// Breadth-limited greedy tuple extension: level 1 scores every admissible
// singleton, level n+1 extends each of the beam_width best n-tuples by every
// admissible feature. Candidates violating the support or stratification
// constraints are skipped; permutation-equivalent tuples are deduplicated.
// Ordering ties break lexicographically on the sorted feature indices, so a
// fixed seed and config give an identical curve at any thread count.
SizeCurve beam_search(const NormalizedView& view, const TargetTree& tree,
                      const Eigen::VectorXi& labels, const BeamConfig& config);

// Size whose best score is minimal, ties toward the smaller size. When the
// curve is still falling at its last level there is no interior minimum and
// the caller should treat the result as a lower bound (curve.turned false).
int detect_optimal_size(const SizeCurve& curve);

struct RandomBaseline {
  std::vector<ScoredTuple> top;
  int n_drawn = 0;
  int n_unique = 0;
  int n_accepted = 0;
};

// Draws uniform tuples of the given size among the admissible features,
// scores the ones passing the constraints, and keeps the best
// config.top_k_report distinct sets.
RandomBaseline random_tuple_baseline(const NormalizedView& view, const TargetTree& tree,
                                     const Eigen::VectorXi& labels, int size,
                                     int n_draws, std::uint64_t seed,
                                     const BeamConfig& config);

}  // namespace iifs
