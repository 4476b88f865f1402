#pragma once

#include <map>
#include <optional>

#include "iifs/beam_search.hpp"

namespace iifs {

// Best feature tuple for one record, searched over the features present in
// that record only. Scores are leave-one-out: the record itself never enters
// the supports its tuples are evaluated on. Extension stops once the best
// score fails to improve by config.epsilon_flat. Returns nullopt when no
// admissible tuple satisfies the constraints for this record.
std::optional<TupleCandidate> patient_specific_search(const NormalizedView& view,
                                                      const TargetTree& tree,
                                                      const Eigen::VectorXi& labels,
                                                      int record,
                                                      const BeamConfig& config);

struct UsageRow {
  int feature = -1;
  int n_selected = 0;   // record-specific optimal tuples containing the feature
  int n_available = 0;  // records where the feature is present
  double usage = 0.0;   // n_selected / n_available
};

struct UsageStats {
  std::vector<UsageRow> rows;  // input features with n_available > 0, by index
};

// "usage when available" over one optimal tuple per record; records whose
// search failed contribute no selections.
UsageStats usage_statistic(const std::vector<std::optional<TupleCandidate>>& tuples,
                           const FeatureTable& table);

struct SweepLevel {
  int size = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over seeds
  std::map<int, int> feature_seed_counts;  // feature -> seeds whose best tuple used it
};

struct SeedSweepResult {
  int n_seeds = 0;
  std::vector<SweepLevel> levels;  // sizes reached by every seed's curve
};

// Repeats normalization, jitter and the full search under n_seeds derived
// seeds and reports the per-size score dispersion and tuple membership.
SeedSweepResult seed_stability_sweep(std::shared_ptr<const FeatureTable> table,
                                     const TargetTree& tree,
                                     const Eigen::VectorXi& labels,
                                     const BeamConfig& config, std::uint64_t base_seed,
                                     int n_seeds, double jitter_scale = 1e-6);

}  // namespace iifs
