#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "iifs/feature_table.hpp"

namespace iifs {

// Per-feature standardized values plus a jittered copy in which exact
// duplicates within a column have been broken by small seeded perturbations.
// Immutable after construction.
struct NormalizedView {
  std::shared_ptr<const FeatureTable> base;
  std::uint64_t jitter_seed = 0;
  double jitter_scale = 0.0;
  Eigen::VectorXd scale;        // std over present values; 1 for constant columns
  Eigen::MatrixXd normalized;   // values / scale, NaN where absent
  Eigen::MatrixXd jittered;     // normalized + jitter on duplicated entries only
  std::vector<bool> admissible; // input role with >= 2 distinct present values

  int n_records() const { return base->n_records(); }
  int n_features() const { return base->n_features(); }
  bool is_present(int i, int j) const { return base->present()(i, j); }
  std::vector<int> admissible_features() const;
};

// Standardizes every column by its standard deviation over present values and
// adds a uniform draw from (0, jitter_scale] to each entry that duplicates
// another present value in its column, redrawing until the column is
// duplicate-free. The same seed yields a bit-identical matrix.
NormalizedView normalize_and_jitter(std::shared_ptr<const FeatureTable> table,
                                    std::uint64_t seed, double jitter_scale = 1e-6);

}  // namespace iifs
