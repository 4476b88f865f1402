#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "iifs/normalized_view.hpp"

namespace iifs {

// Constraints every scored tuple must satisfy: a minimum complete-case
// support and a bounded base-2 Jensen-Shannon divergence between the
// support's class histogram and the full-table class distribution.
struct SubsetSpec {
  int min_support = 100;
  double max_jsd = 0.06;
  Eigen::VectorXd class_distribution_full;

  static SubsetSpec from_labels(const Eigen::VectorXi& labels, int n_leaves,
                                int min_support = 100, double max_jsd = 0.06);
};

struct TupleCandidate {
  std::vector<int> features;  // sorted feature indices, all input-role
  std::vector<int> support;   // ascending record indices complete in every feature
  double jsd = 0.0;
  std::optional<double> delta_w;
};

enum class RejectReason { none, support_too_small, jsd_too_large };

struct CandidateOutcome {
  std::optional<TupleCandidate> candidate;
  RejectReason reject = RejectReason::none;
  int support_size = 0;
  double jsd = 0.0;

  bool accepted() const { return candidate.has_value(); }
};

// Records with no missing value in any of the given features.
std::vector<int> complete_support(const FeatureTable& table,
                                  const std::vector<int>& features);

// Evaluates the support and stratification constraints for one feature set.
// `within` restricts the support to a precomputed record subset (used by the
// search to reuse parent supports); `exclude_record` drops one record from
// the support (leave-one-out searches). Throws on an empty feature set or a
// feature that is not an admissible input.
CandidateOutcome make_candidate(const NormalizedView& view, std::vector<int> features,
                                const SubsetSpec& spec, const Eigen::VectorXi& labels,
                                const std::vector<int>* within = nullptr,
                                int exclude_record = -1);

Eigen::VectorXi leaf_histogram(const Eigen::VectorXi& labels, int n_leaves);

}  // namespace iifs
