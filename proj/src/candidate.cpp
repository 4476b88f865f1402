#include "iifs/candidate.hpp"

#include <algorithm>
#include <stdexcept>

#include "iifs/error.hpp"
#include "iifs/stats.hpp"

namespace iifs {

Eigen::VectorXi leaf_histogram(const Eigen::VectorXi& labels, int n_leaves) {
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_leaves);
  for (Eigen::Index i = 0; i < labels.size(); ++i) {
    const int l = labels[i];
    if (l < 0 || l >= n_leaves)
      throw input_error("label " + std::to_string(l) + " out of range");
    ++counts[l];
  }
  return counts;
}

SubsetSpec SubsetSpec::from_labels(const Eigen::VectorXi& labels, int n_leaves,
                                   int min_support, double max_jsd) {
  SubsetSpec spec;
  spec.min_support = min_support;
  spec.max_jsd = max_jsd;
  const Eigen::VectorXi counts = leaf_histogram(labels, n_leaves);
  spec.class_distribution_full =
      counts.cast<double>() / static_cast<double>(labels.size());
  return spec;
}

std::vector<int> complete_support(const FeatureTable& table,
                                  const std::vector<int>& features) {
  std::vector<int> out;
  const auto& present = table.present();
  for (int i = 0; i < table.n_records(); ++i) {
    bool complete = true;
    for (int f : features) {
      if (!present(i, f)) {
        complete = false;
        break;
      }
    }
    if (complete) out.push_back(i);
  }
  return out;
}

CandidateOutcome make_candidate(const NormalizedView& view, std::vector<int> features,
                                const SubsetSpec& spec, const Eigen::VectorXi& labels,
                                const std::vector<int>* within, int exclude_record) {
  if (features.empty()) throw std::invalid_argument("make_candidate: empty feature set");
  std::sort(features.begin(), features.end());
  for (int f : features) {
    if (f < 0 || f >= view.n_features())
      throw std::invalid_argument("make_candidate: feature index out of range");
    if (!view.admissible[static_cast<std::size_t>(f)])
      throw std::invalid_argument("make_candidate: feature '" +
                                  view.base->meta(f).name +
                                  "' is not an admissible input");
  }
  if (labels.size() != view.n_records())
    throw input_error("make_candidate: labels/record count mismatch");

  const auto& present = view.base->present();
  std::vector<int> support;
  auto keep = [&](int i) {
    if (i == exclude_record) return;
    for (int f : features)
      if (!present(i, f)) return;
    support.push_back(i);
  };
  if (within) {
    for (int i : *within) keep(i);
  } else {
    for (int i = 0; i < view.n_records(); ++i) keep(i);
  }

  CandidateOutcome outcome;
  outcome.support_size = static_cast<int>(support.size());
  if (outcome.support_size < spec.min_support) {
    outcome.reject = RejectReason::support_too_small;
    return outcome;
  }

  const int n_leaves = static_cast<int>(spec.class_distribution_full.size());
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_leaves);
  for (int i : support) {
    const int l = labels[i];
    if (l < 0 || l >= n_leaves) throw input_error("label out of range in support");
    ++counts[l];
  }
  const Eigen::VectorXd p = counts.cast<double>() / static_cast<double>(support.size());
  outcome.jsd = jensen_shannon(p, spec.class_distribution_full);
  if (outcome.jsd > spec.max_jsd) {
    outcome.reject = RejectReason::jsd_too_large;
    return outcome;
  }

  TupleCandidate cand;
  cand.features = std::move(features);
  cand.support = std::move(support);
  cand.jsd = outcome.jsd;
  outcome.candidate = std::move(cand);
  return outcome;
}

}  // namespace iifs
