#include "iifs/beam_search.hpp"

#include <algorithm>
#include <set>

#include "iifs/error.hpp"
#include "iifs/parallel.hpp"
#include "iifs/rng.hpp"

namespace iifs {

namespace {

bool tuple_less(const ScoredTuple& a, const ScoredTuple& b) {
  if (a.delta_w != b.delta_w) return a.delta_w < b.delta_w;
  return a.features < b.features;
}

struct Evaluation {
  bool accepted = false;
  ScoredTuple scored;
  std::vector<int> support;
};

Evaluation evaluate_tuple(const NormalizedView& view, const TargetTree& tree,
                          const Eigen::VectorXi& labels, const SubsetSpec& spec,
                          std::vector<int> features, const std::vector<int>* within,
                          int exclude_record) {
  Evaluation ev;
  auto outcome = make_candidate(view, std::move(features), spec, labels, within,
                                exclude_record);
  if (!outcome.accepted()) return ev;
  TupleCandidate& cand = *outcome.candidate;
  const InputRanks ranks = input_nearest_neighbors(view, cand);
  const ImbalanceScore score = weighted_imbalance(ranks, labels, tree);
  ev.accepted = true;
  ev.scored = {cand.features, score.value, static_cast<int>(cand.support.size()),
               cand.jsd};
  ev.support = std::move(cand.support);
  return ev;
}

SubsetSpec spec_from_config(const Eigen::VectorXi& labels, const TargetTree& tree,
                            const BeamConfig& config) {
  // the weighted score needs at least 3 records for its normalization
  return SubsetSpec::from_labels(labels, tree.n_leaves(),
                                 std::max(config.min_support, 3), config.max_jsd);
}

struct Proposal {
  std::vector<int> features;
  int parent = -1;  // index into the previous beam, -1 for singletons
};

struct LevelOutcome {
  std::vector<ScoredTuple> ranked;      // all accepted candidates, sorted
  std::vector<std::vector<int>> supports;  // parallel to ranked
};

LevelOutcome evaluate_level(const NormalizedView& view, const TargetTree& tree,
                            const Eigen::VectorXi& labels, const SubsetSpec& spec,
                            const std::vector<Proposal>& proposals,
                            const std::vector<std::vector<int>>& parent_supports,
                            int exclude_record, int threads) {
  std::vector<Evaluation> evals(proposals.size());
  parallel_for(static_cast<int>(proposals.size()), threads, [&](int p) {
    const Proposal& prop = proposals[static_cast<std::size_t>(p)];
    const std::vector<int>* within =
        prop.parent >= 0 ? &parent_supports[static_cast<std::size_t>(prop.parent)]
                         : nullptr;
    evals[static_cast<std::size_t>(p)] = evaluate_tuple(
        view, tree, labels, spec, prop.features, within, exclude_record);
  });

  std::vector<int> order;
  for (std::size_t p = 0; p < evals.size(); ++p)
    if (evals[p].accepted) order.push_back(static_cast<int>(p));
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return tuple_less(evals[static_cast<std::size_t>(a)].scored,
                      evals[static_cast<std::size_t>(b)].scored);
  });

  LevelOutcome out;
  out.ranked.reserve(order.size());
  out.supports.reserve(order.size());
  for (int p : order) {
    out.ranked.push_back(std::move(evals[static_cast<std::size_t>(p)].scored));
    out.supports.push_back(std::move(evals[static_cast<std::size_t>(p)].support));
  }
  return out;
}

std::vector<Proposal> extend_beam(const std::vector<ScoredTuple>& beam,
                                  const std::vector<int>& admissible) {
  std::vector<Proposal> proposals;
  std::set<std::vector<int>> seen;
  for (std::size_t b = 0; b < beam.size(); ++b) {
    for (int f : admissible) {
      const auto& base = beam[b].features;
      if (std::binary_search(base.begin(), base.end(), f)) continue;
      std::vector<int> features = base;
      features.insert(std::upper_bound(features.begin(), features.end(), f), f);
      if (!seen.insert(features).second) continue;
      proposals.push_back({std::move(features), static_cast<int>(b)});
    }
  }
  return proposals;
}

}  // namespace

SizeCurve beam_search(const NormalizedView& view, const TargetTree& tree,
                      const Eigen::VectorXi& labels, const BeamConfig& config) {
  if (config.beam_width < 1 || config.max_tuple_size < 1)
    throw input_error("beam_width and max_tuple_size must be at least 1");

  const SubsetSpec spec = spec_from_config(labels, tree, config);
  const std::vector<int> admissible = view.admissible_features();

  SizeCurve curve;
  std::vector<ScoredTuple> beam;
  std::vector<std::vector<int>> beam_supports;

  for (int size = 1; size <= config.max_tuple_size; ++size) {
    std::vector<Proposal> proposals;
    if (size == 1) {
      for (int f : admissible) proposals.push_back({{f}, -1});
    } else {
      proposals = extend_beam(beam, admissible);
    }
    if (proposals.empty()) break;

    LevelOutcome outcome = evaluate_level(view, tree, labels, spec, proposals,
                                          beam_supports, -1, config.threads);
    if (outcome.ranked.empty()) {
      if (size == 1)
        throw infeasible_error(
            "no admissible single feature satisfies the support and "
            "stratification constraints");
      break;
    }

    SizeLevel level;
    level.size = size;
    const std::size_t keep =
        std::min<std::size_t>(static_cast<std::size_t>(config.top_k_report),
                              outcome.ranked.size());
    level.top.assign(outcome.ranked.begin(),
                     outcome.ranked.begin() + static_cast<std::ptrdiff_t>(keep));
    curve.levels.push_back(std::move(level));

    const std::size_t width =
        std::min<std::size_t>(static_cast<std::size_t>(config.beam_width),
                              outcome.ranked.size());
    beam.assign(outcome.ranked.begin(),
                outcome.ranked.begin() + static_cast<std::ptrdiff_t>(width));
    beam_supports.assign(
        std::make_move_iterator(outcome.supports.begin()),
        std::make_move_iterator(outcome.supports.begin() + static_cast<std::ptrdiff_t>(width)));
  }

  curve.optimal_size = detect_optimal_size(curve);
  std::size_t best_index = 0;
  for (std::size_t i = 0; i < curve.levels.size(); ++i)
    if (curve.levels[i].size == curve.optimal_size) best_index = i;
  curve.turned = best_index + 1 < curve.levels.size();
  return curve;
}

int detect_optimal_size(const SizeCurve& curve) {
  if (curve.levels.empty()) throw input_error("detect_optimal_size: empty curve");
  int best_size = curve.levels.front().size;
  double best_score = curve.levels.front().best().delta_w;
  for (const auto& level : curve.levels) {
    if (level.best().delta_w < best_score) {
      best_score = level.best().delta_w;
      best_size = level.size;
    }
  }
  return best_size;
}

RandomBaseline random_tuple_baseline(const NormalizedView& view, const TargetTree& tree,
                                     const Eigen::VectorXi& labels, int size,
                                     int n_draws, std::uint64_t seed,
                                     const BeamConfig& config) {
  const std::vector<int> admissible = view.admissible_features();
  if (size < 1 || size > static_cast<int>(admissible.size()))
    throw input_error("random_tuple_baseline: size exceeds the admissible features");
  if (n_draws < 1) throw input_error("random_tuple_baseline: n_draws must be positive");

  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> unique_draws;
  for (int d = 0; d < n_draws; ++d) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(d)));
    std::vector<int> features;
    for (int pos : rng.sample_without_replacement(static_cast<int>(admissible.size()), size))
      features.push_back(admissible[static_cast<std::size_t>(pos)]);
    std::sort(features.begin(), features.end());
    if (seen.insert(features).second) unique_draws.push_back(std::move(features));
  }

  const SubsetSpec spec = spec_from_config(labels, tree, config);
  std::vector<Evaluation> evals(unique_draws.size());
  parallel_for(static_cast<int>(unique_draws.size()), config.threads, [&](int p) {
    evals[static_cast<std::size_t>(p)] =
        evaluate_tuple(view, tree, labels, spec, unique_draws[static_cast<std::size_t>(p)],
                       nullptr, -1);
  });

  RandomBaseline baseline;
  baseline.n_drawn = n_draws;
  baseline.n_unique = static_cast<int>(unique_draws.size());
  std::vector<ScoredTuple> accepted;
  for (auto& ev : evals)
    if (ev.accepted) accepted.push_back(std::move(ev.scored));
  baseline.n_accepted = static_cast<int>(accepted.size());
  std::sort(accepted.begin(), accepted.end(), tuple_less);
  const std::size_t keep = std::min<std::size_t>(
      static_cast<std::size_t>(config.top_k_report), accepted.size());
  baseline.top.assign(accepted.begin(),
                      accepted.begin() + static_cast<std::ptrdiff_t>(keep));
  return baseline;
}

}  // namespace iifs
