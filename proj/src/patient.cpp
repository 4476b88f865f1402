#include "iifs/patient.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "iifs/error.hpp"
#include "iifs/normalized_view.hpp"
#include "iifs/parallel.hpp"

namespace iifs {

namespace {

bool tuple_less(const ScoredTuple& a, const ScoredTuple& b) {
  if (a.delta_w != b.delta_w) return a.delta_w < b.delta_w;
  return a.features < b.features;
}

struct Best {
  ScoredTuple scored;
  std::vector<int> support;
};

}  // namespace

std::optional<TupleCandidate> patient_specific_search(const NormalizedView& view,
                                                      const TargetTree& tree,
                                                      const Eigen::VectorXi& labels,
                                                      int record,
                                                      const BeamConfig& config) {
  if (record < 0 || record >= view.n_records())
    throw input_error("patient_specific_search: record out of range");

  std::vector<int> admissible;
  for (int f : view.admissible_features())
    if (view.is_present(record, f)) admissible.push_back(f);
  if (admissible.empty()) return std::nullopt;

  const SubsetSpec spec =
      SubsetSpec::from_labels(labels, tree.n_leaves(),
                              std::max(config.min_support, 3), config.max_jsd);

  std::vector<ScoredTuple> beam;
  std::vector<std::vector<int>> beam_supports;
  std::optional<Best> overall;

  for (int size = 1; size <= config.max_tuple_size; ++size) {
    // proposals for this size
    std::vector<std::pair<std::vector<int>, int>> proposals;  // (features, parent)
    if (size == 1) {
      for (int f : admissible) proposals.push_back({{f}, -1});
    } else {
      std::set<std::vector<int>> seen;
      for (std::size_t b = 0; b < beam.size(); ++b) {
        for (int f : admissible) {
          const auto& base = beam[b].features;
          if (std::binary_search(base.begin(), base.end(), f)) continue;
          std::vector<int> feats = base;
          feats.insert(std::upper_bound(feats.begin(), feats.end(), f), f);
          if (seen.insert(feats).second)
            proposals.push_back({std::move(feats), static_cast<int>(b)});
        }
      }
    }
    if (proposals.empty()) break;

    std::vector<std::optional<Best>> results(proposals.size());
    parallel_for(static_cast<int>(proposals.size()), config.threads, [&](int p) {
      const auto& [feats, parent] = proposals[static_cast<std::size_t>(p)];
      const std::vector<int>* within =
          parent >= 0 ? &beam_supports[static_cast<std::size_t>(parent)] : nullptr;
      auto outcome = make_candidate(view, feats, spec, labels, within, record);
      if (!outcome.accepted()) return;
      TupleCandidate& cand = *outcome.candidate;
      const double score =
          weighted_imbalance(input_nearest_neighbors(view, cand), labels, tree).value;
      Best best;
      best.scored = {cand.features, score, static_cast<int>(cand.support.size()),
                     cand.jsd};
      best.support = std::move(cand.support);
      results[static_cast<std::size_t>(p)] = std::move(best);
    });

    std::vector<int> order;
    for (std::size_t p = 0; p < results.size(); ++p)
      if (results[p]) order.push_back(static_cast<int>(p));
    if (order.empty()) break;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return tuple_less(results[static_cast<std::size_t>(a)]->scored,
                        results[static_cast<std::size_t>(b)]->scored);
    });

    const Best& level_best = *results[static_cast<std::size_t>(order.front())];
    const bool improved =
        !overall || level_best.scored.delta_w < overall->scored.delta_w - config.epsilon_flat;
    if (overall && !improved) break;  // flattened or rising
    overall = level_best;

    const std::size_t width =
        std::min<std::size_t>(static_cast<std::size_t>(config.beam_width), order.size());
    beam.clear();
    beam_supports.clear();
    for (std::size_t b = 0; b < width; ++b) {
      Best& x = *results[static_cast<std::size_t>(order[b])];
      beam.push_back(x.scored);
      beam_supports.push_back(std::move(x.support));
    }
  }

  if (!overall) return std::nullopt;
  TupleCandidate cand;
  cand.features = overall->scored.features;
  cand.support = overall->support;
  cand.jsd = overall->scored.jsd;
  cand.delta_w = overall->scored.delta_w;
  return cand;
}

UsageStats usage_statistic(const std::vector<std::optional<TupleCandidate>>& tuples,
                           const FeatureTable& table) {
  if (static_cast<int>(tuples.size()) != table.n_records())
    throw input_error("usage_statistic: one tuple slot per record required");

  UsageStats stats;
  for (int f = 0; f < table.n_features(); ++f) {
    if (table.meta(f).role != FeatureRole::input) continue;
    UsageRow row;
    row.feature = f;
    row.n_available = table.present_count(f);
    if (row.n_available == 0) continue;  // never observed: usage undefined
    for (const auto& t : tuples) {
      if (!t) continue;
      if (std::binary_search(t->features.begin(), t->features.end(), f))
        ++row.n_selected;
    }
    row.usage = static_cast<double>(row.n_selected) / row.n_available;
    stats.rows.push_back(row);
  }
  return stats;
}

SeedSweepResult seed_stability_sweep(std::shared_ptr<const FeatureTable> table,
                                     const TargetTree& tree,
                                     const Eigen::VectorXi& labels,
                                     const BeamConfig& config, std::uint64_t base_seed,
                                     int n_seeds, double jitter_scale) {
  if (n_seeds < 2) throw input_error("seed_stability_sweep: n_seeds must be >= 2");

  std::vector<SizeCurve> curves;
  curves.reserve(static_cast<std::size_t>(n_seeds));
  for (int s = 0; s < n_seeds; ++s) {
    const NormalizedView view = normalize_and_jitter(
        table, mix_seed(base_seed, static_cast<std::uint64_t>(s)), jitter_scale);
    curves.push_back(beam_search(view, tree, labels, config));
  }

  std::size_t common_levels = curves.front().levels.size();
  for (const auto& c : curves)
    common_levels = std::min(common_levels, c.levels.size());

  SeedSweepResult result;
  result.n_seeds = n_seeds;
  for (std::size_t lvl = 0; lvl < common_levels; ++lvl) {
    SweepLevel level;
    level.size = curves.front().levels[lvl].size;
    double sum = 0;
    for (const auto& c : curves) sum += c.levels[lvl].best().delta_w;
    level.mean = sum / n_seeds;
    double ss = 0;
    for (const auto& c : curves) {
      const double d = c.levels[lvl].best().delta_w - level.mean;
      ss += d * d;
    }
    level.stddev = std::sqrt(ss / (n_seeds - 1));
    for (const auto& c : curves)
      for (int f : c.levels[lvl].best().features) ++level.feature_seed_counts[f];
    result.levels.push_back(std::move(level));
  }
  return result;
}

}  // namespace iifs
