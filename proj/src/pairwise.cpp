#include "iifs/pairwise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "iifs/parallel.hpp"
#include "iifs/stats.hpp"

namespace iifs {

namespace {

// one-dimensional imbalance: nearest neighbor under |a_i - a_j| (jittered),
// tie-averaged rank of that neighbor under |b_i - b_j| (unjittered)
double delta_1d(const std::vector<double>& a_jittered, const std::vector<double>& b_plain) {
  const int m = static_cast<int>(a_jittered.size());
  double sum = 0;
  for (int i = 0; i < m; ++i) {
    int nn = -1;
    double nn_dist = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = std::abs(a_jittered[j] - a_jittered[i]);
      if (nn < 0 || d < nn_dist) {
        nn = j;
        nn_dist = d;
      }
    }
    const double target = std::abs(b_plain[nn] - b_plain[i]);
    int closer = 0, tied = 0;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d = std::abs(b_plain[j] - b_plain[i]);
      if (d < target) ++closer;
      else if (d == target) ++tied;
    }
    sum += closer + 0.5 * (tied - 1);
  }
  return (2.0 / m) * (sum / m);
}

}  // namespace

PairwiseResult pairwise_feature_analysis(const NormalizedView& view,
                                         const std::vector<int>& features,
                                         const PairwiseOptions& options) {
  for (int f : features)
    if (f < 0 || f >= view.n_features())
      throw std::invalid_argument("pairwise_feature_analysis: feature out of range");

  std::vector<std::pair<int, int>> pairs;
  for (std::size_t a = 0; a < features.size(); ++a)
    for (std::size_t b = a + 1; b < features.size(); ++b)
      pairs.emplace_back(features[a], features[b]);

  const auto& present = view.base->present();
  const auto& raw = view.base->values();

  std::vector<PairwiseRow> rows(pairs.size());
  std::vector<SkippedPair> skipped(pairs.size());
  std::vector<char> kept(pairs.size(), 0);

  parallel_for(static_cast<int>(pairs.size()), options.threads, [&](int p) {
    const auto [fa, fb] = pairs[static_cast<std::size_t>(p)];
    std::vector<double> a_jit, b_jit, a_plain, b_plain, a_raw, b_raw;
    for (int i = 0; i < view.n_records(); ++i) {
      if (!present(i, fa) || !present(i, fb)) continue;
      a_jit.push_back(view.jittered(i, fa));
      b_jit.push_back(view.jittered(i, fb));
      a_plain.push_back(view.normalized(i, fa));
      b_plain.push_back(view.normalized(i, fb));
      a_raw.push_back(raw(i, fa));
      b_raw.push_back(raw(i, fb));
    }
    const int m = static_cast<int>(a_jit.size());
    if (m < options.min_overlap) {
      skipped[static_cast<std::size_t>(p)] = {
          fa, fb, "shared support " + std::to_string(m) + " below minimum"};
      return;
    }
    const bool a_const =
        std::all_of(a_raw.begin(), a_raw.end(), [&](double v) { return v == a_raw[0]; });
    const bool b_const =
        std::all_of(b_raw.begin(), b_raw.end(), [&](double v) { return v == b_raw[0]; });
    if (a_const || b_const) {
      skipped[static_cast<std::size_t>(p)] = {fa, fb, "constant over the shared records"};
      return;
    }

    PairwiseRow row;
    row.feature_a = fa;
    row.feature_b = fb;
    row.n_shared = m;
    row.delta_ab = delta_1d(a_jit, b_plain);
    row.delta_ba = delta_1d(b_jit, a_plain);
    row.pearson = pearson(a_raw, b_raw);
    row.spearman = spearman(a_raw, b_raw);
    row.asymmetric = std::abs(row.delta_ab - row.delta_ba) > options.asym_threshold;
    rows[static_cast<std::size_t>(p)] = row;
    kept[static_cast<std::size_t>(p)] = 1;
  });

  PairwiseResult result;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (kept[p]) result.rows.push_back(rows[p]);
    else result.skipped.push_back(skipped[p]);
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const PairwiseRow& x, const PairwiseRow& y) {
              const double mx = std::min(x.delta_ab, x.delta_ba);
              const double my = std::min(y.delta_ab, y.delta_ba);
              if (mx != my) return mx < my;
              if (x.feature_a != y.feature_a) return x.feature_a < y.feature_a;
              return x.feature_b < y.feature_b;
            });
  return result;
}

}  // namespace iifs
