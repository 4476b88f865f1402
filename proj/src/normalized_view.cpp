#include "iifs/normalized_view.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "iifs/rng.hpp"

namespace iifs {

std::vector<int> NormalizedView::admissible_features() const {
  std::vector<int> out;
  for (int j = 0; j < n_features(); ++j)
    if (admissible[static_cast<std::size_t>(j)]) out.push_back(j);
  return out;
}

namespace {

// indices of present entries whose value occurs more than once in the column
std::vector<int> duplicated_entries(const Eigen::MatrixXd& col_values,
                                    const BoolArray& present, int j,
                                    const std::vector<int>& candidates) {
  std::unordered_map<double, int> counts;
  const int n = static_cast<int>(col_values.rows());
  for (int i = 0; i < n; ++i)
    if (present(i, j)) ++counts[col_values(i, j)];
  std::vector<int> out;
  for (int i : candidates)
    if (counts[col_values(i, j)] > 1) out.push_back(i);
  return out;
}

}  // namespace

NormalizedView normalize_and_jitter(std::shared_ptr<const FeatureTable> table,
                                    std::uint64_t seed, double jitter_scale) {
  if (jitter_scale <= 0) throw std::invalid_argument("jitter_scale must be positive");

  NormalizedView view;
  view.base = table;
  view.jitter_seed = seed;
  view.jitter_scale = jitter_scale;

  const int n = table->n_records();
  const int d = table->n_features();
  view.scale = Eigen::VectorXd::Ones(d);
  view.normalized = table->values();
  view.admissible.assign(static_cast<std::size_t>(d), false);

  for (int j = 0; j < d; ++j) {
    double sum = 0, sumsq = 0;
    int count = 0;
    for (int i = 0; i < n; ++i) {
      if (!table->present()(i, j)) continue;
      const double v = table->values()(i, j);
      sum += v;
      sumsq += v * v;
      ++count;
    }
    double sd = 0;
    if (count > 0) {
      const double mean = sum / count;
      sd = std::sqrt(std::max(0.0, sumsq / count - mean * mean));
    }
    if (sd > 0) {
      view.scale[j] = sd;
      for (int i = 0; i < n; ++i)
        if (table->present()(i, j)) view.normalized(i, j) /= sd;
      view.admissible[static_cast<std::size_t>(j)] =
          table->meta(j).role == FeatureRole::input;
    }
    // constant columns keep scale 1 and stay out of candidacy
  }

  view.jittered = view.normalized;
  std::vector<int> all_rows;
  all_rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) all_rows.push_back(i);

  for (int j = 0; j < d; ++j) {
    std::vector<int> targets =
        duplicated_entries(view.normalized, table->present(), j, all_rows);
    if (targets.empty()) continue;
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(j)));
    // only originally-duplicated entries may move; redraw on the rare
    // collision with an untouched value or another jittered entry
    for (int round = 0; round < 1000 && !targets.empty(); ++round) {
      for (int i : targets) {
        view.jittered(i, j) =
            view.normalized(i, j) + rng.uniform_open01() * jitter_scale;
      }
      targets = duplicated_entries(view.jittered, table->present(), j, targets);
    }
    if (!targets.empty())
      throw std::logic_error("jitter failed to separate duplicates in column " +
                             table->meta(j).name);
  }
  return view;
}

}  // namespace iifs
