#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "iifs/beam_search.hpp"
#include "iifs/knn.hpp"

namespace iifs {

// Everything a run depends on. The manifest echoes every field; two runs
// with equal manifests produce byte-identical report files.
struct RunConfig {
  std::string command;  // select | predict | usage | pairwise | sweep-seeds | baseline
  std::filesystem::path data;
  std::filesystem::path meta;
  std::filesystem::path tree;
  std::filesystem::path out = ".";
  std::uint64_t seed = 0;
  double jitter_scale = 1e-6;
  BeamConfig beam;
  KnnConfig knn;

  std::vector<std::string> tuple;  // predict: feature names

  std::string baseline_mode = "tuples";  // tuples | neighbors
  int baseline_size = 13;
  int n_draws = 200;
  int n_reps = 10;

  int n_seeds = 10;  // sweep-seeds

  int min_overlap = 100;  // pairwise
  double asym_threshold = 0.1;
  std::vector<std::string> pairwise_features;  // empty = all numeric inputs
};

nlohmann::ordered_json manifest_json(const RunConfig& config);

void run_select(const RunConfig& config);
void run_predict(const RunConfig& config);
void run_usage(const RunConfig& config);
void run_pairwise(const RunConfig& config);
void run_sweep_seeds(const RunConfig& config);
void run_baseline(const RunConfig& config);

// Dispatches on config.command and maps errors to exit codes:
// 0 success, 2 input/validation error, 3 constraint infeasibility.
int run_command(const RunConfig& config);

}  // namespace iifs
