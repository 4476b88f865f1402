#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <string>

#include "iifs/driver.hpp"

namespace {

// --seed wins, then the RUN_SEED environment variable, then 0
void apply_seed_fallback(iifs::RunConfig& config, bool seed_given) {
  if (seed_given) return;
  if (const char* env = std::getenv("RUN_SEED")) {
    try {
      config.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "error: RUN_SEED is not an integer\n";
      std::exit(2);
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature selection for incomplete tabular data by optimizing the "
               "class-weighted information imbalance toward a tree-structured "
               "target, with prior-corrected k-NN validation"};
  app.require_subcommand(1);

  iifs::RunConfig config;

  auto add_common = [&](CLI::App* cmd, bool needs_tree) {
    cmd->add_option("--data", config.data, "data CSV (first column = record id)")
        ->required();
    cmd->add_option("--meta", config.meta, "metadata CSV with columns name,kind,role")
        ->required();
    auto* tree = cmd->add_option("--tree", config.tree, "tree preset JSON");
    if (needs_tree) tree->required();
    cmd->add_option("--out", config.out, "output directory (default: .)");
    cmd->add_option("--seed", config.seed, "random seed (fallback: RUN_SEED, then 0)");
    cmd->add_option("--jitter-scale", config.jitter_scale,
                    "duplicate-breaking perturbation bound");
    cmd->add_option("--threads", config.beam.threads,
                    "worker cap, 0 = all cores; never changes results");
    cmd->add_option("--min-support", config.beam.min_support,
                    "minimum complete-case support per tuple");
    cmd->add_option("--max-jsd", config.beam.max_jsd,
                    "maximum base-2 Jensen-Shannon divergence of a tuple's class "
                    "distribution from the full one");
  };

  auto* select = app.add_subcommand("select", "beam-search the best tuple per size");
  add_common(select, true);
  select->add_option("--beam-width", config.beam.beam_width, "beam width");
  select->add_option("--max-tuple-size", config.beam.max_tuple_size, "largest size");
  select->add_option("--top", config.beam.top_k_report, "tuples reported per size");

  auto* predict = app.add_subcommand("predict", "k-NN prediction report for one tuple");
  add_common(predict, true);
  predict->add_option("--tuple", config.tuple, "feature names of the tuple")
      ->required()
      ->delimiter(',');
  predict->add_option("--k", config.knn.k, "neighbor count");
  predict->add_flag("!--no-loo", config.knn.leave_one_out,
                    "keep the record in its own prior pool");
  predict->add_flag("!--no-prior-correction", config.knn.prior_correct,
                    "plain majority vote instead of the prior-corrected rule");

  auto* usage = app.add_subcommand(
      "usage", "patient-specific tuples and the usage-when-available statistic");
  add_common(usage, true);
  usage->add_option("--beam-width", config.beam.beam_width, "beam width");
  usage->add_option("--max-tuple-size", config.beam.max_tuple_size, "largest size");
  usage->add_option("--epsilon-flat", config.beam.epsilon_flat,
                    "stop margin for the per-record search");
  usage->add_option("--k", config.knn.k, "neighbor count");

  auto* pairwise = app.add_subcommand(
      "pairwise", "directional imbalance and correlation for feature pairs");
  add_common(pairwise, false);
  pairwise->add_option("--features", config.pairwise_features,
                       "features to analyse (default: all numeric inputs)")
      ->delimiter(',');
  pairwise->add_option("--min-overlap", config.min_overlap,
                       "minimum shared records per pair");
  pairwise->add_option("--asym-threshold", config.asym_threshold,
                       "|delta_ab - delta_ba| flag threshold");

  auto* sweep = app.add_subcommand("sweep-seeds",
                                   "score dispersion and tuple stability across seeds");
  add_common(sweep, true);
  sweep->add_option("--seeds", config.n_seeds, "number of derived seeds");
  sweep->add_option("--beam-width", config.beam.beam_width, "beam width");
  sweep->add_option("--max-tuple-size", config.beam.max_tuple_size, "largest size");
  sweep->add_option("--top", config.beam.top_k_report, "tuples kept per size");

  auto* baseline = app.add_subcommand(
      "baseline", "random-tuple or random-neighbor reference accuracies");
  add_common(baseline, true);
  baseline->add_option("--mode", config.baseline_mode, "tuples | neighbors");
  baseline->add_option("--size", config.baseline_size, "tuple size for random draws");
  baseline->add_option("--draws", config.n_draws, "number of random tuples");
  baseline->add_option("--reps", config.n_reps, "repetitions for random neighbors");
  baseline->add_option("--k", config.knn.k, "neighbor count");
  baseline->add_option("--top", config.beam.top_k_report, "tuples kept");

  CLI11_PARSE(app, argc, argv);

  CLI::App* sub = app.get_subcommands().front();
  config.command = sub->get_name();
  apply_seed_fallback(config, sub->count("--seed") > 0);
  return iifs::run_command(config);
}
