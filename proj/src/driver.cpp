#include "iifs/driver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include "iifs/error.hpp"
#include "iifs/pairwise.hpp"
#include "iifs/parallel.hpp"
#include "iifs/patient.hpp"
#include "iifs/stats.hpp"

namespace iifs {

namespace {

constexpr int kSchemaVersion = 1;

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw input_error("cannot write " + path.string());
  out << text;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string join_names(const FeatureTable& table, const std::vector<int>& features,
                       const char* sep = ";") {
  std::string out;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (i) out += sep;
    out += table.meta(features[i]).name;
  }
  return out;
}

std::vector<std::string> feature_names(const FeatureTable& table,
                                       const std::vector<int>& features) {
  std::vector<std::string> names;
  names.reserve(features.size());
  for (int f : features) names.push_back(table.meta(f).name);
  return names;
}

struct LoadedInputs {
  CsvTable raw_data;
  std::shared_ptr<const FeatureTable> table;
  TargetTree tree;
  Eigen::VectorXi labels;
  NormalizedView view;
};

LoadedInputs load_inputs(const RunConfig& config, bool need_labels) {
  if (config.data.empty() || config.meta.empty())
    throw input_error("--data and --meta are required");
  LoadedInputs in;
  in.raw_data = read_csv(config.data);
  in.table = std::make_shared<FeatureTable>(
      build_feature_table(in.raw_data, read_csv(config.meta)));

  if (need_labels) {
    if (config.tree.empty()) throw input_error("--tree preset is required");
    TreePreset preset = load_tree_preset(config.tree);
    in.tree = std::move(preset.tree);
    if (preset.rules) {
      in.labels = labels_from_rules(*in.table, *preset.rules);
    } else if (preset.label_column) {
      in.labels = labels_from_column(in.raw_data, *preset.label_column,
                                     in.tree.leaf_names);
    } else {
      throw input_error("tree preset needs either rules or a label_column");
    }
    in.tree.leaf_sizes = leaf_histogram(in.labels, in.tree.n_leaves());
  }
  in.view = normalize_and_jitter(in.table, config.seed, config.jitter_scale);
  return in;
}

nlohmann::ordered_json tuple_json(const FeatureTable& table, const ScoredTuple& t) {
  return {{"features", feature_names(table, t.features)},
          {"delta_w", t.delta_w},
          {"support", t.support_size},
          {"jsd", t.jsd}};
}

nlohmann::ordered_json levels_json(const LevelAccuracies& acc) {
  nlohmann::ordered_json overall = nlohmann::ordered_json::array();
  nlohmann::ordered_json minority = nlohmann::ordered_json::array();
  for (double v : acc.overall) overall.push_back(v);
  for (double v : acc.minority) {
    if (std::isnan(v)) minority.push_back(nullptr);
    else minority.push_back(v);
  }
  return {{"overall", overall},
          {"minority", minority},
          {"n_records", acc.n_records},
          {"n_minority", acc.n_minority}};
}

void write_levels_csv(const std::filesystem::path& path, const LevelAccuracies& acc) {
  std::string csv = "level,overall,minority\n";
  for (std::size_t t = 0; t < acc.overall.size(); ++t) {
    csv += std::to_string(t) + "," + fmt_double(acc.overall[t]) + "," +
           fmt_double(acc.minority[t]) + "\n";
  }
  write_text(path, csv);
}

void write_manifest(const RunConfig& config) {
  write_json(config.out / "manifest.json", manifest_json(config));
}

void ensure_out_dir(const RunConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.out, ec);
  if (ec) throw input_error("cannot create output directory " + config.out.string());
}

// resolves tuple names against the table and checks the constraints,
// explaining exactly which one failed
TupleCandidate accepted_candidate_or_throw(const LoadedInputs& in,
                                           const RunConfig& config,
                                           const std::vector<std::string>& names) {
  if (names.empty()) throw input_error("no tuple features given");
  std::vector<int> features;
  for (const auto& name : names) {
    const auto idx = in.table->feature_index(name);
    if (!idx) throw input_error("unknown feature '" + name + "'");
    if (!in.view.admissible[static_cast<std::size_t>(*idx)])
      throw input_error("feature '" + name +
                        "' is not an admissible input (output role, constant, "
                        "or too few observed values)");
    features.push_back(*idx);
  }
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const SubsetSpec spec =
      SubsetSpec::from_labels(in.labels, in.tree.n_leaves(),
                              std::max(config.beam.min_support, 3), config.beam.max_jsd);
  auto outcome = make_candidate(in.view, features, spec, in.labels);
  if (!outcome.accepted()) {
    if (outcome.reject == RejectReason::support_too_small)
      throw infeasible_error("tuple rejected: complete-case support " +
                             std::to_string(outcome.support_size) +
                             " is below the minimum of " +
                             std::to_string(std::max(config.beam.min_support, 3)));
    throw infeasible_error("tuple rejected: class divergence " +
                           fmt_double(outcome.jsd) + " exceeds the maximum of " +
                           fmt_double(config.beam.max_jsd));
  }
  return std::move(*outcome.candidate);
}

}  // namespace

nlohmann::ordered_json manifest_json(const RunConfig& config) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "run_manifest"},
          {"command", config.command},
          {"data", config.data.string()},
          {"meta", config.meta.string()},
          {"tree", config.tree.string()},
          {"out", config.out.string()},
          {"seed", config.seed},
          {"jitter_scale", config.jitter_scale},
          {"threads", config.beam.threads},
          {"beam",
           {{"beam_width", config.beam.beam_width},
            {"max_tuple_size", config.beam.max_tuple_size},
            {"min_support", config.beam.min_support},
            {"max_jsd", config.beam.max_jsd},
            {"top_k_report", config.beam.top_k_report},
            {"epsilon_flat", config.beam.epsilon_flat}}},
          {"knn",
           {{"k", config.knn.k},
            {"leave_one_out", config.knn.leave_one_out},
            {"prior_correct", config.knn.prior_correct}}},
          {"predict", {{"tuple", config.tuple}}},
          {"baseline",
           {{"mode", config.baseline_mode},
            {"size", config.baseline_size},
            {"n_draws", config.n_draws},
            {"n_reps", config.n_reps}}},
          {"sweep", {{"n_seeds", config.n_seeds}}},
          {"pairwise",
           {{"min_overlap", config.min_overlap},
            {"asym_threshold", config.asym_threshold},
            {"features", config.pairwise_features}}}};
}

void run_select(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, true);
  ensure_out_dir(config);
  write_manifest(config);

  const SizeCurve curve = beam_search(in.view, in.tree, in.labels, config.beam);

  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (const auto& level : curve.levels) {
    nlohmann::ordered_json tuples = nlohmann::ordered_json::array();
    for (const auto& t : level.top) tuples.push_back(tuple_json(*in.table, t));
    levels.push_back({{"size", level.size}, {"tuples", tuples}});
  }
  write_json(config.out / "curve.json",
             {{"schema_version", kSchemaVersion},
              {"kind", "size_curve"},
              {"seed", config.seed},
              {"jitter_scale", config.jitter_scale},
              {"optimal_size", curve.optimal_size},
              {"turned", curve.turned},
              {"levels", levels}});

  std::string csv = "size,rank,delta_w,support,jsd,features\n";
  for (const auto& level : curve.levels) {
    for (std::size_t r = 0; r < level.top.size(); ++r) {
      const auto& t = level.top[r];
      csv += std::to_string(level.size) + "," + std::to_string(r + 1) + "," +
             fmt_double(t.delta_w) + "," + std::to_string(t.support_size) + "," +
             fmt_double(t.jsd) + "," +
             csv_escape(join_names(*in.table, t.features)) + "\n";
    }
  }
  write_text(config.out / "best_tuples.csv", csv);

  const SizeLevel* best_level = nullptr;
  for (const auto& level : curve.levels)
    if (level.size == curve.optimal_size) best_level = &level;
  std::cout << "optimal tuple size: " << curve.optimal_size << "\n";
  if (!curve.turned)
    std::cout << "warning: the score was still falling at the largest size searched\n";
  if (best_level) {
    std::cout << "best tuple (delta_w=" << fmt_double(best_level->best().delta_w)
              << ", support=" << best_level->best().support_size
              << "): " << join_names(*in.table, best_level->best().features, ", ")
              << "\n";
  }
}

void run_predict(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, true);
  const TupleCandidate candidate = accepted_candidate_or_throw(in, config, config.tuple);
  ensure_out_dir(config);
  write_manifest(config);

  const PredictionReport report = prior_corrected_knn(
      in.view, candidate, in.labels, in.tree, config.knn,
      resolve_threads(config.beam.threads));

  write_json(config.out / "report.json",
             {{"schema_version", kSchemaVersion},
              {"kind", "prediction_report"},
              {"tuple", feature_names(*in.table, candidate.features)},
              {"support", static_cast<int>(candidate.support.size())},
              {"jsd", candidate.jsd},
              {"k", report.k_used},
              {"k_truncated", report.k_truncated},
              {"leave_one_out", config.knn.leave_one_out},
              {"prior_correct", config.knn.prior_correct},
              {"majority_leaf", in.tree.leaf_names[static_cast<std::size_t>(report.majority_leaf)]},
              {"level_accuracies", levels_json(report.levels)}});

  std::string csv = "id,true,predicted,distance\n";
  for (const auto& r : report.rows) {
    csv += csv_escape(in.table->record_ids()[static_cast<std::size_t>(r.record)]) + "," +
           csv_escape(in.tree.leaf_names[static_cast<std::size_t>(r.true_leaf)]) + "," +
           csv_escape(in.tree.leaf_names[static_cast<std::size_t>(r.predicted_leaf)]) + "," +
           std::to_string(r.distance) + "\n";
  }
  write_text(config.out / "per_record.csv", csv);
  write_levels_csv(config.out / "levels.csv", report.levels);

  std::cout << "predicted " << report.levels.n_records << " records with k=" << report.k_used
            << "\n";
  for (std::size_t t = 0; t < report.levels.overall.size(); ++t)
    std::cout << "  level " << t << ": " << fmt_double(report.levels.overall[t]) << "\n";
}

void run_usage(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, true);
  ensure_out_dir(config);
  write_manifest(config);

  const int n = in.table->n_records();
  std::vector<std::optional<TupleCandidate>> tuples(static_cast<std::size_t>(n));
  parallel_for(n, config.beam.threads, [&](int r) {
    BeamConfig per_record = config.beam;
    per_record.threads = 1;  // parallelism lives at the record level here
    tuples[static_cast<std::size_t>(r)] =
        patient_specific_search(in.view, in.tree, in.labels, r, per_record);
  });

  const UsageStats stats = usage_statistic(tuples, *in.table);

  // each record predicted with its own tuple against that tuple's support
  std::vector<RecordPrediction> predictions;
  for (int r = 0; r < n; ++r) {
    const auto& t = tuples[static_cast<std::size_t>(r)];
    if (!t) continue;
    const int predicted =
        predict_record(in.view, t->features, t->support, r, in.labels, in.tree, config.knn);
    predictions.push_back({r, in.labels[r], predicted,
                           in.tree.distance(in.labels[r], predicted)});
  }
  const LevelAccuracies patient_levels =
      level_accuracies(predictions, in.tree, in.tree.majority_leaf());

  std::vector<UsageRow> sorted = stats.rows;
  std::sort(sorted.begin(), sorted.end(), [&](const UsageRow& a, const UsageRow& b) {
    if (a.usage != b.usage) return a.usage > b.usage;
    return in.table->meta(a.feature).name < in.table->meta(b.feature).name;
  });

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "feature,n_selected,n_available,usage\n";
  for (const auto& row : sorted) {
    const std::string& name = in.table->meta(row.feature).name;
    rows.push_back({{"feature", name},
                    {"n_selected", row.n_selected},
                    {"n_available", row.n_available},
                    {"usage", row.usage}});
    csv += csv_escape(name) + "," + std::to_string(row.n_selected) + "," +
           std::to_string(row.n_available) + "," + fmt_double(row.usage) + "\n";
  }
  int n_with_tuple = 0;
  for (const auto& t : tuples)
    if (t) ++n_with_tuple;

  write_json(config.out / "usage.json",
             {{"schema_version", kSchemaVersion},
              {"kind", "usage_stats"},
              {"n_records", n},
              {"n_with_tuple", n_with_tuple},
              {"rows", rows},
              {"patient_prediction", levels_json(patient_levels)}});
  write_text(config.out / "usage.csv", csv);

  std::string tuples_csv =
      "record_id,status,size,delta_w,support,jsd,true,predicted,distance,features\n";
  std::size_t pred_index = 0;
  for (int r = 0; r < n; ++r) {
    const auto& t = tuples[static_cast<std::size_t>(r)];
    tuples_csv += csv_escape(in.table->record_ids()[static_cast<std::size_t>(r)]) + ",";
    if (!t) {
      tuples_csv += "infeasible,,,,,,,,\n";
      continue;
    }
    const RecordPrediction& p = predictions[pred_index++];
    tuples_csv += "ok," + std::to_string(t->features.size()) + "," +
                  fmt_double(*t->delta_w) + "," + std::to_string(t->support.size()) +
                  "," + fmt_double(t->jsd) + "," +
                  csv_escape(in.tree.leaf_names[static_cast<std::size_t>(p.true_leaf)]) + "," +
                  csv_escape(in.tree.leaf_names[static_cast<std::size_t>(p.predicted_leaf)]) + "," +
                  std::to_string(p.distance) + "," +
                  csv_escape(join_names(*in.table, t->features)) + "\n";
  }
  write_text(config.out / "patient_tuples.csv", tuples_csv);

  std::cout << "patient-specific tuples found for " << n_with_tuple << "/" << n
            << " records\n";
  if (!sorted.empty()) {
    std::cout << "top usage: ";
    for (std::size_t i = 0; i < std::min<std::size_t>(5, sorted.size()); ++i) {
      if (i) std::cout << ", ";
      std::cout << in.table->meta(sorted[i].feature).name << "="
                << fmt_double(sorted[i].usage);
    }
    std::cout << "\n";
  }
}

void run_pairwise(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, false);
  ensure_out_dir(config);
  write_manifest(config);

  std::vector<int> features;
  if (config.pairwise_features.empty()) {
    for (int f = 0; f < in.table->n_features(); ++f) {
      if (in.table->meta(f).kind == FeatureKind::numeric &&
          in.table->meta(f).role == FeatureRole::input &&
          in.view.admissible[static_cast<std::size_t>(f)])
        features.push_back(f);
    }
  } else {
    for (const auto& name : config.pairwise_features) {
      const auto idx = in.table->feature_index(name);
      if (!idx) throw input_error("unknown feature '" + name + "'");
      features.push_back(*idx);
    }
  }
  if (features.size() < 2)
    throw infeasible_error("pairwise analysis needs at least two usable features");

  PairwiseOptions options;
  options.min_overlap = config.min_overlap;
  options.asym_threshold = config.asym_threshold;
  options.threads = config.beam.threads;
  const PairwiseResult result = pairwise_feature_analysis(in.view, features, options);

  std::string csv =
      "feature_a,feature_b,delta_ab,delta_ba,pearson,spearman,n_shared,asymmetric\n";
  for (const auto& row : result.rows) {
    csv += csv_escape(in.table->meta(row.feature_a).name) + "," +
           csv_escape(in.table->meta(row.feature_b).name) + "," +
           fmt_double(row.delta_ab) + "," + fmt_double(row.delta_ba) + "," +
           fmt_double(row.pearson) + "," + fmt_double(row.spearman) + "," +
           std::to_string(row.n_shared) + "," + (row.asymmetric ? "1" : "0") + "\n";
  }
  write_text(config.out / "pairwise.csv", csv);

  std::string skipped = "feature_a,feature_b,reason\n";
  for (const auto& s : result.skipped) {
    skipped += csv_escape(in.table->meta(s.feature_a).name) + "," +
               csv_escape(in.table->meta(s.feature_b).name) + "," +
               csv_escape(s.reason) + "\n";
  }
  write_text(config.out / "pairwise_skipped.csv", skipped);

  std::cout << "analysed " << result.rows.size() << " pairs, skipped "
            << result.skipped.size() << "\n";
  int flagged = 0;
  for (const auto& row : result.rows) flagged += row.asymmetric ? 1 : 0;
  std::cout << flagged << " pairs flagged as notably asymmetric\n";
}

void run_sweep_seeds(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, true);
  ensure_out_dir(config);
  write_manifest(config);

  const SeedSweepResult sweep =
      seed_stability_sweep(in.table, in.tree, in.labels, config.beam, config.seed,
                           config.n_seeds, config.jitter_scale);

  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  std::string csv = "size,feature,n_seeds_selected,fraction\n";
  for (const auto& level : sweep.levels) {
    nlohmann::ordered_json membership = nlohmann::ordered_json::object();
    for (const auto& [f, count] : level.feature_seed_counts) {
      const std::string& name = in.table->meta(f).name;
      membership[name] = count;
      csv += std::to_string(level.size) + "," + csv_escape(name) + "," +
             std::to_string(count) + "," +
             fmt_double(static_cast<double>(count) / sweep.n_seeds) + "\n";
    }
    levels.push_back({{"size", level.size},
                      {"mean", level.mean},
                      {"std", level.stddev},
                      {"features", membership}});
  }
  write_json(config.out / "sweep.json", {{"schema_version", kSchemaVersion},
                                         {"kind", "seed_sweep"},
                                         {"base_seed", config.seed},
                                         {"n_seeds", sweep.n_seeds},
                                         {"levels", levels}});
  write_text(config.out / "membership.csv", csv);

  std::cout << "swept " << sweep.n_seeds << " seeds over " << sweep.levels.size()
            << " sizes\n";
  for (const auto& level : sweep.levels)
    std::cout << "  size " << level.size << ": mean=" << fmt_double(level.mean)
              << " std=" << fmt_double(level.stddev) << "\n";
}

void run_baseline(const RunConfig& config) {
  LoadedInputs in = load_inputs(config, true);
  ensure_out_dir(config);
  write_manifest(config);

  if (config.baseline_mode == "neighbors") {
    const PredictionReport report = random_neighbor_baseline(
        in.labels, in.tree, config.knn.k, config.seed, config.n_reps);
    write_json(config.out / "baseline.json",
               {{"schema_version", kSchemaVersion},
                {"kind", "random_neighbor_baseline"},
                {"k", report.k_used},
                {"n_reps", report.n_reps},
                {"level_accuracies", levels_json(report.levels)}});
    write_levels_csv(config.out / "levels.csv", report.levels);
    std::cout << "random-neighbor baseline over " << report.n_reps << " repetitions\n";
    for (std::size_t t = 0; t < report.levels.overall.size(); ++t)
      std::cout << "  level " << t << ": " << fmt_double(report.levels.overall[t]) << "\n";
    return;
  }
  if (config.baseline_mode != "tuples")
    throw input_error("baseline mode must be 'tuples' or 'neighbors'");

  const RandomBaseline baseline =
      random_tuple_baseline(in.view, in.tree, in.labels, config.baseline_size,
                            config.n_draws, config.seed, config.beam);
  if (baseline.top.empty())
    throw infeasible_error("no random tuple satisfied the constraints");
  if (baseline.n_accepted < config.n_draws)
    std::cerr << "warning: only " << baseline.n_accepted << " of " << config.n_draws
              << " draws satisfied the constraints\n";

  // average prediction accuracy over the retained tuples
  const int n_levels = in.tree.max_distance() + 1;
  std::vector<double> overall(static_cast<std::size_t>(n_levels), 0.0);
  std::vector<double> minority(static_cast<std::size_t>(n_levels), 0.0);
  for (const auto& t : baseline.top) {
    TupleCandidate cand;
    cand.features = t.features;
    cand.support = complete_support(*in.table, t.features);
    cand.jsd = t.jsd;
    const PredictionReport report =
        prior_corrected_knn(in.view, cand, in.labels, in.tree, config.knn,
                            resolve_threads(config.beam.threads));
    for (int lvl = 0; lvl < n_levels; ++lvl) {
      overall[static_cast<std::size_t>(lvl)] +=
          report.levels.overall[static_cast<std::size_t>(lvl)];
      minority[static_cast<std::size_t>(lvl)] +=
          report.levels.minority[static_cast<std::size_t>(lvl)];
    }
  }
  for (auto& v : overall) v /= static_cast<double>(baseline.top.size());
  for (auto& v : minority) v /= static_cast<double>(baseline.top.size());

  nlohmann::ordered_json top = nlohmann::ordered_json::array();
  std::string csv = "rank,delta_w,support,jsd,features\n";
  for (std::size_t r = 0; r < baseline.top.size(); ++r) {
    const auto& t = baseline.top[r];
    top.push_back(tuple_json(*in.table, t));
    csv += std::to_string(r + 1) + "," + fmt_double(t.delta_w) + "," +
           std::to_string(t.support_size) + "," + fmt_double(t.jsd) + "," +
           csv_escape(join_names(*in.table, t.features)) + "\n";
  }
  nlohmann::ordered_json overall_json = nlohmann::ordered_json::array();
  nlohmann::ordered_json minority_json = nlohmann::ordered_json::array();
  for (double v : overall) overall_json.push_back(v);
  for (double v : minority) {
    if (std::isnan(v)) minority_json.push_back(nullptr);
    else minority_json.push_back(v);
  }
  write_json(config.out / "baseline.json",
             {{"schema_version", kSchemaVersion},
              {"kind", "random_tuple_baseline"},
              {"size", config.baseline_size},
              {"n_draws", baseline.n_drawn},
              {"n_unique", baseline.n_unique},
              {"n_accepted", baseline.n_accepted},
              {"top", top},
              {"prediction", {{"overall", overall_json}, {"minority", minority_json}}}});
  write_text(config.out / "random_tuples.csv", csv);

  std::cout << "best random " << config.baseline_size << "-tuple: delta_w="
            << fmt_double(baseline.top.front().delta_w) << "\n";
}

int run_command(const RunConfig& config) {
  try {
    if (config.command == "select") run_select(config);
    else if (config.command == "predict") run_predict(config);
    else if (config.command == "usage") run_usage(config);
    else if (config.command == "pairwise") run_pairwise(config);
    else if (config.command == "sweep-seeds") run_sweep_seeds(config);
    else if (config.command == "baseline") run_baseline(config);
    else throw input_error("unknown command '" + config.command + "'");
  } catch (const infeasible_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace iifs
