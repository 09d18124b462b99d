#include "wordgrad/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "wordgrad/analysis.hpp"
#include "wordgrad/eval.hpp"
#include "wordgrad/gradcheck.hpp"
#include "wordgrad/io.hpp"
#include "wordgrad/steps.hpp"
#include "wordgrad/trainer.hpp"
#include "wordgrad/version.hpp"

namespace wordgrad::cli {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stoi(item));
  }
  if (out.empty()) throw std::invalid_argument("empty integer list: '" + s + "'");
  return out;
}

json config_json(const TrainConfig& cfg, const std::string& precision) {
  return json{{"mode", to_string(cfg.mode)},
              {"dim", cfg.dim},
              {"window", cfg.c_max},
              {"negatives", cfg.negatives},
              {"epochs", cfg.epochs},
              {"lr0", cfg.lr0},
              {"lr_floor_fraction", cfg.lr_floor_fraction},
              {"min_count", cfg.min_count},
              {"subsample_threshold", cfg.subsample_threshold},
              {"threads", cfg.threads},
              {"seed", cfg.seed},
              {"loss_log_interval", cfg.loss_log_interval},
              {"noise_alpha", cfg.noise.alpha},
              {"noise_table_size", cfg.noise.table_size},
              {"sentence_buffer", cfg.sentence_buffer},
              {"sigmoid_table", cfg.use_sigmoid_table},
              {"precision", precision}};
}

json manifest_base(const char* command, uint64_t seed) {
  return json{{"tool", "wordgrad"},
              {"version", kVersion},
              {"command", command},
              {"seed", seed}};
}

void emit_manifest(const json& manifest) { std::cout << manifest.dump(2) << std::endl; }

struct TrainArgs {
  std::string corpus;
  std::string out;
  std::string format = "text";
  std::string mode = "cbow_correct";
  bool faulty = false;
  std::string precision = "float";
  std::string loss_csv;
  std::string save_vocab;
  std::string save_target;
  bool quiet = false;
  TrainConfig cfg;
  double lr = 0.0;
};

template <typename T>
int run_train(const TrainArgs& args, json& manifest) {
  const auto t0 = Clock::now();
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::from_file(args.corpus, args.cfg.min_count, args.cfg.noise));
  const double vocab_seconds = seconds_since(t0);

  const auto t1 = Clock::now();
  auto result = train<T>(args.corpus, args.cfg, vocab);
  const double train_seconds = seconds_since(t1);

  const auto t2 = Clock::now();
  const auto fmt = io::parse_format(args.format);
  io::save_embeddings(args.out, fmt, *vocab, result.model, false);
  if (!args.save_target.empty()) {
    io::save_embeddings(args.save_target, fmt, *vocab, result.model, true);
  }
  if (!args.save_vocab.empty()) vocab->save(args.save_vocab);
  if (!args.loss_csv.empty()) io::write_loss_csv(args.loss_csv, result.loss_log);
  const double save_seconds = seconds_since(t2);

  manifest["config"] = config_json(result.config, args.precision);
  manifest["corpus"] = {{"path", args.corpus},
                        {"vocab_size", vocab->size()},
                        {"total_tokens", vocab->total_tokens()}};
  manifest["timing"] = {{"vocab_seconds", vocab_seconds},
                        {"train_seconds", train_seconds},
                        {"save_seconds", save_seconds},
                        {"wall_seconds", result.timing.wall_seconds},
                        {"tokens_per_second", result.timing.tokens_per_second},
                        {"epoch_seconds", result.timing.epoch_seconds}};
  json outputs = {{"vectors", args.out}, {"format", args.format}};
  if (!args.save_target.empty()) outputs["target_vectors"] = args.save_target;
  if (!args.save_vocab.empty()) outputs["vocabulary"] = args.save_vocab;
  if (!args.loss_csv.empty()) outputs["loss_csv"] = args.loss_csv;
  manifest["outputs"] = outputs;
  if (!result.loss_log.empty()) {
    manifest["result"] = {{"first_interval_loss", result.loss_log.front().mean_loss},
                          {"final_interval_loss", result.loss_log.back().mean_loss},
                          {"intervals", result.loss_log.size()}};
  }
  emit_manifest(manifest);
  return 0;
}

int cmd_train(TrainArgs& args) {
  args.cfg.mode = parse_mode(args.mode, args.faulty);
  args.cfg.lr0 = args.lr;
  args.cfg.verbose = !args.quiet;
  if (args.precision != "float" && args.precision != "double") {
    throw std::invalid_argument("precision must be float or double");
  }
  json manifest = manifest_base("train", args.cfg.seed);
  return args.precision == "double" ? run_train<double>(args, manifest)
                                    : run_train<float>(args, manifest);
}

struct GradcheckArgs {
  int trials = 100;
  std::string dims = "2,8,64";
  std::string contexts = "1,5,10";
  std::string negatives = "1,5,20";
  double tolerance = 1e-4;
  double epsilon = 1e-5;
  std::string mode = "correct";
  uint64_t seed = 1;
  bool json_only = false;
};

// Max relative error between the parameter deltas applied by one SGD step
// (lr-normalized) and the analytic bundle; ties the trainer's update code to
// the checked gradients.
double step_delta_error(const TrainingInstance& inst, const Embeddings<double>& model,
                        const gradcheck::GradientBundle& bundle, bool faulty, bool sg) {
  const double lr = 0.01;
  Embeddings<double> stepped = model;
  if (sg) {
    sg_step(inst.context[0], inst.center, inst.negatives, stepped, lr);
  } else {
    cbow_step(inst, stepped, lr, faulty);
  }
  const int d = model.dim;
  double worst = 0.0;
  auto visit = [&](const double* before, const double* after, const std::vector<double>& g) {
    for (int i = 0; i < d; ++i) {
      const double applied = (before[i] - after[i]) / lr;  // -delta/lr = gradient
      const double denom = std::max({std::fabs(applied), std::fabs(g[i]), 1e-12});
      worst = std::max(worst, std::fabs(applied - g[i]) / denom);
    }
  };
  for (size_t j = 0; j < inst.context.size(); ++j) {
    visit(model.source_row(inst.context[j]), stepped.source_row(inst.context[j]),
          bundle.context_grads[j]);
  }
  for (size_t j = 0; j < inst.negatives.size(); ++j) {
    visit(model.target_row(inst.negatives[j]), stepped.target_row(inst.negatives[j]),
          bundle.negative_grads[j]);
  }
  visit(model.target_row(inst.center), stepped.target_row(inst.center), bundle.target_grad);
  return worst;
}

int cmd_gradcheck(const GradcheckArgs& args) {
  const auto dims = parse_int_list(args.dims);
  const auto contexts = parse_int_list(args.contexts);
  const auto negatives = parse_int_list(args.negatives);
  const bool faulty = args.mode == "faulty" || args.mode == "cbow_faulty";
  const bool sg = args.mode == "sg";
  if (!faulty && !sg && args.mode != "correct" && args.mode != "cbow_correct" &&
      args.mode != "cbow") {
    throw std::invalid_argument("gradcheck mode must be correct, faulty or sg");
  }

  std::mt19937_64 rng(args.seed);
  const auto t0 = Clock::now();
  double max_numeric_err = 0.0;
  double max_step_err = 0.0;
  std::string worst_coord;
  int failed = 0;
  for (int t = 0; t < args.trials; ++t) {
    const int d = dims[t % dims.size()];
    const int c = sg ? 1 : contexts[(t / dims.size()) % contexts.size()];
    const int k = negatives[(t / (dims.size() * contexts.size())) % negatives.size()];
    auto cs = gradcheck::random_instance(rng, d, c, k);
    const auto analytic = gradcheck::analytic_cbow_grad(cs.instance, cs.model, faulty);
    const auto numeric = gradcheck::numeric_grad(cs.instance, cs.model, args.epsilon);
    const auto report = gradcheck::check(analytic, numeric, args.tolerance);
    const double step_err = step_delta_error(cs.instance, cs.model, analytic, faulty, sg);
    max_step_err = std::max(max_step_err, step_err);
    if (report.max_rel_error > max_numeric_err) {
      max_numeric_err = report.max_rel_error;
      worst_coord = report.worst_coordinate;
    }
    const bool trial_ok = report.pass && step_err <= args.tolerance;
    if (!trial_ok) ++failed;
    if (!args.json_only) {
      std::printf("trial %3d  d=%-3d C=%-3d k=%-3d  numeric_err %.3e  step_err %.3e  %s\n", t,
                  d, c, k, report.max_rel_error, step_err, trial_ok ? "ok" : "FAIL");
    }
  }
  const bool pass = failed == 0;
  if (!args.json_only) {
    std::printf("gradcheck mode=%s trials=%d tolerance=%g: %s (max numeric err %.3e at %s)\n",
                args.mode.c_str(), args.trials, args.tolerance, pass ? "PASS" : "FAIL",
                max_numeric_err, worst_coord.c_str());
  }

  json manifest = manifest_base("gradcheck", args.seed);
  manifest["config"] = {{"trials", args.trials},   {"dims", dims},
                        {"contexts", contexts},    {"negatives", negatives},
                        {"tolerance", args.tolerance}, {"epsilon", args.epsilon},
                        {"mode", args.mode}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)}};
  manifest["result"] = {{"pass", pass},
                        {"failed_trials", failed},
                        {"max_numeric_rel_error", max_numeric_err},
                        {"max_step_rel_error", max_step_err},
                        {"worst_coordinate", worst_coord}};
  emit_manifest(manifest);
  return pass ? 0 : 1;
}

struct AngleGridArgs {
  int c_lo = 1, c_hi = 20, k_lo = 1, k_hi = 20;
  std::string out;
};

int cmd_angle_grid(const AngleGridArgs& args) {
  const auto t0 = Clock::now();
  const auto grid = analysis::angle_grid(args.c_lo, args.c_hi, args.k_lo, args.k_hi);
  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot write csv: " + args.out);
  analysis::write_csv(grid, out);

  json manifest = manifest_base("analyze angle-grid", 0);
  manifest["config"] = {{"c_range", {args.c_lo, args.c_hi}}, {"k_range", {args.k_lo, args.k_hi}}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)}};
  manifest["outputs"] = {{"csv", args.out}};
  manifest["result"] = {{"min_cosine", grid.min_cosine},
                        {"min_c", grid.min_c},
                        {"min_k", grid.min_k}};
  emit_manifest(manifest);
  return 0;
}

struct DescentArgs {
  int64_t trials = 100'000;
  int c_max = 20;
  int k_max = 20;
  int dim = 8;
  uint64_t seed = 1;
};

int cmd_descent(const DescentArgs& args) {
  const auto t0 = Clock::now();
  const auto summary = analysis::descent_monte_carlo(args.trials, args.c_max, args.k_max,
                                                     args.dim, args.seed);
  const bool pass = summary.failures == 0;
  std::printf("descent check: %lld trials, %lld failures, %lld zero-gradient skips: %s\n",
              static_cast<long long>(summary.trials), static_cast<long long>(summary.failures),
              static_cast<long long>(summary.zero_gradient), pass ? "PASS" : "FAIL");

  json manifest = manifest_base("analyze descent", args.seed);
  manifest["config"] = {{"trials", args.trials},
                        {"c_max", args.c_max},
                        {"k_max", args.k_max},
                        {"dim", args.dim}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)}};
  manifest["result"] = {{"pass", pass},
                        {"failures", summary.failures},
                        {"zero_gradient", summary.zero_gradient}};
  emit_manifest(manifest);
  return pass ? 0 : 1;
}

struct NormsArgs {
  std::string corpus;
  std::string out;
  std::string c_max_list = "1,5,10,15";
  std::string modes = "cbow_correct,cbow_faulty";
  TrainConfig base;
  double lr = 0.025;
};

int cmd_norms(NormsArgs& args) {
  const auto t0 = Clock::now();
  const auto c_values = parse_int_list(args.c_max_list);
  std::vector<Mode> modes;
  {
    std::stringstream ss(args.modes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) modes.push_back(parse_mode(item));
    }
  }
  args.base.lr0 = args.lr;
  const auto report = analysis::norm_experiment(args.corpus, modes, c_values, args.base);
  std::ofstream out(args.out);
  if (!out) throw std::runtime_error("cannot write csv: " + args.out);
  analysis::write_csv(report, out);

  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"mode", to_string(row.mode)},
                    {"c_max", row.c_max},
                    {"source_norm", row.source_norm},
                    {"target_norm", row.target_norm}});
  }
  json manifest = manifest_base("analyze norms", args.base.seed);
  manifest["config"] = config_json(args.base, "float");
  manifest["config"]["c_max_list"] = c_values;
  manifest["config"]["modes"] = args.modes;
  manifest["corpus"] = {{"path", args.corpus}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)}};
  manifest["outputs"] = {{"csv", args.out}};
  manifest["result"] = {{"rows", rows}};
  emit_manifest(manifest);
  return 0;
}

struct LossCurveArgs {
  std::string corpus;
  std::string out;
  std::string mode = "cbow_correct";
  bool faulty = false;
  TrainConfig cfg;
  double lr = 0.0;
};

int cmd_loss_curve(LossCurveArgs& args) {
  const auto t0 = Clock::now();
  args.cfg.mode = parse_mode(args.mode, args.faulty);
  args.cfg.lr0 = args.lr;
  auto result = train<float>(args.corpus, args.cfg);
  io::write_loss_csv(args.out, result.loss_log);

  json manifest = manifest_base("analyze loss-curve", args.cfg.seed);
  manifest["config"] = config_json(result.config, "float");
  manifest["corpus"] = {{"path", args.corpus},
                        {"vocab_size", result.vocab->size()},
                        {"total_tokens", result.vocab->total_tokens()}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)},
                        {"tokens_per_second", result.timing.tokens_per_second}};
  manifest["outputs"] = {{"csv", args.out}};
  if (!result.loss_log.empty()) {
    manifest["result"] = {{"first_interval_loss", result.loss_log.front().mean_loss},
                          {"final_interval_loss", result.loss_log.back().mean_loss},
                          {"intervals", result.loss_log.size()}};
  }
  emit_manifest(manifest);
  return 0;
}

struct EvalArgs {
  std::string vectors;
  std::string format = "text";
  bool lossy_utf8 = false;
  std::vector<std::string> similarity;
  std::vector<std::string> analogy;
  uint64_t split_seed = 42;
  bool no_lowercase = false;
};

std::pair<std::string, std::string> task_name_path(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq != std::string::npos) return {spec.substr(0, eq), spec.substr(eq + 1)};
  return {std::filesystem::path(spec).stem().string(), spec};
}

int cmd_eval(const EvalArgs& args) {
  const auto t0 = Clock::now();
  const auto emb = eval::EmbeddingSet::from_matrix(
      io::load_embeddings(args.vectors, io::parse_format(args.format), args.lossy_utf8));
  const bool lowercase = !args.no_lowercase;

  json tasks;
  double dev_sum = 0.0, test_sum = 0.0;
  int64_t n_tasks = 0;
  auto add_task = [&](const std::string& name, const char* type, json dev, json test) {
    tasks[name] = {{"type", type}, {"dev", dev}, {"test", test}};
    if (dev.contains("metric") && test.contains("metric")) {
      dev_sum += dev["metric"].get<double>();
      test_sum += test["metric"].get<double>();
      ++n_tasks;
    }
  };
  auto guarded = [&](auto&& fn) -> json {
    try {
      return fn();
    } catch (const std::exception& e) {
      return json{{"error", e.what()}};
    }
  };

  for (const auto& spec : args.similarity) {
    const auto [name, path] = task_name_path(spec);
    const auto ds = eval::SimilarityDataset::load(path, lowercase);
    const auto [dev, test] = eval::dev_test_split(ds, args.split_seed);
    auto run_half = [&](const eval::SimilarityDataset& half) -> json {
      const auto r = eval::similarity_eval(emb, half);
      return json{{"metric", r.rho}, {"coverage", r.coverage}, {"used", r.used},
                  {"total", r.total}};
    };
    add_task(name, "similarity", guarded([&] { return run_half(dev); }),
             guarded([&] { return run_half(test); }));
  }
  for (const auto& spec : args.analogy) {
    const auto [name, path] = task_name_path(spec);
    const auto ds = eval::AnalogyDataset::load(path, lowercase);
    const auto [dev, test] = eval::dev_test_split(ds, args.split_seed);
    auto run_half = [&](const eval::AnalogyDataset& half) -> json {
      const auto r = eval::analogy_eval(emb, half);
      return json{{"metric", r.accuracy}, {"coverage", r.coverage}, {"used", r.used},
                  {"oov", r.oov},         {"degenerate", r.degenerate}, {"total", r.total}};
    };
    add_task(name, "analogy", guarded([&] { return run_half(dev); }),
             guarded([&] { return run_half(test); }));
  }

  json manifest = manifest_base("eval", args.split_seed);
  manifest["config"] = {{"vectors", args.vectors},
                        {"format", args.format},
                        {"split_seed", args.split_seed},
                        {"lowercase", lowercase}};
  manifest["embeddings"] = {{"vocab_size", emb.words.size()}, {"dim", emb.dim}};
  manifest["timing"] = {{"wall_seconds", seconds_since(t0)}};
  manifest["result"]["tasks"] = tasks;
  if (n_tasks > 0) {
    manifest["result"]["average"] = {{"dev", dev_sum / static_cast<double>(n_tasks)},
                                     {"test", test_sum / static_cast<double>(n_tasks)},
                                     {"tasks", n_tasks}};
  }
  emit_manifest(manifest);
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"word2vec-style trainer (SG, corrected CBOW, faulty CBOW) with gradient "
               "diagnostics and intrinsic evaluation"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train embeddings with negative sampling");
  train_cmd->add_option("--corpus", train_args.corpus, "corpus file, one sentence per line")
      ->required()->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out, "output vectors path")->required();
  train_cmd->add_option("--format", train_args.format, "output format: text|binary")
      ->capture_default_str();
  train_cmd->add_option("--mode", train_args.mode, "sg | cbow | cbow_correct | cbow_faulty")
      ->capture_default_str();
  train_cmd->add_flag("--faulty", train_args.faulty,
                      "use the historical CBOW update (CBOW modes only)");
  train_cmd->add_option("--dim", train_args.cfg.dim, "embedding dimensionality")
      ->capture_default_str();
  train_cmd->add_option("--window", train_args.cfg.c_max, "max context half-width")
      ->capture_default_str();
  train_cmd->add_option("--negatives", train_args.cfg.negatives, "negatives per example")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_args.cfg.epochs, "training epochs")
      ->capture_default_str();
  train_cmd->add_option("--lr", train_args.lr,
                        "initial learning rate (default 0.075 for cbow_correct, 0.025 otherwise)");
  train_cmd->add_option("--lr-floor-fraction", train_args.cfg.lr_floor_fraction,
                        "decay floor as a fraction of lr0")->capture_default_str();
  train_cmd->add_option("--min-count", train_args.cfg.min_count, "drop rarer words")
      ->capture_default_str();
  train_cmd->add_option("--subsample", train_args.cfg.subsample_threshold,
                        "frequent-word subsampling threshold, <= 0 disables")
      ->capture_default_str();
  train_cmd->add_option("--threads", train_args.cfg.threads,
                        "worker threads (1 = deterministic serial path)")
      ->capture_default_str();
  train_cmd->add_option("--seed", train_args.cfg.seed, "RNG seed")->capture_default_str();
  train_cmd->add_option("--loss-interval", train_args.cfg.loss_log_interval,
                        "tokens per logged loss interval")->capture_default_str();
  train_cmd->add_option("--noise-alpha", train_args.cfg.noise.alpha,
                        "noise distribution exponent")->capture_default_str();
  train_cmd->add_option("--noise-table-size", train_args.cfg.noise.table_size,
                        "max noise table entries")->capture_default_str();
  train_cmd->add_option("--sentence-buffer", train_args.cfg.sentence_buffer,
                        "sentences per read block")->capture_default_str();
  train_cmd->add_flag("--sigmoid-table", train_args.cfg.use_sigmoid_table,
                      "use the piecewise sigmoid approximation during training");
  train_cmd->add_option("--precision", train_args.precision, "float | double")
      ->capture_default_str();
  train_cmd->add_option("--loss-csv", train_args.loss_csv, "write tokens,loss CSV here");
  train_cmd->add_option("--save-vocab", train_args.save_vocab, "write word<TAB>count dump here");
  train_cmd->add_option("--save-target", train_args.save_target,
                        "also export the target-side matrix here");
  train_cmd->add_flag("--quiet", train_args.quiet, "suppress progress output");

  GradcheckArgs gc_args;
  auto* gc_cmd = app.add_subcommand(
      "gradcheck", "verify analytic gradients against central finite differences");
  gc_cmd->add_option("--trials", gc_args.trials, "random instances to check")
      ->capture_default_str();
  gc_cmd->add_option("--dims", gc_args.dims, "comma list of dimensionalities")
      ->capture_default_str();
  gc_cmd->add_option("--contexts", gc_args.contexts, "comma list of context sizes C")
      ->capture_default_str();
  gc_cmd->add_option("--negatives", gc_args.negatives, "comma list of negative counts k")
      ->capture_default_str();
  gc_cmd->add_option("--tolerance", gc_args.tolerance, "max relative error")
      ->capture_default_str();
  gc_cmd->add_option("--epsilon", gc_args.epsilon, "finite-difference step")
      ->capture_default_str();
  gc_cmd->add_option("--mode", gc_args.mode, "correct | faulty | sg")->capture_default_str();
  gc_cmd->add_option("--seed", gc_args.seed, "RNG seed")->capture_default_str();
  gc_cmd->add_flag("--json", gc_args.json_only, "JSON manifest only, no per-trial lines");

  auto* an_cmd = app.add_subcommand("analyze", "gradient-angle, descent and norm diagnostics");
  an_cmd->require_subcommand(1);

  AngleGridArgs ag_args;
  auto* ag_cmd = an_cmd->add_subcommand("angle-grid",
                                        "closed-form faulty/correct gradient cosine over C,k");
  ag_cmd->add_option("--c-min", ag_args.c_lo, "")->capture_default_str();
  ag_cmd->add_option("--c-max", ag_args.c_hi, "")->capture_default_str();
  ag_cmd->add_option("--k-min", ag_args.k_lo, "")->capture_default_str();
  ag_cmd->add_option("--k-max", ag_args.k_hi, "")->capture_default_str();
  ag_cmd->add_option("--out", ag_args.out, "CSV output path (C,k,cosine)")->required();

  DescentArgs de_args;
  auto* de_cmd = an_cmd->add_subcommand(
      "descent", "Monte Carlo check that the faulty update is a descent direction");
  de_cmd->add_option("--trials", de_args.trials, "")->capture_default_str();
  de_cmd->add_option("--c-max", de_args.c_max, "")->capture_default_str();
  de_cmd->add_option("--k-max", de_args.k_max, "")->capture_default_str();
  de_cmd->add_option("--dim", de_args.dim, "")->capture_default_str();
  de_cmd->add_option("--seed", de_args.seed, "")->capture_default_str();

  NormsArgs no_args;
  no_args.base.dim = 100;
  auto* no_cmd = an_cmd->add_subcommand(
      "norms", "mean embedding norms per (mode, window) after training");
  no_cmd->add_option("--corpus", no_args.corpus, "")->required()->check(CLI::ExistingFile);
  no_cmd->add_option("--out", no_args.out, "CSV output path (mode,c_max,source_norm,target_norm)")
      ->required();
  no_cmd->add_option("--c-max-list", no_args.c_max_list, "comma list of window widths")
      ->capture_default_str();
  no_cmd->add_option("--modes", no_args.modes, "comma list of training modes")
      ->capture_default_str();
  no_cmd->add_option("--epochs", no_args.base.epochs, "")->capture_default_str();
  no_cmd->add_option("--dim", no_args.base.dim, "")->capture_default_str();
  no_cmd->add_option("--lr", no_args.lr, "shared learning rate across modes")
      ->capture_default_str();
  no_cmd->add_option("--negatives", no_args.base.negatives, "")->capture_default_str();
  no_cmd->add_option("--min-count", no_args.base.min_count, "")->capture_default_str();
  no_cmd->add_option("--subsample", no_args.base.subsample_threshold, "")->capture_default_str();
  no_cmd->add_option("--threads", no_args.base.threads, "")->capture_default_str();
  no_cmd->add_option("--seed", no_args.base.seed, "")->capture_default_str();

  LossCurveArgs lc_args;
  auto* lc_cmd = an_cmd->add_subcommand("loss-curve", "train and write the loss CSV");
  lc_cmd->add_option("--corpus", lc_args.corpus, "")->required()->check(CLI::ExistingFile);
  lc_cmd->add_option("--out", lc_args.out, "CSV output path (tokens,loss)")->required();
  lc_cmd->add_option("--mode", lc_args.mode, "")->capture_default_str();
  lc_cmd->add_flag("--faulty", lc_args.faulty, "");
  lc_cmd->add_option("--dim", lc_args.cfg.dim, "")->capture_default_str();
  lc_cmd->add_option("--window", lc_args.cfg.c_max, "")->capture_default_str();
  lc_cmd->add_option("--negatives", lc_args.cfg.negatives, "")->capture_default_str();
  lc_cmd->add_option("--epochs", lc_args.cfg.epochs, "")->capture_default_str();
  lc_cmd->add_option("--lr", lc_args.lr, "")->capture_default_str();
  lc_cmd->add_option("--min-count", lc_args.cfg.min_count, "")->capture_default_str();
  lc_cmd->add_option("--subsample", lc_args.cfg.subsample_threshold, "")->capture_default_str();
  lc_cmd->add_option("--threads", lc_args.cfg.threads, "")->capture_default_str();
  lc_cmd->add_option("--seed", lc_args.cfg.seed, "")->capture_default_str();
  lc_cmd->add_option("--loss-interval", lc_args.cfg.loss_log_interval, "")
      ->capture_default_str();

  EvalArgs ev_args;
  auto* ev_cmd = app.add_subcommand("eval", "word similarity and analogy evaluation");
  ev_cmd->add_option("--vectors", ev_args.vectors, "embedding file")
      ->required()->check(CLI::ExistingFile);
  ev_cmd->add_option("--format", ev_args.format, "text | binary")->capture_default_str();
  ev_cmd->add_flag("--lossy-utf8", ev_args.lossy_utf8, "replace invalid word bytes with U+FFFD");
  ev_cmd->add_option("--similarity", ev_args.similarity,
                     "similarity dataset as name=path (repeatable)");
  ev_cmd->add_option("--analogy", ev_args.analogy, "analogy dataset as name=path (repeatable)");
  ev_cmd->add_option("--split-seed", ev_args.split_seed, "dev/test split seed")
      ->capture_default_str();
  ev_cmd->add_flag("--no-lowercase", ev_args.no_lowercase, "match dataset words case-sensitively");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (train_cmd->parsed()) return cmd_train(train_args);
    if (gc_cmd->parsed()) return cmd_gradcheck(gc_args);
    if (an_cmd->parsed()) {
      if (ag_cmd->parsed()) return cmd_angle_grid(ag_args);
      if (de_cmd->parsed()) return cmd_descent(de_args);
      if (no_cmd->parsed()) return cmd_norms(no_args);
      if (lc_cmd->parsed()) return cmd_loss_curve(lc_args);
    }
    if (ev_cmd->parsed()) return cmd_eval(ev_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("wordgrad");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wordgrad::cli
