// Throughput benchmark: serial reference vs OpenMP hogwild workers, CBOW vs
// skip-gram, on a synthetic corpus.

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wordgrad/synth.hpp"
#include "wordgrad/trainer.hpp"

using namespace wordgrad;

int main(int argc, char** argv) {
  CLI::App app{"wordgrad throughput benchmark"};
  int64_t sentences = 20'000;
  int dim = 100;
  int epochs = 1;
  uint64_t seed = 1;
  std::string threads_list = "1,2";
  std::string corpus;
  app.add_option("--sentences", sentences, "synthetic corpus size")->capture_default_str();
  app.add_option("--dim", dim, "embedding dimensionality")->capture_default_str();
  app.add_option("--epochs", epochs, "epochs per run")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed")->capture_default_str();
  app.add_option("--threads", threads_list, "comma list of worker counts (1 = serial path)")
      ->capture_default_str();
  app.add_option("--corpus", corpus, "use this corpus instead of a synthetic one")
      ->check(CLI::ExistingFile);
  CLI11_PARSE(app, argc, argv);

  std::vector<int> thread_counts;
  {
    std::stringstream ss(threads_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) thread_counts.push_back(std::stoi(item));
    }
  }

  std::string corpus_path = corpus;
  if (corpus_path.empty()) {
    corpus_path =
        (std::filesystem::temp_directory_path() / "wordgrad_bench_corpus.txt").string();
    SynthConfig synth;
    synth.sentences = sentences;
    synth.seed = seed;
    write_synthetic_corpus(corpus_path, synth);
  }

  TrainConfig base;
  base.dim = dim;
  base.epochs = epochs;
  base.seed = seed;
  base.min_count = 5;
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::from_file(corpus_path, base.min_count, base.noise));
  std::printf("corpus %s: vocab %d, %lld tokens\n", corpus_path.c_str(), vocab->size(),
              static_cast<long long>(vocab->total_tokens()));
  std::printf("%-14s %-8s %12s %12s %9s\n", "mode", "threads", "seconds", "tokens/s",
              "speedup");

  double cbow_seconds = 0.0, sg_seconds = 0.0;
  for (Mode mode : {Mode::kCbowCorrect, Mode::kSkipGram}) {
    double serial_seconds = 0.0;
    for (int threads : thread_counts) {
      TrainConfig cfg = base;
      cfg.mode = mode;
      cfg.threads = threads;
      const auto result = train<float>(corpus_path, cfg, vocab);
      const double secs = result.timing.wall_seconds;
      if (threads == 1) serial_seconds = secs;
      if (threads == 1 && mode == Mode::kCbowCorrect) cbow_seconds = secs;
      if (threads == 1 && mode == Mode::kSkipGram) sg_seconds = secs;
      std::printf("%-14s %-8d %12.2f %12.0f %8.2fx\n", to_string(mode), threads, secs,
                  result.timing.tokens_per_second,
                  serial_seconds > 0 ? serial_seconds / secs : 0.0);
    }
  }
  if (cbow_seconds > 0 && sg_seconds > 0) {
    std::printf("single-thread sg/cbow wall-clock ratio: %.2f\n", sg_seconds / cbow_seconds);
  }
  return 0;
}
