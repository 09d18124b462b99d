#include "wordgrad/trainer.hpp"

#include <omp.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <stdexcept>

#include "wordgrad/corpus.hpp"
#include "wordgrad/steps.hpp"

namespace wordgrad {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::kSkipGram: return "sg";
    case Mode::kCbowCorrect: return "cbow_correct";
    case Mode::kCbowFaulty: return "cbow_faulty";
  }
  return "?";
}

Mode parse_mode(std::string_view name, bool faulty_flag) {
  if (name == "sg" || name == "skipgram" || name == "skip-gram") {
    if (faulty_flag) throw std::invalid_argument("--faulty applies to CBOW only");
    return Mode::kSkipGram;
  }
  if (name == "cbow") return faulty_flag ? Mode::kCbowFaulty : Mode::kCbowCorrect;
  if (name == "cbow_correct" || name == "correct") {
    if (faulty_flag) throw std::invalid_argument("--faulty contradicts mode cbow_correct");
    return Mode::kCbowCorrect;
  }
  if (name == "cbow_faulty" || name == "faulty") return Mode::kCbowFaulty;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

double default_learning_rate(Mode mode) {
  return mode == Mode::kCbowCorrect ? 0.075 : 0.025;
}

TrainConfig TrainConfig::resolved() const {
  TrainConfig c = *this;
  if (c.lr0 <= 0) c.lr0 = default_learning_rate(c.mode);
  return c;
}

void TrainConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (c_max < 1) throw std::invalid_argument("window (c_max) must be >= 1");
  if (negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (lr0 <= 0) throw std::invalid_argument("learning rate must be > 0");
  if (lr_floor_fraction <= 0 || lr_floor_fraction > 1) {
    throw std::invalid_argument("lr_floor_fraction must be in (0, 1]");
  }
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (loss_log_interval < 1) throw std::invalid_argument("loss_log_interval must be >= 1");
  if (sentence_buffer < 1) throw std::invalid_argument("sentence_buffer must be >= 1");
}

uint64_t derive_seed(uint64_t seed, uint64_t salt) {
  // splitmix64 over the combined value
  uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

struct SentenceStats {
  int64_t tokens = 0;
  double loss_sum = 0.0;
  int64_t instances = 0;
};

// Accumulates per-token loss and emits one LossLog entry per interval of
// in-vocab tokens. Thread-safe; the token counter doubles as the decay
// clock.
class LossLogger {
 public:
  explicit LossLogger(int64_t interval) : interval_(interval), next_boundary_(interval) {}

  void record(const SentenceStats& s) {
    std::lock_guard<std::mutex> lock(mu_);
    tokens_ += s.tokens;
    loss_sum_ += s.loss_sum;
    instances_ += s.instances;
    tokens_atomic_.store(tokens_, std::memory_order_relaxed);
    if (tokens_ >= next_boundary_) {
      if (instances_ > 0) {
        log_.push_back({tokens_, loss_sum_ / static_cast<double>(instances_)});
        loss_sum_ = 0.0;
        instances_ = 0;
      }
      next_boundary_ = tokens_ + interval_;
    }
  }

  int64_t tokens() const { return tokens_atomic_.load(std::memory_order_relaxed); }

  LossLog finish() {
    std::lock_guard<std::mutex> lock(mu_);
    if (instances_ > 0) {
      log_.push_back({tokens_, loss_sum_ / static_cast<double>(instances_)});
      loss_sum_ = 0.0;
      instances_ = 0;
    }
    return std::move(log_);
  }

 private:
  std::mutex mu_;
  int64_t interval_;
  int64_t next_boundary_;
  int64_t tokens_ = 0;
  double loss_sum_ = 0.0;
  int64_t instances_ = 0;
  std::atomic<int64_t> tokens_atomic_{0};
  LossLog log_;
};

struct Scratch {
  std::vector<int32_t> ids;
  TrainingInstance inst;
};

template <typename T>
void process_sentence(std::string_view line, const Vocabulary& vocab,
                      const TrainConfig& cfg, const SigmoidTable* table,
                      Embeddings<T>& model, std::mt19937_64& rng, double lr,
                      Scratch& scratch, SentenceStats& stats) {
  encode_sentence(line, vocab, cfg.subsample_threshold, rng, scratch.ids, &stats.tokens);
  if (scratch.ids.empty()) return;

  if (cfg.mode == Mode::kSkipGram) {
    auto& ctx = scratch.inst.context;
    auto& negs = scratch.inst.negatives;
    for (size_t p = 0; p < scratch.ids.size(); ++p) {
      sample_window(scratch.ids, p, cfg.c_max, rng, ctx);
      if (ctx.empty()) continue;
      double pos_loss = 0.0;
      for (int32_t cw : ctx) {
        draw_negatives(vocab, rng, cfg.negatives, cw, negs);
        pos_loss += sg_step(scratch.ids[p], cw, negs, model, lr, table);
      }
      stats.loss_sum += pos_loss;
      ++stats.instances;
    }
  } else {
    const bool faulty = cfg.mode == Mode::kCbowFaulty;
    InstanceStream stream(scratch.ids, cfg.c_max, cfg.negatives, vocab, rng);
    while (stream.next(scratch.inst)) {
      stats.loss_sum += cbow_step(scratch.inst, model, lr, faulty, table);
      ++stats.instances;
    }
  }
}

bool read_block(std::istream& in, int64_t max_lines, std::vector<std::string>& block) {
  block.clear();
  std::string line;
  while (static_cast<int64_t>(block.size()) < max_lines && std::getline(in, line)) {
    block.push_back(std::move(line));
  }
  return !block.empty();
}

void report_progress(const TrainConfig& cfg, const LossLogger& logger,
                     const LinearDecay& decay, int64_t scheduled_tokens,
                     double elapsed_s) {
  if (!cfg.verbose) return;
  const int64_t done = logger.tokens();
  std::fprintf(stderr, "\rprogress %5.1f%%  lr %.6f  tokens/s %.0f    ",
               100.0 * static_cast<double>(done) / static_cast<double>(scheduled_tokens),
               decay.at(done),
               elapsed_s > 0 ? static_cast<double>(done) / elapsed_s : 0.0);
  std::fflush(stderr);
}

// Serial reference path: sentences in file order, one RNG stream. Kept
// separate from the OpenMP path so tests have a bit-reproducible baseline.
template <typename T>
void run_epoch_serial(const std::string& corpus_path, const Vocabulary& vocab,
                      const TrainConfig& cfg, const SigmoidTable* table,
                      Embeddings<T>& model, std::mt19937_64& rng,
                      const LinearDecay& decay, LossLogger& logger,
                      int64_t scheduled_tokens,
                      std::chrono::steady_clock::time_point t0) {
  std::ifstream in(corpus_path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + corpus_path);
  Scratch scratch;
  std::string line;
  int64_t n = 0;
  while (std::getline(in, line)) {
    const double lr = decay.at(logger.tokens());
    SentenceStats stats;
    process_sentence(line, vocab, cfg, table, model, rng, lr, scratch, stats);
    logger.record(stats);
    if ((++n & 0x3FFF) == 0) {
      report_progress(cfg, logger, decay, scheduled_tokens,
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
  }
}

// Hogwild path: each block of sentences is sharded statically across the
// OpenMP workers, which update the shared matrices without locks.
template <typename T>
void run_epoch_parallel(const std::string& corpus_path, const Vocabulary& vocab,
                        const TrainConfig& cfg, const SigmoidTable* table,
                        Embeddings<T>& model, std::vector<std::mt19937_64>& rngs,
                        const LinearDecay& decay, LossLogger& logger,
                        int64_t scheduled_tokens,
                        std::chrono::steady_clock::time_point t0) {
  std::ifstream in(corpus_path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + corpus_path);
  std::vector<std::string> block;
  block.reserve(cfg.sentence_buffer);
  while (read_block(in, cfg.sentence_buffer, block)) {
    const auto n = static_cast<int64_t>(block.size());
#pragma omp parallel num_threads(cfg.threads)
    {
      auto& rng = rngs[omp_get_thread_num()];
      Scratch scratch;
#pragma omp for schedule(static)
      for (int64_t i = 0; i < n; ++i) {
        const double lr = decay.at(logger.tokens());
        SentenceStats stats;
        process_sentence(block[i], vocab, cfg, table, model, rng, lr, scratch, stats);
        logger.record(stats);
      }
    }
    report_progress(cfg, logger, decay, scheduled_tokens,
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
}

}  // namespace

template <typename T>
TrainResult<T> train(const std::string& corpus_path, const TrainConfig& config,
                     std::shared_ptr<const Vocabulary> vocab) {
  const TrainConfig cfg = config.resolved();
  cfg.validate();
  if (!vocab) {
    vocab = std::make_shared<Vocabulary>(
        Vocabulary::from_file(corpus_path, cfg.min_count, cfg.noise));
  }

  const int64_t scheduled_tokens =
      std::max<int64_t>(1, static_cast<int64_t>(cfg.epochs) * vocab->total_tokens());
  const LinearDecay decay(cfg.lr0, cfg.lr_floor_fraction, scheduled_tokens);

  TrainResult<T> result;
  result.config = cfg;
  result.vocab = vocab;
  result.model = init_model<T>(vocab->size(), cfg.dim, cfg.seed);

  std::optional<SigmoidTable> table;
  if (cfg.use_sigmoid_table) table.emplace();
  const SigmoidTable* table_ptr = table ? &*table : nullptr;

  LossLogger logger(cfg.loss_log_interval);
  const auto t0 = std::chrono::steady_clock::now();

  if (cfg.threads <= 1) {
    std::mt19937_64 rng(cfg.seed);
    for (int e = 0; e < cfg.epochs; ++e) {
      const auto e0 = std::chrono::steady_clock::now();
      run_epoch_serial(corpus_path, *vocab, cfg, table_ptr, result.model, rng, decay,
                       logger, scheduled_tokens, t0);
      result.timing.epoch_seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - e0).count());
    }
  } else {
    std::vector<std::mt19937_64> rngs;
    rngs.reserve(cfg.threads);
    for (int t = 0; t < cfg.threads; ++t) rngs.emplace_back(derive_seed(cfg.seed, t));
    for (int e = 0; e < cfg.epochs; ++e) {
      const auto e0 = std::chrono::steady_clock::now();
      run_epoch_parallel(corpus_path, *vocab, cfg, table_ptr, result.model, rngs, decay,
                         logger, scheduled_tokens, t0);
      result.timing.epoch_seconds.push_back(
          std::chrono::duration<double>(std::chrono::steady_clock::now() - e0).count());
    }
  }
  if (cfg.verbose) std::fprintf(stderr, "\n");

  result.timing.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int64_t processed = logger.tokens();
  result.timing.tokens_per_second =
      result.timing.wall_seconds > 0
          ? static_cast<double>(processed) / result.timing.wall_seconds
          : 0.0;
  result.loss_log = logger.finish();
  return result;
}

template TrainResult<float> train<float>(const std::string&, const TrainConfig&,
                                         std::shared_ptr<const Vocabulary>);
template TrainResult<double> train<double>(const std::string&, const TrainConfig&,
                                           std::shared_ptr<const Vocabulary>);

}  // namespace wordgrad
