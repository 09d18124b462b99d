#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wordgrad/model.hpp"
#include "wordgrad/vocab.hpp"

namespace wordgrad {

enum class Mode { kSkipGram, kCbowCorrect, kCbowFaulty };

const char* to_string(Mode mode);
// Accepts "sg", "cbow", "cbow_correct", "cbow_faulty"; the faulty flag is a
// CBOW-only modifier. Throws std::invalid_argument on unknown names or
// contradictory combinations (sg + faulty, cbow_correct + faulty).
Mode parse_mode(std::string_view name, bool faulty_flag = false);
inline bool is_cbow(Mode m) { return m != Mode::kSkipGram; }
inline bool is_faulty(Mode m) { return m == Mode::kCbowFaulty; }
// 0.075 for corrected CBOW, 0.025 for skip-gram and faulty CBOW.
double default_learning_rate(Mode mode);

struct TrainConfig {
  Mode mode = Mode::kCbowCorrect;
  int dim = 300;
  int c_max = 5;       // max context half-width
  int negatives = 5;   // k
  int epochs = 5;
  double lr0 = 0.0;    // <= 0 resolves to default_learning_rate(mode)
  double lr_floor_fraction = 1e-4;
  int64_t min_count = 10;
  double subsample_threshold = 1e-3;  // <= 0 disables
  int threads = 1;
  uint64_t seed = 1;
  int64_t loss_log_interval = 100'000;  // tokens
  NoiseConfig noise;
  int64_t sentence_buffer = 100'000;  // sentences read per block
  bool use_sigmoid_table = false;
  bool verbose = false;

  TrainConfig resolved() const;
  void validate() const;  // throws std::invalid_argument
};

// One entry per loss_log_interval in-vocab tokens: cumulative token count
// and the mean per-center-word loss over the interval (for skip-gram the
// per-center loss sums its context-pair losses).
struct LossLogEntry {
  int64_t tokens_processed = 0;
  double mean_loss = 0.0;
};
using LossLog = std::vector<LossLogEntry>;

struct TimingReport {
  double wall_seconds = 0.0;
  double tokens_per_second = 0.0;
  std::vector<double> epoch_seconds;
};

template <typename T>
struct TrainResult {
  std::shared_ptr<const Vocabulary> vocab;
  Embeddings<T> model;
  LossLog loss_log;
  TimingReport timing;
  TrainConfig config;  // resolved
};

// Runs epochs x corpus passes of negative-sampling SGD. Builds the
// vocabulary from the corpus unless one is supplied.
//
// threads <= 1 runs the serial reference path: sentences in file order, one
// RNG stream, bit-reproducible for a fixed seed. threads > 1 runs the
// hogwild OpenMP path: sentence blocks sharded across workers that update
// the shared matrices without locks, accepting benign races.
template <typename T = float>
TrainResult<T> train(const std::string& corpus_path, const TrainConfig& config,
                     std::shared_ptr<const Vocabulary> vocab = nullptr);

// Linear decay from lr0 down to lr0 * floor_fraction over total_tokens,
// spanning all epochs jointly.
class LinearDecay {
 public:
  LinearDecay(double lr0, double floor_fraction, int64_t total_tokens)
      : lr0_(lr0),
        floor_(lr0 * floor_fraction),
        inv_total_(1.0 / static_cast<double>(total_tokens > 0 ? total_tokens : 1)) {}

  double at(int64_t tokens_processed) const {
    const double lr = lr0_ * (1.0 - static_cast<double>(tokens_processed) * inv_total_);
    return lr > floor_ ? lr : floor_;
  }

 private:
  double lr0_;
  double floor_;
  double inv_total_;
};

uint64_t derive_seed(uint64_t seed, uint64_t salt);

}  // namespace wordgrad
