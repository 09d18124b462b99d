#include "wordgrad/vocab.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "wordgrad/corpus.hpp"

namespace wordgrad {

void Vocabulary::Builder::add_token(std::string_view token) {
  auto it = counts_.find(token);
  if (it == counts_.end()) {
    counts_.emplace(std::string(token), Entry{1, tokens_seen_});
  } else {
    ++it->second.count;
  }
  ++tokens_seen_;
}

void Vocabulary::Builder::add_sentence(std::string_view line) {
  for (auto tok : split_whitespace(line)) add_token(tok);
}

Vocabulary Vocabulary::Builder::build(int64_t min_count, const NoiseConfig& noise) const {
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");

  struct Kept {
    const std::string* word;
    int64_t count;
    int64_t first_seen;
  };
  std::vector<Kept> kept;
  kept.reserve(counts_.size());
  for (const auto& [word, entry] : counts_) {
    if (entry.count >= min_count) kept.push_back({&word, entry.count, entry.first_seen});
  }
  if (kept.empty()) {
    throw std::runtime_error("build_vocab: no word meets min_count=" + std::to_string(min_count));
  }
  std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.first_seen < b.first_seen;
  });

  Vocabulary v;
  v.words_.reserve(kept.size());
  v.counts_.reserve(kept.size());
  for (const auto& k : kept) {
    v.words_.push_back(*k.word);
    v.counts_.push_back(k.count);
  }
  v.finalize(noise);
  return v;
}

Vocabulary Vocabulary::from_file(const std::string& path, int64_t min_count,
                                 const NoiseConfig& noise) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  Builder b;
  std::string line;
  while (std::getline(in, line)) b.add_sentence(line);
  return b.build(min_count, noise);
}

void Vocabulary::finalize(const NoiseConfig& noise) {
  total_tokens_ = std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
  word_to_id_.reserve(words_.size());
  for (int32_t i = 0; i < size(); ++i) word_to_id_.emplace(words_[i], i);

  // counts^alpha sampler as a dense table; resolution scales with V so small
  // vocabularies do not pay the full default size.
  const int32_t v = size();
  const int64_t table_size =
      std::min<int64_t>(noise.table_size, std::max<int64_t>(4096, int64_t{10'000} * v));
  if (table_size < 1) throw std::invalid_argument("noise table_size must be >= 1");
  noise_table_.resize(table_size);
  double total_pow = 0.0;
  for (int64_t c : counts_) total_pow += std::pow(static_cast<double>(c), noise.alpha);
  int32_t w = 0;
  double cum = std::pow(static_cast<double>(counts_[0]), noise.alpha) / total_pow;
  for (int64_t i = 0; i < table_size; ++i) {
    noise_table_[i] = w;
    if (static_cast<double>(i + 1) / static_cast<double>(table_size) > cum && w + 1 < v) {
      ++w;
      cum += std::pow(static_cast<double>(counts_[w]), noise.alpha) / total_pow;
    }
  }
}

int32_t Vocabulary::id_of(std::string_view w) const {
  auto it = word_to_id_.find(w);
  return it == word_to_id_.end() ? -1 : it->second;
}

int32_t Vocabulary::sample_negative(std::mt19937_64& rng) const {
  return noise_table_[rng() % noise_table_.size()];
}

double Vocabulary::keep_probability(double frequency, double threshold) {
  if (threshold <= 0) return 1.0;
  const double ratio = threshold / frequency;
  return std::min(1.0, std::sqrt(ratio) + ratio);
}

bool Vocabulary::subsample_keep(int32_t id, double threshold, std::mt19937_64& rng) const {
  if (threshold <= 0) return true;
  const double p = keep_probability(frequency(id), threshold);
  if (p >= 1.0) return true;
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return u < p;
}

void Vocabulary::save(std::ostream& os) const {
  for (int32_t i = 0; i < size(); ++i) os << words_[i] << '\t' << counts_[i] << '\n';
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary file: " + path);
  save(out);
}

Vocabulary Vocabulary::load(std::istream& is, const NoiseConfig& noise) {
  Vocabulary v;
  std::string line;
  int64_t row = 0;
  while (std::getline(is, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw std::runtime_error("vocabulary row " + std::to_string(row) + ": expected word<TAB>count");
    }
    int64_t count = 0;
    try {
      count = std::stoll(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("vocabulary row " + std::to_string(row) + ": bad count");
    }
    if (count < 1) {
      throw std::runtime_error("vocabulary row " + std::to_string(row) + ": count must be >= 1");
    }
    v.words_.push_back(line.substr(0, tab));
    v.counts_.push_back(count);
  }
  if (v.words_.empty()) throw std::runtime_error("vocabulary file is empty");
  v.finalize(noise);
  return v;
}

Vocabulary Vocabulary::load(const std::string& path, const NoiseConfig& noise) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary file: " + path);
  return load(in, noise);
}

}  // namespace wordgrad
