#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wordgrad {

// Unigram noise distribution: P(w) proportional to count(w)^alpha.
// table_size is an upper bound; the table is shrunk for small vocabularies.
struct NoiseConfig {
  double alpha = 0.75;
  int64_t table_size = 100'000'000;
};

struct TransparentStringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Immutable after construction; safe to share across threads.
class Vocabulary {
 public:
  class Builder {
   public:
    void add_token(std::string_view token);
    void add_sentence(std::string_view line);
    int64_t tokens_seen() const { return tokens_seen_; }
    // Keeps words with count >= min_count; ids are dense, ordered by
    // descending count with ties broken by first occurrence.
    // Throws std::runtime_error if no word survives.
    Vocabulary build(int64_t min_count, const NoiseConfig& noise = {}) const;

   private:
    struct Entry {
      int64_t count = 0;
      int64_t first_seen = 0;
    };
    std::unordered_map<std::string, Entry, TransparentStringHash, std::equal_to<>> counts_;
    int64_t tokens_seen_ = 0;
  };

  static Vocabulary from_file(const std::string& path, int64_t min_count,
                              const NoiseConfig& noise = {});

  int32_t size() const { return static_cast<int32_t>(words_.size()); }
  int64_t total_tokens() const { return total_tokens_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::string& word(int32_t id) const { return words_[id]; }
  int64_t count(int32_t id) const { return counts_[id]; }
  double frequency(int32_t id) const {
    return static_cast<double>(counts_[id]) / static_cast<double>(total_tokens_);
  }
  // -1 when the word is not in the vocabulary.
  int32_t id_of(std::string_view w) const;

  int32_t sample_negative(std::mt19937_64& rng) const;

  // word2vec.c-style keep probability min(1, sqrt(t/f) + t/f);
  // words at or below the threshold frequency are always kept.
  static double keep_probability(double frequency, double threshold);
  bool subsample_keep(int32_t id, double threshold, std::mt19937_64& rng) const;

  // Text dump: "word<TAB>count" per line, descending count.
  void save(std::ostream& os) const;
  void save(const std::string& path) const;
  static Vocabulary load(std::istream& is, const NoiseConfig& noise = {});
  static Vocabulary load(const std::string& path, const NoiseConfig& noise = {});

  int64_t noise_table_size() const { return static_cast<int64_t>(noise_table_.size()); }

 private:
  void finalize(const NoiseConfig& noise);

  std::vector<std::string> words_;
  std::vector<int64_t> counts_;
  std::unordered_map<std::string, int32_t, TransparentStringHash, std::equal_to<>> word_to_id_;
  std::vector<int32_t> noise_table_;
  int64_t total_tokens_ = 0;
};

}  // namespace wordgrad
