#include "wordgrad/eval.hpp"

#include <omp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include "wordgrad/corpus.hpp"

namespace wordgrad::eval {

namespace {

std::string lowered(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_score(std::string_view s, const std::string& path, int64_t row) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error(path + " row " + std::to_string(row) + ": bad score '" +
                             std::string(s) + "'");
  }
  return v;
}

}  // namespace

SimilarityDataset SimilarityDataset::load(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open similarity dataset: " + path);
  SimilarityDataset ds;
  std::string line;
  int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    // comma-separated variants (e.g. MEN csv exports)
    std::replace(line.begin(), line.end(), ',', ' ');
    const auto fields = split_whitespace(line);
    if (fields.empty() || fields[0].front() == '#') continue;
    if (fields.size() != 3) {
      throw std::runtime_error(path + " row " + std::to_string(row) +
                               ": expected 'word1 word2 score'");
    }
    SimilarityPair p;
    p.word1 = lowercase ? lowered(fields[0]) : std::string(fields[0]);
    p.word2 = lowercase ? lowered(fields[1]) : std::string(fields[1]);
    p.score = parse_score(fields[2], path, row);
    ds.pairs.push_back(std::move(p));
  }
  return ds;
}

AnalogyDataset AnalogyDataset::load(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open analogy dataset: " + path);
  AnalogyDataset ds;
  std::string line;
  int64_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_whitespace(line);
    if (fields.empty() || fields[0].front() == ':') continue;  // section header
    if (fields.size() != 4) {
      throw std::runtime_error(path + " row " + std::to_string(row) +
                               ": expected four words");
    }
    AnalogyQuad q;
    q.a = lowercase ? lowered(fields[0]) : std::string(fields[0]);
    q.b = lowercase ? lowered(fields[1]) : std::string(fields[1]);
    q.c = lowercase ? lowered(fields[2]) : std::string(fields[2]);
    q.d = lowercase ? lowered(fields[3]) : std::string(fields[3]);
    ds.quads.push_back(std::move(q));
  }
  return ds;
}

namespace {

// 1-based ranks with ties assigned the average rank of their run.
std::vector<double> average_ranks(std::span<const double> v) {
  const size_t n = v.size();
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("spearman: need at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw std::domain_error("spearman: correlation undefined for constant input");
  }
  return sxy / std::sqrt(sxx * syy);
}

Side parse_side(std::string_view name) {
  if (name == "source") return Side::kSource;
  if (name == "target") return Side::kTarget;
  if (name == "average") return Side::kAverage;
  throw std::invalid_argument("unknown embedding side: " + std::string(name));
}

EmbeddingSet EmbeddingSet::from_matrix(io::EmbeddingMatrix m) {
  EmbeddingSet e;
  e.words = std::move(m.words);
  e.dim = m.dim;
  e.vectors = std::move(m.vectors);
  e.index.reserve(e.words.size());
  for (size_t i = 0; i < e.words.size(); ++i) {
    e.index.emplace(e.words[i], static_cast<int32_t>(i));
  }
  return e;
}

template <typename T>
EmbeddingSet EmbeddingSet::from_model(const Vocabulary& vocab, const Embeddings<T>& model,
                                      Side side) {
  EmbeddingSet e;
  e.words = vocab.words();
  e.dim = model.dim;
  e.vectors.resize(model.source.size());
  for (size_t i = 0; i < model.source.size(); ++i) {
    switch (side) {
      case Side::kSource: e.vectors[i] = static_cast<float>(model.source[i]); break;
      case Side::kTarget: e.vectors[i] = static_cast<float>(model.target[i]); break;
      case Side::kAverage:
        e.vectors[i] = static_cast<float>(0.5 * (model.source[i] + model.target[i]));
        break;
    }
  }
  e.index.reserve(e.words.size());
  for (size_t i = 0; i < e.words.size(); ++i) {
    e.index.emplace(e.words[i], static_cast<int32_t>(i));
  }
  return e;
}

template EmbeddingSet EmbeddingSet::from_model<float>(const Vocabulary&,
                                                      const Embeddings<float>&, Side);
template EmbeddingSet EmbeddingSet::from_model<double>(const Vocabulary&,
                                                       const Embeddings<double>&, Side);

int32_t EmbeddingSet::id_of(std::string_view w) const {
  auto it = index.find(w);
  return it == index.end() ? -1 : it->second;
}

namespace {

double cosine(const float* a, const float* b, int d) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (int i = 0; i < d; ++i) {
    ab += static_cast<double>(a[i]) * b[i];
    aa += static_cast<double>(a[i]) * a[i];
    bb += static_cast<double>(b[i]) * b[i];
  }
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

}  // namespace

SimilarityResult similarity_eval(const EmbeddingSet& emb, const SimilarityDataset& ds) {
  SimilarityResult r;
  r.total = static_cast<int64_t>(ds.pairs.size());
  std::vector<double> cosines;
  std::vector<double> scores;
  for (const auto& p : ds.pairs) {
    const int32_t i = emb.id_of(p.word1);
    const int32_t j = emb.id_of(p.word2);
    if (i < 0 || j < 0) continue;
    cosines.push_back(cosine(emb.row(i), emb.row(j), emb.dim));
    scores.push_back(p.score);
  }
  r.used = static_cast<int64_t>(cosines.size());
  r.coverage = r.total > 0 ? static_cast<double>(r.used) / static_cast<double>(r.total) : 0.0;
  if (r.used < 2) {
    throw std::runtime_error("similarity_eval: fewer than two in-vocabulary pairs");
  }
  r.rho = spearman(cosines, scores);
  return r;
}

AnalogyResult analogy_eval(const EmbeddingSet& emb, const AnalogyDataset& ds) {
  AnalogyResult r;
  r.total = static_cast<int64_t>(ds.quads.size());
  const int d = emb.dim;
  const auto vocab = static_cast<int64_t>(emb.words.size());

  // Unit rows once; cos(v, q) is then just unit_v . q up to q's norm.
  std::vector<float> unit(emb.vectors.size());
  for (int64_t w = 0; w < vocab; ++w) {
    const float* row = emb.row(static_cast<int32_t>(w));
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += static_cast<double>(row[i]) * row[i];
    const double inv = s > 0.0 ? 1.0 / std::sqrt(s) : 0.0;
    for (int i = 0; i < d; ++i) {
      unit[static_cast<size_t>(w) * d + i] = static_cast<float>(row[i] * inv);
    }
  }

  int64_t correct = 0, used = 0, oov = 0, degenerate = 0;
  const auto n = static_cast<int64_t>(ds.quads.size());
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : correct, used, oov, degenerate)
  for (int64_t qi = 0; qi < n; ++qi) {
    const auto& q = ds.quads[qi];
    const int32_t a = emb.id_of(q.a);
    const int32_t b = emb.id_of(q.b);
    const int32_t c = emb.id_of(q.c);
    const int32_t expect = emb.id_of(q.d);
    if (a < 0 || b < 0 || c < 0 || expect < 0) {
      ++oov;
      continue;
    }
    if (expect == a || expect == b || expect == c) {
      ++degenerate;  // unanswerable under the exclusion rule
      continue;
    }
    std::vector<double> query(d);
    for (int i = 0; i < d; ++i) {
      query[i] = static_cast<double>(emb.row(b)[i]) - emb.row(a)[i] + emb.row(c)[i];
    }
    int32_t best = -1;
    double best_score = -2.0;
    double qnorm = 0.0;
    for (int i = 0; i < d; ++i) qnorm += query[i] * query[i];
    qnorm = qnorm > 0.0 ? 1.0 / std::sqrt(qnorm) : 0.0;
    for (int64_t w = 0; w < vocab; ++w) {
      if (w == a || w == b || w == c) continue;
      const float* uw = unit.data() + static_cast<size_t>(w) * d;
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += uw[i] * query[i];
      s *= qnorm;
      if (s > best_score) {
        best_score = s;
        best = static_cast<int32_t>(w);
      }
    }
    ++used;
    if (best == expect) ++correct;
  }
  r.correct = correct;
  r.used = used;
  r.oov = oov;
  r.degenerate = degenerate;
  if (r.used == 0) throw std::runtime_error("analogy_eval: no scorable quadruples");
  r.accuracy = static_cast<double>(r.correct) / static_cast<double>(r.used);
  r.coverage = r.total > 0 ? static_cast<double>(r.used) / static_cast<double>(r.total) : 0.0;
  return r;
}

namespace {

template <typename Item>
std::pair<std::vector<Item>, std::vector<Item>> split_items(const std::vector<Item>& items,
                                                            uint64_t seed) {
  if (items.empty()) throw std::invalid_argument("dev_test_split: empty dataset");
  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const size_t dev_n = (items.size() + 1) / 2;  // odd sizes favor dev
  std::pair<std::vector<Item>, std::vector<Item>> out;
  for (size_t i = 0; i < order.size(); ++i) {
    (i < dev_n ? out.first : out.second).push_back(items[order[i]]);
  }
  return out;
}

}  // namespace

template <>
std::pair<SimilarityDataset, SimilarityDataset> dev_test_split(const SimilarityDataset& ds,
                                                               uint64_t seed) {
  auto [dev, test] = split_items(ds.pairs, seed);
  return {SimilarityDataset{std::move(dev)}, SimilarityDataset{std::move(test)}};
}

template <>
std::pair<AnalogyDataset, AnalogyDataset> dev_test_split(const AnalogyDataset& ds,
                                                         uint64_t seed) {
  auto [dev, test] = split_items(ds.quads, seed);
  return {AnalogyDataset{std::move(dev)}, AnalogyDataset{std::move(test)}};
}

}  // namespace wordgrad::eval
