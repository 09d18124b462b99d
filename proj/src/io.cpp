#include "wordgrad/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace wordgrad::io {

Format parse_format(std::string_view name) {
  if (name == "text" || name == "txt") return Format::kText;
  if (name == "binary" || name == "bin") return Format::kBinary;
  throw std::invalid_argument("unknown embedding format: " + std::string(name));
}

const char* to_string(Format f) { return f == Format::kText ? "text" : "binary"; }

std::string format_float(float v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

bool has_whitespace(std::string_view w) {
  for (char c : w) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

void store_f32_le(float v, unsigned char* p) {
  uint32_t u;
  std::memcpy(&u, &v, 4);
  p[0] = static_cast<unsigned char>(u);
  p[1] = static_cast<unsigned char>(u >> 8);
  p[2] = static_cast<unsigned char>(u >> 16);
  p[3] = static_cast<unsigned char>(u >> 24);
}

float load_f32_le(const unsigned char* p) {
  const uint32_t u = static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
                     (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
  float v;
  std::memcpy(&v, &u, 4);
  return v;
}

[[noreturn]] void row_error(int64_t row, const std::string& what) {
  throw std::runtime_error("embedding row " + std::to_string(row) + ": " + what);
}

std::string check_word_encoding(std::string&& w, bool lossy_utf8, int64_t row) {
  if (is_valid_utf8(w)) return std::move(w);
  if (lossy_utf8) return replace_invalid_utf8(w);
  row_error(row, "word is not valid UTF-8 (pass the lossy flag to replace bad bytes)");
}

struct Header {
  int64_t vocab = 0;
  int dim = 0;
};

Header parse_header(const std::string& line) {
  Header h;
  const char* begin = line.data();
  const char* end = begin + line.size();
  auto r1 = std::from_chars(begin, end, h.vocab);
  if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ' ') {
    throw std::runtime_error("malformed embedding header: '" + line + "'");
  }
  auto r2 = std::from_chars(r1.ptr + 1, end, h.dim);
  if (r2.ec != std::errc{}) {
    throw std::runtime_error("malformed embedding header: '" + line + "'");
  }
  for (const char* p = r2.ptr; p != end; ++p) {
    if (*p != ' ' && *p != '\r') {
      throw std::runtime_error("malformed embedding header: '" + line + "'");
    }
  }
  if (h.vocab < 1 || h.dim < 1) {
    throw std::runtime_error("malformed embedding header: '" + line + "'");
  }
  return h;
}

}  // namespace

bool is_valid_utf8(std::string_view s) {
  size_t i = 0;
  const size_t n = s.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    size_t len;
    uint32_t cp;
    if (b0 < 0x80) {
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      return false;
    }
    if (i + len > n) return false;
    for (size_t j = 1; j < len; ++j) {
      const auto b = static_cast<unsigned char>(s[i + j]);
      if ((b & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b & 0x3F);
    }
    if (len == 2 && cp < 0x80) return false;
    if (len == 3 && cp < 0x800) return false;
    if (len == 4 && cp < 0x10000) return false;
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += len;
  }
  return true;
}

std::string replace_invalid_utf8(std::string_view s) {
  static constexpr const char* kReplacement = "\xEF\xBF\xBD";  // U+FFFD
  std::string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    size_t len = 1;
    const auto b0 = static_cast<unsigned char>(s[i]);
    if ((b0 & 0xE0) == 0xC0) len = 2;
    else if ((b0 & 0xF0) == 0xE0) len = 3;
    else if ((b0 & 0xF8) == 0xF0) len = 4;
    len = std::min(len, s.size() - i);
    if (is_valid_utf8(s.substr(i, len))) {
      out.append(s.substr(i, len));
      i += len;
    } else {
      out.append(kReplacement);
      ++i;
    }
  }
  return out;
}

void save_embeddings(const std::string& path, Format format,
                     std::span<const std::string> words,
                     std::span<const float> matrix, int dim) {
  const auto vocab = static_cast<int64_t>(words.size());
  if (matrix.size() != static_cast<size_t>(vocab) * dim) {
    throw std::invalid_argument("save_embeddings: matrix shape does not match words x dim");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embedding file: " + path);

  out << vocab << ' ' << dim << '\n';
  std::vector<unsigned char> row_bytes(static_cast<size_t>(dim) * 4);
  for (int64_t w = 0; w < vocab; ++w) {
    if (words[w].empty() || has_whitespace(words[w])) {
      throw std::invalid_argument("save_embeddings: word " + std::to_string(w) +
                                  " is empty or contains whitespace");
    }
    const float* row = matrix.data() + static_cast<size_t>(w) * dim;
    if (format == Format::kText) {
      out << words[w];
      for (int i = 0; i < dim; ++i) out << ' ' << format_float(row[i]);
      out << '\n';
    } else {
      out << words[w] << ' ';
      for (int i = 0; i < dim; ++i) store_f32_le(row[i], row_bytes.data() + 4 * i);
      out.write(reinterpret_cast<const char*>(row_bytes.data()),
                static_cast<std::streamsize>(row_bytes.size()));
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

template <typename T>
void save_embeddings(const std::string& path, Format format, const Vocabulary& vocab,
                     const Embeddings<T>& model, bool target_side) {
  const auto& mat = target_side ? model.target : model.source;
  std::vector<float> as_float(mat.size());
  for (size_t i = 0; i < mat.size(); ++i) as_float[i] = static_cast<float>(mat[i]);
  save_embeddings(path, format, vocab.words(), as_float, model.dim);
}

template void save_embeddings<float>(const std::string&, Format, const Vocabulary&,
                                     const Embeddings<float>&, bool);
template void save_embeddings<double>(const std::string&, Format, const Vocabulary&,
                                      const Embeddings<double>&, bool);

namespace {

EmbeddingMatrix load_text(std::ifstream& in, bool lossy_utf8) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty embedding file");
  const Header h = parse_header(line);

  EmbeddingMatrix m;
  m.dim = h.dim;
  m.words.reserve(h.vocab);
  m.vectors.resize(static_cast<size_t>(h.vocab) * h.dim);
  for (int64_t w = 0; w < h.vocab; ++w) {
    if (!std::getline(in, line)) row_error(w + 1, "file truncated");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const char* p = line.data();
    const char* end = p + line.size();
    const char* word_end = p;
    while (word_end != end && *word_end != ' ' && *word_end != '\t') ++word_end;
    if (word_end == p) row_error(w + 1, "missing word");
    m.words.push_back(
        check_word_encoding(std::string(p, word_end), lossy_utf8, w + 1));
    p = word_end;
    float* row = m.vectors.data() + static_cast<size_t>(w) * h.dim;
    for (int i = 0; i < h.dim; ++i) {
      while (p != end && (*p == ' ' || *p == '\t')) ++p;
      if (p == end) {
        row_error(w + 1, "expected " + std::to_string(h.dim) + " values, got " +
                             std::to_string(i));
      }
      auto res = std::from_chars(p, end, row[i]);
      if (res.ec != std::errc{}) row_error(w + 1, "bad float value");
      p = res.ptr;
    }
    while (p != end && (*p == ' ' || *p == '\t')) ++p;
    if (p != end) row_error(w + 1, "trailing data beyond " + std::to_string(h.dim) + " values");
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") {
      throw std::runtime_error("embedding file has more rows than the declared " +
                               std::to_string(h.vocab));
    }
  }
  return m;
}

EmbeddingMatrix load_binary(std::ifstream& in, bool lossy_utf8) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty embedding file");
  const Header h = parse_header(line);

  EmbeddingMatrix m;
  m.dim = h.dim;
  m.words.reserve(h.vocab);
  m.vectors.resize(static_cast<size_t>(h.vocab) * h.dim);
  std::vector<unsigned char> row_bytes(static_cast<size_t>(h.dim) * 4);
  for (int64_t w = 0; w < h.vocab; ++w) {
    std::string word;
    int ch;
    while ((ch = in.get()) != std::ifstream::traits_type::eof() && ch != ' ') {
      if (ch == '\n') {
        if (word.empty()) continue;  // stray newline between rows
        row_error(w + 1, "unexpected newline inside word");
      }
      word.push_back(static_cast<char>(ch));
      if (word.size() > 4096) row_error(w + 1, "word longer than 4096 bytes");
    }
    if (ch == std::ifstream::traits_type::eof()) row_error(w + 1, "file truncated");
    if (word.empty()) row_error(w + 1, "missing word");
    m.words.push_back(check_word_encoding(std::move(word), lossy_utf8, w + 1));
    in.read(reinterpret_cast<char*>(row_bytes.data()),
            static_cast<std::streamsize>(row_bytes.size()));
    if (in.gcount() != static_cast<std::streamsize>(row_bytes.size())) {
      row_error(w + 1, "file truncated");
    }
    float* row = m.vectors.data() + static_cast<size_t>(w) * h.dim;
    for (int i = 0; i < h.dim; ++i) row[i] = load_f32_le(row_bytes.data() + 4 * i);
  }
  // trailing newline after the last row is optional
  while ((in.peek()) != std::ifstream::traits_type::eof()) {
    const int ch = in.get();
    if (ch != '\n' && ch != '\r') {
      throw std::runtime_error("embedding file has data beyond the declared " +
                               std::to_string(h.vocab) + " rows");
    }
  }
  return m;
}

}  // namespace

EmbeddingMatrix load_embeddings(const std::string& path, Format format, bool lossy_utf8) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  return format == Format::kText ? load_text(in, lossy_utf8) : load_binary(in, lossy_utf8);
}

void write_loss_csv(const std::string& path, const LossLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write loss csv: " + path);
  out << "tokens,loss\n";
  for (const auto& e : log) out << e.tokens_processed << ',' << e.mean_loss << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wordgrad::io
