#include "simorder/embeddings.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "simorder/error.hpp"

namespace simorder {

static_assert(std::endian::native == std::endian::little,
              "binary embedding I/O assumes a little-endian host");

std::optional<Format> parse_format(std::string_view name) {
  if (name == "vec") return Format::TextWithHeader;
  if (name == "glove") return Format::TextHeaderless;
  if (name == "bin") return Format::Binary;
  return std::nullopt;
}

std::string_view format_name(Format format) {
  switch (format) {
    case Format::TextWithHeader: return "vec";
    case Format::TextHeaderless: return "glove";
    case Format::Binary: return "bin";
  }
  return "?";
}

std::optional<LookupMode> parse_lookup_mode(std::string_view name) {
  if (name == "exact") return LookupMode::Exact;
  if (name == "fold") return LookupMode::CaseInsensitive;
  return std::nullopt;
}

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// ---------------------------------------------------------------------------
// Vocabulary / EmbeddingMatrix

Vocabulary::Vocabulary(std::vector<std::string> words) : words_(std::move(words)) {
  index_.reserve(words_.size());
  folded_.reserve(words_.size());
  for (RowId i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw std::invalid_argument("duplicate word in vocabulary: " + words_[i]);
    }
    folded_.emplace(ascii_lower(words_[i]), i);  // keeps the first, i.e. lowest, id
  }
}

std::optional<RowId> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<RowId> Vocabulary::find_folded(std::string_view word) const {
  auto it = folded_.find(ascii_lower(word));
  if (it == folded_.end()) return std::nullopt;
  return it->second;
}

EmbeddingMatrix::EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix data)
    : vocab_(std::move(vocab)), data_(std::move(data)) {
  if (!vocab_) throw std::invalid_argument("null vocabulary");
  if (static_cast<std::size_t>(data_.rows()) != vocab_->size()) {
    throw std::invalid_argument("row count " + std::to_string(data_.rows()) +
                                " does not match vocabulary size " +
                                std::to_string(vocab_->size()));
  }
  if (!data_.allFinite()) throw std::invalid_argument("embedding matrix has non-finite entries");
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> words, Matrix data)
    : EmbeddingMatrix(std::make_shared<const Vocabulary>(std::move(words)), std::move(data)) {}

// ---------------------------------------------------------------------------
// Readers

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

void split_blank(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

class RowSource {
 public:
  virtual ~RowSource() = default;
  virtual std::size_t dim() const = 0;
  /// False at end of input.
  virtual bool next(std::string& word, std::vector<double>& values) = 0;
};

class TextSource final : public RowSource {
 public:
  TextSource(const std::filesystem::path& path, bool has_header)
      : name_(path.string()), in_(path) {
    if (!in_) throw IoError("cannot open " + name_);
    if (has_header) {
      if (!next_line()) throw ParseError(name_, 1, "missing header");
      split_blank(line_, tokens_);
      std::size_t rows = 0;
      std::size_t dim = 0;
      if (tokens_.size() != 2 || !parse_number(tokens_[0], rows) ||
          !parse_number(tokens_[1], dim) || dim == 0) {
        throw ParseError(name_, line_no_, "malformed header, expected \"V D\"");
      }
      declared_rows_ = rows;
      dim_ = dim;
    } else {
      if (!next_row_tokens()) throw ParseError(name_, 1, "empty file");
      if (tokens_.size() < 2) throw ParseError(name_, line_no_, "row has no values");
      dim_ = tokens_.size() - 1;
      pending_ = true;
    }
  }

  std::size_t dim() const override { return dim_; }

  bool next(std::string& word, std::vector<double>& values) override {
    if (declared_rows_ && rows_read_ == *declared_rows_) return false;
    if (!pending_ && !next_row_tokens()) {
      if (declared_rows_) {
        throw ParseError(name_, line_no_, "header declares " + std::to_string(*declared_rows_) +
                                              " rows but file ends after " +
                                              std::to_string(rows_read_));
      }
      return false;
    }
    pending_ = false;
    if (tokens_.size() != dim_ + 1) {
      throw ParseError(name_, line_no_, "expected " + std::to_string(dim_ + 1) +
                                            " tokens, found " + std::to_string(tokens_.size()));
    }
    word.assign(tokens_[0]);
    values.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      double v = 0.0;
      if (!parse_number(tokens_[j + 1], v)) {
        throw ParseError(name_, line_no_, "bad number '" + std::string(tokens_[j + 1]) + "'");
      }
      if (!std::isfinite(v)) throw ParseError(name_, line_no_, "non-finite value");
      values[j] = v;
    }
    ++rows_read_;
    return true;
  }

 private:
  bool next_line() {
    if (!std::getline(in_, line_)) return false;
    ++line_no_;
    return true;
  }

  bool next_row_tokens() {
    while (next_line()) {
      split_blank(line_, tokens_);
      if (!tokens_.empty()) return true;
    }
    if (in_.bad()) throw IoError("read error on " + name_);
    return false;
  }

  std::string name_;
  std::ifstream in_;
  std::string line_;
  std::vector<std::string_view> tokens_;
  std::size_t line_no_ = 0;
  std::size_t dim_ = 0;
  std::optional<std::size_t> declared_rows_;
  std::size_t rows_read_ = 0;
  bool pending_ = false;
};

class BinarySource final : public RowSource {
 public:
  explicit BinarySource(const std::filesystem::path& path)
      : name_(path.string()), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open " + name_);
    std::string header;
    if (!std::getline(in_, header)) throw ParseError(name_, 0, "missing header");
    offset_ = header.size() + 1;
    std::vector<std::string_view> tokens;
    split_blank(header, tokens);
    if (tokens.size() != 2 || !parse_number(tokens[0], rows_) || !parse_number(tokens[1], dim_) ||
        dim_ == 0) {
      throw ParseError(name_, 0, "malformed header, expected \"V D\"");
    }
    buffer_.resize(dim_ * sizeof(float));
  }

  std::size_t dim() const override { return dim_; }

  bool next(std::string& word, std::vector<double>& values) override {
    if (rows_read_ == rows_) return false;
    word.clear();
    int c = in_.get();
    while (c == '\n') {  // trailing newline of the previous record
      ++offset_;
      c = in_.get();
    }
    const std::size_t word_start = offset_;
    while (c != ' ') {
      if (c == std::char_traits<char>::eof()) {
        throw ParseError(name_, word_start,
                         "short read: expected " + std::to_string(rows_) + " records, got " +
                             std::to_string(rows_read_));
      }
      if (word.size() > kMaxWordBytes) throw ParseError(name_, word_start, "word too long");
      word.push_back(static_cast<char>(c));
      ++offset_;
      c = in_.get();
    }
    ++offset_;
    if (word.empty()) throw ParseError(name_, word_start, "empty word");

    in_.read(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    if (static_cast<std::size_t>(in_.gcount()) != buffer_.size()) {
      throw ParseError(name_, offset_, "short read in vector of '" + word + "'");
    }
    values.resize(dim_);
    for (std::size_t j = 0; j < dim_; ++j) {
      std::array<char, 4> bytes;
      std::copy_n(buffer_.data() + 4 * j, 4, bytes.begin());
      const float f = std::bit_cast<float>(bytes);
      if (!std::isfinite(f)) throw ParseError(name_, offset_ + 4 * j, "non-finite value");
      values[j] = static_cast<double>(f);
    }
    offset_ += buffer_.size();
    if (in_.peek() == '\n') {
      in_.get();
      ++offset_;
    }
    ++rows_read_;
    return true;
  }

 private:
  static constexpr std::size_t kMaxWordBytes = 1 << 20;

  std::string name_;
  std::ifstream in_;
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  std::size_t rows_read_ = 0;
  std::size_t offset_ = 0;
  std::vector<char> buffer_;
};

std::unique_ptr<RowSource> open_source(const std::filesystem::path& path, Format format) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  switch (format) {
    case Format::TextWithHeader: return std::make_unique<TextSource>(path, true);
    case Format::TextHeaderless: return std::make_unique<TextSource>(path, false);
    case Format::Binary: return std::make_unique<BinarySource>(path);
  }
  throw std::invalid_argument("unknown format");
}

}  // namespace

LoadStats for_each_row(const std::filesystem::path& path, Format format,
                       std::optional<std::size_t> max_rows, std::size_t& dim_out,
                       const RowVisitor& visit) {
  auto source = open_source(path, format);
  dim_out = source->dim();
  LoadStats stats;
  std::unordered_set<std::string> seen;
  std::string word;
  std::vector<double> values;
  while ((!max_rows || stats.rows_kept < *max_rows) && source->next(word, values)) {
    if (!seen.insert(word).second) {
      ++stats.duplicates_dropped;
      continue;
    }
    ++stats.rows_kept;
    visit(std::move(word), values);
    word.clear();
  }
  return stats;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, Format format,
                                std::optional<std::size_t> max_vocab, LoadStats* stats) {
  if (max_vocab && *max_vocab == 0) throw std::invalid_argument("max_vocab must be positive");
  std::vector<std::string> words;
  std::vector<double> flat;
  std::size_t dim = 0;
  const LoadStats s = for_each_row(path, format, max_vocab, dim,
                                   [&](std::string&& w, std::span<const double> v) {
                                     words.push_back(std::move(w));
                                     flat.insert(flat.end(), v.begin(), v.end());
                                   });
  if (stats) *stats = s;
  if (words.empty()) throw ParseError(path.string(), 0, "empty embedding set");
  Matrix data = Eigen::Map<const Matrix>(flat.data(), static_cast<Eigen::Index>(words.size()),
                                         static_cast<Eigen::Index>(dim));
  return EmbeddingMatrix(std::move(words), std::move(data));
}

// ---------------------------------------------------------------------------
// Writer

void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path,
                     Format format) {
  if (emb.empty()) throw std::invalid_argument("empty embedding set");
  for (const auto& w : emb.vocab().words()) {
    if (w.empty() || w.find_first_of(" \t\r\n") != std::string::npos) {
      throw std::invalid_argument("word cannot be serialized: '" + w + "'");
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  const auto& data = emb.data();
  if (format != Format::TextHeaderless) out << emb.size() << ' ' << emb.dim() << '\n';

  std::array<char, 64> buf;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    out << emb.vocab().word(static_cast<RowId>(i));
    if (format == Format::Binary) {
      out << ' ';
      for (Eigen::Index j = 0; j < data.cols(); ++j) {
        const auto bytes = std::bit_cast<std::array<char, 4>>(static_cast<float>(data(i, j)));
        out.write(bytes.data(), 4);
      }
    } else {
      for (Eigen::Index j = 0; j < data.cols(); ++j) {
        auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), data(i, j),
                                       std::chars_format::general, 6);
        out << ' ';
        out.write(buf.data(), ptr - buf.data());
      }
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed on " + path.string());
}

std::optional<RowId> lookup(const EmbeddingMatrix& emb, std::string_view word, LookupMode mode) {
  if (auto id = emb.vocab().find(word)) return id;
  if (mode == LookupMode::CaseInsensitive) return emb.vocab().find_folded(word);
  return std::nullopt;
}

std::size_t normalize_rows_inplace(Matrix& data) {
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double norm = data.row(i).norm();
    if (norm > 0.0) {
      data.row(i) /= norm;
    } else {
      ++zeros;
    }
  }
  return zeros;
}

NormalizedEmbeddings normalize_rows(const EmbeddingMatrix& emb) {
  Matrix data = emb.data();
  std::vector<RowId> zero_rows;
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    const double norm = data.row(i).norm();
    if (norm > 0.0) {
      data.row(i) /= norm;
    } else {
      zero_rows.push_back(static_cast<RowId>(i));
    }
  }
  return {emb.with_data(std::move(data)), std::move(zero_rows)};
}

}  // namespace simorder
