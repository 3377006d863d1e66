#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

namespace simorder {

/// Dense row-major matrix; row i is the vector of word i.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowId = std::size_t;

/// On-disk layouts.
///   TextWithHeader  word2vec/fastText `.vec`: "V D" header, then "word v1 .. vD" lines
///   TextHeaderless  GloVe: rows only, D taken from the first row
///   Binary          word2vec `.bin`: "V D\n", then word, 0x20, D little-endian float32
enum class Format { TextWithHeader, TextHeaderless, Binary };

/// `Exact` only matches the stored spelling. `CaseInsensitive` tries the exact
/// spelling first and then the lowest row whose ASCII-lowercased form matches.
enum class LookupMode { Exact, CaseInsensitive };

std::optional<Format> parse_format(std::string_view name);  // "vec" | "glove" | "bin"
std::string_view format_name(Format format);
std::optional<LookupMode> parse_lookup_mode(std::string_view name);  // "exact" | "fold"

/// Lowercases ASCII letters; other bytes (including UTF-8 sequences) are kept.
std::string ascii_lower(std::string_view s);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws std::invalid_argument if a word repeats.
  explicit Vocabulary(std::vector<std::string> words);

  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const std::vector<std::string>& words() const noexcept { return words_; }
  const std::string& word(RowId id) const { return words_.at(id); }

  std::optional<RowId> find(std::string_view word) const;
  /// Lowest row id whose lowercased spelling equals ascii_lower(word).
  std::optional<RowId> find_folded(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, RowId> index_;
  std::unordered_map<std::string, RowId> folded_;
};

/// Vocabulary plus a V x d matrix of finite values. Immutable once built; the
/// vocabulary is shared between an embedding set and every transform of it.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() : vocab_(std::make_shared<const Vocabulary>()) {}
  EmbeddingMatrix(std::shared_ptr<const Vocabulary> vocab, Matrix data);
  EmbeddingMatrix(std::vector<std::string> words, Matrix data);

  const Vocabulary& vocab() const noexcept { return *vocab_; }
  const std::shared_ptr<const Vocabulary>& shared_vocab() const noexcept { return vocab_; }
  const Matrix& data() const noexcept { return data_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(data_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(data_.cols()); }
  bool empty() const noexcept { return data_.rows() == 0; }

  auto row(RowId id) const { return data_.row(static_cast<Eigen::Index>(id)); }

  /// Same vocabulary, new values (validated).
  EmbeddingMatrix with_data(Matrix data) const { return EmbeddingMatrix(vocab_, std::move(data)); }

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  Matrix data_;
};

struct LoadStats {
  std::size_t rows_kept = 0;
  std::size_t duplicates_dropped = 0;
};

/// Called once per kept row, in file order.
using RowVisitor = std::function<void(std::string&& word, std::span<const double> values)>;

/// Streams the rows of an embedding file without materializing the matrix.
/// Later duplicates of a word are skipped; stops after `max_rows` kept rows.
/// Returns the dimension through `dim_out` once the header/first row is read.
LoadStats for_each_row(const std::filesystem::path& path, Format format,
                       std::optional<std::size_t> max_rows, std::size_t& dim_out,
                       const RowVisitor& visit);

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, Format format,
                                std::optional<std::size_t> max_vocab = std::nullopt,
                                LoadStats* stats = nullptr);

/// Text formats write 6 significant digits, binary writes float32.
void save_embeddings(const EmbeddingMatrix& emb, const std::filesystem::path& path, Format format);

std::optional<RowId> lookup(const EmbeddingMatrix& emb, std::string_view word, LookupMode mode);

struct NormalizedEmbeddings {
  EmbeddingMatrix emb;
  std::vector<RowId> zero_rows;
};

/// Scales every nonzero row to unit Euclidean length; zero rows stay zero and
/// are listed in `zero_rows`.
NormalizedEmbeddings normalize_rows(const EmbeddingMatrix& emb);

/// In-place variant used on the sweep path; returns the number of zero rows.
std::size_t normalize_rows_inplace(Matrix& data);

}  // namespace simorder
