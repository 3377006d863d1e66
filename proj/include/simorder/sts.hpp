#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "simorder/datasets.hpp"
#include "simorder/embeddings.hpp"

namespace simorder {

class StopwordList {
 public:
  StopwordList() = default;
  /// Entries are lowercased; empty entries are ignored.
  explicit StopwordList(const std::vector<std::string>& words);

  /// Built-in English list.
  static StopwordList english();
  /// One token per line, '#' comment lines ignored.
  static StopwordList from_file(const std::filesystem::path& path);

  bool contains(std::string_view token) const { return words_.count(std::string(token)) != 0; }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Lowercase, split on whitespace, trim non-alphanumeric characters from both
/// ends of each token, drop tokens that become empty.
std::vector<std::string> tokenize(std::string_view sentence);

struct Centroid {
  Vector values;
  std::size_t words_used = 0;
  bool zero() const noexcept { return words_used == 0; }
};

/// Mean of the vectors of tokens that are neither stopwords nor out of
/// vocabulary; the zero vector when no token qualifies.
Centroid sentence_centroid(const EmbeddingMatrix& emb, const std::vector<std::string>& tokens,
                           const StopwordList& stop, LookupMode mode);

struct StsResult {
  double pearson = 0.0;
  std::size_t items_scored = 0;
  std::size_t zero_vector_items = 0;
};

/// Cosine of centroids per item (0 if either centroid is zero), then Pearson
/// against gold. Throws UndefinedCorrelation if all model scores are equal.
StsResult eval_sts(const EmbeddingMatrix& emb, const StsDataset& ds, const StopwordList& stop,
                   LookupMode mode);

/// Per-item model scores, in item order.
std::vector<double> sts_scores(const EmbeddingMatrix& emb, const StsDataset& ds,
                               const StopwordList& stop, LookupMode mode,
                               std::size_t* zero_vector_items = nullptr);

}  // namespace simorder
