#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "simorder/datasets.hpp"
#include "simorder/embeddings.hpp"

namespace simorder {

inline constexpr RowId kNoAnswer = std::numeric_limits<RowId>::max();

struct AnalogyCounts {
  std::size_t correct = 0;
  std::size_t answered = 0;
  std::size_t skipped = 0;

  /// correct / answered, 0 when nothing was answered.
  double accuracy() const noexcept {
    return answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered);
  }
  std::size_t total() const noexcept { return answered + skipped; }
};

struct SectionResult {
  std::string name;
  AnalogyCategory category = AnalogyCategory::Semantic;
  AnalogyCounts counts;
};

struct AnalogyResult {
  AnalogyCounts semantic;
  AnalogyCounts syntactic;
  std::vector<SectionResult> sections;
  std::vector<std::string> warnings;

  double semantic_accuracy() const noexcept { return semantic.accuracy(); }
  double syntactic_accuracy() const noexcept { return syntactic.accuracy(); }
  AnalogyCounts overall() const noexcept {
    return {semantic.correct + syntactic.correct, semantic.answered + syntactic.answered,
            semantic.skipped + syntactic.skipped};
  }
};

struct WordSimResult {
  double spearman = 0.0;
  std::size_t covered = 0;
  std::size_t skipped = 0;
};

struct AnalogyQuery {
  RowId a;
  RowId b;
  RowId c;
};

/// 3CosAdd: argmax over w not in {a, b, c} of cos(w,b) - cos(w,a) + cos(w,c),
/// lowest row id on ties. Rows of `normalized` must be unit length (or zero).
/// Throws std::invalid_argument when no candidate word is left.
RowId analogy_query(const EmbeddingMatrix& normalized, RowId a, RowId b, RowId c);

/// Same as analogy_query for many queries at once, blocked into matrix
/// products. Entries are kNoAnswer when the vocabulary has no candidate.
std::vector<RowId> analogy_batch(const Matrix& normalized, std::span<const AnalogyQuery> queries);

/// Normalizes rows once, then answers every in-vocabulary question. A question
/// with any out-of-vocabulary word is skipped.
AnalogyResult eval_analogy(const EmbeddingMatrix& emb, const AnalogyDataset& ds, LookupMode mode);

/// eval_analogy on rows that are already unit length.
AnalogyResult eval_analogy_normalized(const EmbeddingMatrix& normalized, const AnalogyDataset& ds,
                                      LookupMode mode);

/// Spearman correlation between pair cosines and gold scores over covered pairs.
/// Throws EvalError if fewer than 2 pairs are covered.
WordSimResult eval_wordsim(const EmbeddingMatrix& emb, const ScoredPairDataset& ds, LookupMode mode);

}  // namespace simorder
