#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace simorder {

// ---------------------------------------------------------------------------
// Word analogy (questions-words.txt layout)

enum class AnalogyCategory { Semantic, Syntactic };

std::string_view category_name(AnalogyCategory c);

/// Sections whose name starts with "gram" hold syntactic questions.
AnalogyCategory category_for_section(std::string_view name);

/// "a is to b as c is to d": words[3] is the expected answer.
using AnalogyQuestion = std::array<std::string, 4>;

struct AnalogySection {
  std::string name;
  AnalogyCategory category = AnalogyCategory::Semantic;
  std::vector<AnalogyQuestion> questions;

  bool operator==(const AnalogySection&) const = default;
};

struct AnalogyDataset {
  std::string name;
  std::vector<AnalogySection> sections;

  std::size_t total() const;
  std::size_t count(AnalogyCategory c) const;
  bool operator==(const AnalogyDataset&) const = default;
};

AnalogyDataset parse_analogy(const std::filesystem::path& path);
AnalogyDataset parse_analogy(std::istream& in, const std::string& source_name);
void write_analogy(const AnalogyDataset& ds, std::ostream& out);

// ---------------------------------------------------------------------------
// Word similarity

/// simlex:  tab-separated, header row naming word1, word2, SimLex999 columns
/// men:     "word1 word2 score"; lemma-POS suffixes (-n, -v, -j) optionally stripped
/// generic: "word1 word2 score", '#' comment lines allowed
enum class PairFormat { SimLex, Men, Generic3Col };

std::optional<PairFormat> parse_pair_format(std::string_view name);  // simlex | men | generic
/// SimLex if the first line is a tab-separated header containing "SimLex999",
/// generic otherwise.
PairFormat detect_pair_format(const std::filesystem::path& path);

struct ScoredPair {
  std::string word1;
  std::string word2;
  double gold = 0.0;

  bool operator==(const ScoredPair&) const = default;
};

struct ScoredPairDataset {
  std::string name;
  std::vector<ScoredPair> pairs;

  bool operator==(const ScoredPairDataset&) const = default;
};

ScoredPairDataset parse_scored_pairs(const std::filesystem::path& path, PairFormat format,
                                     bool strip_pos_suffix = false);
ScoredPairDataset parse_scored_pairs(std::istream& in, const std::string& source_name,
                                     PairFormat format, bool strip_pos_suffix = false);
/// Writes the generic three-column layout at full double precision.
void write_scored_pairs(const ScoredPairDataset& ds, std::ostream& out);

// ---------------------------------------------------------------------------
// STS Benchmark

enum class StsSplit { Train, Dev, Test };

std::string_view split_name(StsSplit s);
std::optional<StsSplit> parse_split(std::string_view name);

struct StsItem {
  double gold = 0.0;  // in [0, 5]
  std::string sentence1;
  std::string sentence2;

  bool operator==(const StsItem&) const = default;
};

struct StsDataset {
  std::string name;
  StsSplit split = StsSplit::Test;
  std::vector<StsItem> items;

  bool operator==(const StsDataset&) const = default;
};

/// Split is taken from the file name ("train" / "dev"), test otherwise.
StsDataset parse_sts(const std::filesystem::path& path);
StsDataset parse_sts(std::istream& in, const std::string& source_name, StsSplit split);
void write_sts(const StsDataset& ds, std::ostream& out);

}  // namespace simorder
