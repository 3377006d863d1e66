#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "simorder/datasets.hpp"
#include "simorder/embeddings.hpp"
#include "simorder/sts.hpp"
#include "simorder/transform.hpp"

namespace simorder {

enum class Task { Analogy, WordSim, Sts };

std::string_view task_name(Task t);
std::optional<Task> parse_task(std::string_view name);

/// Inclusive grid start, start + step, ... up to end (1e-12 slack), each point
/// rounded to 2 decimals.
struct AlphaGrid {
  double start = -1.0;
  double end = 1.0;
  double step = 0.05;

  std::vector<double> points() const;
  /// "START:END:STEP"; throws std::invalid_argument.
  static AlphaGrid parse(std::string_view text);
  static AlphaGrid single(double alpha) { return {alpha, alpha, 1.0}; }
};

double round_alpha(double alpha);

struct DatasetSpec {
  Task task = Task::WordSim;
  std::filesystem::path path;
  /// analogy: ignored. wordsim: simlex | men | men-lemma | generic (detected
  /// when empty). sts: ignored.
  std::string format;
};

/// A parsed benchmark ready to be evaluated at many alphas.
struct LoadedDataset {
  Task task = Task::WordSim;
  std::string name;
  std::variant<AnalogyDataset, ScoredPairDataset, StsDataset> data;
};

LoadedDataset load_dataset(const DatasetSpec& spec);

struct ReportRecord {
  double alpha = 0.0;
  std::string task;
  std::string dataset;
  std::string metric;
  double value = 0.0;
  std::size_t covered = 0;
  std::size_t skipped = 0;

  bool is_error() const noexcept { return metric == "error"; }
  bool operator==(const ReportRecord&) const = default;
};

/// Records sort by (alpha, task, dataset, metric).
bool record_less(const ReportRecord& a, const ReportRecord& b);

struct EvalReport {
  std::vector<ReportRecord> records;
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<std::string> errors;
};

struct EvalSettings {
  LookupMode lookup = LookupMode::CaseInsensitive;
  StopwordList stopwords = StopwordList::english();
};

/// Runs every dataset against one (already transformed) embedding set.
/// Failures become "error" records and a message in `errors`.
std::vector<ReportRecord> evaluate_all(const EmbeddingMatrix& emb, double alpha,
                                       const std::vector<LoadedDataset>& datasets,
                                       const EvalSettings& settings,
                                       std::vector<std::string>& errors);

struct SweepConfig {
  std::filesystem::path embeddings;
  Format format = Format::TextWithHeader;
  std::optional<std::size_t> max_vocab = 200000;
  /// Rows used for the gram matrix; unset means the evaluated vocabulary.
  /// A value of 0 means the whole file.
  std::optional<std::size_t> gram_max_vocab;
  AlphaGrid grid;
  std::vector<DatasetSpec> datasets;
  LookupMode lookup = LookupMode::CaseInsensitive;
  bool pre_normalize = false;
  double eig_floor = kDefaultEigFloor;
  std::optional<std::filesystem::path> stopwords;
  /// Eigenbasis cache: loaded if present, written otherwise.
  std::optional<std::filesystem::path> basis_cache;
};

/// Eigendecomposes once, rotates once, and per grid alpha only rescales
/// columns of XQ before evaluating.
EvalReport run_sweep(const EmbeddingMatrix& emb, const EigenBasis& basis,
                     const std::vector<double>& alphas, const std::vector<LoadedDataset>& datasets,
                     const EvalSettings& settings, double eig_floor = kDefaultEigFloor);

/// File-level sweep: loads embeddings and datasets, builds (or loads) the
/// basis, runs the in-memory sweep and fills in provenance.
EvalReport run_sweep(const SweepConfig& cfg);

/// Loads the embeddings a config describes (cap and optional pre-normalization
/// applied) and the basis for them.
struct PreparedModel {
  EmbeddingMatrix emb;
  EigenBasis basis;
  LoadStats load_stats;
};
PreparedModel prepare_model(const SweepConfig& cfg);

}  // namespace simorder
