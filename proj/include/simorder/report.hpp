#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "simorder/sweep.hpp"

namespace simorder {

inline constexpr const char* kReportCsvHeader = "alpha,task,dataset,metric,value,covered,skipped";

/// Values are written in shortest round-trip form, so read_report_csv gives
/// back exactly the records that were written.
void write_report_csv(const std::vector<ReportRecord>& records, std::ostream& out);
std::vector<ReportRecord> read_report_csv(std::istream& in, const std::string& source_name);
std::vector<ReportRecord> read_report_csv(const std::filesystem::path& path);

void write_provenance_json(const EvalReport& report, std::ostream& out);

/// Accuracy metrics are plotted as relative error reduction against the
/// baseline, everything else as a plain difference.
enum class DerivedKind { RelativeErrorReduction, Delta };

struct SeriesPoint {
  ReportRecord record;
  double baseline_alpha = 0.0;
  DerivedKind kind = DerivedKind::Delta;
  double derived = 0.0;  // fraction (RER) or raw metric difference
};

struct BestEntry {
  std::string task;
  std::string dataset;
  std::string metric;
  double baseline_alpha = 0.0;
  double baseline_value = 0.0;
  double best_alpha = 0.0;
  double best_value = 0.0;
};

DerivedKind derived_kind(const std::string& metric);

/// Baseline per (task, dataset, metric) series is alpha = 0, or the alpha
/// closest to 0 when the series has no alpha = 0 record. Error records are
/// left out.
std::vector<SeriesPoint> figure_series(const std::vector<ReportRecord>& records);

/// Highest value per series; the lowest alpha wins ties.
std::vector<BestEntry> best_alphas(const std::vector<ReportRecord>& records);

/// Plot-ready CSV: alpha,task,dataset,metric,value,baseline_alpha,derived_kind,derived.
void write_series_csv(const std::vector<ReportRecord>& records, std::ostream& out);

/// Best-alpha table, per-alpha series and errors; metric values scaled by 100.
void write_markdown(const std::vector<ReportRecord>& records, std::ostream& out,
                    const EvalReport* context = nullptr);

}  // namespace simorder
