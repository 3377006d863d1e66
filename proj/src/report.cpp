#include "simorder/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <tuple>

#include <json.hpp>

#include "simorder/error.hpp"

namespace simorder {

namespace {

std::string shortest(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
bool parse_field(std::string_view tok, T& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

void check_field(const std::string& s) {
  if (s.find_first_of(",\n\r") != std::string::npos) {
    throw std::invalid_argument("report field cannot contain ',' or newlines: '" + s + "'");
  }
}

using SeriesKey = std::tuple<std::string, std::string, std::string>;

std::map<SeriesKey, std::vector<ReportRecord>> group_series(const std::vector<ReportRecord>& records) {
  std::map<SeriesKey, std::vector<ReportRecord>> series;
  for (const auto& r : records) {
    if (r.is_error()) continue;
    series[{r.task, r.dataset, r.metric}].push_back(r);
  }
  for (auto& [key, recs] : series) {
    std::stable_sort(recs.begin(), recs.end(),
                     [](const ReportRecord& a, const ReportRecord& b) { return a.alpha < b.alpha; });
  }
  return series;
}

const ReportRecord& baseline_of(const std::vector<ReportRecord>& recs) {
  const ReportRecord* best = &recs.front();
  for (const auto& r : recs) {
    if (std::abs(r.alpha) < std::abs(best->alpha)) best = &r;
  }
  return *best;
}

double derive(DerivedKind kind, double value, double baseline) {
  if (kind == DerivedKind::Delta) return value - baseline;
  if (baseline >= 1.0) return 0.0;
  return (value - baseline) / (1.0 - baseline);
}

}  // namespace

// ---------------------------------------------------------------------------
// CSV

void write_report_csv(const std::vector<ReportRecord>& records, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  for (const auto& r : records) {
    check_field(r.task);
    check_field(r.dataset);
    check_field(r.metric);
    out << shortest(r.alpha) << ',' << r.task << ',' << r.dataset << ',' << r.metric << ','
        << shortest(r.value) << ',' << r.covered << ',' << r.skipped << '\n';
  }
}

std::vector<ReportRecord> read_report_csv(std::istream& in, const std::string& source_name) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source_name, 1, "empty report");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportCsvHeader) {
    throw ParseError(source_name, 1, std::string("expected header '") + kReportCsvHeader + "'");
  }
  std::vector<ReportRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_commas(line);
    if (f.size() != 7) {
      throw ParseError(source_name, line_no, "expected 7 fields, found " + std::to_string(f.size()));
    }
    ReportRecord r;
    r.task = std::string(f[1]);
    r.dataset = std::string(f[2]);
    r.metric = std::string(f[3]);
    if (!parse_field(f[0], r.alpha) || !parse_field(f[4], r.value) || !parse_field(f[5], r.covered) ||
        !parse_field(f[6], r.skipped) || !std::isfinite(r.alpha) || !std::isfinite(r.value)) {
      throw ParseError(source_name, line_no, "malformed numeric field");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ReportRecord> read_report_csv(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_report_csv(in, path.string());
}

void write_provenance_json(const EvalReport& report, std::ostream& out) {
  nlohmann::ordered_json j;
  for (const auto& [key, value] : report.provenance) {
    if (j.contains(key)) {
      if (!j[key].is_array()) j[key] = nlohmann::ordered_json::array({j[key]});
      j[key].push_back(value);
    } else {
      j[key] = value;
    }
  }
  j["errors"] = report.errors;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Derived views

DerivedKind derived_kind(const std::string& metric) {
  return metric.ends_with("_accuracy") ? DerivedKind::RelativeErrorReduction : DerivedKind::Delta;
}

std::vector<SeriesPoint> figure_series(const std::vector<ReportRecord>& records) {
  std::vector<SeriesPoint> points;
  for (const auto& [key, recs] : group_series(records)) {
    const auto& base = baseline_of(recs);
    const auto kind = derived_kind(std::get<2>(key));
    for (const auto& r : recs) points.push_back({r, base.alpha, kind, derive(kind, r.value, base.value)});
  }
  return points;
}

std::vector<BestEntry> best_alphas(const std::vector<ReportRecord>& records) {
  std::vector<BestEntry> out;
  for (const auto& [key, recs] : group_series(records)) {
    const auto& base = baseline_of(recs);
    const ReportRecord* best = &recs.front();
    for (const auto& r : recs) {
      if (r.value > best->value) best = &r;
    }
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), base.alpha, base.value,
                   best->alpha, best->value});
  }
  return out;
}

void write_series_csv(const std::vector<ReportRecord>& records, std::ostream& out) {
  out << "alpha,task,dataset,metric,value,baseline_alpha,derived_kind,derived\n";
  for (const auto& p : figure_series(records)) {
    const auto& r = p.record;
    out << shortest(r.alpha) << ',' << r.task << ',' << r.dataset << ',' << r.metric << ','
        << shortest(r.value) << ',' << shortest(p.baseline_alpha) << ','
        << (p.kind == DerivedKind::RelativeErrorReduction ? "relative_error_reduction" : "delta") << ','
        << shortest(p.derived) << '\n';
  }
}

void write_markdown(const std::vector<ReportRecord>& records, std::ostream& out,
                    const EvalReport* context) {
  out << "# Similarity-order sweep\n\n";
  if (context && !context->provenance.empty()) {
    for (const auto& [key, value] : context->provenance) out << "- " << key << ": `" << value << "`\n";
    out << '\n';
  }

  out << "## Best alpha\n\n";
  out << "| task | dataset | metric | original | best | alpha |\n";
  out << "|---|---|---|---:|---:|---:|\n";
  for (const auto& b : best_alphas(records)) {
    out << "| " << b.task << " | " << b.dataset << " | " << b.metric << " | " << fixed2(100.0 * b.baseline_value);
    if (b.baseline_alpha != 0.0) out << " (alpha = " << fixed2(b.baseline_alpha) << ")";
    out << " | " << fixed2(100.0 * b.best_value) << " | " << fixed2(b.best_alpha) << " |\n";
  }

  out << "\n## Series\n\n";
  out << "Accuracy metrics: relative error reduction (%) against the baseline alpha. "
         "Correlations: difference in points.\n\n";
  out << "| alpha | task | dataset | metric | value | vs baseline |\n";
  out << "|---:|---|---|---|---:|---:|\n";
  for (const auto& p : figure_series(records)) {
    const auto& r = p.record;
    out << "| " << fixed2(r.alpha) << " | " << r.task << " | " << r.dataset << " | " << r.metric << " | "
        << fixed2(100.0 * r.value) << " | " << fixed2(100.0 * p.derived)
        << (p.kind == DerivedKind::RelativeErrorReduction ? "%" : "") << " |\n";
  }

  std::vector<const ReportRecord*> failed;
  for (const auto& r : records)
    if (r.is_error()) failed.push_back(&r);
  if (!failed.empty() || (context && !context->errors.empty())) {
    out << "\n## Errors\n\n";
    for (const auto* r : failed) out << "- alpha " << fixed2(r->alpha) << ": " << r->task << "/" << r->dataset << "\n";
    if (context) {
      for (const auto& e : context->errors) out << "- " << e << '\n';
    }
  }
}

}  // namespace simorder
