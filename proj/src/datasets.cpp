#include "simorder/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>

#include "simorder/error.hpp"

namespace simorder {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

void chomp(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> to_double(std::string_view tok) {
  tok = trim(tok);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string strip_pos(std::string_view w) {
  if (w.size() > 2 && w[w.size() - 2] == '-') {
    const char tag = w.back();
    if (tag == 'n' || tag == 'v' || tag == 'j') w.remove_suffix(2);
  }
  return std::string(w);
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Analogy

std::string_view category_name(AnalogyCategory c) {
  return c == AnalogyCategory::Syntactic ? "syntactic" : "semantic";
}

AnalogyCategory category_for_section(std::string_view name) {
  return name.starts_with("gram") ? AnalogyCategory::Syntactic : AnalogyCategory::Semantic;
}

std::size_t AnalogyDataset::total() const {
  std::size_t n = 0;
  for (const auto& s : sections) n += s.questions.size();
  return n;
}

std::size_t AnalogyDataset::count(AnalogyCategory c) const {
  std::size_t n = 0;
  for (const auto& s : sections)
    if (s.category == c) n += s.questions.size();
  return n;
}

AnalogyDataset parse_analogy(std::istream& in, const std::string& source_name) {
  AnalogyDataset ds;
  ds.name = source_name;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.starts_with(":")) {
      const std::string name(trim(std::string_view(line).substr(1)));
      if (name.empty()) throw ParseError(source_name, line_no, "empty section name");
      ds.sections.push_back({name, category_for_section(name), {}});
      continue;
    }
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 4) {
      throw ParseError(source_name, line_no,
                       "expected 4 words, found " + std::to_string(tokens.size()));
    }
    if (ds.sections.empty()) throw ParseError(source_name, line_no, "question before any section header");
    ds.sections.back().questions.push_back(
        {std::string(tokens[0]), std::string(tokens[1]), std::string(tokens[2]), std::string(tokens[3])});
  }
  return ds;
}

AnalogyDataset parse_analogy(const std::filesystem::path& path) {
  auto in = open_input(path);
  auto ds = parse_analogy(in, path.string());
  ds.name = path.stem().string();
  return ds;
}

void write_analogy(const AnalogyDataset& ds, std::ostream& out) {
  for (const auto& s : ds.sections) {
    out << ": " << s.name << '\n';
    for (const auto& q : s.questions) out << q[0] << ' ' << q[1] << ' ' << q[2] << ' ' << q[3] << '\n';
  }
}

// ---------------------------------------------------------------------------
// Scored pairs

std::optional<PairFormat> parse_pair_format(std::string_view name) {
  if (name == "simlex") return PairFormat::SimLex;
  if (name == "men") return PairFormat::Men;
  if (name == "generic" || name == "generic-3col") return PairFormat::Generic3Col;
  return std::nullopt;
}

PairFormat detect_pair_format(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::string first;
  std::getline(in, first);
  chomp(first);
  for (auto col : split_tabs(first)) {
    if (trim(col) == "SimLex999") return PairFormat::SimLex;
  }
  return PairFormat::Generic3Col;
}

ScoredPairDataset parse_scored_pairs(std::istream& in, const std::string& source_name,
                                     PairFormat format, bool strip_pos_suffix) {
  ScoredPairDataset ds;
  ds.name = source_name;
  std::string line;
  std::size_t line_no = 0;

  if (format == PairFormat::SimLex) {
    if (!std::getline(in, line)) throw ParseError(source_name, 1, "missing header row");
    ++line_no;
    chomp(line);
    const auto header = split_tabs(line);
    auto column = [&](std::string_view name) {
      auto it = std::find_if(header.begin(), header.end(),
                             [&](std::string_view h) { return trim(h) == name; });
      if (it == header.end()) throw ParseError(source_name, 1, "missing column " + std::string(name));
      return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c1 = column("word1");
    const std::size_t c2 = column("word2");
    const std::size_t cs = column("SimLex999");
    const std::size_t need = std::max({c1, c2, cs}) + 1;
    while (std::getline(in, line)) {
      ++line_no;
      chomp(line);
      if (trim(line).empty()) continue;
      const auto fields = split_tabs(line);
      if (fields.size() < need) {
        throw ParseError(source_name, line_no, "expected at least " + std::to_string(need) + " columns");
      }
      const auto score = to_double(fields[cs]);
      if (!score) throw ParseError(source_name, line_no, "non-numeric score '" + std::string(fields[cs]) + "'");
      ds.pairs.push_back({std::string(trim(fields[c1])), std::string(trim(fields[c2])), *score});
    }
  } else {
    while (std::getline(in, line)) {
      ++line_no;
      chomp(line);
      const auto tokens = split_ws(line);
      if (tokens.empty() || tokens[0].starts_with("#")) continue;
      if (tokens.size() != 3) {
        throw ParseError(source_name, line_no, "expected 3 columns, found " + std::to_string(tokens.size()));
      }
      const auto score = to_double(tokens[2]);
      if (!score) throw ParseError(source_name, line_no, "non-numeric score '" + std::string(tokens[2]) + "'");
      if (format == PairFormat::Men && strip_pos_suffix) {
        ds.pairs.push_back({strip_pos(tokens[0]), strip_pos(tokens[1]), *score});
      } else {
        ds.pairs.push_back({std::string(tokens[0]), std::string(tokens[1]), *score});
      }
    }
  }
  if (ds.pairs.size() < 2) throw ParseError(source_name, line_no, "fewer than 2 word pairs");
  return ds;
}

ScoredPairDataset parse_scored_pairs(const std::filesystem::path& path, PairFormat format,
                                     bool strip_pos_suffix) {
  auto in = open_input(path);
  auto ds = parse_scored_pairs(in, path.string(), format, strip_pos_suffix);
  ds.name = path.stem().string();
  return ds;
}

void write_scored_pairs(const ScoredPairDataset& ds, std::ostream& out) {
  for (const auto& p : ds.pairs) out << p.word1 << ' ' << p.word2 << ' ' << format_double(p.gold) << '\n';
}

// ---------------------------------------------------------------------------
// STS

std::string_view split_name(StsSplit s) {
  switch (s) {
    case StsSplit::Train: return "train";
    case StsSplit::Dev: return "dev";
    case StsSplit::Test: return "test";
  }
  return "?";
}

std::optional<StsSplit> parse_split(std::string_view name) {
  if (name == "train") return StsSplit::Train;
  if (name == "dev") return StsSplit::Dev;
  if (name == "test") return StsSplit::Test;
  return std::nullopt;
}

StsDataset parse_sts(std::istream& in, const std::string& source_name, StsSplit split) {
  StsDataset ds;
  ds.name = source_name;
  ds.split = split;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    chomp(line);
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() < 7) {
      throw ParseError(source_name, line_no, "expected at least 7 tab-separated fields, found " +
                                                 std::to_string(fields.size()));
    }
    const auto score = to_double(fields[4]);
    if (!score) throw ParseError(source_name, line_no, "non-numeric score '" + std::string(fields[4]) + "'");
    if (*score < 0.0 || *score > 5.0) {
      throw ParseError(source_name, line_no, "score " + std::string(fields[4]) + " outside [0, 5]");
    }
    if (trim(fields[5]).empty() || trim(fields[6]).empty()) {
      throw ParseError(source_name, line_no, "empty sentence");
    }
    ds.items.push_back({*score, std::string(fields[5]), std::string(fields[6])});
  }
  if (ds.items.empty()) throw ParseError(source_name, line_no, "no items");
  return ds;
}

StsDataset parse_sts(const std::filesystem::path& path) {
  auto in = open_input(path);
  const std::string file = path.filename().string();
  StsSplit split = StsSplit::Test;
  if (file.find("train") != std::string::npos) split = StsSplit::Train;
  else if (file.find("dev") != std::string::npos) split = StsSplit::Dev;
  auto ds = parse_sts(in, path.string(), split);
  ds.name = path.stem().string();
  return ds;
}

void write_sts(const StsDataset& ds, std::ostream& out) {
  std::size_t id = 0;
  for (const auto& item : ds.items) {
    out << "main\tgenerated\t0000\t" << std::setw(4) << std::setfill('0') << id++ << std::setfill(' ')
        << '\t' << format_double(item.gold) << '\t' << item.sentence1 << '\t' << item.sentence2 << '\n';
  }
}

}  // namespace simorder
