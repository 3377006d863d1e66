#include "simorder/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "simorder/error.hpp"
#include "simorder/eval.hpp"

namespace simorder {

std::string_view task_name(Task t) {
  switch (t) {
    case Task::Analogy: return "analogy";
    case Task::WordSim: return "wordsim";
    case Task::Sts: return "sts";
  }
  return "?";
}

std::optional<Task> parse_task(std::string_view name) {
  if (name == "analogy") return Task::Analogy;
  if (name == "wordsim") return Task::WordSim;
  if (name == "sts") return Task::Sts;
  return std::nullopt;
}

double round_alpha(double alpha) {
  const double r = std::round(alpha * 100.0) / 100.0;
  return r == 0.0 ? 0.0 : r;  // no negative zero in keys
}

std::vector<double> AlphaGrid::points() const {
  if (!std::isfinite(start) || !std::isfinite(end) || !std::isfinite(step)) {
    throw std::invalid_argument("alpha grid bounds must be finite");
  }
  if (!(step > 0.0)) throw std::invalid_argument("alpha grid step must be positive");
  if (start > end) throw std::invalid_argument("alpha grid start must not exceed end");
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double a = start + static_cast<double>(k) * step;
    if (a > end + 1e-12) break;
    out.push_back(round_alpha(a));
  }
  return out;
}

AlphaGrid AlphaGrid::parse(std::string_view text) {
  double parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t colon = i < 2 ? text.find(':', pos) : text.size();
    if (colon == std::string_view::npos) {
      throw std::invalid_argument("alpha grid must look like START:END:STEP, got '" + std::string(text) + "'");
    }
    const auto tok = text.substr(pos, colon - pos);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), parts[i]);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad number '" + std::string(tok) + "' in alpha grid");
    }
    pos = colon + 1;
  }
  AlphaGrid g{parts[0], parts[1], parts[2]};
  g.points();  // validates
  return g;
}

bool record_less(const ReportRecord& a, const ReportRecord& b) {
  return std::tie(a.alpha, a.task, a.dataset, a.metric) < std::tie(b.alpha, b.task, b.dataset, b.metric);
}

namespace {

std::string dataset_name(const std::filesystem::path& path) {
  std::string name = path.stem().string();
  std::replace(name.begin(), name.end(), ',', '_');
  return name.empty() ? "dataset" : name;
}

std::string format_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

LoadedDataset load_dataset(const DatasetSpec& spec) {
  LoadedDataset out;
  out.task = spec.task;
  out.name = dataset_name(spec.path);
  switch (spec.task) {
    case Task::Analogy:
      out.data = parse_analogy(spec.path);
      break;
    case Task::WordSim: {
      PairFormat format = PairFormat::Generic3Col;
      bool strip = false;
      if (spec.format.empty()) {
        format = detect_pair_format(spec.path);
      } else if (spec.format == "men-lemma") {
        format = PairFormat::Men;
        strip = true;
      } else if (auto f = parse_pair_format(spec.format)) {
        format = *f;
      } else {
        throw std::invalid_argument("unknown word similarity format '" + spec.format + "'");
      }
      out.data = parse_scored_pairs(spec.path, format, strip);
      break;
    }
    case Task::Sts:
      out.data = parse_sts(spec.path);
      break;
  }
  return out;
}

std::vector<ReportRecord> evaluate_all(const EmbeddingMatrix& emb, double alpha,
                                       const std::vector<LoadedDataset>& datasets,
                                       const EvalSettings& settings,
                                       std::vector<std::string>& errors) {
  std::vector<ReportRecord> records;
  std::optional<EmbeddingMatrix> normalized;
  for (const auto& ds : datasets) {
    const std::string task(task_name(ds.task));
    auto record = [&](std::string metric, double value, std::size_t covered, std::size_t skipped) {
      records.push_back({alpha, task, ds.name, std::move(metric), value, covered, skipped});
    };
    try {
      switch (ds.task) {
        case Task::Analogy: {
          if (!normalized) normalized = normalize_rows(emb).emb;
          const auto r = eval_analogy_normalized(*normalized, std::get<AnalogyDataset>(ds.data), settings.lookup);
          for (const auto& w : r.warnings) errors.push_back("alpha=" + format_number(alpha) + " " + ds.name + ": " + w);
          const auto all = r.overall();
          record("semantic_accuracy", r.semantic.accuracy(), r.semantic.answered, r.semantic.skipped);
          record("syntactic_accuracy", r.syntactic.accuracy(), r.syntactic.answered, r.syntactic.skipped);
          record("total_accuracy", all.accuracy(), all.answered, all.skipped);
          break;
        }
        case Task::WordSim: {
          const auto r = eval_wordsim(emb, std::get<ScoredPairDataset>(ds.data), settings.lookup);
          record("spearman", r.spearman, r.covered, r.skipped);
          break;
        }
        case Task::Sts: {
          const auto r = eval_sts(emb, std::get<StsDataset>(ds.data), settings.stopwords, settings.lookup);
          record("pearson", r.pearson, r.items_scored - r.zero_vector_items, r.zero_vector_items);
          break;
        }
      }
    } catch (const std::exception& e) {
      errors.push_back("alpha=" + format_number(alpha) + " " + task + "/" + ds.name + ": " + e.what());
      record("error", 0.0, 0, 0);
    }
  }
  return records;
}

EvalReport run_sweep(const EmbeddingMatrix& emb, const EigenBasis& basis,
                     const std::vector<double>& alphas, const std::vector<LoadedDataset>& datasets,
                     const EvalSettings& settings, double eig_floor) {
  EvalReport report;
  auto shared = std::make_shared<const EigenBasis>(basis);
  const Matrix rotated = precompute_rotated(emb.data(), basis);
  for (const double alpha : alphas) {
    try {
      const auto t = make_transform(shared, alpha, eig_floor);
      const auto transformed = emb.with_data(scale_columns(rotated, t));
      auto recs = evaluate_all(transformed, alpha, datasets, settings, report.errors);
      report.records.insert(report.records.end(), recs.begin(), recs.end());
    } catch (const std::exception& e) {
      report.errors.push_back("alpha=" + format_number(alpha) + ": " + e.what());
      for (const auto& ds : datasets) {
        report.records.push_back({alpha, std::string(task_name(ds.task)), ds.name, "error", 0.0, 0, 0});
      }
    }
  }
  std::stable_sort(report.records.begin(), report.records.end(), record_less);
  return report;
}

PreparedModel prepare_model(const SweepConfig& cfg) {
  PreparedModel m;
  m.emb = load_embeddings(cfg.embeddings, cfg.format, cfg.max_vocab, &m.load_stats);
  if (cfg.pre_normalize) m.emb = normalize_rows(m.emb).emb;

  if (cfg.basis_cache && std::filesystem::exists(*cfg.basis_cache)) {
    m.basis = load_basis(*cfg.basis_cache);
    if (m.basis.source_dim() != m.emb.dim()) {
      throw std::invalid_argument("cached basis " + cfg.basis_cache->string() + " has dimension " +
                                  std::to_string(m.basis.source_dim()) + ", embeddings have " +
                                  std::to_string(m.emb.dim()));
    }
    return m;
  }

  Matrix g;
  if (cfg.gram_max_vocab) {
    std::optional<std::size_t> rows;
    if (*cfg.gram_max_vocab > 0) rows = *cfg.gram_max_vocab;
    g = gram_from_file(cfg.embeddings, cfg.format, rows, cfg.pre_normalize);
  } else {
    g = gram(m.emb);
  }
  m.basis = sym_eig(g);
  if (cfg.basis_cache) save_basis(m.basis, *cfg.basis_cache);
  return m;
}

EvalReport run_sweep(const SweepConfig& cfg) {
  const auto alphas = cfg.grid.points();
  std::vector<LoadedDataset> datasets;
  for (const auto& spec : cfg.datasets) datasets.push_back(load_dataset(spec));
  EvalSettings settings;
  settings.lookup = cfg.lookup;
  if (cfg.stopwords) settings.stopwords = StopwordList::from_file(*cfg.stopwords);

  const auto model = prepare_model(cfg);
  auto report = run_sweep(model.emb, model.basis, alphas, datasets, settings, cfg.eig_floor);

  auto& p = report.provenance;
  p.emplace_back("embeddings", cfg.embeddings.string());
  p.emplace_back("format", std::string(format_name(cfg.format)));
  p.emplace_back("max_vocab", cfg.max_vocab ? std::to_string(*cfg.max_vocab) : "all");
  p.emplace_back("gram_max_vocab", cfg.gram_max_vocab ? (*cfg.gram_max_vocab == 0 ? "all" : std::to_string(*cfg.gram_max_vocab))
                                                      : "evaluated vocabulary");
  p.emplace_back("vocab_loaded", std::to_string(model.emb.size()));
  p.emplace_back("duplicates_dropped", std::to_string(model.load_stats.duplicates_dropped));
  p.emplace_back("dim", std::to_string(model.emb.dim()));
  p.emplace_back("alphas", format_number(cfg.grid.start) + ":" + format_number(cfg.grid.end) + ":" +
                               format_number(cfg.grid.step));
  p.emplace_back("lookup", cfg.lookup == LookupMode::Exact ? "exact" : "fold");
  p.emplace_back("pre_normalize", cfg.pre_normalize ? "true" : "false");
  p.emplace_back("eig_floor", format_number(cfg.eig_floor));
  p.emplace_back("stopwords", cfg.stopwords ? cfg.stopwords->string() : "built-in english");
  for (const auto& spec : cfg.datasets) {
    p.emplace_back("dataset", std::string(task_name(spec.task)) + "=" + spec.path.string() +
                                  (spec.format.empty() ? "" : " (" + spec.format + ")"));
  }
  if (model.basis.source_dim() > 0) {
    p.emplace_back("lambda_max", format_number(model.basis.lambda.maxCoeff()));
    p.emplace_back("lambda_min", format_number(model.basis.lambda.minCoeff()));
  }
  p.emplace_back("timestamp", utc_timestamp());
  return report;
}

}  // namespace simorder
