#include "simorder/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "simorder/error.hpp"
#include "simorder/report.hpp"
#include "simorder/sweep.hpp"

namespace simorder {

namespace {

struct ModelOptions {
  std::string in;
  std::string format = "vec";
  std::size_t max_vocab = 200000;  // 0: no cap
  std::optional<std::size_t> gram_max_vocab;
  bool pre_normalize = false;
  double eig_floor = kDefaultEigFloor;
  std::string basis;
};

struct DatasetOptions {
  std::vector<std::string> tasks;
  std::vector<std::string> datasets;
  std::vector<std::string> formats;
  std::string stopwords;
  std::string lookup = "fold";
};

void add_model_options(CLI::App* app, ModelOptions& m) {
  app->add_option("--in", m.in, "Embedding file")->required();
  app->add_option("--format", m.format, "vec | glove | bin")->check(CLI::IsMember({"vec", "glove", "bin"}));
  app->add_option("--max-vocab", m.max_vocab, "Keep the first N unique words (0 = all)");
  app->add_option("--gram-max-vocab", m.gram_max_vocab,
                  "Rows of the file used for X^T X (0 = whole file; default: the kept vocabulary)");
  app->add_flag("--pre-normalize", m.pre_normalize, "Length-normalize rows before the transform");
  app->add_option("--eig-floor", m.eig_floor, "Relative eigenvalue floor")->check(CLI::PositiveNumber);
  app->add_option("--basis", m.basis, "Eigenbasis cache file (read if present, written otherwise)");
}

void add_dataset_options(CLI::App* app, DatasetOptions& d) {
  app->add_option("--task", d.tasks, "analogy | wordsim | sts (repeatable)")
      ->required()
      ->check(CLI::IsMember({"analogy", "wordsim", "sts"}));
  app->add_option("--dataset", d.datasets, "Benchmark file (repeatable, paired with --task)")->required();
  app->add_option("--dataset-format", d.formats, "Word similarity layout: simlex | men | men-lemma | generic");
  app->add_option("--stopwords", d.stopwords, "Stopword file for sts");
  app->add_option("--lookup", d.lookup, "exact | fold")->check(CLI::IsMember({"exact", "fold"}));
}

SweepConfig make_config(const ModelOptions& m) {
  SweepConfig cfg;
  cfg.embeddings = m.in;
  cfg.format = *parse_format(m.format);
  if (m.max_vocab == 0) {
    cfg.max_vocab.reset();
  } else {
    cfg.max_vocab = m.max_vocab;
  }
  cfg.gram_max_vocab = m.gram_max_vocab;
  cfg.pre_normalize = m.pre_normalize;
  cfg.eig_floor = m.eig_floor;
  if (!m.basis.empty()) cfg.basis_cache = m.basis;
  return cfg;
}

void add_datasets(SweepConfig& cfg, const DatasetOptions& d) {
  if (d.tasks.size() != d.datasets.size() && d.tasks.size() != 1) {
    throw std::invalid_argument("give one --task for every --dataset (or a single --task for all)");
  }
  if (!d.formats.empty() && d.formats.size() != d.datasets.size() && d.formats.size() != 1) {
    throw std::invalid_argument("give one --dataset-format for every --dataset (or a single one for all)");
  }
  for (std::size_t i = 0; i < d.datasets.size(); ++i) {
    DatasetSpec spec;
    spec.task = *parse_task(d.tasks.size() == 1 ? d.tasks[0] : d.tasks[i]);
    spec.path = d.datasets[i];
    if (!d.formats.empty()) spec.format = d.formats.size() == 1 ? d.formats[0] : d.formats[i];
    cfg.datasets.push_back(std::move(spec));
  }
  cfg.lookup = *parse_lookup_mode(d.lookup);
  if (!d.stopwords.empty()) cfg.stopwords = d.stopwords;
}

std::string pct(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", 100.0 * v);
  return buf;
}

void print_errors(const EvalReport& report, std::ostream& err) {
  for (const auto& e : report.errors) err << "error: " << e << '\n';
}

bool has_error_record(const EvalReport& report) {
  for (const auto& r : report.records)
    if (r.is_error()) return true;
  return false;
}

int cmd_transform(const ModelOptions& m, double alpha, const std::string& out_path,
                  const std::string& out_format, std::ostream& out) {
  const auto cfg = make_config(m);
  const auto model = prepare_model(cfg);
  auto basis = std::make_shared<const EigenBasis>(model.basis);
  const auto t = make_transform(basis, alpha, m.eig_floor);
  const auto transformed = apply_transform(model.emb, t);
  const Format fmt = out_format.empty() ? cfg.format : *parse_format(out_format);
  save_embeddings(transformed, out_path, fmt);

  out << "vocabulary: " << model.emb.size() << " words, dim " << model.emb.dim() << '\n';
  if (model.load_stats.duplicates_dropped) out << "duplicates dropped: " << model.load_stats.duplicates_dropped << '\n';
  out << "lambda_max: " << basis->lambda.maxCoeff() << '\n';
  out << "lambda_min: " << basis->lambda.minCoeff() << '\n';
  out << "clamped: " << t.clamped_count << " (negative round-off zeroed: " << basis->clamped_negative << ")\n";
  out << "alpha " << alpha << " (similarity order " << t.similarity_order() << ") written to " << out_path << '\n';
  return kExitOk;
}

int cmd_eval(const ModelOptions& m, const DatasetOptions& d, double alpha, std::ostream& out,
             std::ostream& err) {
  auto cfg = make_config(m);
  add_datasets(cfg, d);
  std::vector<LoadedDataset> datasets;
  for (const auto& spec : cfg.datasets) datasets.push_back(load_dataset(spec));
  EvalSettings settings;
  settings.lookup = cfg.lookup;
  if (cfg.stopwords) settings.stopwords = StopwordList::from_file(*cfg.stopwords);
  const auto model = prepare_model(cfg);
  const auto report = run_sweep(model.emb, model.basis, {alpha}, datasets, settings, cfg.eig_floor);

  for (const auto& r : report.records) {
    if (r.is_error()) continue;
    out << r.task << ' ' << r.dataset << ' ' << r.metric << ": " << pct(r.value) << "  (covered " << r.covered
        << ", skipped " << r.skipped << ")\n";
  }
  print_errors(report, err);
  return has_error_record(report) ? kExitEval : kExitOk;
}

int cmd_sweep(const ModelOptions& m, const DatasetOptions& d, const std::string& alphas,
              const std::string& report_path, std::ostream& out, std::ostream& err) {
  auto cfg = make_config(m);
  add_datasets(cfg, d);
  cfg.grid = AlphaGrid::parse(alphas);
  const auto report = run_sweep(cfg);

  if (!report_path.empty()) {
    auto open = [](const std::string& p) {
      std::ofstream f(p);
      if (!f) throw IoError("cannot open " + p + " for writing");
      return f;
    };
    auto csv = open(report_path);
    write_report_csv(report.records, csv);
    auto md = open(report_path + ".md");
    write_markdown(report.records, md, &report);
    auto json = open(report_path + ".provenance.json");
    write_provenance_json(report, json);
    if (!csv || !md || !json) throw IoError("write failed for report " + report_path);
  }
  write_markdown(report.records, out, &report);
  print_errors(report, err);
  return has_error_record(report) ? kExitEval : kExitOk;
}

int cmd_report(const std::string& report_path, const std::string& format, const std::string& out_path,
               std::ostream& out) {
  const auto records = read_report_csv(std::filesystem::path(report_path));
  std::ofstream file;
  std::ostream* dest = &out;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw IoError("cannot open " + out_path + " for writing");
    dest = &file;
  }
  if (format == "csv") {
    write_series_csv(records, *dest);
  } else {
    write_markdown(records, *dest);
  }
  if (!*dest) throw IoError("write failed");
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-order transform and evaluation of word embeddings", "simorder"};
  app.require_subcommand(1);

  ModelOptions tm;
  double t_alpha = 0.0;
  std::string t_out, t_out_format;
  auto* transform = app.add_subcommand("transform", "Apply W_alpha and write the transformed embeddings");
  add_model_options(transform, tm);
  transform->add_option("--alpha", t_alpha, "Exponent alpha (similarity order 2*alpha+1)")->required();
  transform->add_option("--out", t_out, "Output file")->required();
  transform->add_option("--out-format", t_out_format, "vec | glove | bin (default: input format)")
      ->check(CLI::IsMember({"vec", "glove", "bin"}));

  ModelOptions em;
  DatasetOptions ed;
  double e_alpha = 0.0;
  auto* eval = app.add_subcommand("eval", "Evaluate at one alpha");
  add_model_options(eval, em);
  add_dataset_options(eval, ed);
  eval->add_option("--alpha", e_alpha, "Exponent alpha (default 0)");

  ModelOptions sm;
  DatasetOptions sd;
  std::string s_alphas = "-1:1:0.05", s_report;
  auto* sweep = app.add_subcommand("sweep", "Evaluate over a grid of alphas");
  add_model_options(sweep, sm);
  add_dataset_options(sweep, sd);
  sweep->add_option("--alphas", s_alphas, "START:END:STEP");
  sweep->add_option("--report", s_report, "Write CSV here, plus .md and .provenance.json next to it");

  std::string r_report, r_format = "markdown", r_out;
  auto* report = app.add_subcommand("report", "Render a sweep CSV as tables or plot-ready series");
  report->add_option("--report", r_report, "Sweep CSV")->required();
  report->add_option("--format", r_format, "markdown | csv")->check(CLI::IsMember({"markdown", "csv"}));
  report->add_option("--out", r_out, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (*transform) return cmd_transform(tm, t_alpha, t_out, t_out_format, out);
    if (*eval) return cmd_eval(em, ed, e_alpha, out, err);
    if (*sweep) return cmd_sweep(sm, sd, s_alphas, s_report, out, err);
    if (*report) return cmd_report(r_report, r_format, r_out, out);
  } catch (const NonConvergence& e) {
    err << "error: " << e.what() << '\n';
    return kExitEval;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitEval;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace simorder
