#include "simorder/eval.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

#include "simorder/error.hpp"
#include "simorder/stats.hpp"

namespace simorder {

namespace {

constexpr Eigen::Index kQueryTile = 64;
constexpr Eigen::Index kVocabTile = 8192;

}  // namespace

std::vector<RowId> analogy_batch(const Matrix& normalized, std::span<const AnalogyQuery> queries) {
  const Eigen::Index vocab = normalized.rows();
  const Eigen::Index dim = normalized.cols();
  const auto nq = static_cast<Eigen::Index>(queries.size());
  for (const auto& q : queries) {
    if (std::max({q.a, q.b, q.c}) >= static_cast<RowId>(vocab)) {
      throw std::out_of_range("analogy query row id out of range");
    }
  }
  std::vector<RowId> answers(queries.size(), kNoAnswer);

#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index q0 = 0; q0 < nq; q0 += kQueryTile) {
    const Eigen::Index len = std::min(kQueryTile, nq - q0);
    Matrix targets(len, dim);
    for (Eigen::Index k = 0; k < len; ++k) {
      const auto& q = queries[static_cast<std::size_t>(q0 + k)];
      targets.row(k) = normalized.row(static_cast<Eigen::Index>(q.b)) -
                       normalized.row(static_cast<Eigen::Index>(q.a)) +
                       normalized.row(static_cast<Eigen::Index>(q.c));
    }
    std::vector<double> best(static_cast<std::size_t>(len), -std::numeric_limits<double>::infinity());
    std::vector<RowId> arg(static_cast<std::size_t>(len), kNoAnswer);
    Matrix scores;
    for (Eigen::Index v0 = 0; v0 < vocab; v0 += kVocabTile) {
      const Eigen::Index vlen = std::min(kVocabTile, vocab - v0);
      scores.noalias() = targets * normalized.middleRows(v0, vlen).transpose();
      for (Eigen::Index k = 0; k < len; ++k) {
        const auto& q = queries[static_cast<std::size_t>(q0 + k)];
        const auto kk = static_cast<std::size_t>(k);
        for (Eigen::Index w = 0; w < vlen; ++w) {
          const double s = scores(k, w);
          if (s > best[kk]) {
            const auto id = static_cast<RowId>(v0 + w);
            if (id == q.a || id == q.b || id == q.c) continue;
            best[kk] = s;
            arg[kk] = id;
          }
        }
      }
    }
    std::copy(arg.begin(), arg.end(), answers.begin() + q0);
  }
  return answers;
}

RowId analogy_query(const EmbeddingMatrix& normalized, RowId a, RowId b, RowId c) {
  const AnalogyQuery q{a, b, c};
  const auto answer = analogy_batch(normalized.data(), std::span(&q, 1)).front();
  if (answer == kNoAnswer) throw std::invalid_argument("analogy query has no candidate word");
  return answer;
}

AnalogyResult eval_analogy_normalized(const EmbeddingMatrix& normalized, const AnalogyDataset& ds,
                                      LookupMode mode) {
  AnalogyResult result;
  std::vector<AnalogyQuery> queries;
  std::vector<RowId> expected;
  std::vector<std::size_t> query_section;

  for (std::size_t s = 0; s < ds.sections.size(); ++s) {
    const auto& section = ds.sections[s];
    result.sections.push_back({section.name, section.category, {}});
    auto& counts = result.sections.back().counts;
    for (const auto& question : section.questions) {
      std::array<std::optional<RowId>, 4> ids;
      for (std::size_t k = 0; k < 4; ++k) ids[k] = lookup(normalized, question[k], mode);
      if (!ids[0] || !ids[1] || !ids[2] || !ids[3]) {
        ++counts.skipped;
        continue;
      }
      ++counts.answered;
      queries.push_back({*ids[0], *ids[1], *ids[2]});
      expected.push_back(*ids[3]);
      query_section.push_back(s);
    }
  }

  const auto answers = analogy_batch(normalized.data(), queries);
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (answers[i] == expected[i]) ++result.sections[query_section[i]].counts.correct;
  }

  for (const auto& sec : result.sections) {
    auto& total = sec.category == AnalogyCategory::Syntactic ? result.syntactic : result.semantic;
    total.correct += sec.counts.correct;
    total.answered += sec.counts.answered;
    total.skipped += sec.counts.skipped;
  }
  const auto all = result.overall();
  if (all.answered == 0) {
    result.warnings.push_back("no analogy question answered: all " + std::to_string(all.skipped) +
                              " questions contain out-of-vocabulary words");
  }
  return result;
}

AnalogyResult eval_analogy(const EmbeddingMatrix& emb, const AnalogyDataset& ds, LookupMode mode) {
  const auto normalized = normalize_rows(emb);
  return eval_analogy_normalized(normalized.emb, ds, mode);
}

WordSimResult eval_wordsim(const EmbeddingMatrix& emb, const ScoredPairDataset& ds, LookupMode mode) {
  WordSimResult result;
  std::vector<double> model;
  std::vector<double> gold;
  for (const auto& pair : ds.pairs) {
    const auto i = lookup(emb, pair.word1, mode);
    const auto j = lookup(emb, pair.word2, mode);
    if (!i || !j) {
      ++result.skipped;
      continue;
    }
    ++result.covered;
    const auto xi = emb.row(*i);
    const auto xj = emb.row(*j);
    const double ni = xi.norm();
    const double nj = xj.norm();
    model.push_back(ni == 0.0 || nj == 0.0 ? 0.0 : xi.dot(xj) / (ni * nj));
    gold.push_back(pair.gold);
  }
  if (result.covered < 2) {
    throw EvalError("word similarity on '" + ds.name + "' covers " + std::to_string(result.covered) +
                    " pairs, need at least 2");
  }
  result.spearman = spearman(model, gold);
  return result;
}

}  // namespace simorder
