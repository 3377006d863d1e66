#include "simorder/sts.hpp"

#include <fstream>

#include "simorder/error.hpp"
#include "simorder/stats.hpp"

namespace simorder {

namespace {

// Same content as data/stopwords_en.txt.
const std::vector<std::string>& default_stopwords() {
  static const std::vector<std::string> words = {
      "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're",
      "you've", "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his",
      "himself", "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself",
      "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "this",
      "that", "that'll", "these", "those", "am", "is", "are", "was", "were", "be",
      "been", "being", "have", "has", "had", "having", "do", "does", "did", "doing",
      "a", "an", "the", "and", "but", "if", "or", "because", "as", "until",
      "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
      "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
      "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
      "here", "there", "when", "where", "why", "how", "all", "any", "both", "each",
      "few", "more", "most", "other", "some", "such", "no", "nor", "not", "only",
      "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
      "just", "don", "don't", "should", "should've", "now", "d", "ll", "m", "o",
      "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn", "didn't",
      "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn", "isn't",
      "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't", "shouldn",
      "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn", "wouldn't",
  };
  return words;
}

// Non-ASCII bytes count as word characters so UTF-8 letters survive trimming.
bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

}  // namespace

StopwordList::StopwordList(const std::vector<std::string>& words) {
  for (const auto& w : words) {
    if (!w.empty()) words_.insert(ascii_lower(w));
  }
}

StopwordList StopwordList::english() { return StopwordList(default_stopwords()); }

StopwordList StopwordList::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && is_space(line.back())) line.pop_back();
    std::size_t start = 0;
    while (start < line.size() && is_space(line[start])) ++start;
    if (start == line.size() || line[start] == '#') continue;
    words.push_back(line.substr(start));
  }
  return StopwordList(words);
}

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    std::size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    std::size_t end = i;
    while (start < end && !is_word_char(sentence[start])) ++start;
    while (end > start && !is_word_char(sentence[end - 1])) --end;
    if (end > start) tokens.push_back(ascii_lower(sentence.substr(start, end - start)));
  }
  return tokens;
}

Centroid sentence_centroid(const EmbeddingMatrix& emb, const std::vector<std::string>& tokens,
                           const StopwordList& stop, LookupMode mode) {
  Centroid c;
  c.values = Vector::Zero(static_cast<Eigen::Index>(emb.dim()));
  for (const auto& tok : tokens) {
    if (stop.contains(tok)) continue;
    const auto id = lookup(emb, tok, mode);
    if (!id) continue;
    c.values += emb.row(*id).transpose();
    ++c.words_used;
  }
  if (c.words_used > 0) c.values /= static_cast<double>(c.words_used);
  return c;
}

std::vector<double> sts_scores(const EmbeddingMatrix& emb, const StsDataset& ds,
                               const StopwordList& stop, LookupMode mode,
                               std::size_t* zero_vector_items) {
  std::vector<double> scores(ds.items.size(), 0.0);
  std::size_t zeros = 0;
#pragma omp parallel for schedule(static) reduction(+ : zeros)
  for (std::size_t i = 0; i < ds.items.size(); ++i) {
    const auto& item = ds.items[i];
    const auto c1 = sentence_centroid(emb, tokenize(item.sentence1), stop, mode);
    const auto c2 = sentence_centroid(emb, tokenize(item.sentence2), stop, mode);
    const double n1 = c1.values.norm();
    const double n2 = c2.values.norm();
    if (c1.zero() || c2.zero() || n1 == 0.0 || n2 == 0.0) {
      ++zeros;
      continue;
    }
    scores[i] = c1.values.dot(c2.values) / (n1 * n2);
  }
  if (zero_vector_items) *zero_vector_items = zeros;
  return scores;
}

StsResult eval_sts(const EmbeddingMatrix& emb, const StsDataset& ds, const StopwordList& stop,
                   LookupMode mode) {
  if (ds.items.empty()) throw EvalError("STS dataset '" + ds.name + "' is empty");
  StsResult result;
  const auto model = sts_scores(emb, ds, stop, mode, &result.zero_vector_items);
  std::vector<double> gold;
  gold.reserve(ds.items.size());
  for (const auto& item : ds.items) gold.push_back(item.gold);
  result.items_scored = model.size();
  if (model.size() < 2) throw EvalError("STS dataset '" + ds.name + "' needs at least 2 items");
  try {
    result.pearson = pearson(model, gold);
  } catch (const UndefinedCorrelation&) {
    throw UndefinedCorrelation("STS on '" + ds.name +
                               "': zero variance in model or gold scores, correlation undefined");
  }
  return result;
}

}  // namespace simorder
