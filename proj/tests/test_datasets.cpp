#include <doctest.h>

#include <sstream>

#include "simorder/datasets.hpp"
#include "simorder/error.hpp"
#include "test_util.hpp"

using namespace simorder;

namespace {
std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(SIMORDER_SOURCE_DIR) / "data" / name;
}
}  // namespace

TEST_CASE("canonical analogy file counts") {
  const auto ds = parse_analogy(data_file("questions-words.txt"));
  CHECK(ds.sections.size() == 14);
  CHECK(ds.count(AnalogyCategory::Semantic) == 8869);
  CHECK(ds.count(AnalogyCategory::Syntactic) == 10675);
  CHECK(ds.total() == 19544);
}

TEST_CASE("small analogy files") {
  std::istringstream one(": family\nboy girl brother sister\n");
  const auto ds = parse_analogy(one, "mini");
  REQUIRE(ds.sections.size() == 1);
  CHECK(ds.count(AnalogyCategory::Semantic) == 1);
  CHECK(ds.sections[0].questions[0][3] == "sister");
  CHECK(category_for_section("gram1-adjective-to-adverb") == AnalogyCategory::Syntactic);
  CHECK(category_for_section("capital-common-countries") == AnalogyCategory::Semantic);

  std::istringstream bad(": family\nboy girl brother\n");
  try {
    parse_analogy(bad, "bad");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where() == 2);
  }
  std::istringstream orphan("boy girl brother sister\n");
  CHECK_THROWS_AS(parse_analogy(orphan, "orphan"), ParseError);
}

TEST_CASE("word similarity files shipped in data/") {
  const auto simlex = parse_scored_pairs(data_file("simlex999-3col.txt"), PairFormat::Generic3Col);
  CHECK(simlex.pairs.size() == 999);
  const auto men = parse_scored_pairs(data_file("MEN_dataset_natural_form_full"), PairFormat::Men);
  CHECK(men.pairs.size() == 3000);
  CHECK(detect_pair_format(data_file("simlex999-3col.txt")) == PairFormat::Generic3Col);
}

TEST_CASE("SimLex tab layout picks the SimLex999 column") {
  testutil::TempDir tmp("ds");
  testutil::write_file(tmp / "SimLex-999.txt",
                       "word1\tword2\tPOS\tSimLex999\tconc(w1)\n"
                       "old\tnew\tA\t1.58\t2.72\n"
                       "smart\tintelligent\tA\t9.2\t1.75\n");
  CHECK(detect_pair_format(tmp / "SimLex-999.txt") == PairFormat::SimLex);
  const auto ds = parse_scored_pairs(tmp / "SimLex-999.txt", PairFormat::SimLex);
  REQUIRE(ds.pairs.size() == 2);
  CHECK(ds.pairs[1] == ScoredPair{"smart", "intelligent", 9.2});

  std::istringstream nocol("word1\tword2\tPOS\nold\tnew\tA\n");
  CHECK_THROWS_AS(parse_scored_pairs(nocol, "x", PairFormat::SimLex), ParseError);
}

TEST_CASE("generic and MEN lines") {
  std::istringstream g("# comment\ncat dog 7.5\nsun moon 3\n");
  const auto ds = parse_scored_pairs(g, "g", PairFormat::Generic3Col);
  CHECK(ds.pairs[0] == ScoredPair{"cat", "dog", 7.5});

  std::istringstream men("sun-n sunlight-n 50.0\nrun-v walk-v 30\n");
  const auto stripped = parse_scored_pairs(men, "men", PairFormat::Men, true);
  CHECK(stripped.pairs[0].word1 == "sun");
  CHECK(stripped.pairs[1].word2 == "walk");

  std::istringstream bad_score("a b x\nc d 1\n");
  CHECK_THROWS_AS(parse_scored_pairs(bad_score, "b", PairFormat::Generic3Col), ParseError);
  std::istringstream four("a b 1 2\nc d 1\n");
  CHECK_THROWS_AS(parse_scored_pairs(four, "f", PairFormat::Generic3Col), ParseError);
}

TEST_CASE("STS lines") {
  std::istringstream in(
      "main-captions\tMSRvid\t2012\t0001\t5.000\ta man sings\ta man sings\n"
      "main-news\theadlines\t2013\t0002\t1.2\tone\ttwo\textra\tfields\n");
  const auto ds = parse_sts(in, "sts", StsSplit::Test);
  REQUIRE(ds.items.size() == 2);
  CHECK(ds.items[0].gold == 5.0);
  CHECK(ds.items[0].sentence1 == ds.items[0].sentence2);
  CHECK(ds.items[1].sentence2 == "two");

  std::istringstream six("a\tb\t2012\t1\t3.0\tonly one\n");
  try {
    parse_sts(six, "six", StsSplit::Test);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.where() == 1);
  }
  std::istringstream range("a\tb\t2012\t1\t5.5\tx\ty\n");
  CHECK_THROWS_AS(parse_sts(range, "r", StsSplit::Test), ParseError);
}

TEST_CASE("re-serialization round trips") {
  const auto an = parse_analogy(data_file("questions-words.txt"));
  std::stringstream a;
  write_analogy(an, a);
  CHECK(parse_analogy(a, an.name) == an);

  const auto men = parse_scored_pairs(data_file("MEN_dataset_natural_form_full"), PairFormat::Men);
  std::stringstream m;
  write_scored_pairs(men, m);
  CHECK(parse_scored_pairs(m, men.name, PairFormat::Generic3Col) == men);

  StsDataset sts{"s", StsSplit::Dev, {{0.25, "A b.", "c, d"}, {4.8, "x", "y z"}}};
  std::stringstream s;
  write_sts(sts, s);
  CHECK(parse_sts(s, "s", StsSplit::Dev) == sts);
}
