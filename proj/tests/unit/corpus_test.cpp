#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include <json.hpp>

#include "simt/corpus.hpp"
#include "simt/error.hpp"
#include "simt/oracle.hpp"

namespace simt {
namespace {

std::vector<Link> links(const AlignmentSet& a) { return a.links(); }

TEST(Alignment, ParsesDiagonal) {
  const auto a = parseAlignment("0-0 1-1 2-2");
  EXPECT_EQ(links(a), (std::vector<Link>{{0, 0}, {1, 1}, {2, 2}}));
}

TEST(Alignment, ParsesManyToOneVerbatim) {
  const auto a = parseAlignment("0-0 1-0 2-2");
  EXPECT_EQ(a, (AlignmentSet{{0, 0}, {1, 0}, {2, 2}}));
  EXPECT_EQ(a.size(), 3u);
}

TEST(Alignment, MalformedPairIsCited) {
  try {
    parseAlignment("0-0 1-x");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("1-x"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parseAlignment("3"), ParseError);
  EXPECT_THROW(parseAlignment("-1-2"), ParseError);
  EXPECT_THROW(parseAlignment("1-2-3"), ParseError);
}

TEST(Alignment, EmptyLineIsEmptySet) {
  EXPECT_TRUE(parseAlignment("").empty());
  EXPECT_TRUE(parseAlignment("   ").empty());
}

TEST(Alignment, DuplicatesCollapse) {
  AlignmentSet a;
  EXPECT_TRUE(a.insert({1, 2}));
  EXPECT_FALSE(a.insert({1, 2}));
  EXPECT_EQ(a.size(), 1u);
  EXPECT_TRUE(a.contains({1, 2}));
  EXPECT_FALSE(a.contains({2, 1}));
}

TEST(Alignment, RangeCheck) {
  const AlignmentSet a{{0, 0}, {3, 1}};
  EXPECT_NO_THROW(a.checkRange(4, 2));
  EXPECT_THROW(a.checkRange(3, 2), InvalidArgument);
  EXPECT_THROW(a.checkRange(4, 1), InvalidArgument);
}

TEST(Alignment, RoundTripProperty) {
  std::mt19937_64 eng(11);
  for (int trial = 0; trial < 500; ++trial) {
    AlignmentSet a;
    const int n = std::uniform_int_distribution<int>(0, 30)(eng);
    for (int k = 0; k < n; ++k) {
      a.insert({std::uniform_int_distribution<std::size_t>(0, 40)(eng),
                std::uniform_int_distribution<std::size_t>(0, 40)(eng)});
    }
    EXPECT_EQ(parseAlignment(formatAlignment(a)), a);
  }
}

TEST(Vocabulary, ReservedIds) {
  Vocabulary v;
  EXPECT_EQ(v.size(), 2u);
  EXPECT_EQ(v.lookup("<unk>"), Vocabulary::kUnk);
  EXPECT_EQ(v.lookup("</s>"), Vocabulary::kEos);
  EXPECT_EQ(v.intern("a"), 2);
  EXPECT_EQ(v.intern("a"), 2);
  EXPECT_EQ(v.lookup("zzz"), Vocabulary::kUnk);
  EXPECT_EQ(v.text(2), "a");
}

TEST(Vocabulary, SaveLoad) {
  Vocabulary v;
  for (auto t : {"x", "y", "z"}) v.intern(t);
  const auto path = std::filesystem::temp_directory_path() / "simt_vocab_test.txt";
  v.save(path);
  EXPECT_EQ(Vocabulary::load(path), v);
  std::filesystem::remove(path);
}

TEST(Vocabulary, FromTokensRequiresReservedEntries) {
  EXPECT_THROW(Vocabulary::fromTokens({"a", "b"}), Error);
  EXPECT_NO_THROW(Vocabulary::fromTokens({"<unk>", "</s>", "a"}));
}

TEST(ParseParallel, LineCountMismatch) {
  Vocabulary s, t;
  try {
    parseParallel("a b\nc\n", "x\n", s, t);
    FAIL();
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find('2'), std::string::npos);
    EXPECT_NE(msg.find('1'), std::string::npos);
  }
}

TEST(ParseParallel, EmptyLineRejected) {
  Vocabulary s, t;
  EXPECT_THROW(parseParallel("a\n\n", "x\ny\n", s, t), ParseError);
}

TEST(ParseParallel, FrozenMapsUnknownToUnk) {
  Vocabulary s, t;
  parseParallel("a b\n", "x\n", s, t);
  const auto pairs = parseParallel("a q\n", "x w\n", s, t, VocabMode::Frozen);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].source, (std::vector<TokenId>{2, Vocabulary::kUnk}));
  EXPECT_EQ(pairs[0].target, (std::vector<TokenId>{2, Vocabulary::kUnk}));
  EXPECT_EQ(s.size(), 4u);
}

TEST(ParseParallel, AlignmentsAttachedAndRangeChecked) {
  Vocabulary s, t;
  auto pairs = parseParallel("a b\nc\n", "x y\nz\n", s, t);
  attachAlignments(pairs, "0-0 1-1\n0-0\n");
  ASSERT_TRUE(pairs[1].alignment.has_value());
  EXPECT_EQ(*pairs[0].alignment, (AlignmentSet{{0, 0}, {1, 1}}));
  EXPECT_THROW(attachAlignments(pairs, "0-0 2-1\n0-0\n"), ParseError);
  EXPECT_THROW(attachAlignments(pairs, "0-0\n"), ParseError);
}

TEST(SplitLines, TrailingNewlineAddsNoLine) {
  EXPECT_EQ(splitLines("a\nb\n").size(), 2u);
  EXPECT_EQ(splitLines("a\nb").size(), 2u);
  EXPECT_EQ(splitLines("a\r\nb\r\n")[0], "a");
}

class SyntheticFixture : public ::testing::Test {
 protected:
  SyntheticTaskConfig config(ReorderRule rule) {
    SyntheticTaskConfig c;
    c.reorderRule = rule;
    c.seed = 5;
    return c;
  }
  std::vector<TokenId> src(std::initializer_list<int> words) {
    std::vector<TokenId> ids;
    for (int w : words) ids.push_back(static_cast<TokenId>(w + 2));
    return ids;
  }
};

TEST_F(SyntheticFixture, MonotoneConstruction) {
  SyntheticTask task(config(ReorderRule::Monotone));
  const auto pair = task.makePair(src({5, 9, 3}));
  const std::vector<TokenId> expected{task.translate(7), task.translate(11), task.translate(5)};
  EXPECT_EQ(pair.target, expected);
  EXPECT_EQ(*pair.alignment, (AlignmentSet{{0, 0}, {1, 1}, {2, 2}}));
}

TEST_F(SyntheticFixture, FinalToSecondConstruction) {
  SyntheticTask task(config(ReorderRule::FinalToSecond));
  const auto pair = task.makePair(src({5, 9, 3}));
  const std::vector<TokenId> expected{task.translate(7), task.translate(5), task.translate(11)};
  EXPECT_EQ(pair.target, expected);
  EXPECT_EQ(*pair.alignment, (AlignmentSet{{0, 0}, {2, 1}, {1, 2}}));
}

TEST_F(SyntheticFixture, SameSeedSameCorpus) {
  const auto c = config(ReorderRule::FinalToSecond);
  const auto a = genSynthetic(c, 50);
  const auto b = genSynthetic(c, 50);
  ASSERT_EQ(a.pairs.size(), 50u);
  for (std::size_t k = 0; k < 50; ++k) {
    EXPECT_EQ(a.pairs[k].source, b.pairs[k].source);
    EXPECT_EQ(a.pairs[k].target, b.pairs[k].target);
    EXPECT_EQ(a.pairs[k].alignment, b.pairs[k].alignment);
  }
  EXPECT_EQ(a.sourceVocab, b.sourceVocab);
}

TEST_F(SyntheticFixture, SliceMatchesFullGeneration) {
  SyntheticTask task(config(ReorderRule::Monotone));
  const auto full = task.generate(30);
  const auto tail = task.generate(10, 20);
  for (std::size_t k = 0; k < 10; ++k) EXPECT_EQ(tail.pairs[k].source, full.pairs[20 + k].source);
}

TEST_F(SyntheticFixture, GoldAlignmentIsBijectiveAndLengthsInRange) {
  for (auto rule : {ReorderRule::Monotone, ReorderRule::FinalToSecond}) {
    SyntheticTask task(config(rule));
    const auto corpus = task.generate(300);
    for (const auto& p : corpus.pairs) {
      ASSERT_GE(p.source.size(), 5u);
      ASSERT_LE(p.source.size(), 15u);
      ASSERT_EQ(p.source.size(), p.target.size());
      std::vector<int> srcHits(p.source.size()), tgtHits(p.target.size());
      for (const auto& l : p.alignment->links()) {
        ++srcHits[l.src];
        ++tgtHits[l.tgt];
        EXPECT_EQ(p.target[l.tgt], task.translate(p.source[l.src]));
      }
      for (int h : srcHits) EXPECT_EQ(h, 1);
      for (int h : tgtHits) EXPECT_EQ(h, 1);
    }
  }
}

TEST_F(SyntheticFixture, ZeroPairsRejected) {
  EXPECT_THROW(genSynthetic(config(ReorderRule::Monotone), 0), InvalidArgument);
}

TEST(ReorderRule, NamesRoundTrip) {
  for (auto r : {ReorderRule::Monotone, ReorderRule::FinalToSecond}) EXPECT_EQ(parseReorderRule(toString(r)), r);
  EXPECT_THROW(parseReorderRule("reverse"), InvalidArgument);
}

TEST(WriteCorpus, FilesAndManifest) {
  SyntheticTaskConfig c;
  c.reorderRule = ReorderRule::FinalToSecond;
  const auto corpus = genSynthetic(c, 7);
  const auto dir = std::filesystem::temp_directory_path() / "simt_write_corpus";
  std::filesystem::create_directories(dir);
  const std::string prefix = (dir / "c").string();
  writeCorpus(corpus, prefix);
  for (auto ext : {".src", ".tgt", ".align", ".src.vocab", ".tgt.vocab", ".manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(prefix + ext)) << ext;
  }
  Vocabulary s, t;
  auto pairs = parseParallel(readFile(prefix + ".src"), readFile(prefix + ".tgt"), s, t);
  attachAlignments(pairs, readFile(prefix + ".align"));
  ASSERT_EQ(pairs.size(), 7u);
  for (std::size_t k = 0; k < 7; ++k) EXPECT_EQ(pairs[k].alignment, corpus.pairs[k].alignment);
  const auto manifest = nlohmann::json::parse(readFile(prefix + ".manifest.json"));
  EXPECT_EQ(manifest.at("pairs").get<std::size_t>(), 7u);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace simt
