#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support/synthetic.hpp"
#include "topex/corpus.hpp"
#include "topex/csv.hpp"
#include "topex/error.hpp"

namespace topex {
namespace {

PreprocessConfig no_stopwords(std::size_t min_len = 3) {
  PreprocessConfig cfg;
  cfg.min_token_length = min_len;
  return cfg;
}

TEST(Csv, QuotedFieldsAndEmbeddedNewlines) {
  const auto rows = csv::parse("a,b\r\n\"x, \"\"y\"\"\",\"line1\nline2\"\n");
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][0], "x, \"y\"");
  EXPECT_EQ(rows[1][1], "line1\nline2");
}

TEST(Csv, UnterminatedQuoteIsAnError) { EXPECT_THROW(csv::parse("a,b\n\"oops,1\n"), CorpusError); }

TEST(Csv, EscapeRoundTrips) {
  std::mt19937_64 rng(3);
  const std::string alphabet = "ab,\"\r\n ";
  for (int trial = 0; trial < 200; ++trial) {
    csv::Row row;
    for (int f = 0; f < 3; ++f) {
      std::string field;
      const auto len = rng() % 6;
      for (std::size_t i = 0; i < len; ++i) field.push_back(alphabet[rng() % alphabet.size()]);
      row.push_back(field);
    }
    std::ostringstream out;
    csv::write_row(out, row);
    const auto parsed = csv::parse(out.str());
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0], row);
  }
}

TEST(Ingest, SingleRow) {
  std::istringstream in("title,body\nA,x y\n");
  const auto docs = ingest(in);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0], (RawDocument{0, "A", "x y"}));
}

TEST(Ingest, IdsFollowRowOrder) {
  std::istringstream in(testing::make_abstract_csv(322, 20, 1));
  const auto docs = ingest(in);
  ASSERT_EQ(docs.size(), 322u);
  for (DocId d = 0; d < docs.size(); ++d) EXPECT_EQ(docs[d].doc_id, d);
  EXPECT_EQ(docs.back().doc_id, 321u);
}

TEST(Ingest, MissingBodyNamesTheRow) {
  std::istringstream in("title,body\nA,ok\nB\nC,fine\n");
  try {
    ingest(in);
    FAIL() << "expected CorpusError";
  } catch (const CorpusError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
}

TEST(Ingest, EmptySource) {
  std::istringstream empty("");
  try {
    ingest(empty);
    FAIL();
  } catch (const CorpusError& e) {
    EXPECT_STREQ(e.what(), "empty corpus");
  }
  std::istringstream header_only("title,body\n");
  EXPECT_THROW(ingest(header_only), CorpusError);
}

TEST(Ingest, CustomColumnsAndExtraColumns) {
  std::istringstream in("id,name,abstract\n7,Paper,some text\n");
  const auto docs = ingest(in, {"name", "abstract"});
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].title, "Paper");
  EXPECT_EQ(docs[0].body, "some text");
  std::istringstream bad("id,name\n1,x\n");
  EXPECT_THROW(ingest(bad, {"name", "abstract"}), CorpusError);
}

TEST(Ingest, BlankTitleRejected) {
  std::istringstream in("title,body\n\"  \",text\n");
  EXPECT_THROW(ingest(in), CorpusError);
}

TEST(Tokenize, SplitsLowercasesAndDropsShortTokens) {
  EXPECT_EQ(tokenize("Data, data; SETS!", no_stopwords()), (TokenList{"data", "data", "sets"}));
}

TEST(Tokenize, AllStopwords) {
  auto cfg = no_stopwords(1);
  cfg.stopwords = {"a", "an", "the"};
  EXPECT_TRUE(tokenize("a an the", cfg).empty());
}

TEST(Tokenize, EmptyBody) { EXPECT_TRUE(tokenize(RawDocument{0, "t", ""}, no_stopwords()).empty()); }

TEST(Tokenize, DigitsAreAlphanumeric) {
  EXPECT_EQ(tokenize("3D-views in 2014", no_stopwords(2)), (TokenList{"3d", "views", "in", "2014"}));
}

TEST(Tokenize, IdempotentOnJoinedTokens) {
  std::mt19937_64 rng(11);
  auto cfg = no_stopwords(3);
  cfg.stopwords = {"the", "and"};
  for (int trial = 0; trial < 200; ++trial) {
    TokenList tokens;
    const auto n = rng() % 12;
    for (std::size_t i = 0; i < n; ++i) {
      std::string t;
      const auto len = 3 + rng() % 6;
      for (std::size_t c = 0; c < len; ++c) t.push_back(static_cast<char>('a' + rng() % 26));
      if (!cfg.stopwords.contains(t)) tokens.push_back(t);
    }
    std::string joined;
    for (const auto& t : tokens) joined += t + " ";
    EXPECT_EQ(tokenize(joined, cfg), tokens);
  }
}

TEST(Vocabulary, SortedWithDocumentFrequency) {
  const auto vocab = build_vocabulary({{"b", "a"}, {"a"}});
  EXPECT_EQ(vocab.terms(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(vocab.doc_freq(vocab.id("a")), 2u);
  EXPECT_EQ(vocab.doc_freq(vocab.id("b")), 1u);
}

TEST(Vocabulary, EmptyAndRepeatedTokens) {
  EXPECT_TRUE(build_vocabulary({{}}).empty());
  const auto vocab = build_vocabulary({{"x", "x", "x"}});
  EXPECT_EQ(vocab.doc_freq(vocab.id("x")), 1u);
  EXPECT_THROW(vocab.id("y"), std::out_of_range);
}

TEST(Prune, RemovesUbiquitousTerm) {
  const std::vector<TokenList> docs = {{"common", "a1"}, {"common"}, {"common", "b1"}, {"common"}};
  const auto r = prune_high_frequency(docs, 0.5);
  EXPECT_TRUE(r.removed_terms.contains("common"));
  EXPECT_FALSE(r.corpus.vocabulary.contains("common"));
  EXPECT_TRUE(r.corpus.vocabulary.contains("a1"));  // 0.25 <= 0.5
  EXPECT_EQ(r.corpus.vocabulary.terms(), (std::vector<std::string>{"a1", "b1"}));
  EXPECT_EQ(r.corpus.docs[0], (std::vector<TermId>{0}));
  EXPECT_EQ(r.corpus.docs[2], (std::vector<TermId>{1}));
}

TEST(Prune, EmptiedDocumentsAreKept) {
  const auto r = prune_high_frequency({{"x"}, {"x", "y"}}, 0.5);
  ASSERT_EQ(r.corpus.num_docs(), 2u);
  EXPECT_TRUE(r.corpus.is_empty(0));
  EXPECT_EQ(r.corpus.num_nonempty(), 1u);
}

TEST(Prune, RejectsBadThresholdAndEmptyInput) {
  EXPECT_THROW(prune_high_frequency({{"a"}}, 0.0), ConfigError);
  EXPECT_THROW(prune_high_frequency({{"a"}}, 1.5), ConfigError);
  EXPECT_THROW(prune_high_frequency({}, 0.5), CorpusError);
}

TEST(Prune, AbstractCorpusLosesDataAndVisualization) {
  std::istringstream in(testing::make_abstract_csv(322, 20, 7));
  const auto raw = ingest(in);
  PreprocessConfig cfg;
  cfg.stopwords = default_stopwords();
  cfg.df_ratio_threshold = 0.5;
  const auto r = preprocess(raw, cfg);
  EXPECT_TRUE(r.removed_terms.contains("data"));
  EXPECT_TRUE(r.removed_terms.contains("visualization"));
  EXPECT_EQ(r.corpus.titles.size(), 322u);
}

class PruneProperties : public ::testing::TestWithParam<std::uint64_t> {};

TEST_P(PruneProperties, MonotoneAndBounded) {
  std::mt19937_64 rng(GetParam());
  std::vector<TokenList> docs(5 + rng() % 20);
  for (auto& doc : docs) {
    const auto n = rng() % 15;
    for (std::size_t i = 0; i < n; ++i) doc.push_back("w" + std::to_string(rng() % 12));
  }
  const double t1 = 0.05 + 0.95 * static_cast<double>(rng() % 1000) / 1000.0;
  const double t2 = std::min(1.0, t1 + 0.9 * static_cast<double>(rng() % 1000) / 1000.0);
  const auto r1 = prune_high_frequency(docs, t1);
  const auto r2 = prune_high_frequency(docs, t2);
  for (const auto& term : r2.removed_terms) EXPECT_TRUE(r1.removed_terms.contains(term)) << term;

  const auto& vocab = r1.corpus.vocabulary;
  for (TermId id = 0; id < vocab.size(); ++id) {
    EXPECT_GE(vocab.doc_freq(id), 1u);
    EXPECT_LE(static_cast<double>(vocab.doc_freq(id)) / static_cast<double>(docs.size()), t1);
  }
  for (const auto& doc : r1.corpus.docs)
    for (const auto id : doc) EXPECT_LT(id, vocab.size());

  // Determinism.
  EXPECT_EQ(prune_high_frequency(docs, t1).corpus, r1.corpus);
}

INSTANTIATE_TEST_SUITE_P(Seeds, PruneProperties, ::testing::Range<std::uint64_t>(0, 50));

TEST(Config, KeyValueParsing) {
  std::istringstream in("# comment\n title_column = name \n\ndf_ratio_threshold=0.4\n");
  const auto kv = read_key_values(in);
  EXPECT_EQ(kv.at("title_column"), "name");
  EXPECT_EQ(kv.at("df_ratio_threshold"), "0.4");
  std::istringstream bad("no equals sign\n");
  EXPECT_THROW(read_key_values(bad), ConfigError);
}

TEST(Config, ValidateThreshold) {
  PreprocessConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.df_ratio_threshold = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.df_ratio_threshold = 1.0;
  cfg.min_token_length = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

}  // namespace
}  // namespace topex
