#include "pte/corpus.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/temp_files.hpp"

namespace {

using namespace pte;
using pte::testing::TempDir;
using pte::testing::write_file;

std::vector<std::vector<std::string>> docs_of(std::initializer_list<const char*> lines) {
  std::vector<std::vector<std::string>> docs;
  for (const char* line : lines) docs.push_back(tokenize(line));
  return docs;
}

TEST(Vocabulary, CountsAndDenseIds) {
  auto vocab = build_vocabulary(docs_of({"a b a", "b c"}), 1);
  ASSERT_EQ(vocab.size(), 3u);
  EXPECT_EQ(vocab.counts[*vocab.lookup("a")], 2u);
  EXPECT_EQ(vocab.counts[*vocab.lookup("b")], 2u);
  EXPECT_EQ(vocab.counts[*vocab.lookup("c")], 1u);
  // token_to_id and id_to_token are exact inverses
  for (std::size_t i = 0; i < vocab.size(); ++i)
    EXPECT_EQ(*vocab.lookup(vocab.id_to_token[i]), i);
}

TEST(Vocabulary, MinCountDropsRareTokens) {
  auto vocab = build_vocabulary(docs_of({"a b a", "b c"}), 2);
  ASSERT_EQ(vocab.size(), 2u);
  EXPECT_TRUE(vocab.lookup("a").has_value());
  EXPECT_TRUE(vocab.lookup("b").has_value());
  EXPECT_FALSE(vocab.lookup("c").has_value());
}

TEST(Vocabulary, EmptyCorpusFails) {
  EXPECT_THROW(build_vocabulary({}, 1), std::runtime_error);
  EXPECT_THROW(build_vocabulary(docs_of({"a"}), 2), std::runtime_error);
  EXPECT_THROW(build_vocabulary(docs_of({"a"}), 0), std::invalid_argument);
}

TEST(Vocabulary, CountSumEqualsSurvivingTokens) {
  std::mt19937 gen(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<std::string>> docs(1 + gen() % 5);
    std::size_t total = 0;
    for (auto& doc : docs) {
      std::size_t len = gen() % 30;
      for (std::size_t i = 0; i < len; ++i)
        doc.push_back(std::string(1, static_cast<char>('a' + gen() % 6)));
      total += len;
    }
    if (total == 0) continue;
    auto vocab = build_vocabulary(docs, 1);
    std::uint64_t sum = 0;
    for (auto c : vocab.counts) sum += c;
    EXPECT_EQ(sum, total);
  }
}

TEST(Corpus, LoadWithoutLabels) {
  TempDir dir;
  write_file(dir.file("docs.txt"), "a b\nc d\n");
  auto vocab = build_vocabulary(docs_of({"a b", "c d"}), 1);
  auto corpus = load_corpus(dir.file("docs.txt"), std::nullopt, vocab);
  ASSERT_EQ(corpus.documents.size(), 2u);
  EXPECT_EQ(corpus.labeled_count(), 0u);
  EXPECT_EQ(corpus.labels[0], kNoLabel);
  EXPECT_EQ(corpus.token_count(), 4u);
}

TEST(Corpus, PartialLabels) {
  TempDir dir;
  write_file(dir.file("docs.txt"), "a b\nc d\n");
  write_file(dir.file("labels.tsv"), "0\tpos\n");
  auto vocab = build_vocabulary(docs_of({"a b", "c d"}), 1);
  auto corpus = load_corpus(dir.file("docs.txt"), dir.file("labels.tsv"), vocab);
  ASSERT_EQ(corpus.label_names.size(), 1u);
  EXPECT_EQ(corpus.label_names[0], "pos");
  EXPECT_EQ(corpus.labels[0], 0);
  EXPECT_EQ(corpus.labels[1], kNoLabel);
}

TEST(Corpus, LabelOutOfRangeFails) {
  TempDir dir;
  write_file(dir.file("docs.txt"), "a b\nc d\n");
  write_file(dir.file("labels.tsv"), "5\tpos\n");
  auto vocab = build_vocabulary(docs_of({"a b", "c d"}), 1);
  EXPECT_THROW(load_corpus(dir.file("docs.txt"), dir.file("labels.tsv"), vocab),
               std::runtime_error);
}

TEST(Corpus, MalformedLabelRecordFails) {
  TempDir dir;
  write_file(dir.file("docs.txt"), "a b\n");
  auto vocab = build_vocabulary(docs_of({"a b"}), 1);
  for (const char* bad : {"nolabel\n", "0 pos\n", "x\tpos\n", "0\t\n"}) {
    write_file(dir.file("labels.tsv"), bad);
    EXPECT_THROW(load_corpus(dir.file("docs.txt"), dir.file("labels.tsv"), vocab),
                 std::runtime_error)
        << "record: " << bad;
  }
}

TEST(Corpus, OovDropKeepsOrder) {
  auto vocab = build_vocabulary(docs_of({"a b a", "b c"}), 2);  // c dropped
  auto ids = encode_document(tokenize("c a c b c a"), vocab);
  std::vector<WordId> expected{*vocab.lookup("a"), *vocab.lookup("b"), *vocab.lookup("a")};
  EXPECT_EQ(ids, expected);
}

TEST(Corpus, EncodeDecodeRoundTrip) {
  std::mt19937 gen(21);
  auto vocab = build_vocabulary(docs_of({"a b c d e f"}), 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::string> tokens;
    std::size_t len = gen() % 40;
    for (std::size_t i = 0; i < len; ++i) tokens.push_back(vocab.id_to_token[gen() % vocab.size()]);
    auto ids = encode_document(tokens, vocab);
    ASSERT_EQ(ids.size(), tokens.size());
    std::vector<std::string> decoded;
    for (auto id : ids) decoded.push_back(vocab.id_to_token[id]);
    EXPECT_EQ(decoded, tokens);
  }
}

TEST(Corpus, VocabularyFileRoundTrip) {
  TempDir dir;
  auto vocab = build_vocabulary(docs_of({"alpha beta alpha", "gamma beta"}), 1);
  save_vocabulary(vocab, dir.file("vocab.tsv"));
  auto loaded = load_vocabulary(dir.file("vocab.tsv"));
  EXPECT_EQ(loaded.id_to_token, vocab.id_to_token);
  EXPECT_EQ(loaded.counts, vocab.counts);
}

TEST(Corpus, WhitespaceTokenizationNoNormalization) {
  auto tokens = tokenize("  Foo\tBAR  baz\r");
  ASSERT_EQ(tokens.size(), 3u);
  EXPECT_EQ(tokens[0], "Foo");  // no case folding
  EXPECT_EQ(tokens[1], "BAR");
  EXPECT_EQ(tokens[2], "baz");
}

}  // namespace
