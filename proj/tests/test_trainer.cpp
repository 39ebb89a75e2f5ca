#include "pte/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pte/corpus.hpp"
#include "pte/embedding.hpp"
#include "pte/textnet.hpp"
#include "support/gradient_check.hpp"
#include "support/temp_files.hpp"

namespace {

using namespace pte;

// Fixed 20-edge word-doc network: 4 docs x 5 words with weights 1..3.
BipartiteNetwork twenty_edge_network() {
  BipartiteNetwork net;
  net.kind = NetworkKind::word_doc;
  net.word_count = 5;
  net.source_count = 4;
  for (std::uint32_t d = 0; d < 4; ++d)
    for (std::uint32_t w = 0; w < 5; ++w)
      net.edges.push_back({d, w, 1.0 + static_cast<double>((d + w) % 3)});
  return net;
}

HeterogeneousTextNetwork wd_hetnet(BipartiteNetwork net) {
  HeterogeneousTextNetwork hetnet;
  hetnet.word_count = net.word_count;
  hetnet.wd = std::move(net);
  return hetnet;
}

TEST(Initialize, RangeBoundAndDeterminism) {
  VertexCounts counts{50, 50, 10, 2};
  auto a = initialize_tables(100, counts, 9);
  auto b = initialize_tables(100, counts, 9);
  for (const auto* t : {&a.word_target, &a.word_context, &a.doc, &a.label})
    for (Real x : t->data) EXPECT_LE(std::abs(x), 0.005f);
  EXPECT_EQ(a.word_target.data, b.word_target.data);
  EXPECT_EQ(a.label.data, b.label.data);
  auto c = initialize_tables(100, counts, 10);
  EXPECT_NE(a.word_target.data, c.word_target.data);
}

TEST(Initialize, EntryMeanNearZero) {
  auto t = initialize_tables(100, VertexCounts{10000, 0, 0, 0}, 123);
  double mean = 0;
  for (Real x : t.word_target.data) mean += x;
  mean /= static_cast<double>(t.word_target.data.size());  // 1e6 entries
  EXPECT_LT(std::abs(mean), 1e-4);
}

TEST(RateSchedule, NonIncreasingAndFloored) {
  const float rho0 = 0.025f;
  float prev = learning_rate(rho0, 0, 1000);
  EXPECT_FLOAT_EQ(prev, rho0);
  for (std::uint64_t t = 1; t <= 1000; ++t) {
    float r = learning_rate(rho0, t, 1000);
    EXPECT_LE(r, prev);
    EXPECT_GT(r, 0.0f);
    prev = r;
  }
  EXPECT_FLOAT_EQ(learning_rate(rho0, 1000, 1000), rho0 * 1e-4f);
  EXPECT_FLOAT_EQ(learning_rate(rho0, 999999, 1000), rho0 * 1e-4f);
}

TEST(Sigmoid, TableTracksExactForm) {
  Sigmoid table(false), exact(true);
  EXPECT_FLOAT_EQ(table(10.0f), 1.0f);
  EXPECT_FLOAT_EQ(table(-10.0f), 0.0f);
  EXPECT_NEAR(exact(0.0f), 0.5, 1e-7);
  for (float x = -5.9f; x < 6.0f; x += 0.37f) EXPECT_NEAR(table(x), exact(x), 0.01f);
}

TEST(EdgeStep, ZeroTablesAreAFixedPoint) {
  EmbeddingTables tables;
  tables.word_target.resize(4, 3);
  tables.doc.resize(2, 3);
  Sigmoid sigmoid(true);
  std::vector<Real> grad_buf;
  std::vector<std::uint32_t> negs{1, 2};
  edge_step_with_negatives(tables, NetworkKind::word_doc, 0, 0, negs, 0.5f, sigmoid, grad_buf);
  for (Real x : tables.word_target.data) EXPECT_EQ(x, 0.0f);
  for (Real x : tables.doc.data) EXPECT_EQ(x, 0.0f);
}

TEST(EdgeStep, GradientsMatchFiniteDifferences) {
  EXPECT_LT(pte::testing::max_gradient_error(40, 2026), 1e-4);
}

TEST(EdgeStep, SinglePositiveEdgeConvergesMonotonically) {
  EmbeddingTables tables;
  tables.word_target.resize(1, 4);
  tables.doc.resize(1, 4);
  Rng rng(3);
  for (auto& x : tables.word_target.data) x = static_cast<Real>(uniform_unit(rng) * 0.1 - 0.05);
  for (auto& x : tables.doc.data) x = static_cast<Real>(uniform_unit(rng) * 0.1 - 0.05);
  Sigmoid sigmoid(true);
  std::vector<Real> grad_buf;
  auto prob = [&] {
    double x = 0;
    for (std::size_t c = 0; c < 4; ++c)
      x += static_cast<double>(tables.word_target.row(0)[c]) * tables.doc.row(0)[c];
    return 1.0 / (1.0 + std::exp(-x));
  };
  double prev = prob();
  for (int step = 0; step < 500; ++step) {
    edge_step_with_negatives(tables, NetworkKind::word_doc, 0, 0, {}, 0.1f, sigmoid, grad_buf);
    double p = prob();
    EXPECT_GE(p, prev - 1e-12);
    prev = p;
  }
  EXPECT_GT(prev, 0.9);
}

TEST(EdgeStep, PerCoordinateGradientsAreClipped) {
  EXPECT_FLOAT_EQ(clip_gradient(-7.5f), -5.0f);
  EXPECT_FLOAT_EQ(clip_gradient(12.0f), 5.0f);
  EXPECT_FLOAT_EQ(clip_gradient(3.25f), 3.25f);

  // A huge source coordinate would give a word-row gradient of ~50 per
  // coordinate; the applied delta must stay at rate * 5.
  EmbeddingTables tables;
  tables.word_target.resize(1, 2);
  tables.doc.resize(1, 2);
  tables.doc.row(0)[0] = 100.0f;
  tables.word_target.row(0)[0] = -1.0f;  // sigmoid(-100) ~ 0, so g ~ +1
  Sigmoid sigmoid(true);
  std::vector<Real> grad_buf;
  const float rate = 0.5f;
  edge_step_with_negatives(tables, NetworkKind::word_doc, 0, 0, {}, rate, sigmoid, grad_buf);
  EXPECT_FLOAT_EQ(tables.word_target.row(0)[0], -1.0f + rate * kGradientClip);
}

TEST(EdgeStep, NonFiniteActivationAborts) {
  EmbeddingTables tables;
  tables.word_target.resize(2, 2);
  tables.doc.resize(1, 2);
  tables.word_target.row(0)[0] = std::nanf("");
  tables.doc.row(0)[0] = 1.0f;
  Sigmoid sigmoid(true);
  std::vector<Real> grad_buf;
  EXPECT_THROW(edge_step_with_negatives(tables, NetworkKind::word_doc, 0, 0, {}, 0.1f, sigmoid,
                                        grad_buf),
               std::runtime_error);
}

TEST(ConditionalProbability, UniformCases) {
  EmbeddingTable words;
  words.resize(4, 3);  // all-zero vectors
  std::vector<Real> context{0.3f, -0.2f, 0.1f};
  for (std::uint32_t i = 0; i < 4; ++i)
    EXPECT_NEAR(conditional_probability(words, context, i), 0.25, 1e-12);
}

TEST(ConditionalProbability, DirectEvaluation) {
  EmbeddingTable words;
  words.resize(2, 2);
  words.row(0)[0] = 1.0f;  // (1,0)
  words.row(1)[1] = 1.0f;  // (0,1)
  std::vector<Real> context{1.0f, 0.0f};
  const double e = std::exp(1.0);
  EXPECT_NEAR(conditional_probability(words, context, 0), e / (e + 1.0), 1e-9);
  EXPECT_NEAR(conditional_probability(words, context, 1), 1.0 / (e + 1.0), 1e-9);
}

TEST(TrainJoint, ZeroSamplesReturnsInitialization) {
  auto hetnet = wd_hetnet(twenty_edge_network());
  TrainConfig config;
  config.dim = 8;
  config.samples = 0;
  config.seed = 5;
  config.subset = NetworkSubset::parse("wd");
  auto trained = train_joint(hetnet, config);
  auto init = initialize_tables(8, VertexCounts{5, 0, 4, 0}, 5);
  EXPECT_EQ(trained.word_target.data, init.word_target.data);
  EXPECT_EQ(trained.doc.data, init.doc.data);
}

TEST(TrainJoint, MissingRequiredNetworkFails) {
  auto hetnet = wd_hetnet(twenty_edge_network());
  TrainConfig config;
  config.subset = NetworkSubset::parse("ww,wd");
  config.samples = 10;
  EXPECT_THROW(train_joint(hetnet, config), std::runtime_error);
}

TEST(TrainJoint, ObjectiveDecreasesOnTwentyEdgeNetwork) {
  auto net = twenty_edge_network();
  auto hetnet = wd_hetnet(net);
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    TrainConfig config;
    config.dim = 8;
    config.samples = 100000;
    config.seed = seed;
    config.subset = NetworkSubset::parse("wd");
    config.initial_rate = 0.025f;
    auto init = initialize_tables(8, VertexCounts{5, 0, 4, 0}, seed);
    auto trained = train_joint(hetnet, config);
    EXPECT_LT(exact_objective(net, trained), exact_objective(net, init)) << "seed " << seed;
  }
}

TEST(TrainJoint, SingleThreadedDeterminism) {
  auto hetnet = wd_hetnet(twenty_edge_network());
  TrainConfig config;
  config.dim = 6;
  config.samples = 20000;
  config.seed = 11;
  config.subset = NetworkSubset::parse("wd");
  auto a = train_joint(hetnet, config);
  auto b = train_joint(hetnet, config);
  EXPECT_EQ(a.word_target.data, b.word_target.data);
  EXPECT_EQ(a.doc.data, b.doc.data);
}

TEST(TrainJoint, HogwildRunProducesFiniteTables) {
  auto hetnet = wd_hetnet(twenty_edge_network());
  TrainConfig config;
  config.dim = 6;
  config.samples = 50000;
  config.seed = 13;
  config.threads = 4;
  config.subset = NetworkSubset::parse("wd");
  auto tables = train_joint(hetnet, config);
  for (Real x : tables.word_target.data) EXPECT_TRUE(std::isfinite(x));
}

// Second-order proximity: words that co-occur with identical document sets end
// up closer than words with disjoint ones.
TEST(TrainJoint, SecondOrderProximityOnWordDocNetwork) {
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 10; ++i) docs.push_back(tokenize("x y x y x y"));
  for (int i = 0; i < 10; ++i) docs.push_back(tokenize("z q z q z q"));
  auto vocab = build_vocabulary(docs, 1);
  Corpus corpus;
  for (const auto& d : docs) corpus.documents.push_back(encode_document(d, vocab));
  corpus.labels.assign(docs.size(), kNoLabel);

  auto hetnet = build_heterogeneous(corpus, vocab.size(), 5, NetworkSubset::parse("wd"));
  TrainConfig config;
  config.dim = 8;
  config.samples = 50000;
  config.seed = 3;
  config.subset = NetworkSubset::parse("wd");
  auto tables = train_joint(hetnet, config);

  auto cosine = [&](const char* a, const char* b) {
    const Real* u = tables.word_target.row(*vocab.lookup(a));
    const Real* v = tables.word_target.row(*vocab.lookup(b));
    double uv = 0, uu = 0, vv = 0;
    for (std::size_t c = 0; c < 8; ++c) {
      uv += static_cast<double>(u[c]) * v[c];
      uu += static_cast<double>(u[c]) * u[c];
      vv += static_cast<double>(v[c]) * v[c];
    }
    return uv / std::sqrt(uu * vv);
  };
  EXPECT_GT(cosine("x", "y"), cosine("x", "z"));
}

HeterogeneousTextNetwork three_network_fixture() {
  std::vector<std::vector<std::string>> docs = {
      tokenize("a b a c"), tokenize("b c b"), tokenize("d e d"), tokenize("e d e e")};
  auto vocab = build_vocabulary(docs, 1);
  Corpus corpus;
  for (const auto& d : docs) corpus.documents.push_back(encode_document(d, vocab));
  corpus.labels = {0, 0, 1, 1};
  corpus.label_names = {"first", "second"};
  return build_heterogeneous(corpus, vocab.size(), 5, NetworkSubset::parse("ww,wd,wl"));
}

TEST(PretrainFinetune, ZeroFinetuneEqualsUnsupervisedTraining) {
  auto hetnet = three_network_fixture();
  TrainConfig pf;
  pf.dim = 6;
  pf.samples = 5000;
  pf.finetune_samples = 0;
  pf.seed = 17;
  pf.mode = TrainMode::pretrain_finetune;
  pf.subset = NetworkSubset::parse("ww,wd,wl");
  auto a = train_pretrain_finetune(hetnet, pf);

  TrainConfig unsup;
  unsup.dim = 6;
  unsup.samples = 5000;
  unsup.seed = 17;
  unsup.mode = TrainMode::unsupervised;
  unsup.subset = NetworkSubset::parse("ww,wd");
  auto b = train_joint(hetnet, unsup);

  EXPECT_EQ(a.word_target.data, b.word_target.data);
  EXPECT_EQ(a.word_context.data, b.word_context.data);
  EXPECT_EQ(a.doc.data, b.doc.data);
}

TEST(PretrainFinetune, LabelOnlySubsetMatchesJoint) {
  auto hetnet = three_network_fixture();
  TrainConfig pf;
  pf.dim = 6;
  pf.samples = 5000;
  pf.seed = 23;
  pf.mode = TrainMode::pretrain_finetune;
  pf.subset = NetworkSubset::parse("wl");  // phase 1 has nothing to do
  auto a = train_pretrain_finetune(hetnet, pf);

  TrainConfig joint;
  joint.dim = 6;
  joint.samples = 5000;
  joint.seed = 23;
  joint.mode = TrainMode::joint;
  joint.subset = NetworkSubset::parse("wl");
  auto b = train_joint(hetnet, joint);

  EXPECT_EQ(a.word_target.data, b.word_target.data);
  EXPECT_EQ(a.label.data, b.label.data);
}

TEST(Checkpoint, SaveLoadRoundTripIsExact) {
  pte::testing::TempDir dir;
  auto hetnet = three_network_fixture();
  TrainConfig config;
  config.dim = 6;
  config.samples = 3000;
  config.seed = 29;
  auto tables = train_joint(hetnet, config);

  Vocabulary vocab;
  for (std::size_t i = 0; i < hetnet.word_count; ++i) {
    std::string tok(1, static_cast<char>('a' + i));
    vocab.token_to_id.emplace(tok, static_cast<WordId>(i));
    vocab.id_to_token.push_back(tok);
    vocab.counts.push_back(1);
  }
  std::vector<std::string> label_names{"first", "second"};
  save_checkpoint(tables, vocab, label_names, dir.file("ckpt.txt"));

  std::vector<std::string> loaded_labels;
  auto loaded = load_checkpoint(dir.file("ckpt.txt"), vocab, &loaded_labels);
  EXPECT_EQ(loaded.word_target.data, tables.word_target.data);
  EXPECT_EQ(loaded.word_context.data, tables.word_context.data);
  EXPECT_EQ(loaded.doc.data, tables.doc.data);
  EXPECT_EQ(loaded.label.data, tables.label.data);
  EXPECT_EQ(loaded_labels, label_names);
}

TEST(Checkpoint, ContinueTrainingResumesFromWarmTables) {
  auto hetnet = three_network_fixture();
  TrainConfig config;
  config.dim = 6;
  config.samples = 3000;
  config.seed = 31;
  auto warm = train_joint(hetnet, config);
  auto warm_words = warm.word_target.data;

  // Zero further samples: the warm tables come back untouched.
  TrainConfig frozen = config;
  frozen.samples = 0;
  auto unchanged = continue_training(warm, hetnet, frozen);
  EXPECT_EQ(unchanged.word_target.data, warm_words);

  // Resuming trains further: tables move.
  auto resumed = continue_training(std::move(warm), hetnet, config);
  EXPECT_NE(resumed.word_target.data, warm_words);
  for (Real x : resumed.word_target.data) EXPECT_TRUE(std::isfinite(x));
}

TEST(Checkpoint, ContinueTrainingRejectsShapeMismatch) {
  auto hetnet = three_network_fixture();
  TrainConfig config;
  config.dim = 6;
  config.samples = 100;
  EmbeddingTables warm = initialize_tables(6, VertexCounts{3, 3, 2, 1}, 1);  // wrong rows
  EXPECT_THROW(continue_training(std::move(warm), hetnet, config), std::runtime_error);
}

TEST(TrainConfig, Validation) {
  TrainConfig config;
  config.dim = 0;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.negatives = -1;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.initial_rate = 0.0f;
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.mode = TrainMode::unsupervised;
  config.subset = NetworkSubset::parse("ww,wl");
  EXPECT_THROW(config.validate(), std::invalid_argument);
  config = {};
  config.mode = TrainMode::pretrain_finetune;
  config.subset = NetworkSubset::parse("ww,wd");
  EXPECT_THROW(config.validate(), std::invalid_argument);
}

}  // namespace
