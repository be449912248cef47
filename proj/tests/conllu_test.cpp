#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "uudnlg/conllu.hpp"

namespace {

using namespace uudnlg;
using conllu::ConlluError;

ConlluError::Kind error_kind(const std::string& input) {
  try {
    conllu::parse_conllu(input);
  } catch (const ConlluError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << input;
  return ConlluError::Kind::kColumnCount;
}

std::string row(int id, const std::string& form, int head, const std::string& upos = "NOUN") {
  return std::to_string(id) + "\t" + form + "\t_\t" + upos + "\t_\t_\t" + std::to_string(head) +
         "\tdep\t_\t_\n";
}

conllu::Sentence random_sentence(std::mt19937& rng) {
  static const std::vector<std::string> forms = {"go", "The", "_", "riverside", "n't", "é", ",", "x-y"};
  static const std::vector<std::string> lemmas = {"", "go", "the", "be"};
  static const std::vector<std::string> xpos = {"", "NN", "VBD", "DT"};
  static const std::vector<std::string> deprels = {"nsubj", "obj", "obl", "det", "acl:relcl"};
  static const std::vector<std::string> deps = {"", "2:nsubj", "0:root|3:conj"};
  static const std::vector<std::string> misc = {"", "SpaceAfter=No", "Gloss=x|Other=y"};
  static const std::vector<std::string> keys = {"Number", "Polarity", "Tense", "Mood"};
  static const std::vector<std::string> values = {"Sing", "Neg", "Past", "Ind"};
  conllu::Sentence s;
  const int n = testutil::uniform(rng, 1, 15);
  if (testutil::uniform(rng, 0, 1)) s.comments.push_back("# sent_id = " + std::to_string(n));
  if (testutil::uniform(rng, 0, 1)) s.comments.push_back("# text = some text here");
  const auto heads = testutil::random_heads(rng, n);
  for (int id = 1; id <= n; ++id) {
    conllu::Token t;
    t.id = id;
    t.form = testutil::pick(rng, forms);
    t.lemma = testutil::pick(rng, lemmas);
    t.upos = testutil::uniform(rng, 0, 4) ? testutil::pick(rng, testutil::all_upos()) : "";
    t.xpos = testutil::pick(rng, xpos);
    const int nf = testutil::uniform(rng, 0, 3);
    for (int k = 0; k < nf; ++k) {
      t.feats.push_back({testutil::pick(rng, keys), testutil::pick(rng, values)});
    }
    t.head = heads[id];
    t.deprel = t.head == 0 ? "root" : testutil::pick(rng, deprels);
    t.deps = testutil::pick(rng, deps);
    t.misc = testutil::pick(rng, misc);
    s.tokens.push_back(t);
  }
  return s;
}

TEST(Conllu, ParsesFigureSentence) {
  const auto sents = conllu::parse_conllu(testutil::read_data("fig3a_raw.conllu"));
  ASSERT_EQ(sents.size(), 1u);
  const auto& s = sents[0];
  ASSERT_EQ(s.tokens.size(), 9u);
  const auto tree = conllu::to_tree(s);
  EXPECT_EQ(s.tokens[tree.root].form, "go");
  EXPECT_EQ(s.tokens[tree.root].id, 3);
  EXPECT_FALSE(tree.parent[tree.root].has_value());
}

TEST(Conllu, FieldsAndFeatures) {
  const std::string in =
      "# sent_id = 7.2\n"
      "# text = not here\n"
      "1\tnot\tnot\tPART\tRB\tPolarity=Neg\t2\tadvmod\t_\t_\n"
      "2\there\there\tADV\tRB\tPronType=Dem|Degree=Pos\t0\troot\t_\tSpaceAfter=No\n\n";
  const auto s = conllu::parse_conllu(in).at(0);
  EXPECT_EQ(s.metadata("sent_id"), "7.2");
  EXPECT_EQ(s.metadata("text"), "not here");
  EXPECT_FALSE(s.metadata("missing").has_value());
  EXPECT_TRUE(s.tokens[0].has_feature("Polarity", "Neg"));
  ASSERT_EQ(s.tokens[1].feats.size(), 2u);
  EXPECT_EQ(s.tokens[1].feats[0].first, "PronType");
  EXPECT_EQ(s.tokens[1].misc, "SpaceAfter=No");
  EXPECT_EQ(s.tokens[1].deps, "");
  EXPECT_EQ(conllu::serialize_conllu({s}), in);
}

TEST(Conllu, SkipsRangesAndEmptyNodes) {
  const std::string in =
      "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n" + row(1, "do", 3, "AUX") + row(2, "n't", 3, "PART") +
      row(3, "go", 0, "VERB") + "3.1\tgo\t_\t_\t_\t_\t_\t_\t_\t_\n";
  const auto s = conllu::parse_conllu(in).at(0);
  ASSERT_EQ(s.tokens.size(), 3u);
  EXPECT_EQ(s.tokens[1].form, "n't");
}

TEST(Conllu, MultipleSentencesAndCrlf) {
  const std::string in = row(1, "a", 0) + "\r\n\r\n" + row(1, "b", 0) + row(2, "c", 1);
  const auto sents = conllu::parse_conllu(in);
  ASSERT_EQ(sents.size(), 2u);
  EXPECT_EQ(sents[1].tokens.size(), 2u);
}

TEST(Conllu, ErrorKinds) {
  using K = ConlluError::Kind;
  EXPECT_EQ(error_kind("1\ta\t_\n"), K::kColumnCount);
  EXPECT_EQ(error_kind(row(0, "a", 0)), K::kBadId);
  EXPECT_EQ(error_kind("1\ta\t_\tNOUN\t_\t_\tx\tdep\t_\t_\n"), K::kBadHead);
  EXPECT_EQ(error_kind(row(1, "a", 0) + row(2, "b", 5)), K::kHeadOutOfRange);
  EXPECT_EQ(error_kind(row(1, "a", 0) + row(3, "b", 1)), K::kIdSequence);
  EXPECT_EQ(error_kind(row(1, "a", 0) + row(1, "b", 1)), K::kIdSequence);
  EXPECT_EQ(error_kind("1\t\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"), K::kEmptyForm);
  EXPECT_EQ(error_kind(row(1, "a", 1)), K::kCycle);
  EXPECT_EQ(error_kind(row(1, "a", 0) + row(2, "b", 3) + row(3, "c", 2)), K::kCycle);
  EXPECT_EQ(error_kind(row(1, "a", 2) + row(2, "b", 1)), K::kRootCount);
  EXPECT_EQ(error_kind(row(1, "a", 2) + row(2, "b", 3) + row(3, "c", 2) + row(4, "d", 0)),
            K::kCycle);
  EXPECT_EQ(error_kind(row(1, "a", 0) + row(2, "b", 0)), K::kRootCount);
}

TEST(Conllu, ErrorCarriesLineNumber) {
  const std::string in = row(1, "a", 0) + "\n# c\n" + row(1, "b", 0) + row(2, "c", 9);
  try {
    conllu::parse_conllu(in);
    FAIL();
  } catch (const ConlluError& e) {
    EXPECT_EQ(e.sentence(), 2);
    EXPECT_EQ(e.line(), 5);
  }
}

TEST(Conllu, LenientBlocksKeepGoing) {
  const std::string in = "# sent_id = 1.1\n" + row(1, "a", 1) + "\n# sent_id = 1.2\n" + row(1, "b", 0);
  const auto blocks = conllu::parse_conllu_blocks(in);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_TRUE(blocks[0].error.has_value());
  EXPECT_EQ(conllu::metadata(blocks[0].comments, "sent_id"), "1.1");
  ASSERT_TRUE(blocks[1].sentence.has_value());
  EXPECT_EQ(blocks[1].sentence->tokens[0].form, "b");
}

TEST(Conllu, ChildrenAscending) {
  const auto s = conllu::parse_conllu(row(1, "a", 3) + row(2, "b", 0) + row(3, "c", 2) +
                                      row(4, "d", 2) + row(5, "e", 3))
                     .at(0);
  const auto t = conllu::to_tree(s);
  EXPECT_EQ(t.root, 1u);
  EXPECT_EQ(t.children[1], (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(t.children[2], (std::vector<std::size_t>{0, 4}));
}

TEST(ConlluProperty, ParseSerializeRoundTrip) {
  std::mt19937 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    std::vector<conllu::Sentence> doc;
    const int k = testutil::uniform(rng, 1, 3);
    for (int j = 0; j < k; ++j) doc.push_back(random_sentence(rng));
    const std::string text = conllu::serialize_conllu(doc);
    const auto parsed = conllu::parse_conllu(text);
    ASSERT_EQ(parsed, doc) << text;
    ASSERT_EQ(conllu::serialize_conllu(parsed), text);
  }
}

}  // namespace
