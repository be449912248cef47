#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_util.hpp"
#include "uudnlg/conllu.hpp"
#include "uudnlg/ir.hpp"
#include "uudnlg/uud_convert.hpp"

namespace {

using namespace uudnlg;

conllu::Token tok(const std::string& form, const std::string& upos,
                  std::vector<conllu::Feature> feats = {}) {
  conllu::Token t;
  t.form = form;
  t.upos = upos;
  t.feats = std::move(feats);
  return t;
}

TEST(PruneRules, DefaultQueries) {
  const auto r = uud::default_rules();
  EXPECT_FALSE(r.keeps(tok("the", "DET")));
  EXPECT_FALSE(r.keeps(tok("to", "ADP")));
  EXPECT_FALSE(r.keeps(tok(".", "PUNCT")));
  EXPECT_FALSE(r.keeps(tok("does", "AUX")));
  EXPECT_TRUE(r.keeps(tok("riverside", "NOUN")));
  EXPECT_TRUE(r.keeps(tok("go", "VERB")));
  EXPECT_TRUE(r.keeps(tok("not", "PART")));
  EXPECT_TRUE(r.keeps(tok("n't", "PART")));
  EXPECT_TRUE(r.keeps(tok("No", "DET")));
  EXPECT_TRUE(r.keeps(tok("never", "ADV")));
  EXPECT_TRUE(r.keeps(tok("nor", "CCONJ")));
  EXPECT_TRUE(r.keeps(tok("non", "X", {{"Polarity", "Neg"}})));
  EXPECT_FALSE(r.keeps(tok("non", "X", {{"Polarity", "Pos"}})));
}

TEST(PruneRules, ParseAndRender) {
  const auto r = uud::parse_rules(
      "# content words only\n"
      "drop_upos DET ADP\n"
      "drop_upos PUNCT\n"
      "negation_form not\n"
      "negation_feat Polarity=Neg\n"
      "keep_form Near\n");
  EXPECT_EQ(r.droppable_upos, (std::set<std::string>{"ADP", "DET", "PUNCT"}));
  EXPECT_EQ(r.extra_keep_forms, (std::set<std::string>{"near"}));
  EXPECT_TRUE(r.keeps(tok("NEAR", "ADP")));
  EXPECT_EQ(uud::parse_rules(uud::render_rules(r)), r);
  EXPECT_EQ(uud::parse_rules(uud::render_rules(uud::default_rules())), uud::default_rules());
}

TEST(PruneRules, DefaultRulesFileMatchesBuiltIn) {
  const auto text = uudnlg::text::read_file(std::string(UUDNLG_TEST_DATA) + "/../../rules/default.rules");
  EXPECT_EQ(uud::parse_rules(text), uud::default_rules());
}

TEST(PruneRules, Errors) {
  try {
    uud::parse_rules("drop_upos DET\nbogus X\n");
    FAIL();
  } catch (const uud::RulesError& e) {
    EXPECT_EQ(e.line(), 2);
  }
  EXPECT_THROW(uud::parse_rules("negation_feat Polarity\n"), uud::RulesError);
  EXPECT_THROW(uud::parse_rules("drop_upos\n"), uud::RulesError);
}

TEST(Convert, FigureThreeA) {
  const auto s = conllu::parse_conllu(testutil::read_data("fig3a_raw.conllu")).at(0);
  const auto t = uud::convert(s, uud::default_rules());
  EXPECT_EQ(t.root.form, "go");
  ASSERT_EQ(t.root.children.size(), 3u);
  EXPECT_EQ(t.root.children[0].form, "not");
  EXPECT_EQ(t.root.children[1].form, "Punter");
  EXPECT_EQ(t.root.children[2].form, "riverside");
  const auto words = uud::project_content_words(t);
  std::vector<std::string> forms;
  for (const auto& w : words) forms.push_back(w.form);
  EXPECT_EQ(forms, (std::vector<std::string>{"not", "go", "Punter", "riverside"}));
}

TEST(Convert, DroppedRootPromotesShallowestKept) {
  // 1 a(DET) is root; 2 b(NOUN) and 4 d(NOUN) hang under it at depth 1, 3 c under 2.
  conllu::Sentence s;
  s.tokens = {tok("a", "DET"), tok("b", "NOUN"), tok("c", "NOUN"), tok("d", "NOUN")};
  const int heads[] = {0, 1, 2, 1};
  for (int i = 0; i < 4; ++i) {
    s.tokens[i].id = i + 1;
    s.tokens[i].head = heads[i];
  }
  const auto t = uud::convert(s, uud::default_rules());
  EXPECT_EQ(ir::render(ir::linearize(t)), "b _( c d )_");
}

TEST(Convert, AllDroppedThrows) {
  conllu::Sentence s;
  s.tokens = {tok("the", "DET"), tok(".", "PUNCT")};
  s.tokens[0].id = 1;
  s.tokens[0].head = 0;
  s.tokens[1].id = 2;
  s.tokens[1].head = 1;
  EXPECT_THROW(uud::convert(s, uud::default_rules(), "sentence 4"), uud::ConversionError);
}

TEST(ConvertProperty, NearestKeptAncestorOracle) {
  std::mt19937 rng(7);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto s = testutil::random_labeled_sentence(rng, testutil::uniform(rng, 1, 25));
    const auto rules = testutil::random_rules(rng);
    const auto o = testutil::conversion_oracle(s, rules);
    if (!o.root) {
      EXPECT_THROW(uud::convert(s, rules), uud::ConversionError);
      continue;
    }
    const auto t = uud::convert(s, rules);
    EXPECT_EQ(t.root.original_position, *o.root);
    std::map<int, int> edges;
    testutil::collect_edges(t.root, edges);
    ASSERT_EQ(edges, o.edges);
    EXPECT_TRUE(testutil::siblings_ascending(t.root));
    for (const auto& w : uud::project_content_words(t)) {
      EXPECT_EQ(w.form, s.tokens[w.original_position - 1].form);
    }
    ++checked;
  }
  EXPECT_GT(checked, 1000);
}

// Sentence whose tokens are exactly the nodes of `t`, with their original
// annotation from `src`.
conllu::Sentence as_sentence(const uud::UUDTree& t, const conllu::Sentence& src) {
  std::vector<std::pair<const uud::UUDNode*, const uud::UUDNode*>> stack{{&t.root, nullptr}};
  std::vector<const uud::UUDNode*> nodes;
  std::map<const uud::UUDNode*, const uud::UUDNode*> parent;
  while (!stack.empty()) {
    auto [n, p] = stack.back();
    stack.pop_back();
    nodes.push_back(n);
    parent[n] = p;
    for (const auto& c : n->children) stack.push_back({&c, n});
  }
  std::sort(nodes.begin(), nodes.end(), [](auto a, auto b) {
    return a->original_position < b->original_position;
  });
  std::map<const uud::UUDNode*, int> id;
  for (std::size_t i = 0; i < nodes.size(); ++i) id[nodes[i]] = static_cast<int>(i) + 1;
  conllu::Sentence s;
  for (const auto* n : nodes) {
    auto t = src.tokens[n->original_position - 1];
    t.id = id[n];
    t.head = parent[n] ? id[parent[n]] : 0;
    s.tokens.push_back(t);
  }
  return s;
}

TEST(ConvertProperty, IdempotentOnContentTrees) {
  std::mt19937 rng(11);
  const auto rules = uud::default_rules();
  for (int i = 0; i < 500; ++i) {
    const auto s = testutil::random_labeled_sentence(rng, testutil::uniform(rng, 1, 20));
    if (!testutil::conversion_oracle(s, rules).root) continue;
    const auto once = uud::convert(s, rules);
    const auto again = uud::convert(as_sentence(once, s), rules);
    EXPECT_EQ(ir::render(ir::linearize(again)), ir::render(ir::linearize(once)));
  }
}

TEST(ConvertProperty, MoreDropsNeverAddNodes) {
  std::mt19937 rng(13);
  for (int i = 0; i < 500; ++i) {
    const auto s = testutil::random_labeled_sentence(rng, testutil::uniform(rng, 1, 20));
    auto base = testutil::random_rules(rng);
    auto more = base;
    more.droppable_upos.insert(testutil::pick(rng, testutil::all_upos()));
    if (!testutil::conversion_oracle(s, more).root) continue;
    const auto a = uud::project_content_words(uud::convert(s, base));
    const auto b = uud::project_content_words(uud::convert(s, more));
    EXPECT_LE(b.size(), a.size());
    for (const auto& w : b) EXPECT_NE(std::find(a.begin(), a.end(), w), a.end());
  }
}

}  // namespace
