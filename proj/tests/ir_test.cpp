#include <functional>
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
using ir::IrError;

const std::vector<std::string> kVocab = {"go", "not", "xname", "riverside", "a", "b", "it", "no"};

std::string ir_of(const std::string& fixture) {
  const auto s = conllu::parse_conllu(testutil::read_data(fixture)).at(0);
  return ir::render(ir::linearize(uud::convert(s, uud::default_rules())));
}

IrError::Kind error_kind(const std::string& line) {
  try {
    ir::delinearize(ir::parse_ir(line));
  } catch (const IrError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << line;
  return IrError::Kind::kEmpty;
}

// Every ordered tree whose pre-order labels are `labels` (node i's parent is
// some node on the right-most path of nodes 0..i-1).
std::vector<uud::UUDTree> all_trees(const std::vector<std::string>& labels) {
  std::vector<uud::UUDTree> out;
  std::vector<int> parent(labels.size(), -1);
  std::function<void(std::size_t, std::vector<int>)> go = [&](std::size_t i, std::vector<int> path) {
    if (i == labels.size()) {
      std::vector<std::vector<int>> kids(labels.size());
      for (std::size_t k = 1; k < labels.size(); ++k) kids[parent[k]].push_back(static_cast<int>(k));
      std::function<uud::UUDNode(int)> build = [&](int k) {
        uud::UUDNode n{labels[k], k + 1, {}};
        for (int c : kids[k]) n.children.push_back(build(c));
        return n;
      };
      out.push_back({build(0)});
      return;
    }
    for (std::size_t d = 0; d < path.size(); ++d) {
      parent[i] = path[d];
      std::vector<int> next(path.begin(), path.begin() + static_cast<long>(d) + 1);
      next.push_back(static_cast<int>(i));
      go(i + 1, next);
    }
  };
  go(1, {0});
  return out;
}

TEST(Linearize, FigureThreeGolden) {
  EXPECT_EQ(ir_of("fig3a.conllu"), "go _( not xname riverside )_");
  EXPECT_EQ(ir_of("fig3b.conllu"),
            "have _( rating _( only average customer no _( and it families )_ )_ it n't much _( "
            "going it )_ )_");
  EXPECT_EQ(ir_of("fig3c.conllu"),
            "heard _( you xnear _( xname and )_ families _( they average friendly )_ )_");
}

TEST(Linearize, ChainsHaveNoMarkers) {
  uud::UUDTree t{{"a", 1, {{"b", 2, {{"c", 3, {}}}}}}};
  EXPECT_EQ(ir::render(ir::linearize(t)), "a b c");
  EXPECT_EQ(ir::delinearize(ir::parse_ir("a b c")), t);
  uud::UUDTree single{{"go", 1, {}}};
  EXPECT_EQ(ir::render(ir::linearize(single)), "go");
}

TEST(Delinearize, CanonicalReadingIsFlattest) {
  const auto seq = ir::parse_ir("root _( a x b )_");
  const auto got = ir::delinearize(seq);
  EXPECT_EQ(got, (uud::UUDTree{{"root", 1, {{"a", 2, {}}, {"x", 3, {}}, {"b", 4, {}}}}}));

  // Brute force: all trees over these labels that linearize to the same string.
  std::vector<uud::UUDTree> readings;
  for (const auto& t : all_trees({"root", "a", "x", "b"})) {
    if (ir::linearize(t) == seq) readings.push_back(t);
  }
  ASSERT_EQ(readings.size(), 3u);
  EXPECT_NE(std::find(readings.begin(), readings.end(), got), readings.end());
  for (const auto& t : readings) {
    EXPECT_LE(t.root.children.size(), got.root.children.size());
  }
}

TEST(Delinearize, NestedScopesAndPositions) {
  const auto t = ir::delinearize(ir::parse_ir("a b _( c _( d e )_ f )_"));
  EXPECT_EQ(t, (uud::UUDTree{{"a", 1, {{"b", 2, {{"c", 3, {{"d", 4, {}}, {"e", 5, {}}}}, {"f", 6, {}}}}}}}));
}

TEST(Delinearize, ErrorKinds) {
  using K = IrError::Kind;
  EXPECT_EQ(error_kind(""), K::kEmpty);
  EXPECT_EQ(error_kind("_( a b )_"), K::kMarkerAtRoot);
  EXPECT_EQ(error_kind("a _( b c"), K::kUnbalanced);
  EXPECT_EQ(error_kind("a )_ b"), K::kUnbalanced);
  EXPECT_EQ(error_kind("a _( b c )_ d"), K::kTrailingAfterScope);
  EXPECT_EQ(error_kind("a _( b c )_ _( d e )_"), K::kTrailingAfterScope);
  EXPECT_EQ(error_kind("a _( )_"), K::kEmptyScope);
  EXPECT_EQ(error_kind("a _( _( b c )_ )_"), K::kScopeWithoutOwner);
  EXPECT_EQ(error_kind("a _( b _( c d )_ _( e f )_ )_"), K::kScopeWithoutOwner);
}

TEST(Delinearize, ErrorPosition) {
  try {
    ir::delinearize(ir::parse_ir("a _( b c )_ d"));
    FAIL();
  } catch (const IrError& e) {
    EXPECT_EQ(e.position(), 5u);
  }
}

TEST(LinearizeProperty, RandomTrees) {
  std::mt19937 rng(42);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testutil::random_uud_tree(rng, testutil::uniform(rng, 1, 40), kVocab);
    const auto seq = ir::linearize(t);

    // Pre-order forms, markers only around branching nodes.
    std::vector<std::string> forms, pre;
    std::size_t markers = 0;
    for (const auto& tok : seq.tokens()) {
      if (ir::is_marker(tok)) {
        ++markers;
      } else {
        forms.push_back(tok);
      }
    }
    testutil::preorder_forms(t.root, pre);
    ASSERT_EQ(forms, pre);
    EXPECT_EQ(forms.size(), uud::node_count(t));
    EXPECT_EQ(markers, 2 * testutil::branching_nodes(t.root));

    // Delinearization is a right inverse of linearization.
    const auto back = ir::delinearize(seq);
    ASSERT_EQ(ir::linearize(back), seq);
    EXPECT_EQ(ir::parse_ir(ir::render(seq)), seq);
  }
}

TEST(LinearizeProperty, RestrictedTreesRoundTrip) {
  std::mt19937 rng(43);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testutil::random_restricted_tree(rng, kVocab);
    ASSERT_EQ(ir::delinearize(ir::linearize(t)), testutil::renumber_preorder(t));
  }
}

}  // namespace
