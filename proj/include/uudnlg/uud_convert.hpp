#ifndef UUDNLG_UUD_CONVERT_HPP
#define UUDNLG_UUD_CONVERT_HPP

// Reduction of a full UD tree to a deep underspecified tree: function words
// are pruned and every kept token is re-attached to its nearest kept
// ancestor. Sibling order is the surface order of the source sentence.

#include <algorithm>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uudnlg/conllu.hpp"
#include "uudnlg/error.hpp"
#include "uudnlg/text.hpp"

namespace uudnlg::uud {

// Which tokens survive conversion. Keep rules (negation, extra forms) win
// over the UPOS drop list.
struct PruneRules {
  std::set<std::string> droppable_upos;
  std::set<std::string> negation_forms;  // lowercased
  std::set<conllu::Feature> negation_feats;
  std::set<std::string> extra_keep_forms;  // lowercased

  bool is_negation(const conllu::Token& t) const {
    for (const auto& f : t.feats) {
      if (negation_feats.count(f)) return true;
    }
    return negation_forms.count(text::lowercase(t.form)) > 0;
  }

  bool keeps(const conllu::Token& t) const {
    if (extra_keep_forms.count(text::lowercase(t.form))) return true;
    if (is_negation(t)) return true;
    return droppable_upos.count(t.upos) == 0;
  }

  friend bool operator==(const PruneRules&, const PruneRules&) = default;
};

inline PruneRules default_rules() {
  PruneRules r;
  r.droppable_upos = {"ADP", "AUX", "DET", "SCONJ", "PART", "PUNCT", "SYM", "X"};
  r.negation_forms = {"not", "n't", "no", "never"};
  r.negation_feats = {{"Polarity", "Neg"}};
  return r;
}

class RulesError : public Error {
 public:
  RulesError(int line, const std::string& what)
      : Error("rules line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Plain-text rules, one directive per line (several values allowed):
//   drop_upos ADP
//   keep_form not
//   negation_form n't
//   negation_feat Polarity=Neg
// '#' starts a comment. The file defines the complete rule set.
inline PruneRules parse_rules(std::string_view config) {
  PruneRules r;
  int number = 0;
  for (const auto& raw : text::lines(config)) {
    ++number;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    auto words = text::split_ws(line);
    if (words.empty()) continue;
    if (words.size() < 2) {
      throw RulesError(number, "expected '<directive> <value>...'");
    }
    const std::string& d = words[0];
    for (std::size_t i = 1; i < words.size(); ++i) {
      const std::string& v = words[i];
      if (d == "drop_upos") {
        r.droppable_upos.insert(v);
      } else if (d == "keep_form") {
        r.extra_keep_forms.insert(text::lowercase(v));
      } else if (d == "negation_form") {
        r.negation_forms.insert(text::lowercase(v));
      } else if (d == "negation_feat") {
        auto eq = v.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == v.size()) {
          throw RulesError(number, "negation_feat expects Key=Value");
        }
        r.negation_feats.insert({v.substr(0, eq), v.substr(eq + 1)});
      } else {
        throw RulesError(number, "unknown directive '" + d + "'");
      }
    }
  }
  return r;
}

inline std::string render_rules(const PruneRules& r) {
  std::string out;
  for (const auto& u : r.droppable_upos) out += "drop_upos " + u + "\n";
  for (const auto& f : r.negation_forms) out += "negation_form " + f + "\n";
  for (const auto& f : r.negation_feats) {
    out += "negation_feat " + f.first + "=" + f.second + "\n";
  }
  for (const auto& f : r.extra_keep_forms) out += "keep_form " + f + "\n";
  return out;
}

struct UUDNode {
  std::string form;
  int original_position = 0;
  std::vector<UUDNode> children;  // ascending original_position

  friend bool operator==(const UUDNode&, const UUDNode&) = default;
};

struct UUDTree {
  UUDNode root;

  friend bool operator==(const UUDTree&, const UUDTree&) = default;
};

inline std::size_t node_count(const UUDNode& n) {
  std::size_t c = 1;
  for (const auto& ch : n.children) c += node_count(ch);
  return c;
}

inline std::size_t node_count(const UUDTree& t) { return node_count(t.root); }

class ConversionError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline UUDNode build_node(const conllu::Sentence& s,
                          const std::vector<std::vector<std::size_t>>& kids,
                          std::size_t i) {
  UUDNode n;
  n.form = s.tokens[i].form;
  n.original_position = s.tokens[i].id;
  n.children.reserve(kids[i].size());
  for (auto c : kids[i]) n.children.push_back(build_node(s, kids, c));
  return n;
}

}  // namespace detail

inline UUDTree convert(const conllu::Sentence& s, const conllu::DepTree& tree,
                       const PruneRules& rules, std::string_view name = {}) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t n = tree.size();

  std::vector<bool> kept(n);
  for (std::size_t i = 0; i < n; ++i) kept[i] = rules.keeps(s.tokens[i]);

  // Pre-order walk carrying the nearest kept ancestor and depth.
  std::vector<std::size_t> kept_parent(n, kNone);
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::pair<std::size_t, std::size_t>> stack{{tree.root, kNone}};
  while (!stack.empty()) {
    auto [node, anc] = stack.back();
    stack.pop_back();
    kept_parent[node] = anc;
    const std::size_t next_anc = kept[node] ? node : anc;
    for (auto c : tree.children[node]) {
      depth[c] = depth[node] + 1;
      stack.emplace_back(c, next_anc);
    }
  }

  std::vector<std::size_t> orphans;
  for (std::size_t i = 0; i < n; ++i) {
    if (kept[i] && kept_parent[i] == kNone) orphans.push_back(i);
  }
  if (orphans.empty()) {
    throw ConversionError("all tokens dropped in " +
                          (name.empty() ? std::string("sentence") : std::string(name)));
  }
  const std::size_t root = *std::min_element(
      orphans.begin(), orphans.end(), [&](std::size_t a, std::size_t b) {
        return std::pair(depth[a], a) < std::pair(depth[b], b);
      });

  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i] || i == root) continue;
    const std::size_t p = kept_parent[i] == kNone ? root : kept_parent[i];
    kids[p].push_back(i);  // ascending because i ascends
  }
  return UUDTree{detail::build_node(s, kids, root)};
}

inline UUDTree convert(const conllu::Sentence& s, const PruneRules& rules,
                       std::string_view name = {}) {
  return convert(s, conllu::to_tree(s), rules, name);
}

struct ContentWord {
  std::string form;
  int original_position = 0;

  friend bool operator==(const ContentWord&, const ContentWord&) = default;
};

inline std::vector<ContentWord> project_content_words(const UUDTree& t) {
  std::vector<ContentWord> out;
  std::vector<const UUDNode*> stack{&t.root};
  while (!stack.empty()) {
    const UUDNode* n = stack.back();
    stack.pop_back();
    out.push_back({n->form, n->original_position});
    for (const auto& c : n->children) stack.push_back(&c);
  }
  std::sort(out.begin(), out.end(), [](const ContentWord& a, const ContentWord& b) {
    return a.original_position < b.original_position;
  });
  return out;
}

}  // namespace uudnlg::uud

#endif  // UUDNLG_UUD_CONVERT_HPP
