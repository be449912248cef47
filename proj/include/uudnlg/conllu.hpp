#ifndef UUDNLG_CONLLU_HPP
#define UUDNLG_CONLLU_HPP

// CoNLL-U reading, validation and writing.
//
// Only basic word lines are modeled. Multiword-token ranges ("3-4") and
// empty nodes ("5.1") are skipped on input. DEPS and MISC are carried as
// opaque strings so that canonical files round-trip byte-for-byte.

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uudnlg/error.hpp"
#include "uudnlg/text.hpp"

namespace uudnlg::conllu {

using Feature = std::pair<std::string, std::string>;

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;
  std::vector<Feature> feats;  // in file order
  int head = 0;
  std::string deprel;
  std::string deps;
  std::string misc;

  bool has_feature(std::string_view key, std::string_view value) const {
    return std::any_of(feats.begin(), feats.end(), [&](const Feature& f) {
      return f.first == key && f.second == value;
    });
  }

  friend bool operator==(const Token&, const Token&) = default;
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<std::string> comments;  // verbatim, including the leading '#'

  std::optional<std::string> metadata(std::string_view key) const;

  friend bool operator==(const Sentence&, const Sentence&) = default;
};

// Value of a "# key = value" comment, if present.
inline std::optional<std::string> metadata(const std::vector<std::string>& comments,
                                           std::string_view key) {
  for (const auto& c : comments) {
    std::string_view body = text::trim(std::string_view(c).substr(1));
    auto eq = body.find('=');
    if (eq == std::string_view::npos) continue;
    if (text::trim(body.substr(0, eq)) == key) {
      return std::string(text::trim(body.substr(eq + 1)));
    }
  }
  return std::nullopt;
}

inline std::optional<std::string> Sentence::metadata(std::string_view key) const {
  return conllu::metadata(comments, key);
}

// Parent/child view of a sentence. Indexes are 0-based token positions
// (token id - 1).
struct DepTree {
  std::size_t root = 0;
  std::vector<std::vector<std::size_t>> children;
  std::vector<std::optional<std::size_t>> parent;

  std::size_t size() const { return children.size(); }
};

class ConlluError : public Error {
 public:
  enum class Kind {
    kColumnCount,
    kBadId,
    kBadHead,
    kHeadOutOfRange,
    kIdSequence,
    kEmptyForm,
    kCycle,
    kRootCount,
  };

  ConlluError(Kind kind, int sentence, int line, const std::string& what)
      : Error("sentence " + std::to_string(sentence) + ", line " +
              std::to_string(line) + ": " + what),
        kind_(kind),
        sentence_(sentence),
        line_(line) {}

  Kind kind() const { return kind_; }
  int sentence() const { return sentence_; }  // 1-based ordinal
  int line() const { return line_; }          // 1-based line in the input

 private:
  Kind kind_;
  int sentence_;
  int line_;
};

namespace detail {

struct Line {
  int number;
  std::string text;
};

inline std::optional<int> parse_int(std::string_view s) {
  if (s.empty()) return std::nullopt;
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string from_field(std::string_view f) {
  return f == "_" ? std::string() : std::string(f);
}

inline std::vector<Feature> parse_feats(std::string_view f) {
  std::vector<Feature> out;
  if (f == "_" || f.empty()) return out;
  for (const auto& item : text::split(f, '|')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(item, std::string());
    } else {
      out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
  }
  return out;
}

// Detects cycles in the head relation. Returns the id of a token on a cycle.
inline std::optional<int> find_cycle(const std::vector<Token>& tokens) {
  const std::size_t n = tokens.size();
  // 0 = unvisited, 1 = on current path, 2 = done (reaches root)
  std::vector<int> state(n + 1, 0);
  state[0] = 2;
  for (std::size_t start = 1; start <= n; ++start) {
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (state[cur] == 0) {
      state[cur] = 1;
      path.push_back(cur);
      cur = static_cast<std::size_t>(tokens[cur - 1].head);
    }
    if (state[cur] == 1) return static_cast<int>(cur);
    for (auto p : path) state[p] = 2;
  }
  return std::nullopt;
}

inline Sentence parse_block(const std::vector<Line>& block, int ordinal) {
  using K = ConlluError::Kind;
  Sentence s;
  std::vector<int> token_lines;
  for (const auto& line : block) {
    if (!line.text.empty() && line.text[0] == '#') {
      s.comments.push_back(line.text);
      continue;
    }
    auto cols = text::split(line.text, '\t');
    if (cols.size() != 10) {
      throw ConlluError(K::kColumnCount, ordinal, line.number,
                        "expected 10 tab-separated columns, found " +
                            std::to_string(cols.size()));
    }
    const std::string& id_field = cols[0];
    if (id_field.find('-') != std::string::npos ||
        id_field.find('.') != std::string::npos) {
      continue;  // multiword range or empty node
    }
    auto id = parse_int(id_field);
    if (!id || *id < 1) {
      throw ConlluError(K::kBadId, ordinal, line.number,
                        "non-integer or non-positive id '" + id_field + "'");
    }
    auto head = parse_int(cols[6]);
    if (!head || *head < 0) {
      throw ConlluError(K::kBadHead, ordinal, line.number,
                        "non-integer head '" + cols[6] + "'");
    }
    if (cols[1].empty()) {
      throw ConlluError(K::kEmptyForm, ordinal, line.number, "empty form");
    }
    Token t;
    t.id = *id;
    t.form = cols[1];
    t.lemma = from_field(cols[2]);
    t.upos = from_field(cols[3]);
    t.xpos = from_field(cols[4]);
    t.feats = parse_feats(cols[5]);
    t.head = *head;
    t.deprel = from_field(cols[7]);
    t.deps = from_field(cols[8]);
    t.misc = from_field(cols[9]);
    s.tokens.push_back(std::move(t));
    token_lines.push_back(line.number);
  }

  const int first_line = block.empty() ? 0 : block.front().number;
  if (s.tokens.empty()) {
    throw ConlluError(K::kRootCount, ordinal, first_line, "sentence has no word lines");
  }
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    if (s.tokens[i].id != i + 1) {
      bool dup = std::any_of(s.tokens.begin(), s.tokens.begin() + i,
                             [&](const Token& t) { return t.id == s.tokens[i].id; });
      throw ConlluError(K::kIdSequence, ordinal, token_lines[i],
                        (dup ? "duplicate id " : "missing id: expected ") +
                            std::to_string(dup ? s.tokens[i].id : i + 1) +
                            (dup ? "" : ", found " + std::to_string(s.tokens[i].id)));
    }
  }
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[i];
    if (t.head > n) {
      throw ConlluError(K::kHeadOutOfRange, ordinal, token_lines[i],
                        "head " + std::to_string(t.head) + " out of range 0.." +
                            std::to_string(n));
    }
    if (t.head == t.id) {
      throw ConlluError(K::kCycle, ordinal, token_lines[i],
                        "token " + std::to_string(t.id) + " is its own head");
    }
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    throw ConlluError(K::kRootCount, ordinal, first_line,
                      "expected exactly one root, found " + std::to_string(roots));
  }
  if (auto c = find_cycle(s.tokens)) {
    throw ConlluError(K::kCycle, ordinal, token_lines[*c - 1],
                      "cyclic heads through token " + std::to_string(*c));
  }
  return s;
}

inline std::vector<std::vector<Line>> split_blocks(std::string_view input) {
  std::vector<std::vector<Line>> blocks;
  std::vector<Line> current;
  int number = 0;
  for (auto& l : text::lines(input)) {
    ++number;
    if (text::trim(l).empty()) {
      if (!current.empty()) blocks.push_back(std::move(current));
      current.clear();
      continue;
    }
    current.push_back({number, std::move(l)});
  }
  if (!current.empty()) blocks.push_back(std::move(current));
  return blocks;
}

}  // namespace detail

// Strict parse: the first malformed sentence raises ConlluError.
inline std::vector<Sentence> parse_conllu(std::string_view input) {
  std::vector<Sentence> out;
  int ordinal = 0;
  for (const auto& block : detail::split_blocks(input)) {
    out.push_back(detail::parse_block(block, ++ordinal));
  }
  return out;
}

// One entry per sentence block; exactly one of `sentence` / `error` is set.
struct BlockResult {
  std::optional<Sentence> sentence;
  std::optional<ConlluError> error;
  std::vector<std::string> comments;  // kept for malformed blocks too
};

// Lenient parse for batch commands: malformed blocks are reported in place
// instead of aborting the whole file.
inline std::vector<BlockResult> parse_conllu_blocks(std::string_view input) {
  std::vector<BlockResult> out;
  int ordinal = 0;
  for (const auto& block : detail::split_blocks(input)) {
    std::vector<std::string> comments;
    for (const auto& l : block) {
      if (!l.text.empty() && l.text[0] == '#') comments.push_back(l.text);
    }
    try {
      out.push_back({detail::parse_block(block, ++ordinal), std::nullopt, std::move(comments)});
    } catch (const ConlluError& e) {
      out.push_back({std::nullopt, e, std::move(comments)});
    }
  }
  return out;
}

inline DepTree to_tree(const Sentence& s) {
  DepTree tree;
  const std::size_t n = s.tokens.size();
  tree.children.resize(n);
  tree.parent.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int head = s.tokens[i].head;
    if (head == 0) {
      tree.root = i;
    } else {
      auto p = static_cast<std::size_t>(head - 1);
      tree.parent[i] = p;
      tree.children[p].push_back(i);  // ascending because i ascends
    }
  }
  return tree;
}

namespace detail {

inline void put_field(std::string& out, const std::string& v) {
  out += v.empty() ? "_" : v;
}

}  // namespace detail

inline std::string serialize_conllu(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (const auto& c : s.comments) {
      out += c;
      out += '\n';
    }
    for (const auto& t : s.tokens) {
      out += std::to_string(t.id);
      out += '\t';
      out += t.form;
      out += '\t';
      detail::put_field(out, t.lemma);
      out += '\t';
      detail::put_field(out, t.upos);
      out += '\t';
      detail::put_field(out, t.xpos);
      out += '\t';
      if (t.feats.empty()) {
        out += '_';
      } else {
        for (std::size_t i = 0; i < t.feats.size(); ++i) {
          if (i) out += '|';
          out += t.feats[i].first;
          if (!t.feats[i].second.empty()) {
            out += '=';
            out += t.feats[i].second;
          }
        }
      }
      out += '\t';
      out += std::to_string(t.head);
      out += '\t';
      detail::put_field(out, t.deprel);
      out += '\t';
      detail::put_field(out, t.deps);
      out += '\t';
      detail::put_field(out, t.misc);
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

// Human-readable name for error messages: the sent_id comment when present.
inline std::string describe(const Sentence& s, std::size_t ordinal) {
  if (auto id = s.metadata("sent_id")) return "sentence '" + *id + "'";
  return "sentence " + std::to_string(ordinal);
}

}  // namespace uudnlg::conllu

#endif  // UUDNLG_CONLLU_HPP
