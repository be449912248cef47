#ifndef UUDNLG_IR_HPP
#define UUDNLG_IR_HPP

// Linearized intermediate representation.
//
// A tree is written depth-first. A node with two or more children wraps
// them in the scope markers "_(" and ")_"; a node with a single child is
// followed directly by that child, without markers. The single-child rule
// makes the string ambiguous, so delinearize() picks one canonical reading:
//
//   * at top level, consecutive bare tokens form a unary chain;
//   * a scope attaches its contents to the node just before it;
//   * inside a scope, bare tokens are siblings, each optionally followed
//     by its own scope.
//
// That reading is total on the image of linearize() and
// linearize(delinearize(s)) == s for every such s.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uudnlg/error.hpp"
#include "uudnlg/text.hpp"
#include "uudnlg/uud_convert.hpp"

namespace uudnlg::ir {

inline constexpr std::string_view kOpenScope = "_(";
inline constexpr std::string_view kCloseScope = ")_";

inline bool is_marker(std::string_view tok) {
  return tok == kOpenScope || tok == kCloseScope;
}

class IrError : public Error {
 public:
  enum class Kind {
    kEmpty,
    kUnbalanced,
    kMarkerAtRoot,
    kTrailingAfterScope,
    kEmptyScope,
    kScopeWithoutOwner,
  };

  IrError(Kind kind, std::size_t position, const std::string& what)
      : Error(what + " (token " + std::to_string(position + 1) + ")"),
        kind_(kind),
        position_(position) {}

  Kind kind() const { return kind_; }
  std::size_t position() const { return position_; }  // 0-based token index

 private:
  Kind kind_;
  std::size_t position_;
};

// A validated token sequence: non-empty, starts with a form, markers balance.
class IRSequence {
 public:
  IRSequence() = default;

  explicit IRSequence(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
    validate();
  }

  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

  friend bool operator==(const IRSequence&, const IRSequence&) = default;

 private:
  void validate() const {
    using K = IrError::Kind;
    if (tokens_.empty()) throw IrError(K::kEmpty, 0, "empty IR");
    if (is_marker(tokens_.front())) {
      throw IrError(K::kMarkerAtRoot, 0, "IR must start with a form token");
    }
    long depth = 0;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i] == kOpenScope) ++depth;
      if (tokens_[i] == kCloseScope && --depth < 0) {
        throw IrError(K::kUnbalanced, i, "unbalanced markers: unexpected ')_'");
      }
    }
    if (depth != 0) {
      throw IrError(K::kUnbalanced, tokens_.size() - 1,
                    "unbalanced markers: " + std::to_string(depth) + " unclosed '_('");
    }
  }

  std::vector<std::string> tokens_;
};

namespace detail {

inline void emit(const uud::UUDNode& n, std::vector<std::string>& out) {
  out.push_back(n.form);
  if (n.children.size() == 1) {
    emit(n.children.front(), out);
  } else if (n.children.size() >= 2) {
    out.emplace_back(kOpenScope);
    for (const auto& c : n.children) emit(c, out);
    out.emplace_back(kCloseScope);
  }
}

}  // namespace detail

inline IRSequence linearize(const uud::UUDTree& t) {
  std::vector<std::string> out;
  detail::emit(t.root, out);
  return IRSequence(std::move(out));
}

namespace detail {

// Flat node arena used while reading; materialized into UUDNode at the end.
struct FlatTree {
  std::vector<std::string> forms;
  std::vector<std::vector<std::size_t>> children;

  std::size_t add(const std::string& form, std::optional<std::size_t> parent) {
    forms.push_back(form);
    children.emplace_back();
    const std::size_t id = forms.size() - 1;
    if (parent) children[*parent].push_back(id);
    return id;
  }

  uud::UUDNode build(std::size_t i) const {
    uud::UUDNode n;
    n.form = forms[i];
    n.original_position = static_cast<int>(i) + 1;
    for (auto c : children[i]) n.children.push_back(build(c));
    return n;
  }
};

class Reader {
 public:
  explicit Reader(const std::vector<std::string>& toks) : toks_(toks) {}

  uud::UUDTree read() {
    using K = IrError::Kind;
    std::size_t current = tree_.add(toks_[0], std::nullopt);
    bool scope_closed = false;
    std::size_t i = 1;
    while (i < toks_.size()) {
      const std::string& t = toks_[i];
      if (scope_closed) {
        throw IrError(K::kTrailingAfterScope, i,
                      "token '" + t + "' follows a closed top-level scope");
      }
      if (t == kCloseScope) {
        throw IrError(K::kUnbalanced, i, "unbalanced markers: unexpected ')_'");
      }
      if (t == kOpenScope) {
        i = read_scope(current, i);
        scope_closed = true;
      } else {
        current = tree_.add(t, current);
        ++i;
      }
    }
    return uud::UUDTree{tree_.build(0)};
  }

 private:
  // `open` indexes a "_(" token; returns the index after the matching ")_".
  std::size_t read_scope(std::size_t owner, std::size_t open) {
    using K = IrError::Kind;
    std::size_t i = open + 1;
    if (i < toks_.size() && toks_[i] == kCloseScope) {
      throw IrError(K::kEmptyScope, open, "empty scope");
    }
    std::optional<std::size_t> last;
    bool last_has_scope = false;
    while (i < toks_.size()) {
      const std::string& t = toks_[i];
      if (t == kCloseScope) return i + 1;
      if (t == kOpenScope) {
        if (!last || last_has_scope) {
          throw IrError(K::kScopeWithoutOwner, i, "scope has no preceding form");
        }
        i = read_scope(*last, i);
        last_has_scope = true;
      } else {
        last = tree_.add(t, owner);
        last_has_scope = false;
        ++i;
      }
    }
    throw IrError(K::kUnbalanced, open, "unbalanced markers: scope never closed");
  }

  const std::vector<std::string>& toks_;
  FlatTree tree_;
};

}  // namespace detail

// Canonical inverse of linearize(). original_position is the emission order.
inline uud::UUDTree delinearize(const IRSequence& s) {
  if (s.size() == 0) throw IrError(IrError::Kind::kEmpty, 0, "empty IR");
  return detail::Reader(s.tokens()).read();
}

inline std::string render(const IRSequence& s) { return text::join(s.tokens(), " "); }

inline IRSequence parse_ir(std::string_view line) {
  return IRSequence(text::split_ws(line));
}

}  // namespace uudnlg::ir

#endif  // UUDNLG_IR_HPP
