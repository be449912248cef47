#ifndef UUDNLG_CORPUS_TOOLS_HPP
#define UUDNLG_CORPUS_TOOLS_HPP

// Vocabulary, sentence splitting, tokenization, the augmentation filter and
// corpus length statistics.
//
// The tokenizer is a small rule-based one. It splits off punctuation, peels
// English clitics ("doesn't" -> "does" "n't", "it's" -> "it" "'s") and keeps
// hyphenated words, numbers with internal separators and placeholders such
// as "xname" intact. Callers with their own tokenization pass tokens in
// directly.

#include <algorithm>
#include <array>
#include <cstddef>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "uudnlg/text.hpp"

namespace uudnlg::corpus {

using Tokens = std::vector<std::string>;

namespace detail {

inline bool is_leading_punct(char c) {
  return c == '"' || c == '(' || c == '[' || c == '{' || c == '\'' || c == '`';
}

inline bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?' ||
         c == '"' || c == ')' || c == ']' || c == '}' || c == '\'';
}

inline constexpr std::array<std::string_view, 13> kAbbreviations = {
    "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.",
    "vs.", "etc.", "e.g.", "i.e.", "approx."};

inline bool is_abbreviation(std::string_view word) {
  const std::string lower = text::lowercase(word);
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), lower) !=
         kAbbreviations.end();
}

inline bool ends_with_ci(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         text::lowercase(s.substr(s.size() - suffix.size())) == suffix;
}

inline constexpr std::array<std::string_view, 7> kClitics = {"n't", "'s",  "'re", "'ve",
                                                             "'ll", "'d", "'m"};

// Splits clitics off a punctuation-free word.
inline void push_word(std::string_view w, Tokens& out) {
  for (std::string_view clitic : kClitics) {
    if (w.size() > clitic.size() && ends_with_ci(w, clitic)) {
      out.emplace_back(w.substr(0, w.size() - clitic.size()));
      out.emplace_back(w.substr(w.size() - clitic.size()));
      return;
    }
  }
  out.emplace_back(w);
}

inline void tokenize_chunk(std::string_view chunk, Tokens& out) {
  // already-split clitics pass through, so re-tokenizing is a no-op
  if (std::find(kClitics.begin(), kClitics.end(), text::lowercase(chunk)) != kClitics.end()) {
    out.emplace_back(chunk);
    return;
  }
  std::size_t b = 0, e = chunk.size();
  while (b < e && is_leading_punct(chunk[b])) {
    out.emplace_back(chunk.substr(b, 1));
    ++b;
  }
  if (b < e && is_abbreviation(chunk.substr(b, e - b))) {
    out.emplace_back(chunk.substr(b, e - b));
    return;
  }
  Tokens trailing;
  while (e > b && is_trailing_punct(chunk[e - 1])) {
    // "..." stays one token
    if (chunk[e - 1] == '.' && e - b >= 3 && chunk.substr(e - 3, 3) == "...") {
      trailing.emplace_back("...");
      e -= 3;
      continue;
    }
    trailing.emplace_back(chunk.substr(e - 1, 1));
    --e;
  }
  if (e > b) push_word(chunk.substr(b, e - b), out);
  out.insert(out.end(), trailing.rbegin(), trailing.rend());
}

}  // namespace detail

inline Tokens tokenize(std::string_view sentence) {
  Tokens out;
  for (const auto& chunk : text::split_ws(sentence)) detail::tokenize_chunk(chunk, out);
  return out;
}

inline Tokens lowercase(Tokens toks) {
  for (auto& t : toks) t = text::lowercase(t);
  return toks;
}

// Sentence boundary after a run of '.', '!' or '?' (plus closing quotes or
// brackets) that is followed by whitespace or end of text. Known
// abbreviations do not end a sentence.
inline std::vector<std::string> split_sentences(std::string_view text_in) {
  std::vector<std::string> out;
  std::string current;
  const auto words = text::split_ws(text_in);
  for (const auto& w : words) {
    if (!current.empty()) current += ' ';
    current += w;
    std::size_t e = w.size();
    while (e > 0 && (w[e - 1] == '"' || w[e - 1] == '\'' || w[e - 1] == ')' ||
                     w[e - 1] == ']')) {
      --e;
    }
    const bool terminal = e > 0 && (w[e - 1] == '.' || w[e - 1] == '!' || w[e - 1] == '?');
    if (terminal && !detail::is_abbreviation(std::string_view(w).substr(0, e))) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

class Vocab {
 public:
  void add(const std::string& token, long count = 1) { entries_[token] += count; }

  bool contains(const std::string& token) const { return entries_.count(token) > 0; }

  long count(const std::string& token) const {
    auto it = entries_.find(token);
    return it == entries_.end() ? 0 : it->second;
  }

  void erase(const std::string& token) { entries_.erase(token); }

  std::size_t size() const { return entries_.size(); }

  long total() const {
    long t = 0;
    for (const auto& [_, c] : entries_) t += c;
    return t;
  }

  const std::map<std::string, long>& entries() const { return entries_; }

 private:
  std::map<std::string, long> entries_;
};

inline Vocab build_vocab(const std::vector<Tokens>& sentences) {
  Vocab v;
  for (const auto& s : sentences) {
    for (const auto& t : s) v.add(t);
  }
  return v;
}

struct LengthBounds {
  std::size_t min_len = 5;
  std::size_t max_len = 30;
};

struct FilterDecision {
  enum class Reason { kKept, kLength, kOutOfVocabulary };
  Reason reason = Reason::kKept;
  std::string oov_token;  // set for kOutOfVocabulary

  bool kept() const { return reason == Reason::kKept; }

  // "kept", "length" or "oov:<token>"
  std::string label() const {
    switch (reason) {
      case Reason::kKept:
        return "kept";
      case Reason::kLength:
        return "length";
      case Reason::kOutOfVocabulary:
        return "oov:" + oov_token;
    }
    return {};
  }
};

inline FilterDecision classify(const Tokens& sentence, const Vocab& vocab,
                               LengthBounds bounds = {}) {
  using R = FilterDecision::Reason;
  if (sentence.size() < bounds.min_len || sentence.size() > bounds.max_len) {
    return {R::kLength, {}};
  }
  for (const auto& t : sentence) {
    if (!vocab.contains(t)) return {R::kOutOfVocabulary, t};
  }
  return {};
}

struct Rejection {
  std::size_t index;
  FilterDecision decision;
};

struct FilterResult {
  std::vector<std::size_t> kept;  // input indexes, ascending
  std::vector<Rejection> rejected;
};

inline FilterResult filter_augmentation(const std::vector<Tokens>& sentences,
                                        const Vocab& vocab, LengthBounds bounds = {}) {
  FilterResult r;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto d = classify(sentences[i], vocab, bounds);
    if (d.kept()) {
      r.kept.push_back(i);
    } else {
      r.rejected.push_back({i, std::move(d)});
    }
  }
  return r;
}

struct CorpusStats {
  std::size_t sentence_count = 0;
  std::size_t min_len = 0;
  std::size_t max_len = 0;
  double mean_len = 0.0;

  bool empty() const { return sentence_count == 0; }

  std::string to_string() const {
    std::ostringstream os;
    os << "sentences\t" << sentence_count << "\nmin_len\t" << min_len << "\nmax_len\t"
       << max_len << "\nmean_len\t" << std::fixed << std::setprecision(2) << mean_len
       << "\n";
    return os.str();
  }
};

inline CorpusStats corpus_stats(const std::vector<Tokens>& sentences) {
  CorpusStats s;
  if (sentences.empty()) return s;
  s.sentence_count = sentences.size();
  s.min_len = sentences.front().size();
  std::size_t total = 0;
  for (const auto& t : sentences) {
    s.min_len = std::min(s.min_len, t.size());
    s.max_len = std::max(s.max_len, t.size());
    total += t.size();
  }
  s.mean_len = static_cast<double>(total) / static_cast<double>(s.sentence_count);
  return s;
}

}  // namespace uudnlg::corpus

#endif  // UUDNLG_CORPUS_TOOLS_HPP
