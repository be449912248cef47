#ifndef UUDNLG_E2E_DATA_HPP
#define UUDNLG_E2E_DATA_HPP

// E2E-style data: meaning representations ("name[The Punter], area[riverside]"),
// delexicalization of the name/near slots to the placeholders xname/xnear,
// the two-column mr,ref dataset file, and training-pair assembly for the
// planner (MR -> IRs) and realizer (IR -> sentence) models.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "uudnlg/corpus_tools.hpp"
#include "uudnlg/error.hpp"
#include "uudnlg/ir.hpp"
#include "uudnlg/text.hpp"

namespace uudnlg::e2e {

using Tokens = std::vector<std::string>;

inline constexpr std::string_view kNamePlaceholder = "xname";
inline constexpr std::string_view kNearPlaceholder = "xnear";
inline constexpr std::string_view kSentenceSeparator = "<sent>";

// Slot order used when linearizing an MR for the planner.
inline constexpr std::array<std::string_view, 8> kCanonicalSlots = {
    "name", "eatType", "food", "priceRange", "customer rating", "area", "familyFriendly",
    "near"};

class DataError : public Error {
 public:
  using Error::Error;
};

struct Slot {
  std::string name;
  std::string value;

  friend bool operator==(const Slot&, const Slot&) = default;
};

struct MeaningRepresentation {
  std::vector<Slot> slots;  // input order

  const std::string* find(std::string_view name) const {
    for (const auto& s : slots) {
      if (s.name == name) return &s.value;
    }
    return nullptr;
  }

  friend bool operator==(const MeaningRepresentation&,
                         const MeaningRepresentation&) = default;
};

inline MeaningRepresentation parse_mr(std::string_view input) {
  MeaningRepresentation mr;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < input.size() && text::is_space(input[i])) ++i;
  };
  skip_ws();
  while (i < input.size()) {
    const std::size_t open = input.find('[', i);
    const std::size_t bad_close = input.find(']', i);
    if (open == std::string_view::npos || bad_close < open) {
      throw DataError("MR: missing '[' after slot name in '" + std::string(input) + "'");
    }
    const std::string name(text::trim(input.substr(i, open - i)));
    if (name.empty()) throw DataError("MR: empty slot name in '" + std::string(input) + "'");
    const std::size_t close = input.find(']', open + 1);
    if (close == std::string_view::npos) {
      throw DataError("MR: missing ']' for slot '" + name + "'");
    }
    const std::string value(text::trim(input.substr(open + 1, close - open - 1)));
    if (value.empty()) throw DataError("MR: empty value for slot '" + name + "'");
    if (mr.find(name)) throw DataError("MR: duplicate slot '" + name + "'");
    mr.slots.push_back({name, value});
    i = close + 1;
    skip_ws();
    if (i < input.size()) {
      if (input[i] != ',') {
        throw DataError("MR: expected ',' after slot '" + name + "'");
      }
      ++i;
      skip_ws();
      if (i == input.size()) throw DataError("MR: trailing ','");
    }
  }
  if (mr.slots.empty()) throw DataError("MR: no slots");
  return mr;
}

inline std::string render_mr(const MeaningRepresentation& mr) {
  std::string out;
  for (std::size_t i = 0; i < mr.slots.size(); ++i) {
    if (i) out += ", ";
    out += mr.slots[i].name + "[" + mr.slots[i].value + "]";
  }
  return out;
}

struct DelexMap {
  std::vector<std::pair<std::string, std::string>> pairs;  // placeholder -> surface

  const std::string* surface(std::string_view placeholder) const {
    for (const auto& [p, s] : pairs) {
      if (p == placeholder) return &s;
    }
    return nullptr;
  }

  // "placeholder<TAB>surface" pairs, tab-joined; one line per utterance.
  std::string to_line() const {
    std::vector<std::string> parts;
    for (const auto& [p, s] : pairs) {
      parts.push_back(p);
      parts.push_back(s);
    }
    return text::join(parts, "\t");
  }

  static DelexMap from_line(std::string_view line) {
    DelexMap m;
    if (line.empty()) return m;
    auto parts = text::split(line, '\t');
    if (parts.size() % 2 != 0) throw DataError("delex map: odd number of fields");
    for (std::size_t i = 0; i < parts.size(); i += 2) {
      m.pairs.emplace_back(parts[i], parts[i + 1]);
    }
    return m;
  }

  friend bool operator==(const DelexMap&, const DelexMap&) = default;
};

namespace detail {

inline bool is_word_byte(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         static_cast<unsigned char>(c) >= 0x80;
}

inline bool boundary_before(std::string_view s, std::size_t pos) {
  return pos == 0 || !is_word_byte(s[pos - 1]) || !is_word_byte(s[pos]);
}

inline bool boundary_after(std::string_view s, std::size_t end) {
  return end == s.size() || !is_word_byte(s[end]) || !is_word_byte(s[end - 1]);
}

// Replaces every case-insensitive, token-bounded occurrence of `needle`.
inline std::string replace_bounded(std::string_view hay, std::string_view needle,
                                   std::string_view replacement) {
  if (needle.empty()) return std::string(hay);
  const std::string lower_hay = text::lowercase(hay);
  const std::string lower_needle = text::lowercase(needle);
  std::string out;
  std::size_t i = 0;
  while (i < hay.size()) {
    const std::size_t hit = lower_hay.find(lower_needle, i);
    if (hit == std::string::npos) break;
    const std::size_t end = hit + needle.size();
    if (boundary_before(hay, hit) && boundary_after(hay, end)) {
      out.append(hay.substr(i, hit - i));
      out.append(replacement);
      i = end;
    } else {
      out.append(hay.substr(i, hit + 1 - i));
      i = hit + 1;
    }
  }
  out.append(hay.substr(std::min(i, hay.size())));
  return out;
}

}  // namespace detail

struct Delexicalized {
  std::string text;
  DelexMap map;
};

// Replaces the name and near slot values by single placeholder tokens. The
// longer value is replaced first so that a name contained in the near value
// (or vice versa) does not split it.
inline Delexicalized delexicalize(std::string_view utterance, const MeaningRepresentation& mr) {
  Delexicalized out{std::string(utterance), {}};
  std::vector<std::pair<std::string_view, const std::string*>> todo;
  if (const auto* v = mr.find("name")) todo.emplace_back(kNamePlaceholder, v);
  if (const auto* v = mr.find("near")) todo.emplace_back(kNearPlaceholder, v);
  for (const auto& [p, v] : todo) out.map.pairs.emplace_back(std::string(p), *v);
  std::stable_sort(todo.begin(), todo.end(),
                   [](const auto& a, const auto& b) { return a.second->size() > b.second->size(); });
  for (const auto& [p, v] : todo) out.text = detail::replace_bounded(out.text, *v, p);
  return out;
}

struct Relexicalized {
  std::string text;
  std::vector<std::string> unknown_placeholders;  // in order of occurrence
};

inline Relexicalized relexicalize(std::string_view input, const DelexMap& map) {
  Relexicalized out;
  std::size_t i = 0;
  while (i < input.size()) {
    bool replaced = false;
    if (detail::boundary_before(input, i)) {
      for (std::string_view p : {kNamePlaceholder, kNearPlaceholder}) {
        if (input.substr(i, p.size()) != p || !detail::boundary_after(input, i + p.size())) {
          continue;
        }
        if (const auto* s = map.surface(p)) {
          out.text += *s;
        } else {
          out.text += p;
          out.unknown_placeholders.emplace_back(p);
        }
        i += p.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out.text += input[i++];
  }
  return out;
}

struct DatasetRow {
  MeaningRepresentation mr;
  std::string ref;
  std::size_t line = 0;  // 1-based line where the record starts
};

namespace detail {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line;
};

// RFC 4180 style: fields may be wrapped in double quotes, "" escapes a quote,
// quoted fields may span lines.
inline std::vector<CsvRecord> parse_csv(std::string_view s) {
  std::vector<CsvRecord> out;
  if (s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
  std::size_t i = 0, line = 1;
  while (i < s.size()) {
    CsvRecord rec{{}, line};
    std::string field;
    bool in_quotes = false, quoted = false, done = false;
    while (!done) {
      if (i >= s.size()) {
        if (in_quotes) {
          throw DataError("dataset line " + std::to_string(rec.line) + ": unterminated quote");
        }
        rec.fields.push_back(std::move(field));
        done = true;
        break;
      }
      const char c = s[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < s.size() && s[i + 1] == '"') {
            field += '"';
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field += c;
          ++i;
        }
        continue;
      }
      if (c == '"' && field.empty() && !quoted) {
        in_quotes = quoted = true;
        ++i;
      } else if (c == ',') {
        rec.fields.push_back(std::move(field));
        field.clear();
        quoted = false;
        ++i;
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && i + 1 < s.size() && s[i + 1] == '\n') ++i;
        ++i;
        ++line;
        rec.fields.push_back(std::move(field));
        done = true;
      } else {
        field += c;
        ++i;
      }
    }
    const bool blank = rec.fields.size() == 1 && rec.fields[0].empty();
    if (!blank) out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace detail

inline std::vector<DatasetRow> parse_dataset(std::string_view content) {
  auto records = detail::parse_csv(content);
  if (records.empty() || records[0].fields.size() != 2 ||
      text::trim(records[0].fields[0]) != "mr" || text::trim(records[0].fields[1]) != "ref") {
    throw DataError("dataset: missing 'mr,ref' header");
  }
  std::vector<DatasetRow> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 2) {
      throw DataError("dataset line " + std::to_string(rec.line) + ": expected 2 fields, found " +
                      std::to_string(rec.fields.size()));
    }
    try {
      rows.push_back({parse_mr(rec.fields[0]), rec.fields[1], rec.line});
    } catch (const DataError& e) {
      throw DataError("dataset line " + std::to_string(rec.line) + ": " + e.what());
    }
  }
  return rows;
}

inline std::vector<DatasetRow> read_dataset(const std::string& path) {
  return parse_dataset(text::read_file(path));
}

enum class PairKind { kPlanner, kRealizer };

struct TrainingPair {
  Tokens source;
  Tokens target;
  PairKind kind;

  friend bool operator==(const TrainingPair&, const TrainingPair&) = default;
};

namespace detail {

inline void append_slot(const Slot& slot, Tokens& out) {
  for (auto& t : corpus::tokenize(slot.name)) out.push_back(text::lowercase(t));
  if (slot.name == "name") {
    out.emplace_back(kNamePlaceholder);
  } else if (slot.name == "near") {
    out.emplace_back(kNearPlaceholder);
  } else {
    for (auto& t : corpus::tokenize(slot.value)) out.push_back(text::lowercase(t));
  }
}

}  // namespace detail

// Source: slot-name and value tokens in canonical slot order (slots outside
// the canonical list follow in input order). Target: sentence IRs joined by
// the <sent> separator token.
inline TrainingPair build_planner_pair(const MeaningRepresentation& mr,
                                       const std::vector<ir::IRSequence>& sentence_irs) {
  if (sentence_irs.empty()) throw DataError("planner pair needs at least one IR");
  TrainingPair p{{}, {}, PairKind::kPlanner};
  for (std::string_view name : kCanonicalSlots) {
    for (const auto& s : mr.slots) {
      if (s.name == name) detail::append_slot(s, p.source);
    }
  }
  for (const auto& s : mr.slots) {
    if (std::find(kCanonicalSlots.begin(), kCanonicalSlots.end(), s.name) ==
        kCanonicalSlots.end()) {
      detail::append_slot(s, p.source);
    }
  }
  for (std::size_t i = 0; i < sentence_irs.size(); ++i) {
    if (i) p.target.emplace_back(kSentenceSeparator);
    const auto& toks = sentence_irs[i].tokens();
    p.target.insert(p.target.end(), toks.begin(), toks.end());
  }
  return p;
}

// `sentence` is already tokenized, lowercased and delexicalized.
inline TrainingPair build_realizer_pair(const ir::IRSequence& ir, std::string_view sentence) {
  auto target = text::split_ws(sentence);
  if (target.empty()) throw DataError("realizer pair needs a non-empty sentence");
  if (ir.size() == 0) throw DataError("realizer pair needs a non-empty IR");
  return {ir.tokens(), std::move(target), PairKind::kRealizer};
}

}  // namespace uudnlg::e2e

#endif  // UUDNLG_E2E_DATA_HPP
