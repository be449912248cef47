#ifndef UUDNLG_PIPELINE_HPP
#define UUDNLG_PIPELINE_HPP

// File-level commands behind the uudnlg CLI. Each command reads and writes
// plain files; line-oriented work may be sharded across workers but output
// order always equals input order.

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "uudnlg/conllu.hpp"
#include "uudnlg/corpus_tools.hpp"
#include "uudnlg/coverage.hpp"
#include "uudnlg/e2e_data.hpp"
#include "uudnlg/error.hpp"
#include "uudnlg/ir.hpp"
#include "uudnlg/metrics.hpp"
#include "uudnlg/parallel.hpp"
#include "uudnlg/text.hpp"
#include "uudnlg/uud_convert.hpp"

namespace uudnlg::pipeline {

namespace fs = std::filesystem;

inline std::string lines_to_text(const std::vector<std::string>& ls) {
  std::string out;
  for (const auto& l : ls) {
    out += l;
    out += '\n';
  }
  return out;
}

// Lowercases forms; used before conversion so IR and realizer targets share
// the model-facing casing.
inline conllu::Sentence lowercased(conllu::Sentence s) {
  for (auto& t : s.tokens) t.form = text::lowercase(t.form);
  return s;
}

// ---------------------------------------------------------------------------
// prepare

struct PrepareOptions {
  std::string dataset;
  std::string conllu;  // may be empty with sentences_only
  uud::PruneRules rules = uud::default_rules();
  std::string out_dir;
  bool sentences_only = false;
};

struct Skip {
  std::size_t row;  // 1-based data row
  std::string reason;
};

struct PrepareResult {
  std::size_t rows = 0;
  std::size_t sentences = 0;
  std::size_t planner_pairs = 0;
  std::size_t realizer_pairs = 0;
  std::vector<Skip> skipped;
  std::string alignment;  // "sent_id" or "sequential"
};

struct DelexSentences {
  e2e::Delexicalized delex;
  std::vector<std::string> sentences;
};

inline std::string sentence_id(std::size_t row, std::size_t k) {
  return std::to_string(row) + "." + std::to_string(k);
}

// Splits each dataset reference, after delexicalization, into sentences.
// With sentences_only the command stops here and writes sentences.tsv
// ("sent_id<TAB>text") for an external UD parser; the parser output must
// carry "# sent_id = <row>.<k>" comments, or list the sentences in order.
inline PrepareResult cmd_prepare(const PrepareOptions& opt) {
  const auto rows = e2e::read_dataset(opt.dataset);
  fs::create_directories(opt.out_dir);
  const fs::path out(opt.out_dir);

  std::vector<DelexSentences> utts;
  utts.reserve(rows.size());
  PrepareResult res;
  res.rows = rows.size();
  for (const auto& row : rows) {
    auto d = e2e::delexicalize(row.ref, row.mr);
    auto sents = corpus::split_sentences(d.text);
    res.sentences += sents.size();
    utts.push_back({std::move(d), std::move(sents)});
  }

  if (opt.sentences_only) {
    std::vector<std::string> ls;
    for (std::size_t r = 0; r < utts.size(); ++r) {
      for (std::size_t k = 0; k < utts[r].sentences.size(); ++k) {
        ls.push_back(sentence_id(r + 1, k + 1) + "\t" + utts[r].sentences[k]);
      }
    }
    text::write_file((out / "sentences.tsv").string(), lines_to_text(ls));
    res.alignment = "none";
    return res;
  }

  // parse slot per (row, sentence); nullopt = missing
  std::vector<std::vector<std::optional<conllu::BlockResult>>> slots(utts.size());
  for (std::size_t r = 0; r < utts.size(); ++r) slots[r].resize(utts[r].sentences.size());

  auto blocks = conllu::parse_conllu_blocks(text::read_file(opt.conllu));
  const bool by_id = !blocks.empty() && std::all_of(blocks.begin(), blocks.end(), [](const auto& b) {
    return conllu::metadata(b.comments, "sent_id").has_value();
  });
  if (by_id) {
    res.alignment = "sent_id";
    for (auto& b : blocks) {
      const std::string id = *conllu::metadata(b.comments, "sent_id");
      const auto dot = id.find('.');
      std::size_t row = 0, k = 0;
      try {
        if (dot == std::string::npos) throw std::invalid_argument(id);
        std::size_t used = 0;
        row = std::stoul(id.substr(0, dot), &used);
        if (used != dot) throw std::invalid_argument(id);
        k = std::stoul(id.substr(dot + 1), &used);
        if (used != id.size() - dot - 1) throw std::invalid_argument(id);
      } catch (const std::exception&) {
        throw Error("alignment mismatch: sent_id '" + id + "' is not <row>.<sentence>");
      }
      if (row < 1 || row > slots.size() || k < 1 || k > slots[row - 1].size()) {
        throw Error("alignment mismatch: sent_id '" + id +
                    "' does not name a dataset sentence");
      }
      if (slots[row - 1][k - 1]) {
        throw Error("alignment mismatch: duplicate sent_id '" + id + "'");
      }
      slots[row - 1][k - 1] = std::move(b);
    }
  } else {
    res.alignment = "sequential";
    if (blocks.size() != res.sentences) {
      throw Error("alignment mismatch: " + std::to_string(blocks.size()) +
                  " parses for " + std::to_string(res.sentences) + " dataset sentences");
    }
    std::size_t next = 0;
    for (auto& row : slots) {
      for (auto& slot : row) slot = std::move(blocks[next++]);
    }
  }

  std::vector<std::string> psrc, ptgt, pdelex, rsrc, rtgt, rdelex;
  for (std::size_t r = 0; r < utts.size(); ++r) {
    const auto& mr = rows[r].mr;
    std::vector<ir::IRSequence> irs;
    std::vector<std::string> targets;
    std::optional<std::string> failure;
    if (utts[r].sentences.empty()) failure = "empty reference";
    for (std::size_t k = 0; k < slots[r].size() && !failure; ++k) {
      const auto& slot = slots[r][k];
      const std::string id = sentence_id(r + 1, k + 1);
      if (!slot) {
        failure = "missing parse for sentence " + id;
      } else if (slot->error) {
        failure = "malformed parse for sentence " + id + ": " + slot->error->what();
      } else {
        try {
          const auto s = lowercased(*slot->sentence);
          irs.push_back(ir::linearize(uud::convert(s, opt.rules, "sentence " + id)));
          std::vector<std::string> forms;
          for (const auto& t : s.tokens) forms.push_back(t.form);
          targets.push_back(text::join(forms, " "));
        } catch (const Error& e) {
          failure = e.what();
        }
      }
    }
    if (failure) {
      res.skipped.push_back({r + 1, *failure});
      continue;
    }
    const std::string delex_line = utts[r].delex.map.to_line();
    const auto planner = e2e::build_planner_pair(mr, irs);
    psrc.push_back(text::join(planner.source, " "));
    ptgt.push_back(text::join(planner.target, " "));
    pdelex.push_back(delex_line);
    for (std::size_t k = 0; k < irs.size(); ++k) {
      const auto pair = e2e::build_realizer_pair(irs[k], targets[k]);
      rsrc.push_back(text::join(pair.source, " "));
      rtgt.push_back(text::join(pair.target, " "));
      rdelex.push_back(delex_line);
    }
  }
  res.planner_pairs = psrc.size();
  res.realizer_pairs = rsrc.size();

  text::write_file((out / "planner.src").string(), lines_to_text(psrc));
  text::write_file((out / "planner.tgt").string(), lines_to_text(ptgt));
  text::write_file((out / "planner.delex").string(), lines_to_text(pdelex));
  text::write_file((out / "realizer.src").string(), lines_to_text(rsrc));
  text::write_file((out / "realizer.tgt").string(), lines_to_text(rtgt));
  text::write_file((out / "realizer.delex").string(), lines_to_text(rdelex));

  nlohmann::json manifest = {
      {"rows", res.rows},
      {"sentences", res.sentences},
      {"alignment", res.alignment},
      {"planner_pairs", res.planner_pairs},
      {"realizer_pairs", res.realizer_pairs},
      {"skipped_count", res.skipped.size()},
      {"skipped", nlohmann::json::array()},
  };
  for (const auto& s : res.skipped) {
    manifest["skipped"].push_back({{"row", s.row}, {"reason", s.reason}});
  }
  text::write_file((out / "manifest.json").string(), manifest.dump(2) + "\n");
  return res;
}

// ---------------------------------------------------------------------------
// filter

struct FilterOptions {
  std::string raw;
  std::string vocab_source;
  std::string out;     // kept sentences, one per line
  std::string report;  // sentence<TAB>kept|length|oov:<token>
  corpus::LengthBounds bounds;
  bool documents = false;  // raw lines are documents to be sentence-split
  bool pretokenized = false;
};

struct FilterSummary {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t rejected_length = 0;
  std::size_t rejected_oov = 0;
};

inline corpus::Tokens prepare_tokens(std::string_view line, bool pretokenized) {
  return corpus::lowercase(pretokenized ? text::split_ws(line) : corpus::tokenize(line));
}

inline FilterSummary cmd_filter(const FilterOptions& opt) {
  std::vector<corpus::Tokens> vocab_sents;
  for (const auto& l : text::lines(text::read_file(opt.vocab_source))) {
    vocab_sents.push_back(prepare_tokens(l, opt.pretokenized));
  }
  const auto vocab = corpus::build_vocab(vocab_sents);

  std::vector<std::string> raw_sents;
  for (const auto& l : text::lines(text::read_file(opt.raw))) {
    if (text::trim(l).empty()) continue;
    if (opt.documents) {
      for (auto& s : corpus::split_sentences(l)) raw_sents.push_back(std::move(s));
    } else {
      raw_sents.push_back(l);
    }
  }

  struct Row {
    std::string tokens;
    corpus::FilterDecision decision;
  };
  auto rows = parallel_map(raw_sents.size(), [&](std::size_t i) {
    auto toks = prepare_tokens(raw_sents[i], opt.pretokenized);
    return Row{text::join(toks, " "), corpus::classify(toks, vocab, opt.bounds)};
  });

  FilterSummary sum;
  sum.input = rows.size();
  std::string kept, report;
  for (const auto& r : rows) {
    report += r.tokens + "\t" + r.decision.label() + "\n";
    switch (r.decision.reason) {
      case corpus::FilterDecision::Reason::kKept:
        ++sum.kept;
        kept += r.tokens + "\n";
        break;
      case corpus::FilterDecision::Reason::kLength:
        ++sum.rejected_length;
        break;
      case corpus::FilterDecision::Reason::kOutOfVocabulary:
        ++sum.rejected_oov;
        break;
    }
  }
  text::write_file(opt.out, kept);
  if (!opt.report.empty()) text::write_file(opt.report, report);
  return sum;
}

// ---------------------------------------------------------------------------
// stats

inline corpus::CorpusStats cmd_stats(const std::string& path, bool pretokenized) {
  std::vector<corpus::Tokens> sents;
  for (const auto& l : text::lines(text::read_file(path))) {
    if (text::trim(l).empty()) continue;
    sents.push_back(pretokenized ? text::split_ws(l) : corpus::tokenize(l));
  }
  return corpus::corpus_stats(sents);
}

// ---------------------------------------------------------------------------
// linearize / delinearize

// CoNLL-U text -> one IR per sentence. Strict: the first malformed sentence
// or failed conversion aborts the command.
inline std::string cmd_linearize(std::string_view conllu_text, const uud::PruneRules& rules,
                                 bool lowercase) {
  const auto sents = conllu::parse_conllu(conllu_text);
  auto lines = parallel_map(sents.size(), [&](std::size_t i) {
    const auto s = lowercase ? lowercased(sents[i]) : sents[i];
    return ir::render(ir::linearize(uud::convert(s, rules, conllu::describe(s, i + 1))));
  });
  return lines_to_text(lines);
}

// IR lines -> CoNLL-U with one token per node. Ids follow emission order, so
// linearizing the result (with no token dropped) reproduces the IR.
inline std::string cmd_delinearize(std::string_view ir_text) {
  std::vector<conllu::Sentence> out;
  std::size_t number = 0;
  for (const auto& line : text::lines(ir_text)) {
    ++number;
    if (text::trim(line).empty()) continue;
    uud::UUDTree tree;
    try {
      tree = ir::delinearize(ir::parse_ir(line));
    } catch (const Error& e) {
      throw Error("line " + std::to_string(number) + ": " + e.what());
    }
    conllu::Sentence s;
    std::vector<std::pair<const uud::UUDNode*, int>> stack{{&tree.root, 0}};
    std::vector<conllu::Token> toks(uud::node_count(tree));
    while (!stack.empty()) {
      auto [n, head] = stack.back();
      stack.pop_back();
      auto& t = toks[static_cast<std::size_t>(n->original_position - 1)];
      t.id = n->original_position;
      t.form = n->form;
      t.head = head;
      t.deprel = head == 0 ? "root" : "dep";
      for (const auto& c : n->children) stack.emplace_back(&c, n->original_position);
    }
    s.tokens = std::move(toks);
    out.push_back(std::move(s));
  }
  return conllu::serialize_conllu(out);
}

// ---------------------------------------------------------------------------
// validate

enum class FileKind { kConllu, kIr };

struct Validation {
  bool ok = true;
  std::size_t line = 0;  // 1-based; 0 when ok
  std::string message;
  std::size_t items = 0;  // sentences or IR lines checked
};

inline Validation cmd_validate(std::string_view content, FileKind kind) {
  Validation v;
  if (kind == FileKind::kConllu) {
    try {
      v.items = conllu::parse_conllu(content).size();
    } catch (const conllu::ConlluError& e) {
      return {false, static_cast<std::size_t>(e.line()), e.what(), 0};
    }
    return v;
  }
  std::size_t number = 0;
  for (const auto& line : text::lines(content)) {
    ++number;
    try {
      ir::delinearize(ir::parse_ir(line));
    } catch (const Error& e) {
      return {false, number, e.what(), v.items};
    }
    ++v.items;
  }
  return v;
}

// ---------------------------------------------------------------------------
// lint

struct LintSummary {
  std::vector<coverage::CoverageReport> reports;
  std::size_t failures = 0;
};

inline LintSummary cmd_lint(std::string_view ir_text, std::string_view gen_text,
                            std::size_t allowance, bool pretokenized) {
  const auto irs = text::lines(ir_text);
  const auto gens = text::lines(gen_text);
  if (irs.size() != gens.size()) {
    throw Error("lint: " + std::to_string(irs.size()) + " IR lines but " +
                std::to_string(gens.size()) + " generated lines");
  }
  LintSummary s;
  s.reports = parallel_map(irs.size(), [&](std::size_t i) {
    try {
      return coverage::lint_coverage(ir::parse_ir(irs[i]), prepare_tokens(gens[i], pretokenized),
                                     allowance);
    } catch (const Error& e) {
      throw Error("line " + std::to_string(i + 1) + ": " + e.what());
    }
  });
  for (const auto& r : s.reports) s.failures += r.pass() ? 0 : 1;
  return s;
}

}  // namespace uudnlg::pipeline

#endif  // UUDNLG_PIPELINE_HPP
