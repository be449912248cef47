// uudnlg: command-line front end for the IR toolkit.
//
//   uudnlg prepare     --dataset train.csv --conllu parses.conllu --out dir/
//   uudnlg filter      --in raw.txt --vocab realizer.tgt --out kept.txt
//   uudnlg score       --hyp hyp.txt --refs refs.txt[,refs2.txt]
//   uudnlg stats       --in corpus.txt
//   uudnlg linearize   --in parses.conllu
//   uudnlg delinearize --in irs.txt
//   uudnlg validate    --in file.{conllu,ir}
//   uudnlg lint        --ir irs.txt --in generated.txt

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "uudnlg/pipeline.hpp"

namespace {

using namespace uudnlg;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    text::write_file(out_path, content);
  }
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::string all, line;
    while (std::getline(std::cin, line)) all += line + "\n";
    return all;
  }
  return text::read_file(path);
}

uud::PruneRules load_rules(const std::string& path) {
  if (path.empty()) return uud::default_rules();
  return uud::parse_rules(text::read_file(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linearized deep-UUD intermediate representation toolkit"};
  app.require_subcommand(1);

  // prepare
  std::string dataset, conllu_path, rules_path, out_dir;
  bool sentences_only = false;
  auto* prepare = app.add_subcommand("prepare", "Build planner and realizer training files");
  prepare->add_option("--dataset,--in", dataset, "mr,ref CSV dataset")->required();
  prepare->add_option("--conllu", conllu_path, "CoNLL-U parses of the delexicalized sentences");
  prepare->add_option("--rules", rules_path, "Prune rules file (defaults built in)");
  prepare->add_option("--out", out_dir, "Output directory")->required();
  prepare->add_flag("--sentences-only", sentences_only,
                    "Only write sentences.tsv (sent_id, delexicalized sentence) for parsing");

  // filter
  pipeline::FilterOptions fopt;
  auto* filter = app.add_subcommand("filter", "Filter augmentation text by vocabulary and length");
  filter->add_option("--in", fopt.raw, "Raw corpus")->required();
  filter->add_option("--vocab", fopt.vocab_source, "Text defining the vocabulary")->required();
  filter->add_option("--out", fopt.out, "Kept sentences")->required();
  filter->add_option("--report", fopt.report, "Per-sentence decisions (TSV)");
  filter->add_option("--min-len", fopt.bounds.min_len, "Minimum tokens (inclusive)")
      ->capture_default_str();
  filter->add_option("--max-len", fopt.bounds.max_len, "Maximum tokens (inclusive)")
      ->capture_default_str();
  filter->add_flag("--documents", fopt.documents, "Input lines are documents to sentence-split");
  filter->add_flag("--pretokenized", fopt.pretokenized, "Inputs are space-tokenized");

  // score
  std::string hyp_path, refs_arg, format = "text";
  bool score_pretok = false;
  auto* score = app.add_subcommand("score", "BLEU, NIST, METEOR-lite, ROUGE-L, CIDEr");
  score->add_option("--hyp", hyp_path, "Hypotheses, one per line")->required();
  score->add_option("--refs", refs_arg, "Reference file(s), comma separated")->required();
  score->add_flag("--pretokenized", score_pretok, "Skip tokenization");
  score->add_option("--format", format, "text or machine-readable")
      ->check(CLI::IsMember({"text", "machine-readable"}));

  // stats
  std::string stats_in;
  bool stats_pretok = false;
  auto* stats = app.add_subcommand("stats", "Sentence length statistics");
  stats->add_option("--in", stats_in, "One sentence per line")->required();
  stats->add_flag("--pretokenized", stats_pretok, "Skip tokenization");

  // linearize
  std::string lin_in, lin_out, lin_rules;
  bool lin_lower = false;
  auto* linearize = app.add_subcommand("linearize", "CoNLL-U -> IR lines");
  linearize->add_option("--in", lin_in, "CoNLL-U input (default stdin)");
  linearize->add_option("--out", lin_out, "IR output (default stdout)");
  linearize->add_option("--rules", lin_rules, "Prune rules file");
  linearize->add_flag("--lowercase", lin_lower, "Lowercase forms");

  // delinearize
  std::string delin_in, delin_out;
  auto* delinearize = app.add_subcommand("delinearize", "IR lines -> CoNLL-U trees");
  delinearize->add_option("--in", delin_in, "IR input (default stdin)");
  delinearize->add_option("--out", delin_out, "CoNLL-U output (default stdout)");

  // validate
  std::string val_in, val_kind;
  auto* validate = app.add_subcommand("validate", "Check a CoNLL-U or IR file");
  validate->add_option("--in", val_in, "File to check")->required();
  validate->add_option("--kind", val_kind, "conllu or ir (default: by extension)")
      ->check(CLI::IsMember({"conllu", "ir"}));

  // lint
  std::string lint_ir, lint_gen, lint_out;
  std::size_t allowance = 0;
  bool lint_pretok = false;
  auto* lint = app.add_subcommand("lint", "IR coverage check of generated text");
  lint->add_option("--ir", lint_ir, "IR lines")->required();
  lint->add_option("--in,--gen", lint_gen, "Generated text, parallel to --ir")->required();
  lint->add_option("--allowance", allowance, "Extra repeats tolerated")->capture_default_str();
  lint->add_flag("--pretokenized", lint_pretok, "Skip tokenization of generated text");
  lint->add_option("--out", lint_out, "Report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;  // --help exits 0
  }

  try {
    if (*prepare) {
      if (!sentences_only && conllu_path.empty()) {
        std::cerr << "prepare: --conllu is required unless --sentences-only\n";
        return 2;
      }
      const auto res = pipeline::cmd_prepare(
          {dataset, conllu_path, load_rules(rules_path), out_dir, sentences_only});
      std::cerr << "rows " << res.rows << ", sentences " << res.sentences << ", planner pairs "
                << res.planner_pairs << ", realizer pairs " << res.realizer_pairs
                << ", skipped " << res.skipped.size() << "\n";
      for (const auto& s : res.skipped) {
        std::cerr << "skipped row " << s.row << ": " << s.reason << "\n";
      }
    } else if (*filter) {
      const auto s = pipeline::cmd_filter(fopt);
      std::cerr << "input " << s.input << ", kept " << s.kept << ", rejected(length) "
                << s.rejected_length << ", rejected(oov) " << s.rejected_oov << "\n";
    } else if (*score) {
      const auto refs = text::split(refs_arg, ',');
      const auto rep = metrics::score_files(hyp_path, refs, {score_pretok});
      std::cout << metrics::format_report(rep, format == "text"
                                                   ? metrics::ReportFormat::kText
                                                   : metrics::ReportFormat::kMachineReadable);
    } else if (*stats) {
      std::cout << pipeline::cmd_stats(stats_in, stats_pretok).to_string();
    } else if (*linearize) {
      emit(lin_out, pipeline::cmd_linearize(read_input(lin_in), load_rules(lin_rules), lin_lower));
    } else if (*delinearize) {
      emit(delin_out, pipeline::cmd_delinearize(read_input(delin_in)));
    } else if (*validate) {
      auto kind = pipeline::FileKind::kIr;
      if (val_kind == "conllu" ||
          (val_kind.empty() && std::filesystem::path(val_in).extension() == ".conllu")) {
        kind = pipeline::FileKind::kConllu;
      }
      const auto v = pipeline::cmd_validate(text::read_file(val_in), kind);
      if (!v.ok) {
        std::cerr << val_in << ":" << v.line << ": " << v.message << "\n";
        return 1;
      }
      std::cout << val_in << ": ok (" << v.items << (kind == pipeline::FileKind::kIr ? " IR lines" : " sentences")
                << ")\n";
    } else if (*lint) {
      const auto s = pipeline::cmd_lint(text::read_file(lint_ir), text::read_file(lint_gen),
                                        allowance, lint_pretok);
      std::string out;
      for (std::size_t i = 0; i < s.reports.size(); ++i) {
        out += std::to_string(i + 1) + "\t" + s.reports[i].summary() + "\n";
      }
      emit(lint_out, out);
      std::cerr << s.failures << " of " << s.reports.size() << " lines fail coverage\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
