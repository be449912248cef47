#ifndef UUDNLG_METRICS_HPP
#define UUDNLG_METRICS_HPP

// Corpus-level automatic metrics for generated text against one or more
// references: BLEU, NIST, METEOR-lite, ROUGE-L and CIDEr-D.
//
// Conventions follow the usual E2E scoring pipeline:
//   BLEU    corpus-level, clipped n-gram precision, brevity penalty against
//           the closest reference length (ties -> shorter), no smoothing.
//   NIST    mteval-style information weights from all reference n-grams,
//           matches clipped by the max reference count, brevity factor
//           against the average reference length.
//   ROUGE-L LCS F-measure with beta = 1.2, using the best precision and
//           best recall over references; averaged over instances.
//   CIDEr-D tf-idf cosine with document frequencies over the evaluation
//           set's references, clipped hypothesis weights, a Gaussian length
//           penalty (sigma = 6) and x10 scaling.
//
// METEOR-lite is a reduced METEOR without synonym or paraphrase tables. It
// is not comparable to official METEOR scores.
//
// All metrics work on caller-supplied tokens. Lowercasing and
// relexicalization happen upstream.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "uudnlg/corpus_tools.hpp"
#include "uudnlg/error.hpp"
#include "uudnlg/text.hpp"

namespace uudnlg::metrics {

using Tokens = std::vector<std::string>;

class MetricError : public Error {
 public:
  using Error::Error;
};

struct EvalInstance {
  Tokens hypothesis;
  std::vector<Tokens> references;
};

inline void validate(const std::vector<EvalInstance>& instances) {
  if (instances.empty()) throw MetricError("no instances to score");
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& in = instances[i];
    const std::string where = "instance " + std::to_string(i + 1);
    if (in.hypothesis.empty()) throw MetricError(where + ": empty hypothesis");
    if (in.references.empty()) throw MetricError(where + ": no references");
    for (const auto& r : in.references) {
      if (r.empty()) throw MetricError(where + ": empty reference");
    }
  }
}

namespace detail {

// N-grams are keyed by their tokens joined with an ASCII unit separator.
using NgramCounts = std::unordered_map<std::string, double>;

inline std::string ngram_key(const Tokens& t, std::size_t start, std::size_t n) {
  std::string key = t[start];
  for (std::size_t k = 1; k < n; ++k) {
    key += '\x1f';
    key += t[start + k];
  }
  return key;
}

inline NgramCounts count_ngrams(const Tokens& t, std::size_t n) {
  NgramCounts c;
  if (t.size() < n) return c;
  for (std::size_t i = 0; i + n <= t.size(); ++i) c[ngram_key(t, i, n)] += 1.0;
  return c;
}

inline NgramCounts max_ref_counts(const std::vector<Tokens>& refs, std::size_t n) {
  NgramCounts m;
  for (const auto& r : refs) {
    for (const auto& [g, c] : count_ngrams(r, n)) m[g] = std::max(m[g], c);
  }
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BLEU

struct BleuResult {
  double score = 0.0;
  std::vector<double> precisions;  // p1..pN
  std::vector<double> matches;
  std::vector<double> totals;
  double brevity_penalty = 1.0;
  double hyp_length = 0.0;
  double ref_length = 0.0;
};

inline std::size_t closest_ref_length(const std::vector<Tokens>& refs, std::size_t hyp_len) {
  std::size_t best = refs.front().size();
  for (const auto& r : refs) {
    const auto d = [&](std::size_t l) { return l > hyp_len ? l - hyp_len : hyp_len - l; };
    if (d(r.size()) < d(best) || (d(r.size()) == d(best) && r.size() < best)) best = r.size();
  }
  return best;
}

inline BleuResult bleu(const std::vector<EvalInstance>& instances, std::size_t max_n = 4) {
  validate(instances);
  BleuResult r;
  r.matches.assign(max_n, 0.0);
  r.totals.assign(max_n, 0.0);
  for (const auto& in : instances) {
    r.hyp_length += static_cast<double>(in.hypothesis.size());
    r.ref_length += static_cast<double>(closest_ref_length(in.references, in.hypothesis.size()));
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto refmax = detail::max_ref_counts(in.references, n);
      for (const auto& [g, c] : detail::count_ngrams(in.hypothesis, n)) {
        auto it = refmax.find(g);
        if (it != refmax.end()) r.matches[n - 1] += std::min(c, it->second);
        r.totals[n - 1] += c;
      }
    }
  }
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 0; n < max_n; ++n) {
    const double p = r.totals[n] > 0 ? r.matches[n] / r.totals[n] : 0.0;
    r.precisions.push_back(p);
    if (p == 0.0) {
      zero = true;
    } else {
      log_sum += std::log(p);
    }
  }
  r.brevity_penalty =
      r.hyp_length < r.ref_length ? std::exp(1.0 - r.ref_length / r.hyp_length) : 1.0;
  r.score = zero ? 0.0 : r.brevity_penalty * std::exp(log_sum / static_cast<double>(max_n));
  return r;
}

// ---------------------------------------------------------------------------
// NIST

struct NistResult {
  double score = 0.0;
  std::vector<double> info_gain;  // per order: matched information / hypothesis n-grams
  double brevity_factor = 1.0;
  double hyp_length = 0.0;
  double ref_length = 0.0;  // sum of per-instance average reference lengths
};

// exp(beta * log^2(min(1, ratio))) with beta chosen so ratio 2/3 gives 0.5.
inline double nist_brevity_factor(double ratio) {
  if (ratio >= 1.0) return 1.0;
  if (ratio <= 0.0) return 0.0;
  const double beta = std::log(0.5) / std::pow(std::log(1.5), 2);
  return std::exp(beta * std::pow(std::log(ratio), 2));
}

inline NistResult nist(const std::vector<EvalInstance>& instances, std::size_t max_n = 5) {
  validate(instances);
  // Reference statistics over every reference of every instance.
  std::vector<detail::NgramCounts> ref_counts(max_n + 1);
  double total_ref_words = 0.0;
  for (const auto& in : instances) {
    for (const auto& ref : in.references) {
      total_ref_words += static_cast<double>(ref.size());
      for (std::size_t n = 1; n <= max_n; ++n) {
        for (const auto& [g, c] : detail::count_ngrams(ref, n)) ref_counts[n][g] += c;
      }
    }
  }
  auto info = [&](const std::string& g, std::size_t n) {
    const double count = ref_counts[n].at(g);
    double context = total_ref_words;
    if (n > 1) {
      const auto cut = g.rfind('\x1f');
      context = ref_counts[n - 1].at(g.substr(0, cut));
    }
    return std::log2(context / count);
  };

  NistResult r;
  std::vector<double> matched_info(max_n, 0.0), hyp_ngrams(max_n, 0.0);
  for (const auto& in : instances) {
    r.hyp_length += static_cast<double>(in.hypothesis.size());
    double ref_len_sum = 0.0;
    for (const auto& ref : in.references) ref_len_sum += static_cast<double>(ref.size());
    r.ref_length += ref_len_sum / static_cast<double>(in.references.size());
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto refmax = detail::max_ref_counts(in.references, n);
      for (const auto& [g, c] : detail::count_ngrams(in.hypothesis, n)) {
        hyp_ngrams[n - 1] += c;
        auto it = refmax.find(g);
        if (it != refmax.end()) matched_info[n - 1] += info(g, n) * std::min(c, it->second);
      }
    }
  }
  double sum = 0.0;
  for (std::size_t n = 0; n < max_n; ++n) {
    const double gain = hyp_ngrams[n] > 0 ? matched_info[n] / hyp_ngrams[n] : 0.0;
    r.info_gain.push_back(gain);
    sum += gain;
  }
  r.brevity_factor = nist_brevity_factor(r.hyp_length / r.ref_length);
  r.score = sum * r.brevity_factor;
  return r;
}

// ---------------------------------------------------------------------------
// ROUGE-L

inline std::size_t lcs_length(const Tokens& a, const Tokens& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

struct RougeResult {
  double score = 0.0;
  double mean_precision = 0.0;  // best precision per instance, averaged
  double mean_recall = 0.0;
  double total_lcs = 0.0;       // longest LCS per instance, summed
};

inline constexpr double kRougeBeta = 1.2;

inline double rouge_l_instance(const EvalInstance& in, double* best_p = nullptr,
                               double* best_r = nullptr, std::size_t* best_lcs = nullptr) {
  double pmax = 0.0, rmax = 0.0;
  std::size_t lmax = 0;
  for (const auto& ref : in.references) {
    const std::size_t l = lcs_length(ref, in.hypothesis);
    pmax = std::max(pmax, static_cast<double>(l) / static_cast<double>(in.hypothesis.size()));
    rmax = std::max(rmax, static_cast<double>(l) / static_cast<double>(ref.size()));
    lmax = std::max(lmax, l);
  }
  if (best_p) *best_p = pmax;
  if (best_r) *best_r = rmax;
  if (best_lcs) *best_lcs = lmax;
  if (pmax == 0.0 || rmax == 0.0) return 0.0;
  const double b2 = kRougeBeta * kRougeBeta;
  return (1.0 + b2) * pmax * rmax / (rmax + b2 * pmax);
}

inline RougeResult rouge_l(const std::vector<EvalInstance>& instances) {
  validate(instances);
  RougeResult r;
  for (const auto& in : instances) {
    double p = 0, rc = 0;
    std::size_t l = 0;
    r.score += rouge_l_instance(in, &p, &rc, &l);
    r.mean_precision += p;
    r.mean_recall += rc;
    r.total_lcs += static_cast<double>(l);
  }
  const auto n = static_cast<double>(instances.size());
  r.score /= n;
  r.mean_precision /= n;
  r.mean_recall /= n;
  return r;
}

// ---------------------------------------------------------------------------
// CIDEr-D

struct CiderResult {
  double score = 0.0;
  std::vector<double> per_n;  // mean over instances of the per-order similarity
};

inline constexpr double kCiderSigma = 6.0;

namespace detail {

struct TfIdf {
  std::vector<NgramCounts> vec;
  std::vector<double> norm;
  double length = 0.0;
};

}  // namespace detail

inline CiderResult cider(const std::vector<EvalInstance>& instances, std::size_t max_n = 4) {
  validate(instances);
  // Document frequency: number of instances whose reference set contains the n-gram.
  std::unordered_map<std::string, double> df;
  for (const auto& in : instances) {
    std::unordered_set<std::string> seen;
    for (const auto& ref : in.references) {
      for (std::size_t n = 1; n <= max_n; ++n) {
        for (const auto& [g, c] : detail::count_ngrams(ref, n)) seen.insert(g);
      }
    }
    for (const auto& g : seen) df[g] += 1.0;
  }
  const double log_docs = std::log(static_cast<double>(instances.size()));

  auto to_vec = [&](const Tokens& t) {
    detail::TfIdf v;
    v.vec.resize(max_n);
    v.norm.assign(max_n, 0.0);
    for (std::size_t n = 1; n <= max_n; ++n) {
      for (const auto& [g, tf] : detail::count_ngrams(t, n)) {
        auto it = df.find(g);
        const double d = std::log(std::max(1.0, it == df.end() ? 0.0 : it->second));
        const double w = tf * (log_docs - d);
        v.vec[n - 1][g] = w;
        v.norm[n - 1] += w * w;
        // length counts bigrams, as in the reference scorer
        if (n == 2) v.length += tf;
      }
    }
    for (auto& x : v.norm) x = std::sqrt(x);
    return v;
  };

  CiderResult r;
  r.per_n.assign(max_n, 0.0);
  for (const auto& in : instances) {
    const auto hyp = to_vec(in.hypothesis);
    std::vector<double> acc(max_n, 0.0);
    for (const auto& ref_tokens : in.references) {
      const auto ref = to_vec(ref_tokens);
      const double delta = hyp.length - ref.length;
      const double penalty = std::exp(-(delta * delta) / (2.0 * kCiderSigma * kCiderSigma));
      for (std::size_t n = 0; n < max_n; ++n) {
        double val = 0.0;
        for (const auto& [g, w] : hyp.vec[n]) {
          auto it = ref.vec[n].find(g);
          if (it != ref.vec[n].end()) val += std::min(w, it->second) * it->second;
        }
        if (hyp.norm[n] != 0.0 && ref.norm[n] != 0.0) val /= hyp.norm[n] * ref.norm[n];
        acc[n] += val * penalty;
      }
    }
    double mean = 0.0;
    const auto nrefs = static_cast<double>(in.references.size());
    for (std::size_t n = 0; n < max_n; ++n) {
      mean += acc[n];
      r.per_n[n] += acc[n] / nrefs;
    }
    r.score += 10.0 * (mean / static_cast<double>(max_n)) / nrefs;
  }
  const auto count = static_cast<double>(instances.size());
  r.score /= count;
  for (auto& x : r.per_n) x /= count;
  return r;
}

// ---------------------------------------------------------------------------
// METEOR-lite
//
// Unigram alignment in two stages (exact, then stem), F_mean with alpha=0.9,
// fragmentation penalty gamma * (chunks / matches)^beta with gamma=0.5,
// beta=3. Within a stage each hypothesis token, left to right, takes the
// reference position right after the previous alignment when it matches,
// otherwise the leftmost unaligned match. Best reference per instance;
// corpus score is the mean over instances.

inline constexpr double kMeteorAlpha = 0.9;
inline constexpr double kMeteorBeta = 3.0;
inline constexpr double kMeteorGamma = 0.5;

// Strips one common English suffix, keeping a stem of at least 3 bytes.
inline std::string simple_stem(std::string_view word) {
  std::string w = text::lowercase(word);
  struct Rule {
    std::string_view suffix;
    std::string_view replacement;
  };
  static constexpr Rule kRules[] = {{"ies", "y"}, {"ing", ""}, {"edly", ""}, {"ed", ""},
                                    {"es", ""},   {"ly", ""},  {"s", ""}};
  for (const auto& r : kRules) {
    if (w.size() >= r.suffix.size() + 3 &&
        std::string_view(w).substr(w.size() - r.suffix.size()) == r.suffix) {
      return w.substr(0, w.size() - r.suffix.size()) + std::string(r.replacement);
    }
  }
  return w;
}

struct MeteorAlignment {
  std::size_t matches = 0;
  std::size_t chunks = 0;
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
};

inline MeteorAlignment meteor_align(const Tokens& hyp, const Tokens& ref) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> align(hyp.size(), kNone);
  std::vector<bool> used(ref.size(), false);

  auto stage = [&](auto&& key) {
    std::size_t prev = kNone;
    for (std::size_t i = 0; i < hyp.size(); ++i) {
      if (align[i] != kNone) {
        prev = align[i];
        continue;
      }
      const std::string k = key(hyp[i]);
      std::size_t pick = kNone;
      if (prev != kNone && prev + 1 < ref.size() && !used[prev + 1] && key(ref[prev + 1]) == k) {
        pick = prev + 1;
      } else {
        for (std::size_t j = 0; j < ref.size(); ++j) {
          if (!used[j] && key(ref[j]) == k) {
            pick = j;
            break;
          }
        }
      }
      if (pick != kNone) {
        align[i] = pick;
        used[pick] = true;
      }
      prev = pick;
    }
  };
  stage([](const std::string& w) { return w; });
  stage([](const std::string& w) { return simple_stem(w); });

  MeteorAlignment m;
  std::size_t last = kNone;
  bool in_chunk = false;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    if (align[i] == kNone) {
      in_chunk = false;
      continue;
    }
    ++m.matches;
    if (!(in_chunk && last != kNone && align[i] == last + 1)) ++m.chunks;
    in_chunk = true;
    last = align[i];
  }
  if (m.matches == 0) return m;
  const auto mm = static_cast<double>(m.matches);
  m.precision = mm / static_cast<double>(hyp.size());
  m.recall = mm / static_cast<double>(ref.size());
  m.fmean = m.precision * m.recall /
            (kMeteorAlpha * m.precision + (1.0 - kMeteorAlpha) * m.recall);
  m.penalty = kMeteorGamma * std::pow(static_cast<double>(m.chunks) / mm, kMeteorBeta);
  m.score = m.fmean * (1.0 - m.penalty);
  return m;
}

struct MeteorResult {
  double score = 0.0;
  double mean_fmean = 0.0;
  double mean_penalty = 0.0;
  double total_matches = 0.0;
  double total_chunks = 0.0;
};

inline MeteorResult meteor_lite(const std::vector<EvalInstance>& instances) {
  validate(instances);
  MeteorResult r;
  for (const auto& in : instances) {
    MeteorAlignment best;
    bool first = true;
    for (const auto& ref : in.references) {
      auto a = meteor_align(in.hypothesis, ref);
      if (first || a.score > best.score) best = a;
      first = false;
    }
    r.score += best.score;
    r.mean_fmean += best.fmean;
    r.mean_penalty += best.penalty;
    r.total_matches += static_cast<double>(best.matches);
    r.total_chunks += static_cast<double>(best.chunks);
  }
  const auto n = static_cast<double>(instances.size());
  r.score /= n;
  r.mean_fmean /= n;
  r.mean_penalty /= n;
  return r;
}

// ---------------------------------------------------------------------------
// Combined report

struct MetricReport {
  double bleu = 0.0;
  double nist = 0.0;
  double meteor = 0.0;
  double rouge_l = 0.0;
  double cider = 0.0;
  std::vector<std::pair<std::string, double>> components;  // ordered
};

inline MetricReport evaluate(const std::vector<EvalInstance>& instances) {
  const auto b = bleu(instances);
  const auto n = nist(instances);
  const auto m = meteor_lite(instances);
  const auto r = rouge_l(instances);
  const auto c = cider(instances);

  MetricReport rep{b.score, n.score, m.score, r.score, c.score, {}};
  auto& comp = rep.components;
  for (std::size_t i = 0; i < b.precisions.size(); ++i) {
    comp.emplace_back("bleu.p" + std::to_string(i + 1), b.precisions[i]);
  }
  comp.emplace_back("bleu.brevity_penalty", b.brevity_penalty);
  comp.emplace_back("bleu.hyp_length", b.hyp_length);
  comp.emplace_back("bleu.ref_length", b.ref_length);
  for (std::size_t i = 0; i < n.info_gain.size(); ++i) {
    comp.emplace_back("nist.info" + std::to_string(i + 1), n.info_gain[i]);
  }
  comp.emplace_back("nist.brevity_factor", n.brevity_factor);
  comp.emplace_back("meteor.fmean", m.mean_fmean);
  comp.emplace_back("meteor.penalty", m.mean_penalty);
  comp.emplace_back("meteor.matches", m.total_matches);
  comp.emplace_back("meteor.chunks", m.total_chunks);
  comp.emplace_back("rouge_l.precision", r.mean_precision);
  comp.emplace_back("rouge_l.recall", r.mean_recall);
  comp.emplace_back("rouge_l.lcs", r.total_lcs);
  for (std::size_t i = 0; i < c.per_n.size(); ++i) {
    comp.emplace_back("cider.sim" + std::to_string(i + 1), c.per_n[i]);
  }
  return rep;
}

enum class ReportFormat { kText, kMachineReadable };

inline std::string format_report(const MetricReport& r, ReportFormat f) {
  std::ostringstream os;
  os << std::fixed;
  if (f == ReportFormat::kText) {
    os << std::setprecision(4);
    os << "BLEU: " << r.bleu << "\nNIST: " << r.nist << "\nMETEOR-lite: " << r.meteor
       << "\nROUGE_L: " << r.rouge_l << "\nCIDEr: " << r.cider << "\n";
    return os.str();
  }
  os << std::setprecision(6);
  os << "bleu\t" << r.bleu << "\nnist\t" << r.nist << "\nmeteor_lite\t" << r.meteor
     << "\nrouge_l\t" << r.rouge_l << "\ncider\t" << r.cider << "\n";
  for (const auto& [k, v] : r.components) os << "component." << k << "\t" << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// File-level scoring

struct ScoreOptions {
  bool pretokenized = false;
};

namespace detail {

inline Tokens to_tokens(std::string_view line, bool pretokenized) {
  return pretokenized ? text::split_ws(line) : corpus::tokenize(line);
}

}  // namespace detail

// Builds instances from file contents. With one reference text containing
// blank lines, references are read as blank-line-separated blocks aligned
// to hypotheses; otherwise each reference text is parallel to the
// hypotheses, one line each (an empty line contributes no reference).
inline std::vector<EvalInstance> load_instances(std::string_view hyp_text,
                                                const std::vector<std::string>& ref_texts,
                                                ScoreOptions opts = {}) {
  if (ref_texts.empty()) throw MetricError("no reference files");
  auto hyp_lines = text::lines(hyp_text);
  std::vector<EvalInstance> out(hyp_lines.size());
  for (std::size_t i = 0; i < hyp_lines.size(); ++i) {
    out[i].hypothesis = detail::to_tokens(hyp_lines[i], opts.pretokenized);
  }

  auto has_blank = [](const std::vector<std::string>& ls) {
    return std::any_of(ls.begin(), ls.end(),
                       [](const std::string& l) { return text::trim(l).empty(); });
  };

  if (ref_texts.size() == 1 && has_blank(text::lines(ref_texts[0]))) {
    std::vector<std::vector<std::string>> blocks;
    std::vector<std::string> cur;
    for (const auto& l : text::lines(ref_texts[0])) {
      if (text::trim(l).empty()) {
        if (!cur.empty()) blocks.push_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(l);
      }
    }
    if (!cur.empty()) blocks.push_back(std::move(cur));
    if (blocks.size() != hyp_lines.size()) {
      throw MetricError("reference blocks (" + std::to_string(blocks.size()) +
                        ") do not match hypotheses (" + std::to_string(hyp_lines.size()) + ")");
    }
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      for (const auto& l : blocks[i]) {
        out[i].references.push_back(detail::to_tokens(l, opts.pretokenized));
      }
    }
  } else {
    for (std::size_t f = 0; f < ref_texts.size(); ++f) {
      auto ls = text::lines(ref_texts[f]);
      if (ls.size() != hyp_lines.size()) {
        throw MetricError("reference file " + std::to_string(f + 1) + " has " +
                          std::to_string(ls.size()) + " lines, hypotheses have " +
                          std::to_string(hyp_lines.size()));
      }
      for (std::size_t i = 0; i < ls.size(); ++i) {
        auto toks = detail::to_tokens(ls[i], opts.pretokenized);
        if (!toks.empty()) out[i].references.push_back(std::move(toks));
      }
    }
  }
  return out;
}

inline MetricReport score_files(const std::string& hyp_path,
                                const std::vector<std::string>& ref_paths,
                                ScoreOptions opts = {}) {
  std::vector<std::string> refs;
  for (const auto& p : ref_paths) refs.push_back(text::read_file(p));
  return evaluate(load_instances(text::read_file(hyp_path), refs, opts));
}

}  // namespace uudnlg::metrics

#endif  // UUDNLG_METRICS_HPP
