"""Computes reference metric values for the metric fixtures.

Uses the public scorer components of the E2E evaluation toolchain:
pycocoevalcap (BLEU, ROUGE-L, CIDEr-D) and NLTK's port of the mteval NIST
score. Run once; the printed values are frozen into tests/metrics_test.cpp
and tests/acceptance_test.cpp.

    pip install pycocoevalcap nltk
    python tests/oracle/metrics_oracle.py tests/data/metrics20.hyp tests/data/metrics20.ref

A reference file containing blank lines is read as one block of
references per hypothesis.
"""

import sys

from nltk.translate.nist_score import corpus_nist
from pycocoevalcap.bleu.bleu import Bleu
from pycocoevalcap.cider.cider import Cider
from pycocoevalcap.rouge.rouge import Rouge


def main(hyp_path, ref_path):
    hyps = [l.strip() for l in open(hyp_path, encoding="utf-8")]
    lines = [l.strip() for l in open(ref_path, encoding="utf-8")]
    if "" in lines:
        refs, block = [], []
        for l in lines + [""]:
            if l:
                block.append(l)
            elif block:
                refs.append(block)
                block = []
    else:
        refs = [[l] for l in lines]
    assert len(hyps) == len(refs)
    res = {i: [h] for i, h in enumerate(hyps)}
    gts = {i: r for i, r in enumerate(refs)}

    bleu, _ = Bleu(4).compute_score(gts, res, verbose=0)
    rouge, _ = Rouge().compute_score(gts, res)
    cider, _ = Cider().compute_score(gts, res)
    nist = corpus_nist([[r.split() for r in rs] for rs in refs], [h.split() for h in hyps], n=5)

    print(f"bleu\t{bleu[3]:.10f}")
    print(f"nist\t{nist:.10f}")
    print(f"rouge_l\t{rouge:.10f}")
    print(f"cider\t{cider:.10f}")


if __name__ == "__main__":
    main(sys.argv[1], sys.argv[2])
