"""
Building a phone-to-text dataset
================================

Code-switched sentences become records whose phones use the adapted
pronunciations of the English words, while the reference text keeps the
English spelling. That pairing is what a phone-to-text model learns from.
"""

import io
from pathlib import Path

from viphone.cs_pipeline import VariantPolicy, build_corpus_lexicon, build_p2t_corpus, write_jsonl

lines = [
    "Khi mình đi dự concert, vui lắm!",
    "tối nay xem video về camera mới",
    "mua zebra ở đâu",  # not in the pronouncing dictionary
]

# The lexicon covers every Vietnamese syllable and known English word.
lex = build_corpus_lexicon(lines)

# One record per sentence, using each English word's top variant.
for rec in build_p2t_corpus(lines, VariantPolicy("rank0"), lex):
    print(rec.to_json())

# Exhaustive mode enumerates variant combinations, up to a cap.
buf = io.StringIO()
n = write_jsonl(build_p2t_corpus(lines[1:2], VariantPolicy("exhaustive", 6), lex), buf)
print(n, "records")
print(buf.getvalue())

# The same policy and seed give byte-identical output, with any job count.
corpus = Path(__file__).resolve().parent.parent / "tests" / "data" / "cs_corpus.txt"
if corpus.exists():
    text = corpus.read_text(encoding="utf-8").splitlines()
    lex = build_corpus_lexicon(text)
    policy = VariantPolicy("sampled", 3, seed=7)
    a = [r.to_json() for r in build_p2t_corpus(text, policy, lex, jobs=1)]
    b = [r.to_json() for r in build_p2t_corpus(text, policy, lex, jobs=2)]
    print(len(a), "records, identical across job counts:", a == b)
