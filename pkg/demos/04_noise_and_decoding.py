"""
Noisy phones and decoding back to text
======================================

A seeded noisy channel stands in for the speech recognizer. The decoder
searches lexicon segmentations of the phone string, scoring them with an
n-gram language model, and can tolerate small phone errors (fuzzy_k).
"""

from pathlib import Path

import numpy as np

from viphone.cs_pipeline import build_corpus_lexicon, lm_sentences
from viphone.g2p import text_to_phones
from viphone.ngram import train_ngram
from viphone.p2t_decoder import DecodeConfig, decode
from viphone.pipeline import run_pipeline
from viphone.s2p_sim import corrupt, default_confusion_model

corpus = Path(__file__).resolve().parent.parent / "tests" / "data" / "cs_corpus.txt"
lines = corpus.read_text(encoding="utf-8").splitlines()
lex = build_corpus_lexicon(lines)
lm = train_ngram(lm_sentences(lines), order=3)

# lít (litre) and list (adapted as "lít") share one phone key; context decides.
for sentence in ["mua một lít sữa", "gửi cho tôi cái list nhé"]:
    phones = text_to_phones(sentence, lex)
    print(phones, "->", decode(phones, lex, lm)[0][0])

# Corrupt one sentence and decode with and without fuzzy matching.
model = default_confusion_model().with_rates(0.15, 0, 0)
clean = text_to_phones(lines[0], lex)
noisy = corrupt(clean, model, seed=3)
print("clean:", clean)
print("noisy:", noisy)
for k in (0, 1):
    print(f"fuzzy_k={k}:", decode(noisy, lex, lm, DecodeConfig(fuzzy_k=k))[0][0])

# WER over the whole corpus as the substitution rate grows.
for rate in (0.0, 0.05, 0.1, 0.2):
    noise = default_confusion_model().with_rates(rate, 0, 0)
    row = []
    for k in (0, 1):
        wers = [run_pipeline(lines, lex, lm, noise, DecodeConfig(fuzzy_k=k), seed=s).report.wer for s in range(3)]
        row.append(f"k={k} WER {np.mean(wers):.3f}")
    print(f"sub_rate {rate:.2f}: " + ", ".join(row))
