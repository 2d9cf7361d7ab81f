"""Acceptance suite: one pass/fail test per criterion, at the stated tolerances."""

import itertools
import time

import numpy as np
import pytest

from conftest import TABLE2, random_sentences, read_lines
from viphone.cs_pipeline import VariantPolicy, build_corpus_lexicon, lm_sentences, localize_sentence
from viphone.en_adapt import adapt, default_adapter, default_pronunciations
from viphone.g2p import default_g2p, syllable_to_phones, text_to_phones
from viphone.metrics import edit_distance, per
from viphone.ngram import train_ngram
from viphone.p2t_decoder import DecodeConfig, Decoder
from viphone.phoneme_core import PhoneSequence, parse_phone_sequence, serialize_phone_sequence
from viphone.pipeline import run_pipeline
from viphone.s2p_sim import corrupt, default_confusion_model
from viphone.viet_syllable import compose, decompose, default_tables


def test_1_table2_golden_rows():
    start = time.perf_counter()
    adapter = default_adapter()
    pron = default_pronunciations()
    g2p = default_g2p()
    for word, ipa, pre_ipa, pre_vi, pre_ph, post_ipa, post_vi, post_ph in TABLE2:
        ((prefix, postfix),) = adapter.split_ipa(pron[word])
        assert ("".join(prefix), "".join(postfix)) == (pre_ipa, post_ipa), word
        onsets = adapter.map_prefix(prefix)[0]
        assert ", ".join(onsets) == pre_vi, word
        assert ", ".join(g2p.onset_map[o][0] for o in onsets) == pre_ph, word
        rime = adapter.map_rime(postfix, onsetless=not prefix)[0]
        assert rime == post_vi, word
        assert syllable_to_phones(rime).serialize() == post_ph, word
    assert time.perf_counter() - start < 1.0


def test_2_anchor_a_to_ay():
    (w,) = [default_adapter().parse_ipa("a", "eɪ")]
    assert default_adapter().adapt_word(w)[0].text == "ây"
    assert adapt("a")[0].text == "ây"
    assert syllable_to_phones("ây").serialize() == "ə - 0 iz"


def test_3_video_variants():
    want = {"vi deo", "vi đêu", "vi đê ô"}
    assert want <= {v.text for v in adapt("video")}
    lex = build_corpus_lexicon(["xem video"])
    recs = localize_sentence("xem video", VariantPolicy("exhaustive", 100), lex)
    assert want <= {r.localized.split(" ", 1)[1] for r in recs}


def test_4_round_trips_and_clean_pipeline(lexicon500):
    start = time.perf_counter()
    grid = default_tables().legal_grid()
    assert len(grid) >= 10_000
    g2p = default_g2p()
    for s in grid:
        assert decompose(compose(s)) == s
    phones = [g2p.syllable_to_phones(s) for s in grid]
    for chunk in range(0, len(phones), 50):
        seq = PhoneSequence.from_words([[p] for p in phones[chunk : chunk + 50]])
        assert parse_phone_sequence(serialize_phone_sequence(seq)) == seq

    lex, words = lexicon500
    assert len(words) == 500
    lines = random_sentences(words, 300, seed=11)
    clean = default_confusion_model().with_rates(0, 0, 0)
    result = run_pipeline(lines, lex, model=clean, seed=0)
    assert not result.rejects and result.report.pairs == 300
    assert result.report.wer == 0.0
    assert time.perf_counter() - start < 30.0


def _oracle_table(words: list[str]) -> dict[tuple[str, str], int]:
    """Recursive definition of edit distance, evaluated shortest-first."""
    d: dict[tuple[str, str], int] = {}
    for a in words:
        for b in words:
            if len(a) + len(b) == 0:
                d[a, b] = 0
    for total in range(1, 13):
        for a in words:
            b_len = total - len(a)
            if not 0 <= b_len <= 6:
                continue
            for b in (w for w in words if len(w) == b_len):
                if not a or not b:
                    d[a, b] = len(a) + len(b)
                else:
                    d[a, b] = min(d[a[1:], b] + 1, d[a, b[1:]] + 1, d[a[1:], b[1:]] + (a[0] != b[0]))
    return d


def test_5_edit_distance_matches_oracle_exhaustively():
    words = ["".join(p) for n in range(7) for p in itertools.product("abc", repeat=n)]
    oracle = _oracle_table(words)
    assert len(oracle) == len(words) ** 2
    for a in words:
        la = list(a)
        for b in words:
            assert edit_distance(la, list(b)).distance == oracle[a, b], (a, b)


def test_6_noise_calibration():
    rng = np.random.default_rng(6)
    grid = default_tables().legal_grid()
    g2p = default_g2p()
    words, n = [], 0
    while n < 10_000:
        sp = g2p.syllable_to_phones(grid[int(rng.integers(len(grid)))])
        words.append([sp])
        n += len(sp.tokens())
    seq = PhoneSequence.from_words(words)
    noisy = corrupt(seq, default_confusion_model().with_rates(0.1, 0, 0), seed=2024)
    assert per(seq, noisy) == pytest.approx(0.10, abs=0.01)


@pytest.mark.slow
def test_7_robustness_ordering(cs_corpus):
    start = time.perf_counter()
    lex = build_corpus_lexicon(cs_corpus)
    lm = train_ngram(lm_sentences(cs_corpus), order=3)
    base = default_confusion_model()
    seeds = range(30)

    def mean_wer(rate: float, k: int) -> float:
        model = base.with_rates(rate, 0, 0)
        cfg = DecodeConfig(fuzzy_k=k)
        return float(np.mean([run_pipeline(cs_corpus, lex, lm, model, cfg, seed=s).report.wer for s in seeds]))

    rates = [0, 0.05, 0.1, 0.2, 0.3]
    curve = [mean_wer(r, 0) for r in rates]
    assert curve[0] == 0.0
    assert all(a <= b for a, b in zip(curve, curve[1:])), curve
    assert mean_wer(0.1, 1) <= curve[2]
    assert time.perf_counter() - start < 300.0


def test_8_lit_list_ambiguity():
    train = read_lines("lit_list_train.txt")
    heldout = [l.split("\t") for l in read_lines("lit_list_heldout.tsv")]
    sentences = [s for s, _ in heldout]
    lex = build_corpus_lexicon(train + sentences)
    lm = train_ngram(lm_sentences(train), order=3)
    assert lex.lookup((syllable_to_phones("lít").serialize(),)) == {("lít", "vi"), ("list", "en")}
    dec = Decoder(lex, lm)
    correct = 0
    for sentence, expected in heldout:
        phones = text_to_phones(sentence, lex)
        pos = sentence.split().index(expected)
        hyp = dec.decode(phones)[0][0].split()
        correct += len(hyp) > pos and hyp[pos] == expected
    assert correct >= 9


def test_9_neural_results_are_not_targets():
    # Error rates of the trained neural recognizer and decoder need licensed
    # speech corpora and GPU training; they are not reproduced here. The
    # property tests for criteria 4 to 8 stand in for them, so they must exist.
    substitutes = [test_4_round_trips_and_clean_pipeline, test_5_edit_distance_matches_oracle_exhaustively,
                   test_6_noise_calibration, test_7_robustness_ordering, test_8_lit_list_ambiguity]
    assert all(callable(t) for t in substitutes)
