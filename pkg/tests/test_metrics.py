import itertools
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from viphone.metrics import (
    CorpusReport,
    Op,
    corpus_report,
    edit_distance,
    levenshtein,
    normalize_text,
    per,
    top_confusion,
    wer,
)
from viphone.phoneme_core import parse_phone_sequence


@lru_cache(maxsize=None)
def oracle(a: str, b: str) -> int:
    """Textbook recursive definition."""
    if not a or not b:
        return len(a) + len(b)
    return min(oracle(a[1:], b) + 1, oracle(a, b[1:]) + 1, oracle(a[1:], b[1:]) + (a[0] != b[0]))


def strings(max_len: int) -> list[str]:
    return ["".join(p) for n in range(max_len + 1) for p in itertools.product("abc", repeat=n)]


def replay(ref, rep):
    out = []
    for p in rep.ops:
        if p.op in (Op.MATCH, Op.SUB, Op.INS):
            out.append(p.hyp)
    return out


def test_exhaustive_against_oracle():
    words = strings(5)
    for a in words:
        for b in words:
            assert levenshtein(a, b) == oracle(a, b), (a, b)


def test_alignments_are_optimal_and_valid():
    words = strings(4)
    for a in words:
        for b in words:
            rep = edit_distance(list(a), list(b))
            assert rep.distance == oracle(a, b)
            assert sum(p.op is not Op.MATCH for p in rep.ops) == rep.distance
            assert "".join(replay(a, rep)) == b
            assert [p.ref for p in rep.ops if p.ref is not None] == list(a)


seqs = st.lists(st.sampled_from("abcd"), max_size=12)


@given(seqs, seqs, seqs)
def test_metric_axioms(a, b, c):
    assert levenshtein(a, b) == levenshtein(b, a)
    assert levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c)
    assert (levenshtein(a, b) == 0) == (a == b)
    assert abs(len(a) - len(b)) <= levenshtein(a, b) <= max(len(a), len(b))


def test_wer_examples():
    assert wer("khi mình đi dự concert", "khi mình đi giữ con sót") == pytest.approx(0.6)
    assert wer("đi dự concert", "đi giữ con sót") == pytest.approx(1.0)
    assert wer("Xin chào!", "xin chào") == 0.0
    assert wer("", "") == 0.0


def test_tone_placement_is_normalized():
    assert wer("toà nhà", "tòa nhà") == 0.0
    assert wer("toà nhà", "tòa nhà", canonical_tones=False) == 0.5
    assert normalize_text("Hòa, THUỶ.") == ["hoà", "thuỷ"]


def test_per():
    ref = parse_phone_sequence("ɛ - 4 tz")
    assert per(ref, parse_phone_sequence("ɛ - 0 tz")) == pytest.approx(1 / 3)
    assert per(ref, ref) == 0.0


def test_long_inputs_are_fast():
    rng = np.random.default_rng(0)
    a, b = rng.integers(0, 40, 5000).tolist(), rng.integers(0, 40, 5000).tolist()
    d = levenshtein(a, b)
    assert 0 < d <= 5000


def test_corpus_report_merge_equals_concatenation():
    pairs = [("đi học", "đi hộc"), ("list nhé", "lít nhé"), ("xin chào", "xin chào bạn")]
    whole = corpus_report(pairs)
    merged = corpus_report(pairs[:1]).merge(corpus_report(pairs[1:]))
    assert whole == merged
    assert whole.wer == pytest.approx(3 / 6)
    assert whole.summary()["word_ins"] == 1


def test_report_is_order_invariant():
    pairs = [("a b c", "a c"), ("đi học", "đi hộc"), ("x", "y z")]
    assert corpus_report(pairs).summary() == corpus_report(pairs[::-1]).summary()


def test_confusions():
    rep = corpus_report([("list nhé", "lít nhé"), ("list", "lít"), ("học", "hộc")])
    assert top_confusion(rep) == ("list", "lít")
    assert rep.summary()["top_confusions"][0] == "list>lít:2"
    assert top_confusion(CorpusReport()) is None


def test_phone_totals():
    rep = CorpusReport()
    rep.add("ét", "et", parse_phone_sequence("ɛ - 4 tz"), parse_phone_sequence("ɛ - 0 tz"))
    assert rep.per == pytest.approx(1 / 3)
    assert rep.phone_confusions[("4", "0")] == 1
