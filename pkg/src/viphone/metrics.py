"""Levenshtein alignment, WER and PER.

Corpus-level rates pool edit counts: total distance over total reference
tokens, never the mean of per-utterance rates.
"""

from __future__ import annotations

import enum
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from viphone.errors import NotAVietnameseSyllable
from viphone.phoneme_core import PhoneSequence
from viphone.viet_syllable import compose, decompose, strip_punct


class Op(enum.Enum):
    MATCH = "match"
    SUB = "sub"
    INS = "ins"
    DEL = "del"


@dataclass(frozen=True)
class AlignedPair:
    op: Op
    ref_pos: int | None
    hyp_pos: int | None
    ref: str | None
    hyp: str | None


@dataclass(frozen=True)
class AlignmentReport:
    distance: int
    ops: tuple[AlignedPair, ...]
    ref_len: int

    @property
    def rate(self) -> float:
        return self.distance / max(1, self.ref_len)

    def count(self, op: Op) -> int:
        return sum(1 for p in self.ops if p.op is op)


def _encode(ref: Sequence, hyp: Sequence) -> tuple[np.ndarray, np.ndarray]:
    ids: dict = {}
    r = np.array([ids.setdefault(t, len(ids)) for t in ref], dtype=np.int64)
    h = np.array([ids.setdefault(t, len(ids)) for t in hyp], dtype=np.int64)
    return r, h


_SMALL = 48


def _small_rows(ref: Sequence, hyp: Sequence):
    prev = list(range(len(hyp) + 1))
    yield prev
    for i, x in enumerate(ref, 1):
        cur = [i]
        for j, y in enumerate(hyp, 1):
            cur.append(min(prev[j - 1] + (x != y), prev[j] + 1, cur[j - 1] + 1))
        yield cur
        prev = cur


def _rows(ref: Sequence, hyp: Sequence):
    """Yield successive DP rows as lists.

    Within a row, ``cur[j] = min(t[j], cur[j-1] + 1)`` unrolls to a running
    minimum of ``t[k] - k`` shifted back by ``j``, which numpy does in one pass.
    Short rows skip numpy, whose call overhead dominates there.
    """
    if len(hyp) <= _SMALL:
        yield from _small_rows(ref, hyp)
        return
    r, h = _encode(ref, hyp)
    ar = np.arange(len(h) + 1)
    prev = ar.copy()
    yield prev
    for i, tok in enumerate(r, 1):
        t = np.empty_like(prev)
        t[0] = i
        t[1:] = np.minimum(prev[:-1] + (h != tok), prev[1:] + 1)
        prev = np.minimum.accumulate(t - ar) + ar
        yield prev


def levenshtein(ref: Sequence, hyp: Sequence) -> int:
    """Unit-cost edit distance in O(len(hyp)) memory."""
    row = None
    for row in _rows(ref, hyp):
        pass
    return int(row[-1])


def edit_distance(ref: Sequence[str], hyp: Sequence[str]) -> AlignmentReport:
    """Minimal alignment; ties prefer match, then sub, then del, then ins."""
    n, m = len(ref), len(hyp)
    d = [row if isinstance(row, list) else row.tolist() for row in _rows(ref, hyp)]

    ops: list[AlignedPair] = []
    i, j = n, m
    while i or j:
        if i and j and ref[i - 1] == hyp[j - 1] and d[i][j] == d[i - 1][j - 1]:
            ops.append(AlignedPair(Op.MATCH, i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i and j and d[i][j] == d[i - 1][j - 1] + 1:
            ops.append(AlignedPair(Op.SUB, i - 1, j - 1, ref[i - 1], hyp[j - 1]))
            i, j = i - 1, j - 1
        elif i and d[i][j] == d[i - 1][j] + 1:
            ops.append(AlignedPair(Op.DEL, i - 1, None, ref[i - 1], None))
            i -= 1
        else:
            ops.append(AlignedPair(Op.INS, None, j - 1, None, hyp[j - 1]))
            j -= 1
    ops.reverse()
    return AlignmentReport(d[n][m], tuple(ops), n)


def normalize_text(text: str, canonical_tones: bool = True) -> list[str]:
    """Lowercase, NFC, strip punctuation; optionally respell Vietnamese tone placement.

    With ``canonical_tones`` both "toà" and "tòa" normalize to the same form.
    """
    words = []
    for tok in unicodedata.normalize("NFC", text).lower().split():
        tok = strip_punct(tok)
        if not tok:
            continue
        if canonical_tones:
            try:
                tok = compose(decompose(tok))
            except NotAVietnameseSyllable:
                pass
        words.append(tok)
    return words


def wer(ref: str, hyp: str, canonical_tones: bool = True) -> float:
    return edit_distance(normalize_text(ref, canonical_tones), normalize_text(hyp, canonical_tones)).rate


def per(ref: PhoneSequence, hyp: PhoneSequence) -> float:
    return levenshtein(ref.tokens(), hyp.tokens()) / max(1, len(ref.tokens()))


@dataclass
class CorpusReport:
    """Streaming totals; merging two reports equals scoring their concatenation."""

    pairs: int = 0
    ref_words: int = 0
    word_edits: Counter = field(default_factory=Counter)
    ref_phones: int = 0
    phone_edits: Counter = field(default_factory=Counter)
    confusions: Counter = field(default_factory=Counter)
    phone_confusions: Counter = field(default_factory=Counter)

    def add(
        self,
        ref: str,
        hyp: str,
        ref_phones: PhoneSequence | None = None,
        hyp_phones: PhoneSequence | None = None,
        canonical_tones: bool = True,
    ) -> AlignmentReport:
        self.pairs += 1
        rep = edit_distance(normalize_text(ref, canonical_tones), normalize_text(hyp, canonical_tones))
        self.ref_words += rep.ref_len
        self._tally(rep, self.word_edits, self.confusions)
        if ref_phones is not None and hyp_phones is not None:
            prep = edit_distance(ref_phones.tokens(), hyp_phones.tokens())
            self.ref_phones += prep.ref_len
            self._tally(prep, self.phone_edits, self.phone_confusions)
        return rep

    @staticmethod
    def _tally(rep: AlignmentReport, edits: Counter, confusions: Counter) -> None:
        for p in rep.ops:
            if p.op is not Op.MATCH:
                edits[p.op.value] += 1
            if p.op is Op.SUB:
                confusions[(p.ref, p.hyp)] += 1

    def merge(self, other: CorpusReport) -> CorpusReport:
        return CorpusReport(
            self.pairs + other.pairs,
            self.ref_words + other.ref_words,
            self.word_edits + other.word_edits,
            self.ref_phones + other.ref_phones,
            self.phone_edits + other.phone_edits,
            self.confusions + other.confusions,
            self.phone_confusions + other.phone_confusions,
        )

    @property
    def wer(self) -> float:
        return sum(self.word_edits.values()) / max(1, self.ref_words)

    @property
    def per(self) -> float | None:
        if not self.ref_phones:
            return None
        return sum(self.phone_edits.values()) / self.ref_phones

    def summary(self, top: int = 5) -> dict:
        out = {
            "pairs": self.pairs,
            "wer": round(self.wer, 6),
            "ref_words": self.ref_words,
            "word_sub": self.word_edits["sub"],
            "word_ins": self.word_edits["ins"],
            "word_del": self.word_edits["del"],
        }
        if self.per is not None:
            out.update(
                per=round(self.per, 6),
                ref_phones=self.ref_phones,
                phone_sub=self.phone_edits["sub"],
                phone_ins=self.phone_edits["ins"],
                phone_del=self.phone_edits["del"],
            )
        out["top_confusions"] = [f"{r}>{h}:{c}" for (r, h), c in _ranked(self.confusions)[:top]]
        return out

    def format(self, top: int = 5) -> str:
        lines = []
        for k, v in self.summary(top).items():
            if isinstance(v, list):
                v = " ".join(v)
            lines.append(f"{k}: {v}")
        return "\n".join(lines) + "\n"


def _ranked(counter: Counter) -> list:
    return sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))


def corpus_report(pairs: Iterable[tuple], canonical_tones: bool = True) -> CorpusReport:
    """Score ``(ref, hyp)`` or ``(ref, hyp, ref_phones, hyp_phones)`` tuples."""
    report = CorpusReport()
    for pair in pairs:
        if len(pair) >= 4:
            report.add(*pair[:4], canonical_tones=canonical_tones)
        else:
            report.add(pair[0], pair[1], canonical_tones=canonical_tones)
    return report


def top_confusion(report: CorpusReport) -> tuple[str, str] | None:
    ranked = _ranked(report.confusions)
    return ranked[0][0] if ranked else None
