"""Phone-to-text decoding: lexicon-constrained beam search with an n-gram LM.

Hypotheses consume syllables left to right. At each position the candidate
words are lexicon entries whose phones match the next 1..4 syllables, each
syllable within ``fuzzy_k`` phone edits. A position no entry covers gets a
fallback word spelled from its phones, so decoding never fails.

    score = lm_weight * log p_LM(words) - fuzzy_penalty * edits
"""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator

from viphone.g2p import Lexicon, render_syllable
from viphone.ngram import EOS, NGramModel, train_ngram
from viphone.phoneme_core import PhoneSequence, SyllablePhones

__all__ = [
    "Candidate",
    "DecodeConfig",
    "DecodeHypothesis",
    "Decoder",
    "decode",
    "decode_corpus",
    "train_ngram",
]

MAX_SPAN = 4


@dataclass(frozen=True)
class DecodeConfig:
    beam_width: int = 8
    fuzzy_k: int = 0
    lm_weight: float = 1.0
    fuzzy_penalty: float = 4.0

    def __post_init__(self) -> None:
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if not 0 <= self.fuzzy_k <= 2:
            raise ValueError("fuzzy_k must be in 0..2")
        if self.lm_weight < 0 or self.fuzzy_penalty < 0:
            raise ValueError("lm_weight and fuzzy_penalty must be nonnegative")


@dataclass(frozen=True)
class Candidate:
    """A word that can cover ``span`` syllables starting at some position."""

    word: str
    lang: str
    span: int
    edits: int


@dataclass(frozen=True)
class DecodeHypothesis:
    consumed: int
    words: tuple[str, ...]
    score: float
    edits: int = 0
    state: tuple[str, ...] = field(default=(), compare=False)

    @property
    def text(self) -> str:
        return " ".join(self.words)

    def order_key(self) -> tuple:
        return (-self.score, self.edits, self.text)


@lru_cache(maxsize=1 << 18)
def _syllable_distance(a: tuple[str, ...], b: tuple[str, ...]) -> int:
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j - 1] + (x != y), prev[j] + 1, cur[j - 1] + 1))
        prev = cur
    return prev[-1]


class Decoder:
    """Lexicon index plus LM; build once, decode many sequences."""

    def __init__(self, lex: Lexicon, lm: NGramModel, cfg: DecodeConfig | None = None) -> None:
        self.lex = lex
        self.lm = lm
        self.cfg = cfg or DecodeConfig()
        # first-syllable key -> [(word, lang, full key tuple)]
        self._by_first: dict[str, list[tuple[str, str, tuple[str, ...]]]] = defaultdict(list)
        self._tokens: dict[str, tuple[str, ...]] = {}
        for key, words in lex.word_entries.items():
            if not key or len(key) > MAX_SPAN:
                continue
            for word, lang in sorted(words):
                self._by_first[key[0]].append((word, lang, key))
            for k in key:
                self._tokens.setdefault(k, tuple(_key_tokens(k)))
        # symmetric-delete index: two strings within k edits share a variant
        # obtained by deleting at most k tokens from each
        self._delete_index: dict[tuple[str, ...], set[str]] = defaultdict(set)
        if self.cfg.fuzzy_k:
            for k, toks in self._tokens.items():
                for variant in _deletions(toks, self.cfg.fuzzy_k):
                    self._delete_index[variant].add(k)
        self._near_cache: dict[str, dict[str, int]] = {}

    def _near(self, syl: SyllablePhones) -> dict[str, int]:
        """Lexicon syllable keys within ``fuzzy_k`` edits of ``syl``."""
        key = syl.serialize()
        if self.cfg.fuzzy_k == 0:
            return {key: 0} if key in self._tokens else {}
        hit = self._near_cache.get(key)
        if hit is not None:
            return hit
        toks = tuple(syl.tokens())
        pool = set()
        for variant in _deletions(toks, self.cfg.fuzzy_k):
            pool.update(self._delete_index.get(variant, ()))
        out = {}
        for k in pool:
            d = _syllable_distance(toks, self._tokens[k])
            if d <= self.cfg.fuzzy_k:
                out[k] = d
        self._near_cache[key] = out
        return out

    def candidates(self, phones: PhoneSequence) -> list[list[Candidate]]:
        sylls = phones.syllables
        near = [self._near(s) for s in sylls]
        out: list[list[Candidate]] = []
        for i in range(len(sylls)):
            found: dict[tuple[str, str, int], int] = {}
            for first, d0 in near[i].items():
                for word, lang, key in self._by_first.get(first, ()):
                    if i + len(key) > len(sylls):
                        continue
                    edits = d0
                    for j, k in enumerate(key[1:], 1):
                        d = near[i + j].get(k)
                        if d is None:
                            break
                        edits += d
                    else:
                        ident = (word, lang, len(key))
                        if edits < found.get(ident, edits + 1):
                            found[ident] = edits
            cands = [Candidate(w, lang, span, e) for (w, lang, span), e in found.items()]
            if not cands:
                cands = [Candidate(render_syllable(sylls[i]), "fallback", 1, 0)]
            cands.sort(key=lambda c: (c.edits, -c.span, c.word, c.lang))
            out.append(cands)
        return out

    def _extend(self, h: DecodeHypothesis, c: Candidate) -> DecodeHypothesis:
        lm = self.lm.logprob(c.word, h.state)
        score = h.score + self.cfg.lm_weight * lm - self.cfg.fuzzy_penalty * c.edits
        return DecodeHypothesis(h.consumed + c.span, (*h.words, c.word), score, h.edits + c.edits, self.lm.advance(h.state, c.word))

    def _finish(self, h: DecodeHypothesis) -> DecodeHypothesis:
        score = h.score + self.cfg.lm_weight * self.lm.logprob(EOS, h.state)
        return DecodeHypothesis(h.consumed, h.words, score, h.edits, h.state)

    def decode(self, phones: PhoneSequence) -> list[tuple[str, float]]:
        n = len(phones.syllables)
        if n == 0:
            return [("", 0.0)]
        cands = self.candidates(phones)
        beams: list[list[DecodeHypothesis]] = [[] for _ in range(n + 1)]
        beams[0] = [DecodeHypothesis(0, (), 0.0, 0, self.lm.start())]
        for pos in range(n):
            live = sorted(beams[pos], key=DecodeHypothesis.order_key)[: self.cfg.beam_width]
            for h in live:
                for c in cands[pos]:
                    beams[pos + c.span].append(self._extend(h, c))
        final = sorted((self._finish(h) for h in beams[n]), key=DecodeHypothesis.order_key)
        # identical texts can arise from homophone paths; keep the best of each
        seen: set[str] = set()
        ranked = []
        for h in final:
            if h.text in seen:
                continue
            seen.add(h.text)
            ranked.append((h.text, h.score))
            if len(ranked) == self.cfg.beam_width:
                break
        return ranked


def _deletions(toks: tuple[str, ...], k: int) -> set[tuple[str, ...]]:
    out = {toks}
    frontier = {toks}
    for _ in range(k):
        frontier = {t[:i] + t[i + 1 :] for t in frontier for i in range(len(t))}
        out |= frontier
    return out


def _key_tokens(key: str) -> list[str]:
    return [t for t in key.split() if t != "-"]


def decode(phones: PhoneSequence, lex: Lexicon, lm: NGramModel, cfg: DecodeConfig | None = None) -> list[tuple[str, float]]:
    """Ranked ``(text, score)`` pairs, best first; never empty."""
    return Decoder(lex, lm, cfg).decode(phones)


_worker: Decoder | None = None


def _init_worker(lex: Lexicon, lm: NGramModel, cfg: DecodeConfig) -> None:
    global _worker
    _worker = Decoder(lex, lm, cfg)


def _decode_one(item: tuple[str, PhoneSequence]) -> tuple[str, str]:
    rid, phones = item
    return rid, _worker.decode(phones)[0][0]


def decode_corpus(
    records: Iterable,
    lex: Lexicon,
    lm: NGramModel,
    cfg: DecodeConfig | None = None,
    jobs: int = 1,
) -> Iterator[tuple[str, str]]:
    """Best hypothesis per record as ``(id, text)``, in input order.

    ``records`` holds objects with ``id`` and ``phones`` attributes (such as
    ``CsRecord``) or ``(id, PhoneSequence)`` pairs.
    """
    cfg = cfg or DecodeConfig()
    items = ((r.id, r.phones) if hasattr(r, "phones") else tuple(r) for r in records)
    if jobs <= 1:
        dec = Decoder(lex, lm, cfg)
        for rid, phones in items:
            yield rid, dec.decode(phones)[0][0]
        return
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(lex, lm, cfg)) as pool:
        yield from pool.map(_decode_one, items, chunksize=16)
