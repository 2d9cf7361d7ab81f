"""Word n-gram language model with interpolated absolute discounting.

For a context ``h`` seen ``c(h)`` times with ``N1+(h)`` distinct followers::

    p(w | h) = max(c(h, w) - D, 0) / c(h) + D * N1+(h) / c(h) * p(w | h')

where ``h'`` drops the oldest word. Unseen contexts fall through to ``h'``.
The unigram level interpolates with a uniform distribution over the
vocabulary plus ``<unk>``, so every context normalizes to one.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

from viphone.errors import EmptyCorpus, ViphoneError

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"
DISCOUNT = 0.75
LOG_FLOOR = 1e-10


@dataclass
class NGramModel:
    order: int
    discount: float = DISCOUNT
    # counts[n][context] -> Counter of next words, for n = 1..order
    counts: dict[int, dict[tuple[str, ...], Counter]] = field(default_factory=dict)
    vocab: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if not 1 <= self.order <= 4:
            raise ValueError(f"order must be in 1..4, got {self.order}")
        self._totals = {
            n: {h: (sum(c.values()), len(c)) for h, c in table.items()} for n, table in self.counts.items()
        }
        self._cache: dict[tuple[tuple[str, ...], str], float] = {}

    @property
    def outcomes(self) -> tuple[str, ...]:
        """Every symbol the model assigns mass to."""
        return tuple(sorted(self.vocab | {EOS, UNK}))

    def prob(self, word: str, context: Sequence[str] = ()) -> float:
        word = word if word in self.vocab or word == EOS else UNK
        context = tuple(w if w in self.vocab or w == BOS else UNK for w in context)
        context = context[len(context) - (self.order - 1) :] if self.order > 1 else ()
        key = (context, word)
        p = self._cache.get(key)
        if p is None:
            p = self._prob(word, context)
            self._cache[key] = p
        return p

    def _prob(self, word: str, context: tuple[str, ...]) -> float:
        if not context:
            total, types = self._totals[1][()]
            lower = 1.0 / len(self.outcomes)
        else:
            lower = self._prob(word, context[1:])
            stats = self._totals[len(context) + 1].get(context)
            if stats is None:
                return lower
            total, types = stats
        c = self.counts[len(context) + 1][context].get(word, 0)
        return max(c - self.discount, 0.0) / total + self.discount * types / total * lower

    def logprob(self, word: str, context: Sequence[str] = ()) -> float:
        return math.log(max(self.prob(word, context), LOG_FLOOR))

    def start(self) -> tuple[str, ...]:
        return (BOS,) * (self.order - 1)

    def advance(self, state: tuple[str, ...], word: str) -> tuple[str, ...]:
        if self.order == 1:
            return ()
        return (*state, word)[-(self.order - 1) :]

    def sentence_logprob(self, words: Sequence[str], eos: bool = True) -> float:
        state = self.start()
        total = 0.0
        for w in (*words, EOS) if eos else words:
            total += self.logprob(w, state)
            state = self.advance(state, w)
        return total

    def save(self, dest: str | Path | IO[str]) -> None:
        """Plain-text counts: a header, then ``n<TAB>count<TAB>w1 .. wn`` rows."""
        if isinstance(dest, (str, Path)):
            with open(dest, "w", encoding="utf-8", newline="\n") as fh:
                return self.save(fh)
        dest.write(f"#viphone-ngram order={self.order} discount={self.discount}\n")
        for n in sorted(self.counts):
            for h in sorted(self.counts[n]):
                for w, c in sorted(self.counts[n][h].items()):
                    dest.write(f"{n}\t{c}\t{' '.join((*h, w))}\n")

    @classmethod
    def load(cls, path: str | Path) -> NGramModel:
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().split()
            if not header or header[0] != "#viphone-ngram":
                raise ViphoneError(f"{path}: not a viphone n-gram file")
            meta = dict(kv.split("=", 1) for kv in header[1:])
            order = int(meta["order"])
            counts: dict[int, dict[tuple[str, ...], Counter]] = {n: defaultdict(Counter) for n in range(1, order + 1)}
            for lineno, line in enumerate(fh, 2):
                if not line.strip():
                    continue
                try:
                    n, c, gram = line.rstrip("\n").split("\t")
                    words = tuple(gram.split())
                    counts[int(n)][words[:-1]][words[-1]] = int(c)
                except (ValueError, KeyError) as exc:
                    raise ViphoneError(f"{path}:{lineno}: bad n-gram row") from exc
        vocab = frozenset(w for w in counts[1][()] if w != EOS)
        return cls(order, float(meta.get("discount", DISCOUNT)), {n: dict(t) for n, t in counts.items()}, vocab)


def train_ngram(corpus: Iterable[str | Sequence[str]], order: int = 3, discount: float = DISCOUNT) -> NGramModel:
    """Count n-grams over sentences (strings are whitespace-split).

    Sentences are padded with ``order - 1`` start symbols and one end symbol.
    """
    if not 1 <= order <= 4:
        raise ValueError(f"order must be in 1..4, got {order}")
    counts: dict[int, dict[tuple[str, ...], Counter]] = {n: defaultdict(Counter) for n in range(1, order + 1)}
    vocab: set[str] = set()
    for sentence in corpus:
        words = sentence.split() if isinstance(sentence, str) else list(sentence)
        if not words:
            continue
        vocab.update(words)
        padded = [BOS] * (order - 1) + words + [EOS]
        for i in range(order - 1, len(padded)):
            for n in range(1, order + 1):
                counts[n][tuple(padded[i - n + 1 : i])][padded[i]] += 1
    if not vocab:
        raise EmptyCorpus("cannot train a language model on an empty corpus")
    return NGramModel(order, discount, {n: dict(t) for n, t in counts.items()}, frozenset(vocab))
