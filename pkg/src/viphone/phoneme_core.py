"""Extended Vietnamese phone inventory and the phone-string grammar.

A syllable serializes as ``onset* nucleus - tone [coda]``, e.g. ``tʰ i - 0 nz``.
Syllables inside a word are joined by ``.`` and words by ``|``::

    v i - 0 . z ɛ - 0 uz | n a - 1 iz
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from viphone._data import read_rows
from viphone.errors import MalformedSyllable, UnknownToken

TONE_SEP = "-"
SYLLABLE_SEP = "."
WORD_SEP = "|"


class Tone(enum.IntEnum):
    NGANG = 0
    HUYEN = 1
    HOI = 2
    NGA = 3
    SAC = 4
    NANG = 5

    @property
    def vi_name(self) -> str:
        return _TONE_NAMES[self]


_TONE_NAMES = {
    Tone.NGANG: "ngang",
    Tone.HUYEN: "huyền",
    Tone.HOI: "hỏi",
    Tone.NGA: "ngã",
    Tone.SAC: "sắc",
    Tone.NANG: "nặng",
}


class TokenKind(enum.Enum):
    ONSET = "onset"
    NUCLEUS = "nucleus"
    TONE = "tone"
    CODA = "coda"


@dataclass(frozen=True)
class PhoneToken:
    kind: TokenKind
    symbol: str


@dataclass(frozen=True)
class Inventory:
    onsets: frozenset[str]
    nuclei: frozenset[str]
    codas: frozenset[str]
    tones: frozenset[str]

    def kind_of(self, symbol: str) -> TokenKind | None:
        if symbol in self.codas:
            return TokenKind.CODA
        if symbol in self.onsets:
            return TokenKind.ONSET
        if symbol in self.nuclei:
            return TokenKind.NUCLEUS
        if symbol in self.tones:
            return TokenKind.TONE
        return None

    def symbols(self, kind: TokenKind) -> tuple[str, ...]:
        pool = {
            TokenKind.ONSET: self.onsets,
            TokenKind.NUCLEUS: self.nuclei,
            TokenKind.CODA: self.codas,
            TokenKind.TONE: self.tones,
        }[kind]
        return tuple(sorted(pool))

    def all_symbols(self) -> tuple[str, ...]:
        return tuple(sorted(self.onsets | self.nuclei | self.codas | self.tones))


def load_inventory(path: str | Path | None = None) -> Inventory:
    groups: dict[str, set[str]] = {"onset": set(), "nucleus": set(), "coda": set(), "tone": set()}
    for kind, symbol, *_ in read_rows(path or "inventory.tsv", ncols=2):
        if kind not in groups:
            raise ValueError(f"unknown inventory kind {kind!r}")
        groups[kind].add(symbol)
    bad = [c for c in groups["coda"] if len(c) < 2 or not c.endswith("z")]
    bad += [s for s in groups["onset"] | groups["nucleus"] if len(s) > 1 and s.endswith("z")]
    if bad:
        raise ValueError(f"coda marker rule violated by {sorted(bad)}")
    return Inventory(
        onsets=frozenset(groups["onset"]),
        nuclei=frozenset(groups["nucleus"]),
        codas=frozenset(groups["coda"]),
        tones=frozenset(groups["tone"]),
    )


@lru_cache(maxsize=None)
def default_inventory() -> Inventory:
    return load_inventory()


@dataclass(frozen=True)
class SyllablePhones:
    onsets: tuple[str, ...]
    nucleus: str
    tone: Tone
    coda: str | None = None

    def tokens(self) -> tuple[str, ...]:
        """Phone tokens as scored by PER: onsets, nucleus, tone digit, coda."""
        out = (*self.onsets, self.nucleus, str(int(self.tone)))
        return out + (self.coda,) if self.coda else out

    def serialize(self) -> str:
        parts = [*self.onsets, self.nucleus, TONE_SEP, str(int(self.tone))]
        if self.coda:
            parts.append(self.coda)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class PhoneSequence:
    syllables: tuple[SyllablePhones, ...] = ()
    word_boundaries: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        b = self.word_boundaries
        if not self.syllables:
            if b:
                raise ValueError("word boundaries on an empty sequence")
            return
        if not b or b[0] != 0:
            raise ValueError("first word boundary must be 0")
        if any(y <= x for x, y in zip(b, b[1:])) or b[-1] >= len(self.syllables):
            raise ValueError(f"invalid word boundaries {b}")

    @classmethod
    def from_words(cls, words: list[list[SyllablePhones]] | list[tuple[SyllablePhones, ...]]) -> PhoneSequence:
        syllables: list[SyllablePhones] = []
        bounds: list[int] = []
        for word in words:
            if not word:
                continue
            bounds.append(len(syllables))
            syllables.extend(word)
        return cls(tuple(syllables), tuple(bounds))

    def words(self) -> list[tuple[SyllablePhones, ...]]:
        ends = (*self.word_boundaries[1:], len(self.syllables))
        return [self.syllables[a:b] for a, b in zip(self.word_boundaries, ends)]

    def tokens(self) -> list[str]:
        return [t for s in self.syllables for t in s.tokens()]

    def __len__(self) -> int:
        return len(self.syllables)

    def __str__(self) -> str:
        return serialize_phone_sequence(self)


def classify_token(symbol: str, inventory: Inventory | None = None) -> TokenKind:
    kind = (inventory or default_inventory()).kind_of(symbol)
    if kind is None:
        raise UnknownToken(symbol)
    return kind


def parse_syllable(text: str, inventory: Inventory | None = None) -> SyllablePhones:
    seq = parse_phone_sequence(text, inventory)
    if len(seq) != 1:
        raise MalformedSyllable(f"expected one syllable, got {len(seq)} in {text!r}")
    return seq.syllables[0]


def parse_phone_sequence(text: str, inventory: Inventory | None = None) -> PhoneSequence:
    inv = inventory or default_inventory()
    tokens = text.split()
    if not tokens:
        raise MalformedSyllable("empty phone string")

    syllables: list[SyllablePhones] = []
    bounds = [0]
    onsets: list[str] = []
    nucleus: str | None = None
    tone: Tone | None = None
    coda: str | None = None
    expect_tone = False

    def close(pos: int) -> None:
        nonlocal onsets, nucleus, tone, coda
        if nucleus is None or tone is None:
            raise MalformedSyllable(f"syllable ending at token {pos} lacks nucleus or tone")
        syllables.append(SyllablePhones(tuple(onsets), nucleus, tone, coda))
        onsets, nucleus, tone, coda = [], None, None, None

    for pos, tok in enumerate(tokens):
        if expect_tone:
            if tok not in inv.tones:
                raise MalformedSyllable(f"expected tone digit after '-' at token {pos}, got {tok!r}")
            tone = Tone(int(tok))
            expect_tone = False
            continue
        if tok in (SYLLABLE_SEP, WORD_SEP):
            close(pos)
            if tok == WORD_SEP:
                bounds.append(len(syllables))
            continue
        if tok == TONE_SEP:
            if nucleus is None or tone is not None:
                raise MalformedSyllable(f"misplaced '-' at token {pos}")
            expect_tone = True
            continue
        kind = inv.kind_of(tok)
        if kind is None:
            raise UnknownToken(tok, pos)
        if kind is TokenKind.ONSET:
            if nucleus is not None:
                if tone is None:
                    raise MalformedSyllable(f"onset {tok!r} after nucleus at token {pos}")
                # a new syllable may start without an explicit separator only via '.'
                raise MalformedSyllable(f"missing syllable separator before token {pos}")
            if len(onsets) == 2:
                raise MalformedSyllable(f"more than two onsets at token {pos}")
            onsets.append(tok)
        elif kind is TokenKind.NUCLEUS:
            if nucleus is not None:
                raise MalformedSyllable(f"second nucleus {tok!r} at token {pos}")
            nucleus = tok
        elif kind is TokenKind.CODA:
            if tone is None:
                raise MalformedSyllable(f"coda {tok!r} before nucleus/tone at token {pos}")
            if coda is not None:
                raise MalformedSyllable(f"second coda {tok!r} at token {pos}")
            coda = tok
        else:
            raise MalformedSyllable(f"tone digit {tok!r} without '-' at token {pos}")
    if expect_tone:
        raise MalformedSyllable("phone string ends after '-'")
    close(len(tokens))
    return PhoneSequence(tuple(syllables), tuple(bounds))


def serialize_phone_sequence(seq: PhoneSequence) -> str:
    words = []
    for word in seq.words():
        words.append(f" {SYLLABLE_SEP} ".join(s.serialize() for s in word))
    return f" {WORD_SEP} ".join(words)
