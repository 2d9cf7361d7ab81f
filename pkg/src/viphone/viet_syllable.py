"""Vietnamese orthographic syllables: tone stripping, decomposition, composition.

Legality comes from two shipped tables: ``onsets.tsv`` (onset graphemes,
position and medial constraints) and ``rimes.tsv`` (which medial/nucleus/coda
triples exist and which onsets they accept).
"""

from __future__ import annotations

import enum
import itertools
import unicodedata
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from viphone._data import read_rows
from viphone.errors import IllegalCombination, MultipleToneMarks, NotAVietnameseSyllable
from viphone.phoneme_core import Tone

# combining marks for the five non-level tones
TONE_MARKS = {
    "̀": Tone.HUYEN,
    "̉": Tone.HOI,
    "̃": Tone.NGA,
    "́": Tone.SAC,
    "̣": Tone.NANG,
}
MARK_OF = {tone: mark for mark, tone in TONE_MARKS.items()}

VOWELS = frozenset("aăâeêioôơuưy")
QUALITY_VOWELS = frozenset("ăâêôơư")
FRONT_LETTERS = frozenset("iyeê")
GLIDE_CODAS = frozenset({"i", "y", "o", "u"})
STOP_CODAS = frozenset({"p", "t", "c", "ch"})
STOP_TONES = frozenset({Tone.SAC, Tone.NANG})
OPEN_FIRST_MARK = frozenset({"ia", "ua", "ya"})


@dataclass(frozen=True)
class OrthoSyllable:
    onset_g: str
    nucleus_g: str
    coda_g: str = ""
    tone: Tone = Tone.NGANG
    medial_g: str = ""
    raw: str = ""

    def key(self) -> tuple[str, str, str, str, Tone]:
        return (self.onset_g, self.medial_g, self.nucleus_g, self.coda_g, self.tone)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrthoSyllable):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        return compose(self)


@dataclass(frozen=True)
class OnsetInfo:
    grapheme: str
    phones: tuple[str, ...]
    phones_north_strict: tuple[str, ...]
    position: str
    medial: bool
    tag: str


@dataclass(frozen=True)
class RimeInfo:
    medial: str
    nucleus: str
    coda: str
    nucleus_phone: str
    coda_phone: str | None
    onsets: frozenset[str]
    tag: str

    @property
    def text(self) -> str:
        return self.medial + self.nucleus + self.coda


class SyllableTables:
    """Onset and rime tables plus the legality relation between them."""

    def __init__(self, onsets_path: str | Path | None = None, rimes_path: str | Path | None = None) -> None:
        self.onsets: dict[str, OnsetInfo] = {}
        for g, ph, ph_ns, pos, med, tag in read_rows(onsets_path or "onsets.tsv", ncols=6):
            g = "" if g == "-" else g
            self.onsets[g] = OnsetInfo(
                g,
                () if ph == "-" else tuple(ph.split()),
                () if ph_ns == "-" else tuple(ph_ns.split()),
                pos,
                med == "yes",
                tag,
            )
        self.rimes: dict[str, RimeInfo] = {}
        for med, nuc, coda, nph, cph, ons, tag in read_rows(rimes_path or "rimes.tsv", ncols=7):
            info = RimeInfo(
                "" if med == "-" else med,
                nuc,
                "" if coda == "-" else coda,
                nph,
                None if cph == "-" else cph,
                frozenset(ons.split(",")),
                tag,
            )
            if info.text in self.rimes:
                raise ValueError(f"rime {info.text!r} listed twice")
            self.rimes[info.text] = info
        # longest first for maximal munch
        self.onset_order = sorted((g for g in self.onsets if g), key=len, reverse=True)

    def rime_of(self, medial: str, nucleus: str, coda: str) -> RimeInfo | None:
        info = self.rimes.get(medial + nucleus + coda)
        if info is None or (info.medial, info.nucleus, info.coda) != (medial, nucleus, coda):
            return None
        return info

    def check(self, s: OrthoSyllable) -> str | None:
        """Return a reason string when ``s`` is illegal, else None."""
        onset = self.onsets.get(s.onset_g)
        if onset is None:
            return f"unknown onset {s.onset_g!r}"
        rime = self.rime_of(s.medial_g, s.nucleus_g, s.coda_g)
        if rime is None:
            return f"unknown rime {s.medial_g + s.nucleus_g + s.coda_g!r}"
        allowed = rime.onsets
        if s.onset_g == "":
            if "*" not in allowed and "-" not in allowed:
                return "rime needs an onset"
        elif s.onset_g == "qu":
            if "qu" not in allowed:
                return "rime not allowed after qu"
        elif "*" not in allowed and "+" not in allowed:
            return f"rime not allowed after {s.onset_g!r}"
        if s.medial_g and not onset.medial:
            return f"onset {s.onset_g!r} takes no medial"
        first = (s.medial_g or s.nucleus_g)[0]
        if onset.position == "front" and first not in FRONT_LETTERS:
            return f"{s.onset_g!r} only before i/y/e/ê"
        if onset.position == "back" and first in FRONT_LETTERS:
            return f"{s.onset_g!r} not before i/y/e/ê"
        if s.onset_g == "gi" and first in "iy" and s.nucleus_g != "i":
            # gi+iê is written like gi+ê, so it is legal only where gi+ê is not
            if s.nucleus_g != "iê" or self.rime_of("", "ê", s.coda_g) is not None:
                return "gi before an i-initial nucleus"
        if s.onset_g == "gi" and s.nucleus_g == "i" and s.coda_g in GLIDE_CODAS:
            return "gi+i+glide is written like gi+u"
        if s.coda_g in STOP_CODAS and s.tone not in STOP_TONES:
            return "stop coda needs sắc or nặng"
        return None

    def legal_grid(self) -> list[OrthoSyllable]:
        """Every legal (onset, medial, nucleus, coda, tone) combination."""
        out = []
        for onset, rime, tone in itertools.product(self.onsets, self.rimes.values(), Tone):
            s = OrthoSyllable(onset, rime.nucleus, rime.coda, tone, rime.medial)
            if self.check(s) is None:
                out.append(s)
        return out


@lru_cache(maxsize=None)
def default_tables() -> SyllableTables:
    return SyllableTables()


def strip_tone(syllable: str) -> tuple[str, Tone]:
    """Split a syllable into its toneless base and its tone.

    Accepts both precomposed and combining diacritics. Vowel-quality marks
    (circumflex, breve, horn) and đ are kept.

    >>> strip_tone("vừa")
    ('vưa', <Tone.HUYEN: 1>)
    """
    decomposed = unicodedata.normalize("NFD", syllable)
    tones = [TONE_MARKS[ch] for ch in decomposed if ch in TONE_MARKS]
    if len(tones) > 1:
        raise MultipleToneMarks(f"{syllable!r} carries {len(tones)} tone marks")
    base = "".join(ch for ch in decomposed if ch not in TONE_MARKS)
    return unicodedata.normalize("NFC", base), (tones[0] if tones else Tone.NGANG)


def decompose(syllable: str, tables: SyllableTables | None = None) -> OrthoSyllable:
    tables = tables or default_tables()
    raw = unicodedata.normalize("NFC", syllable)
    try:
        base, tone = strip_tone(raw.lower())
    except MultipleToneMarks as exc:
        raise NotAVietnameseSyllable(str(exc)) from exc
    if not base:
        raise NotAVietnameseSyllable(f"{syllable!r}: empty")
    onset = next((g for g in tables.onset_order if base.startswith(g)), "")
    rest = base[len(onset):]
    if onset == "gi" and (not rest or rest[0] not in VOWELS):
        rest = "i" + rest
    info = tables.rimes.get(rest)
    if info is None and onset == "gi":
        # giếng: the i of iê is written once
        info = tables.rimes.get("i" + rest)
    if info is None:
        raise NotAVietnameseSyllable(f"{syllable!r}: no rime {rest!r}")
    s = OrthoSyllable(onset, info.nucleus, info.coda, tone, info.medial, raw)
    reason = tables.check(s)
    if reason:
        raise NotAVietnameseSyllable(f"{syllable!r}: {reason}")
    return s


def _mark_index(medial: str, nucleus: str, coda: str) -> int:
    """Index into ``medial+nucleus+coda`` of the letter that takes the tone."""
    rime = medial + nucleus + coda
    vowel_end = len(medial) + len(nucleus) + (len(coda) if coda in GLIDE_CODAS else 0)
    vowels = [i for i in range(vowel_end) if rime[i] in VOWELS]
    quality = [i for i in vowels if rime[i] in QUALITY_VOWELS]
    if quality:
        return quality[-1]
    if nucleus in OPEN_FIRST_MARK:
        return len(medial)
    if coda in GLIDE_CODAS and len(vowels) > 1:
        return vowels[-2]
    return vowels[-1]


def compose(s: OrthoSyllable, tables: SyllableTables | None = None) -> str:
    """Write ``s`` in standard orthography with the tone on the right vowel.

    Tone placement: the vowel with a quality diacritic (the later one for
    ươ), else the first vowel of open ia/ua/ya, else the penultimate vowel
    when the coda is a glide, else the last vowel.
    """
    reason = (tables or default_tables()).check(s)
    if reason:
        raise IllegalCombination(reason)
    return spell(s)


def spell(s: OrthoSyllable) -> str:
    """Like :func:`compose` but without the legality check (rime fragments)."""
    onset = s.onset_g
    rime = s.medial_g + s.nucleus_g + s.coda_g
    if onset == "gi" and s.nucleus_g in ("i", "iê"):
        onset = "g"
    if s.tone != Tone.NGANG:
        i = _mark_index(s.medial_g, s.nucleus_g, s.coda_g)
        rime = rime[: i + 1] + MARK_OF[s.tone] + rime[i + 1 :]
    return unicodedata.normalize("NFC", onset + rime)


def decompose_rime(fragment: str, tables: SyllableTables | None = None) -> OrthoSyllable:
    """Parse an onsetless rime fragment such as ``ét`` or ``ia``.

    Only the rime table and the stop-coda tone rule are checked, since onset
    constraints are unknown until the fragment is attached to an onset.
    """
    tables = tables or default_tables()
    base, tone = strip_tone(unicodedata.normalize("NFC", fragment.lower()))
    info = tables.rimes.get(base)
    if info is None:
        raise NotAVietnameseSyllable(f"{fragment!r} is not a rime")
    if info.coda in STOP_CODAS and tone not in STOP_TONES:
        raise NotAVietnameseSyllable(f"{fragment!r}: stop coda needs sắc or nặng")
    return OrthoSyllable("", info.nucleus, info.coda, tone, info.medial, fragment)


def respell(s: OrthoSyllable) -> OrthoSyllable:
    """Pick the onset spelling the following letter demands (c/k, g/gh, ng/ngh)."""
    first = (s.medial_g or s.nucleus_g)[:1]
    front = first in FRONT_LETTERS
    onset = s.onset_g
    if onset in ("c", "k"):
        onset = "k" if front else "c"
    elif onset in ("g", "gh"):
        onset = "gh" if front else "g"
    elif onset in ("ng", "ngh"):
        onset = "ngh" if front else "ng"
    if onset == s.onset_g:
        return s
    return OrthoSyllable(onset, s.nucleus_g, s.coda_g, s.tone, s.medial_g)


def is_legal(s: OrthoSyllable, tables: SyllableTables | None = None) -> bool:
    return (tables or default_tables()).check(s) is None


class TokenLang(enum.Enum):
    VIETNAMESE = "vi"
    ENGLISH = "en"
    OTHER = "other"


@dataclass(frozen=True)
class TokenClass:
    token: str
    cls: TokenLang


PUNCTUATION = "\"'.,;:!?()[]{}…“”‘’-–—/«»"


def strip_punct(token: str) -> str:
    return token.strip(PUNCTUATION)


def classify_token(token: str, tables: SyllableTables | None = None) -> TokenLang:
    core = strip_punct(unicodedata.normalize("NFC", token))
    if not core:
        return TokenLang.OTHER
    try:
        decompose(core, tables)
        return TokenLang.VIETNAMESE
    except NotAVietnameseSyllable:
        pass
    if core.isalpha():
        return TokenLang.ENGLISH
    return TokenLang.OTHER


def classify_tokens(sentence: str, tables: SyllableTables | None = None) -> list[TokenClass]:
    return [TokenClass(tok, classify_token(tok, tables)) for tok in sentence.split()]
