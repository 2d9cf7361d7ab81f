"""Grapheme-to-phone conversion for Vietnamese and the pronunciation lexicon."""

from __future__ import annotations

import unicodedata
from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import IO, Iterable, Protocol, Sequence

from viphone.errors import NotAVietnameseSyllable, OOVEnglishWord, UnmappedGrapheme, ViphoneError
from viphone.phoneme_core import (
    PhoneSequence,
    SyllablePhones,
    Tone,
    default_inventory,
    parse_phone_sequence,
    serialize_phone_sequence,
)
from viphone.viet_syllable import (
    OrthoSyllable,
    SyllableTables,
    TokenLang,
    classify_token,
    compose,
    decompose,
    default_tables,
    strip_punct,
    MARK_OF,
)

DIALECTS = ("north", "north-strict")


class G2PTable:
    """Onset and rime maps for one dialect profile.

    ``north`` keeps r as ʐ; ``north-strict`` merges r into z.
    """

    def __init__(self, tables: SyllableTables | None = None, dialect: str = "north") -> None:
        if dialect not in DIALECTS:
            raise ValueError(f"unknown dialect {dialect!r}; expected one of {DIALECTS}")
        self.tables = tables or default_tables()
        self.dialect = dialect
        self.onset_map: dict[str, tuple[str, ...]] = {
            g: (info.phones_north_strict if dialect == "north-strict" else info.phones)
            for g, info in self.tables.onsets.items()
        }
        self.rime_map: dict[tuple[str, str, str], tuple[str, str | None]] = {
            (r.medial, r.nucleus, r.coda): (r.nucleus_phone, r.coda_phone) for r in self.tables.rimes.values()
        }
        inv = default_inventory()
        for phones in self.onset_map.values():
            for p in phones:
                if p not in inv.onsets:
                    raise ValueError(f"onset phone {p!r} missing from inventory")
        for nuc, coda in self.rime_map.values():
            if nuc not in inv.nuclei or (coda is not None and coda not in inv.codas):
                raise ValueError(f"rime phones {nuc!r}/{coda!r} missing from inventory")

    def syllable_to_phones(self, s: OrthoSyllable) -> SyllablePhones:
        try:
            onsets = self.onset_map[s.onset_g]
            nucleus, coda = self.rime_map[(s.medial_g, s.nucleus_g, s.coda_g)]
        except KeyError as exc:
            raise UnmappedGrapheme(f"no phone mapping for {s.key()}") from exc
        if s.medial_g:
            onsets = (*onsets, "w")
        return SyllablePhones(tuple(onsets), nucleus, Tone(s.tone), coda)

    @property
    def inverse(self) -> dict[str, str]:
        return _inverse_map(self)


@lru_cache(maxsize=None)
def default_g2p(dialect: str = "north") -> G2PTable:
    return G2PTable(dialect=dialect)


@lru_cache(maxsize=4)
def _inverse_map(table: G2PTable) -> dict[str, str]:
    best: dict[str, str] = {}
    for s in table.tables.legal_grid():
        key = table.syllable_to_phones(s).serialize()
        text = compose(s, table.tables)
        if key not in best or (len(text), text) < (len(best[key]), best[key]):
            best[key] = text
    return best


def syllable_to_phones(s: OrthoSyllable | str, table: G2PTable | None = None) -> SyllablePhones:
    table = table or default_g2p()
    if isinstance(s, str):
        s = decompose(s, table.tables)
    return table.syllable_to_phones(s)


def word_to_phones(word: str, table: G2PTable | None = None) -> tuple[SyllablePhones, ...]:
    """Phones of a space-separated run of Vietnamese syllables."""
    return tuple(syllable_to_phones(w, table) for w in word.split())


def render_syllable(sp: SyllablePhones, table: G2PTable | None = None) -> str:
    """Best-effort orthography for a phone syllable (inverse g2p).

    Keys produced by the G2P table map back to their shortest spelling.
    Anything else, e.g. a corrupted syllable, is spelled token by token.
    """
    table = table or default_g2p()
    hit = table.inverse.get(sp.serialize())
    if hit is not None:
        return hit
    onset_g, nucleus_g, coda_g = _token_spellings(table)
    text = "".join(onset_g.get(o, o) for o in sp.onsets)
    nucleus = nucleus_g.get(sp.nucleus, sp.nucleus)
    if sp.tone != Tone.NGANG:
        nucleus = nucleus[0] + MARK_OF[sp.tone] + nucleus[1:]
    text += nucleus + (coda_g.get(sp.coda, "") if sp.coda else "")
    return unicodedata.normalize("NFC", text)


@lru_cache(maxsize=4)
def _token_spellings(table: G2PTable) -> tuple[dict[str, str], dict[str, str], dict[str, str]]:
    def shortest(pairs):
        out: dict[str, str] = {}
        for phone, g in sorted(pairs, key=lambda pg: (pg[0], len(pg[1]), pg[1])):
            out.setdefault(phone, g)
        return out

    onset_g = shortest((p[0], g) for g, p in table.onset_map.items() if len(p) == 1)
    onset_g["w"] = "u"
    rimes = table.rime_map.items()
    nucleus_g = shortest((v[0], r[1]) for r, v in rimes if not r[0])
    coda_g = shortest((v[1], r[2]) for r, v in rimes if v[1])
    return onset_g, nucleus_g, coda_g


class Variant(Protocol):
    rank: int

    @property
    def text(self) -> str: ...

    @property
    def phones(self) -> PhoneSequence: ...


@dataclass(frozen=True)
class LexiconRow:
    word: str
    lang: str
    variant_index: int
    phones: tuple[SyllablePhones, ...]
    surface: str = ""

    @property
    def key(self) -> tuple[str, ...]:
        return tuple(s.serialize() for s in self.phones)


@dataclass(frozen=True)
class StoredVariant:
    """English variant as read back from a lexicon file."""

    text: str
    phones: PhoneSequence
    rank: int


@dataclass
class Lexicon:
    """Invertible pronunciation index.

    ``entries`` maps a syllable phone key to the orthographic syllables that
    produce it; ``word_entries`` maps a word's tuple of syllable keys to the
    ``(word, lang)`` pairs pronounced that way. Homophones share a key.
    """

    entries: dict[str, set[str]] = field(default_factory=lambda: defaultdict(set))
    word_entries: dict[tuple[str, ...], set[tuple[str, str]]] = field(default_factory=lambda: defaultdict(set))
    english: dict[str, list] = field(default_factory=dict)
    rows: list[LexiconRow] = field(default_factory=list)

    def add_row(self, row: LexiconRow) -> None:
        self.rows.append(row)
        self.word_entries[row.key].add((row.word, row.lang))
        if row.lang == "vi":
            for syl, sp in zip(row.word.split(), row.phones):
                self.entries[sp.serialize()].add(syl)

    def add_vietnamese(self, word: str, table: G2PTable | None = None) -> None:
        word = unicodedata.normalize("NFC", word.lower())
        row = LexiconRow(word, "vi", 0, word_to_phones(word, table), word)
        if (word, "vi") not in self.word_entries.get(row.key, ()):
            self.add_row(row)

    def add_english(self, word: str, variants: Sequence[Variant | str], table: G2PTable | None = None) -> None:
        word = word.lower()
        if not variants:
            raise ViphoneError(f"English word {word!r} needs at least one variant")
        stored = []
        for i, v in enumerate(variants):
            if isinstance(v, str):
                v = StoredVariant(v, PhoneSequence.from_words([word_to_phones(v, table)]), i)
            stored.append(v)
            self.add_row(LexiconRow(word, "en", i, v.phones.syllables, v.text))
        self.english[word] = stored

    def english_variants(self, word: str) -> list:
        try:
            return self.english[word.lower()]
        except KeyError:
            raise OOVEnglishWord(word) from None

    def lookup(self, key: tuple[str, ...]) -> set[tuple[str, str]]:
        return self.word_entries.get(key, set())

    def words(self) -> set[tuple[str, str]]:
        return {(r.word, r.lang) for r in self.rows}

    def save(self, dest: str | Path | IO[str]) -> None:
        if isinstance(dest, (str, Path)):
            with open(dest, "w", encoding="utf-8", newline="\n") as fh:
                return self.save(fh)
        dest.write("# word\tlang\tvariant_index\tphones\tsurface\n")
        for r in self.rows:
            phones = serialize_phone_sequence(PhoneSequence.from_words([r.phones]))
            dest.write(f"{r.word}\t{r.lang}\t{r.variant_index}\t{phones}\t{r.surface}\n")

    @classmethod
    def load(cls, path: str | Path) -> Lexicon:
        lex = cls()
        english: dict[str, list[StoredVariant]] = defaultdict(list)
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.rstrip("\n")
                if not line or line.startswith("#"):
                    continue
                cols = line.split("\t")
                if len(cols) < 4:
                    raise ViphoneError(f"{path}:{lineno}: expected at least 4 columns")
                word, lang, idx, phone_str = cols[:4]
                surface = cols[4] if len(cols) > 4 else ""
                seq = parse_phone_sequence(phone_str)
                lex.add_row(LexiconRow(word, lang, int(idx), seq.syllables, surface))
                if lang == "en":
                    english[word].append(StoredVariant(surface, PhoneSequence.from_words([seq.syllables]), int(idx)))
        lex.english = {w: sorted(vs, key=lambda v: v.rank) for w, vs in english.items()}
        return lex


def build_lexicon(
    wordlist: Iterable[tuple[str, str, Sequence[Variant | str] | None]],
    table: G2PTable | None = None,
) -> Lexicon:
    """Build a lexicon from ``(word, language, variants)`` triples.

    Vietnamese words ignore ``variants``; English words need at least one.
    """
    lex = Lexicon()
    for word, lang, variants in wordlist:
        try:
            if lang == "vi":
                lex.add_vietnamese(word, table)
            elif lang == "en":
                lex.add_english(word, variants or [], table)
            else:
                raise ViphoneError(f"unknown language tag {lang!r}")
        except ViphoneError as exc:
            raise type(exc)(f"{word!r}: {exc}") if type(exc) is not OOVEnglishWord else exc
    return lex


def normalize_token(token: str) -> str:
    return strip_punct(unicodedata.normalize("NFC", token)).lower()


def text_to_phones(sentence: str, lex: Lexicon | None = None, table: G2PTable | None = None) -> PhoneSequence:
    """Phones of a code-switched sentence, one word per token.

    English tokens take their rank-0 lexicon variant. Punctuation-only
    tokens and other non-words are skipped.
    """
    table = table or default_g2p()
    words = []
    for token in sentence.split():
        core = normalize_token(token)
        cls = classify_token(core, table.tables)
        if cls is TokenLang.VIETNAMESE:
            words.append((syllable_to_phones(core, table),))
        elif cls is TokenLang.ENGLISH:
            if lex is None:
                raise OOVEnglishWord(core)
            words.append(lex.english_variants(core)[0].phones.syllables)
    return PhoneSequence.from_words(words)


def try_syllable_to_phones(text: str, table: G2PTable | None = None) -> SyllablePhones | None:
    try:
        return syllable_to_phones(text, table)
    except (NotAVietnameseSyllable, UnmappedGrapheme):
        return None
