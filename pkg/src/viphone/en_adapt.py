"""English -> Vietnamese phonetic adaptation.

An English IPA transcription is syllabified (maximal onset), each syllable is
split into a *prefix* (onset cluster) and a *postfix* (vowel + coda), and both
halves are mapped to Vietnamese syllable material through a ranked rule
table. Cross-products of the ranked choices give the pronunciation variants.
"""

from __future__ import annotations

import enum
import itertools
import unicodedata
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from viphone._data import read_rows
from viphone.errors import (
    NotAVietnameseSyllable,
    OOVEnglishWord,
    UnmappedCluster,
    UnmappedRime,
    UnsupportedSegment,
    ViphoneError,
)
from viphone.g2p import G2PTable, default_g2p
from viphone.phoneme_core import PhoneSequence, SyllablePhones, Tone
from viphone.viet_syllable import (
    STOP_CODAS,
    OrthoSyllable,
    SyllableTables,
    compose,
    decompose,
    decompose_rime,
    respell,
    spell,
)

MEDIAL = "~"
ONSETLESS = "_"
DROP = "-"
ANY = "*"
EPENTHETIC_NUCLEUS = "ơ"
# bare open vowels that can fold into the previous syllable as a glide coda
GLIDE_OF = {"ô": ("u", "o"), "o": ("o", "u"), "u": ("u", "o"), "i": ("i", "y"), "y": ("y", "i")}
_STRIP = str.maketrans("", "", "ˈˌ.‿/[] ")


# i-type nuclei are written with y after a labial glide (quy, tuyết)
Y_SPELLING = {"i": "y", "iê": "yê", "ia": "ya"}


class Side(enum.Enum):
    PREFIX = "prefix"
    POSTFIX = "postfix"
    CODA = "coda"


@dataclass(frozen=True)
class AdaptationRule:
    side: Side
    ipa_pattern: tuple[str, ...]
    fragment: str
    rank: int
    tag: str


@dataclass(frozen=True)
class IpaWord:
    word: str
    ipa: tuple[str, ...]


@dataclass(frozen=True)
class VariantPronunciation:
    syllables: tuple[OrthoSyllable, ...]
    rank: int
    phones: PhoneSequence
    cost: int = 0
    grapheme_preserving: bool = False

    @property
    def text(self) -> str:
        return " ".join(compose(s) for s in self.syllables)

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class _Piece:
    """Vietnamese realization of one English syllable."""

    syllables: tuple[OrthoSyllable, ...]
    cost: int
    merged: SyllablePhones | None = None


class Adapter:
    def __init__(
        self,
        rules_path: str | Path | None = None,
        segments_path: str | Path | None = None,
        table: G2PTable | None = None,
        max_variants: int = 16,
        options_per_syllable: int = 4,
    ) -> None:
        self.g2p = table or default_g2p()
        self.tables: SyllableTables = self.g2p.tables
        self.max_variants = max_variants
        self.options_per_syllable = options_per_syllable
        self.consonants: set[str] = set()
        self.vowels: set[str] = set()
        self.clusters: set[tuple[str, ...]] = set()
        for cls, seg in read_rows(segments_path or "en_segments.tsv", ncols=2):
            if cls == "consonant":
                self.consonants.add(seg)
            elif cls == "vowel":
                self.vowels.add(seg)
            elif cls == "cluster":
                self.clusters.add(tuple(seg.split()))
            else:
                raise ValueError(f"unknown segment class {cls!r}")
        self._segments = sorted(self.consonants | self.vowels, key=len, reverse=True)

        self.rules: list[AdaptationRule] = []
        self._by_side: dict[Side, dict[tuple[str, ...], list[AdaptationRule]]] = {s: defaultdict(list) for s in Side}
        for side, pattern, fragment, rank, tag in read_rows(rules_path or "en_rules.tsv", ncols=5):
            rule = AdaptationRule(Side(side), tuple(pattern.split()), fragment, int(rank), tag)
            self._check_rule(rule)
            self.rules.append(rule)
            self._by_side[rule.side][rule.ipa_pattern].append(rule)
        for bucket in self._by_side.values():
            for rows in bucket.values():
                rows.sort(key=lambda r: (r.rank, r.fragment))

    def _check_rule(self, rule: AdaptationRule) -> None:
        pattern = [p for p in rule.ipa_pattern if p not in (ONSETLESS, ANY)]
        unknown = [p for p in pattern if p not in self.consonants | self.vowels]
        if unknown:
            raise ValueError(f"rule {rule} uses unknown segments {unknown}")
        if rule.side is Side.POSTFIX:
            if any(p in self.consonants for p in pattern):
                decompose_rime(rule.fragment, self.tables)
            elif not any(r.startswith(rule.fragment) for r in self.tables.rimes):
                raise ValueError(f"rule {rule} fragment starts no Vietnamese rime")

    # -- segmentation -------------------------------------------------------

    def parse_ipa(self, word: str, ipa: str) -> IpaWord:
        text = unicodedata.normalize("NFC", ipa).translate(_STRIP)
        text = text.replace(":", "ː").replace("ɡ", "g").replace("ɹ", "r").replace("ɐ", "ə").replace("ʤ", "dʒ").replace("ʧ", "tʃ")
        segs: list[str] = []
        i = 0
        while i < len(text):
            seg = next((s for s in self._segments if text.startswith(s, i)), None)
            if seg is None:
                raise UnsupportedSegment(f"{word!r}: cannot segment {text[i:]!r}")
            segs.append(seg)
            i += len(seg)
        return IpaWord(word, tuple(segs))

    def _legal_onset(self, cluster: tuple[str, ...]) -> bool:
        if len(cluster) == 1:
            return cluster[0] in self.consonants and cluster[0] != "ŋ"
        return cluster in self.clusters

    def split_ipa(self, w: IpaWord) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
        segs = w.ipa
        if not segs:
            raise UnsupportedSegment(f"{w.word!r}: empty transcription")
        bad = [s for s in segs if s not in self.consonants and s not in self.vowels]
        if bad:
            raise UnsupportedSegment(f"{w.word!r}: unsupported segments {bad}")
        nuclei = [i for i, s in enumerate(segs) if s in self.vowels]
        if not nuclei:
            raise UnsupportedSegment(f"{w.word!r}: no vowel")
        starts = [0]
        for a, b in zip(nuclei, nuclei[1:]):
            cluster = segs[a + 1 : b]
            k = len(cluster)
            while k > 0 and not self._legal_onset(cluster[len(cluster) - k :]):
                k -= 1
            starts.append(b - k)
        out = []
        for j, start in enumerate(starts):
            end = starts[j + 1] if j + 1 < len(starts) else len(segs)
            prefix, postfix = segs[start : nuclei[j]], segs[nuclei[j] : end]
            if len(prefix) >= 2 and prefix[-1] == "j":
                prefix, postfix = prefix[:-1], ("j", *postfix)
            out.append((prefix, postfix))
        return out

    # -- prefix / rime mapping -----------------------------------------------

    def _prefix_options(self, cluster: tuple[str, ...]) -> list[tuple[tuple[str, ...], int]]:
        if not cluster:
            return [((), 0)]
        best: dict[tuple[str, ...], int] = {}
        # every partition of the cluster into parts that have rule rows
        for cuts in itertools.product((False, True), repeat=len(cluster) - 1):
            parts, start = [], 0
            for i, cut in enumerate(cuts, 1):
                if cut:
                    parts.append(cluster[start:i])
                    start = i
            parts.append(cluster[start:])
            choices = [self._by_side[Side.PREFIX].get(p) for p in parts]
            if not all(choices):
                continue
            for combo in itertools.product(*choices):
                frag = tuple(g for r in combo for g in r.fragment.split())
                cost = sum(r.rank for r in combo)
                if cost < best.get(frag, cost + 1):
                    best[frag] = cost
        if not best:
            raise UnmappedCluster(f"no prefix rule for {' '.join(cluster)!r}")
        return sorted(best.items(), key=lambda kv: (kv[1], kv[0]))

    def map_prefix(self, cluster: tuple[str, ...] | list[str]) -> list[tuple[str, ...]]:
        return [frag for frag, _ in self._prefix_options(tuple(cluster))]

    def _rime_options(self, postfix: tuple[str, ...], onsetless: bool = False) -> list[tuple[OrthoSyllable, int]]:
        rows = self._by_side[Side.POSTFIX]
        full = (onsetless and rows.get((ONSETLESS, *postfix))) or rows.get(postfix)
        found: dict[OrthoSyllable, int] = {}
        for r in full or ():
            try:
                rime = decompose_rime(r.fragment, self.tables)
            except NotAVietnameseSyllable:
                continue
            found.setdefault(rime, r.rank)
        if not found:
            for k in range(len(postfix), 0, -1):
                vowel, coda = postfix[:k], postfix[k:]
                vrows = (onsetless and rows.get((ONSETLESS, *vowel))) or rows.get(vowel)
                if vrows and all(c in self.consonants for c in coda):
                    break
            else:
                raise UnmappedRime(f"no rime rule for {' '.join(postfix)!r}")
            if coda:
                crows = self._by_side[Side.CODA].get(coda, []) + self._by_side[Side.CODA].get((ANY,), [])
            else:
                crows = [AdaptationRule(Side.CODA, (), DROP, 0, "")]
            for v, c in itertools.product(vrows, crows):
                base = v.fragment + ("" if c.fragment == DROP else c.fragment)
                info = self.tables.rimes.get(base)
                if info is None:
                    continue
                tone = Tone.SAC if info.coda in STOP_CODAS else Tone.NGANG
                rime = OrthoSyllable("", info.nucleus, info.coda, tone, info.medial)
                cost = v.rank + c.rank
                if cost < found.get(rime, cost + 1):
                    found[rime] = cost
        if not found:
            raise UnmappedRime(f"no legal Vietnamese rime for {' '.join(postfix)!r}")
        return sorted(found.items(), key=lambda kv: (kv[1], spell(kv[0])))

    def map_rime(self, postfix: tuple[str, ...] | list[str], onsetless: bool = False) -> list[str]:
        return [spell(r) for r, _ in self._rime_options(tuple(postfix), onsetless)]

    # -- assembling syllables -------------------------------------------------

    def _attach(self, onset: str, medial: bool, rime: OrthoSyllable) -> OrthoSyllable | None:
        candidates = []
        nuclei = [rime.nucleus_g] + ([Y_SPELLING[rime.nucleus_g]] if rime.nucleus_g in Y_SPELLING else [])
        if medial and not rime.medial_g:
            if onset in ("c", "k"):
                candidates += [OrthoSyllable("qu", n, rime.coda_g, rime.tone) for n in nuclei]
            for m, n in itertools.product(("o", "u"), nuclei):
                candidates.append(OrthoSyllable(onset, n, rime.coda_g, rime.tone, m))
        elif onset == "qu" and not rime.medial_g:
            candidates += [OrthoSyllable("qu", n, rime.coda_g, rime.tone) for n in nuclei]
        else:
            candidates.append(OrthoSyllable(onset, rime.nucleus_g, rime.coda_g, rime.tone, rime.medial_g))
        for c in candidates:
            c = respell(c)
            if self.tables.check(c) is None:
                return c
        return None

    def _pieces(self, prefix: tuple[str, ...], postfix: tuple[str, ...]) -> list[_Piece]:
        pieces: dict[tuple[tuple[OrthoSyllable, ...], SyllablePhones | None], int] = {}
        for frag, pcost in self._prefix_options(prefix):
            parts: list[tuple[str, bool]] = []
            for g in frag:
                if g == MEDIAL:
                    if parts:
                        parts[-1] = (parts[-1][0], True)
                    else:
                        parts.append(("", True))
                else:
                    parts.append((g, False))
            if not parts:
                parts = [("", False)]
            for rime, rcost in self._rime_options(postfix, onsetless=not prefix):
                sylls = []
                for g, _ in parts[:-1]:
                    sylls.append(self._attach(g, False, OrthoSyllable("", EPENTHETIC_NUCLEUS)))
                sylls.append(self._attach(*parts[-1], rime))
                if any(s is None for s in sylls):
                    continue
                merged = None
                if len(parts) == 2 and not any(m for _, m in parts) and not rime.medial_g:
                    onsets = self.g2p.onset_map[sylls[0].onset_g] + self.g2p.onset_map[sylls[1].onset_g]
                    if len(onsets) == 2:
                        last = self.g2p.syllable_to_phones(sylls[1])
                        merged = SyllablePhones(onsets, last.nucleus, last.tone, last.coda)
                key = (tuple(sylls), merged)
                cost = pcost + rcost
                if cost < pieces.get(key, cost + 1):
                    pieces[key] = cost
        out = [_Piece(s, c, m) for (s, m), c in pieces.items()]
        out.sort(key=lambda p: (p.cost, " ".join(spell(s) for s in p.syllables)))
        return out[: self.options_per_syllable]

    def _glide_merge(self, prev: OrthoSyllable, nxt: OrthoSyllable) -> OrthoSyllable | None:
        if prev.coda_g or nxt.onset_g or nxt.medial_g or nxt.coda_g or nxt.nucleus_g not in GLIDE_OF:
            return None
        for glide in GLIDE_OF[nxt.nucleus_g]:
            cand = OrthoSyllable(prev.onset_g, prev.nucleus_g, glide, prev.tone, prev.medial_g)
            if self.tables.check(cand) is None:
                return cand
        return None

    def _phones(self, sylls: tuple[OrthoSyllable, ...]) -> PhoneSequence:
        return PhoneSequence.from_words([[self.g2p.syllable_to_phones(s) for s in sylls]])

    def grapheme_variant(self, w: IpaWord, n_english: int) -> tuple[OrthoSyllable, ...] | None:
        """Split the English spelling into legal Vietnamese syllables (fewest chunks)."""
        letters = w.word.lower()
        if not letters.isalpha():
            return None
        best: list[tuple[int, tuple[str, ...]] | None] = [None] * (len(letters) + 1)
        best[0] = (0, ())
        for end in range(1, len(letters) + 1):
            for start in range(max(0, end - 7), end):
                if best[start] is None:
                    continue
                chunk = letters[start:end]
                try:
                    decompose(chunk, self.tables)
                except NotAVietnameseSyllable:
                    continue
                cand = (best[start][0] + 1, best[start][1] + (chunk,))
                if best[end] is None or cand < best[end]:
                    best[end] = cand
        if best[-1] is None or not 2 <= best[-1][0] <= n_english:
            return None
        return tuple(decompose(c, self.tables) for c in best[-1][1])

    def adapt_word(self, w: IpaWord) -> list[VariantPronunciation]:
        try:
            split = self.split_ipa(w)
            options = [self._pieces(pre, post) for pre, post in split]
        except ViphoneError as exc:
            raise type(exc)(f"{w.word!r}: {exc}") from exc
        if not all(options):
            raise UnmappedRime(f"{w.word!r}: no legal realization for some syllable")

        found: dict[tuple[str, str], tuple[tuple, VariantPronunciation]] = {}

        def offer(sylls, phones, cost, epenthetic, grapheme=False):
            v = VariantPronunciation(tuple(sylls), 0, phones, cost, grapheme)
            key = (v.text, str(phones))
            order = (0 if grapheme else 1, cost, epenthetic, len(sylls), v.text)
            if key not in found or order < found[key][0]:
                found[key] = (order, v)

        gv = self.grapheme_variant(w, len(split))
        if gv is not None:
            offer(gv, self._phones(gv), 0, False, grapheme=True)

        for combo in itertools.product(*options):
            cost = sum(p.cost for p in combo)
            sylls = [s for p in combo for s in p.syllables]
            offer(sylls, self._phones(tuple(sylls)), cost, any(p.merged for p in combo))
            if any(p.merged for p in combo):
                words = []
                for p in combo:
                    words.extend([p.merged] if p.merged else [self.g2p.syllable_to_phones(s) for s in p.syllables])
                offer(sylls, PhoneSequence.from_words([words]), cost, False)
            # fold onsetless open vowels into the preceding open syllable
            for merge in itertools.product((False, True), repeat=len(combo) - 1):
                if not any(merge):
                    continue
                out = list(combo[0].syllables)
                ok = True
                for p, m in zip(combo[1:], merge):
                    if m:
                        folded = self._glide_merge(out[-1], p.syllables[0]) if len(p.syllables) == 1 else None
                        if folded is None:
                            ok = False
                            break
                        out[-1] = folded
                    else:
                        out.extend(p.syllables)
                if ok:
                    offer(out, self._phones(tuple(out)), cost, any(p.merged for p in combo))

        ranked = sorted(found.values(), key=lambda ov: ov[0])[: self.max_variants]
        return [
            VariantPronunciation(v.syllables, i, v.phones, v.cost, v.grapheme_preserving)
            for i, (_, v) in enumerate(ranked)
        ]

    def comparison_row(self, w: IpaWord) -> dict[str, str]:
        """Rank-0 prefix/postfix mapping of a one-syllable word, column by column."""
        (prefix, postfix), *rest = self.split_ipa(w)
        if rest:
            raise ViphoneError(f"{w.word!r} has more than one syllable")
        onsets = [g for g in self.map_prefix(prefix)[0] if g != MEDIAL] if prefix else []
        rime = self._rime_options(postfix, onsetless=not prefix)[0][0]
        return {
            "prefix_ipa": "".join(prefix),
            "prefix_vi": ", ".join(onsets),
            "prefix_phone": ", ".join(" ".join(self.g2p.onset_map[g]) for g in onsets),
            "postfix_ipa": "".join(postfix),
            "postfix_vi": spell(rime),
            "postfix_phone": self.g2p.syllable_to_phones(rime).serialize(),
        }


@lru_cache(maxsize=None)
def default_adapter() -> Adapter:
    return Adapter()


def load_pronunciations(path: str | Path | None = None, adapter: Adapter | None = None) -> dict[str, IpaWord]:
    """Read a ``word<TAB>ipa`` pronouncing dictionary."""
    adapter = adapter or default_adapter()
    out = {}
    for word, ipa, *_ in read_rows(path or "en_dict.tsv", ncols=2):
        out[word.lower()] = adapter.parse_ipa(word.lower(), ipa)
    return out


@lru_cache(maxsize=None)
def default_pronunciations() -> dict[str, IpaWord]:
    return load_pronunciations()


def adapt(
    word: str,
    pronunciations: dict[str, IpaWord] | None = None,
    adapter: Adapter | None = None,
) -> list[VariantPronunciation]:
    """Variants of a dictionary word, looked up by spelling."""
    pron = default_pronunciations() if pronunciations is None else pronunciations
    try:
        w = pron[word.lower()]
    except KeyError:
        raise OOVEnglishWord(word) from None
    return (adapter or default_adapter()).adapt_word(w)


def split_ipa(w: IpaWord) -> list[tuple[tuple[str, ...], tuple[str, ...]]]:
    return default_adapter().split_ipa(w)


def map_prefix(cluster) -> list[tuple[str, ...]]:
    return default_adapter().map_prefix(cluster)


def map_rime(postfix, onsetless: bool = False) -> list[str]:
    return default_adapter().map_rime(postfix, onsetless)


def adapt_word(w: IpaWord) -> list[VariantPronunciation]:
    return default_adapter().adapt_word(w)
