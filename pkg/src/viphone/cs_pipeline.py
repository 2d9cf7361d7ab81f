"""Phone-to-text dataset construction from code-switched sentences.

Each English token is replaced by one of its Vietnamese syllable variants
(the *localized* text); the phones of the localized sentence become the
model input and the original sentence, English words intact, the target.
"""

from __future__ import annotations

import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

import numpy as np

from viphone.en_adapt import Adapter, IpaWord, default_adapter, default_pronunciations
from viphone.errors import ViphoneError
from viphone.g2p import G2PTable, Lexicon, default_g2p, normalize_token, syllable_to_phones
from viphone.phoneme_core import PhoneSequence, parse_phone_sequence
from viphone.viet_syllable import PUNCTUATION, TokenLang, classify_token

MODES = ("rank0", "exhaustive", "sampled")
# above this many variant combinations, sampling draws tuples instead of indices
_ENUMERATE_LIMIT = 100_000


@dataclass(frozen=True)
class VariantPolicy:
    mode: str = "rank0"
    max_variants_per_sentence: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown variant mode {self.mode!r}; expected one of {MODES}")
        if self.max_variants_per_sentence < 1:
            raise ValueError("max_variants_per_sentence must be >= 1")


@dataclass(frozen=True)
class CsRecord:
    id: str
    reference: str
    localized: str
    variant_choices: dict[int, int]
    phones: PhoneSequence

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "reference": self.reference,
            "localized": self.localized,
            "phones": str(self.phones),
            "variant_choices": {str(k): v for k, v in sorted(self.variant_choices.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> CsRecord:
        phones = parse_phone_sequence(d["phones"]) if d["phones"].strip() else PhoneSequence()
        return cls(
            str(d["id"]),
            d["reference"],
            d["localized"],
            {int(k): int(v) for k, v in d.get("variant_choices", {}).items()},
            phones,
        )


@dataclass(frozen=True)
class Reject:
    line_no: int
    reason: str

    def to_json(self) -> str:
        return json.dumps({"line_no": self.line_no, "reason": self.reason}, ensure_ascii=False)


@dataclass
class _Slot:
    token: str
    lang: TokenLang
    core: str
    phones: list[tuple] = field(default_factory=list)
    texts: list[str] = field(default_factory=list)


def _split_punct(token: str) -> tuple[str, str, str]:
    body = token.lstrip(PUNCTUATION)
    lead = token[: len(token) - len(body)]
    core = body.rstrip(PUNCTUATION)
    return lead, core, body[len(core) :]


def _slots(sentence: str, lex: Lexicon, table: G2PTable) -> list[_Slot]:
    slots = []
    for token in sentence.split():
        core = normalize_token(token)
        lang = classify_token(core, table.tables)
        slot = _Slot(token, lang, core)
        if lang is TokenLang.VIETNAMESE:
            slot.phones = [(syllable_to_phones(core, table),)]
        elif lang is TokenLang.ENGLISH:
            variants = lex.english_variants(core)
            slot.phones = [v.phones.syllables for v in variants]
            slot.texts = [v.text for v in variants]
        slots.append(slot)
    return slots


def _choices(counts: Sequence[int], policy: VariantPolicy, rng: np.random.Generator) -> list[tuple[int, ...]]:
    cap = policy.max_variants_per_sentence
    if policy.mode == "rank0" or not counts:
        return [(0,) * len(counts)]
    if policy.mode == "exhaustive":
        return list(itertools.islice(itertools.product(*(range(c) for c in counts)), cap))
    total = math.prod(counts)
    if total <= _ENUMERATE_LIMIT:
        picks = rng.choice(total, size=min(cap, total), replace=False)
        return [tuple(int(x) for x in np.unravel_index(int(p), counts)) for p in picks]
    seen: dict[tuple[int, ...], None] = {}
    while len(seen) < cap:
        seen.setdefault(tuple(int(rng.integers(c)) for c in counts), None)
    return list(seen)


def localize_sentence(
    sentence: str,
    policy: VariantPolicy | None = None,
    lex: Lexicon | None = None,
    seed: int | None = None,
    record_id: str = "0",
    table: G2PTable | None = None,
) -> list[CsRecord]:
    """Records for one sentence, one per chosen variant combination.

    Raises OOVEnglishWord when an English token is missing from ``lex``.
    """
    policy = policy or VariantPolicy()
    lex = lex if lex is not None else Lexicon()
    table = table or default_g2p()
    slots = _slots(sentence, lex, table)
    english = [i for i, s in enumerate(slots) if s.lang is TokenLang.ENGLISH]
    rng = np.random.default_rng(policy.seed if seed is None else seed)
    records = []
    for k, combo in enumerate(_choices([len(slots[i].texts) for i in english], policy, rng)):
        chosen = dict(zip(english, combo))
        tokens, words = [], []
        for i, slot in enumerate(slots):
            if i in chosen:
                lead, _, trail = _split_punct(slot.token)
                tokens.append(lead + slot.texts[chosen[i]] + trail)
                words.append(slot.phones[chosen[i]])
            else:
                tokens.append(slot.token)
                if slot.phones:
                    words.append(slot.phones[0])
        records.append(
            CsRecord(f"{record_id}-{k}", sentence, " ".join(tokens), chosen, PhoneSequence.from_words(words))
        )
    return records


def _localize_line(args: tuple[int, str, VariantPolicy, Lexicon]) -> list[CsRecord] | Reject:
    line_no, line, policy, lex = args
    try:
        return localize_sentence(line, policy, lex, seed=policy.seed ^ line_no, record_id=str(line_no))
    except ViphoneError as exc:
        return Reject(line_no, f"{type(exc).__name__}: {exc}")


def build_p2t_corpus(
    lines: Iterable[str],
    policy: VariantPolicy | None = None,
    lex: Lexicon | None = None,
    jobs: int = 1,
) -> Iterator[CsRecord | Reject]:
    """Stream records (or rejects) in input order; blank lines are skipped.

    Line numbers start at 1 and seed their own draws, so output does not
    depend on ``jobs``.
    """
    policy = policy or VariantPolicy()
    lex = lex if lex is not None else Lexicon()
    work = (
        (n, line.strip(), policy, lex) for n, line in enumerate(lines, 1) if line.strip()
    )
    if jobs <= 1:
        results: Iterable = map(_localize_line, work)
        yield from _flatten(results)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from _flatten(pool.map(_localize_line, work, chunksize=16))


def _flatten(results: Iterable[list[CsRecord] | Reject]) -> Iterator[CsRecord | Reject]:
    for r in results:
        if isinstance(r, Reject):
            yield r
        else:
            yield from r


def build_corpus_lexicon(
    lines: Iterable[str],
    pronunciations: dict[str, IpaWord] | None = None,
    adapter: Adapter | None = None,
    table: G2PTable | None = None,
) -> Lexicon:
    """Lexicon covering every Vietnamese syllable and dictionary English word in ``lines``.

    English words missing from the pronouncing dictionary are left out and
    surface later as OOV rejects.
    """
    pron = default_pronunciations() if pronunciations is None else pronunciations
    adapter = adapter or default_adapter()
    table = table or default_g2p()
    lex = Lexicon()
    for line in lines:
        for token in line.split():
            core = normalize_token(token)
            lang = classify_token(core, table.tables)
            if lang is TokenLang.VIETNAMESE:
                lex.add_vietnamese(core, table)
            elif lang is TokenLang.ENGLISH and core in pron and core not in lex.english:
                lex.add_english(core, adapter.adapt_word(pron[core]), table)
    return lex


def lm_sentences(lines: Iterable[str]) -> Iterator[list[str]]:
    """Token lists in the form the decoder emits (lowercase, NFC, no punctuation)."""
    for line in lines:
        words = [w for w in (normalize_token(t) for t in line.split()) if w]
        if words:
            yield words


def write_jsonl(items: Iterable[CsRecord | Reject], fh: IO[str]) -> int:
    n = 0
    for item in items:
        fh.write(item.to_json() + "\n")
        n += 1
    return n


def read_records(source: str | Path | IO[str]) -> list[CsRecord]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            return read_records(fh)
    out = []
    for lineno, line in enumerate(source, 1):
        if not line.strip():
            continue
        try:
            out.append(CsRecord.from_dict(json.loads(line)))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ViphoneError(f"record line {lineno}: {exc}") from exc
    return out
