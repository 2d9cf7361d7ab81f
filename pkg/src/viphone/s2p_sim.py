"""Seeded noisy channel standing in for the speech-to-phone recognizer.

Every phone token independently draws one event: substitution, deletion,
insertion (after it) or nothing. Substitutes keep the token kind, so a
corrupted sequence is still grammatical; within the token's confusion class
candidates are weighted ``within_class_bias`` times higher than the rest.

Deleting a nucleus removes its whole syllable. Tones cannot be deleted or
inserted. Insertions add an onset (before the nucleus, at most two) or a
coda (after the tone, when the slot is free); otherwise they are no-ops.
"""

from __future__ import annotations

import configparser
import dataclasses
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from viphone._data import data_path
from viphone.phoneme_core import Inventory, PhoneSequence, SyllablePhones, Tone, TokenKind, default_inventory


@dataclass(frozen=True)
class ConfusionModel:
    sub_rate: float
    ins_rate: float
    del_rate: float
    class_groups: dict[str, tuple[str, ...]]
    within_class_bias: float = 4.0

    def __post_init__(self) -> None:
        rates = (self.sub_rate, self.ins_rate, self.del_rate)
        if any(not 0.0 <= r <= 1.0 for r in rates) or sum(rates) > 1.0 + 1e-12:
            raise ValueError(f"rates must lie in [0, 1] and sum to at most 1, got {rates}")
        if self.within_class_bias < 1.0:
            raise ValueError("within_class_bias must be >= 1")
        seen: dict[str, str] = {}
        for name, tokens in self.class_groups.items():
            for t in tokens:
                if t in seen:
                    raise ValueError(f"token {t!r} is in classes {seen[t]!r} and {name!r}")
                seen[t] = name
        object.__setattr__(self, "_class_of", seen)

    def class_of(self, token: str) -> str:
        return self._class_of[token]

    def check_partition(self, inventory: Inventory | None = None) -> None:
        inv = inventory or default_inventory()
        symbols = set(inv.all_symbols())
        missing = symbols - set(self._class_of)
        extra = set(self._class_of) - symbols
        if missing or extra:
            raise ValueError(f"class groups do not partition the inventory: missing {sorted(missing)}, unknown {sorted(extra)}")

    def with_rates(self, sub: float | None = None, ins: float | None = None, dele: float | None = None) -> ConfusionModel:
        return dataclasses.replace(
            self,
            sub_rate=self.sub_rate if sub is None else sub,
            ins_rate=self.ins_rate if ins is None else ins,
            del_rate=self.del_rate if dele is None else dele,
        )


def load_confusion_model(path: str | Path, inventory: Inventory | None = None) -> ConfusionModel:
    cp = configparser.ConfigParser()
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    try:
        rates = cp["rates"]
        model = ConfusionModel(
            sub_rate=rates.getfloat("sub_rate"),
            ins_rate=rates.getfloat("ins_rate"),
            del_rate=rates.getfloat("del_rate"),
            class_groups={k: tuple(v.split()) for k, v in cp["classes"].items()},
            within_class_bias=rates.getfloat("within_class_bias", 4.0),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"{path}: noise profile needs [rates] and [classes] sections") from exc
    model.check_partition(inventory)
    return model


@lru_cache(maxsize=None)
def default_confusion_model() -> ConfusionModel:
    return load_confusion_model(data_path("noise_default.cfg"))


def derive_seed(seed: int, index: int) -> int:
    """Independent sub-seed for record ``index`` of a run seeded with ``seed``."""
    return int(np.random.SeedSequence([seed & (2**64 - 1), index]).generate_state(1, np.uint64)[0])


class _Channel:
    def __init__(self, model: ConfusionModel, inventory: Inventory, rng: np.random.Generator) -> None:
        self.m = model
        self.inv = inventory
        self.rng = rng

    def substitute(self, token: str, kind: TokenKind) -> str:
        pool = [t for t in self.inv.symbols(kind) if t != token]
        if not pool:
            return token
        cls = self.m.class_of(token)
        w = np.array([self.m.within_class_bias if self.m.class_of(t) == cls else 1.0 for t in pool])
        return pool[self.rng.choice(len(pool), p=w / w.sum())]

    def draw(self, kind: TokenKind) -> str:
        pool = self.inv.symbols(kind)
        return pool[self.rng.integers(len(pool))]

    def event(self) -> str | None:
        u = self.rng.random()
        if u < self.m.sub_rate:
            return "sub"
        if u < self.m.sub_rate + self.m.del_rate:
            return "del"
        if u < self.m.sub_rate + self.m.del_rate + self.m.ins_rate:
            return "ins"
        return None

    def syllable(self, s: SyllablePhones) -> SyllablePhones | None:
        onsets: list[str] = []
        pending_onset = False
        for o in s.onsets:
            ev = self.event()
            if ev == "sub":
                onsets.append(self.substitute(o, TokenKind.ONSET))
            elif ev != "del":
                onsets.append(o)
            pending_onset |= ev == "ins"

        ev = self.event()
        if ev == "del":
            return None
        nucleus = self.substitute(s.nucleus, TokenKind.NUCLEUS) if ev == "sub" else s.nucleus
        pending_onset |= ev == "ins"
        if pending_onset and len(onsets) < 2:
            onsets.append(self.draw(TokenKind.ONSET))

        ev = self.event()
        tone = Tone(int(self.substitute(str(int(s.tone)), TokenKind.TONE))) if ev == "sub" else s.tone
        pending_coda = ev == "ins"

        coda = s.coda
        if coda is not None:
            ev = self.event()
            if ev == "sub":
                coda = self.substitute(coda, TokenKind.CODA)
            elif ev == "del":
                coda = None
        if pending_coda and coda is None:
            coda = self.draw(TokenKind.CODA)
        return SyllablePhones(tuple(onsets), nucleus, tone, coda)


def corrupt(
    seq: PhoneSequence,
    model: ConfusionModel | None = None,
    seed: int = 0,
    inventory: Inventory | None = None,
) -> PhoneSequence:
    """Pass ``seq`` through the noisy channel; deterministic given ``seed``."""
    model = model or default_confusion_model()
    if model.sub_rate == model.ins_rate == model.del_rate == 0.0:
        return seq
    channel = _Channel(model, inventory or default_inventory(), np.random.default_rng(seed))
    words = [[t for t in (channel.syllable(s) for s in word) if t is not None] for word in seq.words()]
    return PhoneSequence.from_words(words)
