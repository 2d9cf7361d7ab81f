from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from viphone.en_adapt import default_adapter, default_pronunciations
from viphone.g2p import Lexicon, default_g2p
from viphone.viet_syllable import compose

DATA = Path(__file__).parent / "data"

# Table 2: word, IPA, prefix IPA, prefix vi-syllables, prefix phones,
# postfix IPA, postfix vi-syllable, postfix phone
TABLE2 = [
    ("zoo", "zuː", "z", "d", "z", "uː", "u", "u - 0"),
    ("play", "pleɪ", "pl", "p, l", "p, l", "eɪ", "ây", "ə - 0 iz"),
    ("go", "gəʊ", "g", "g", "ɣ", "əʊ", "âu", "ə - 0 uz"),
    ("come", "kʌm", "k", "c", "k", "ʌm", "âm", "ə - 0 mz"),
    ("young", "jʌŋ", "j", "gi", "z", "ʌŋ", "ăng", "a - 0 ŋz"),
    ("sing", "sɪŋ", "s", "s", "s", "ɪŋ", "ing", "i - 0 ŋz"),
    ("bee", "biː", "b", "b", "b", "iː", "i", "i - 0"),
    ("pet", "pet", "p", "p", "p", "et", "ét", "ɛ - 4 tz"),
    ("core", "kɔː", "k", "c", "k", "ɔː", "o", "ɔ - 0"),
    ("foot", "fʊt", "f", "ph", "f", "ʊt", "út", "u - 4 tz"),
    ("tea", "tiː", "t", "t", "t", "iː", "i", "i - 0"),
    ("think", "θɪŋk", "θ", "th", "tʰ", "ɪŋk", "in", "i - 0 nz"),
    ("view", "vjuː", "v", "v", "v", "juː", "iu", "i - 0 uz"),
    ("ship", "ʃɪp", "ʃ", "s", "s", "ɪp", "íp", "i - 4 pz"),
    ("lamp", "læmp", "l", "l", "l", "æmp", "am", "aː - 0 mz"),
    ("tour", "tʊər", "t", "t", "t", "ʊər", "ua", "uə - 0"),
]


def read_lines(name: str) -> list[str]:
    return [l for l in (DATA / name).read_text(encoding="utf-8").splitlines() if l.strip() and not l.startswith("#")]


@pytest.fixture(scope="session")
def adapter():
    return default_adapter()


@pytest.fixture(scope="session")
def pron():
    return default_pronunciations()


@pytest.fixture(scope="session")
def cs_corpus() -> list[str]:
    return read_lines("cs_corpus.txt")


def homophone_free_words(n: int, seed: int = 0) -> list[str]:
    """``n`` grid syllables whose phone keys are pairwise distinct."""
    table = default_g2p()
    grid = table.tables.legal_grid()
    rng = np.random.default_rng(seed)
    words, keys = [], set()
    for i in rng.permutation(len(grid)):
        key = table.syllable_to_phones(grid[i]).serialize()
        if key in keys:
            continue
        keys.add(key)
        words.append(compose(grid[i]))
        if len(words) == n:
            break
    return words


@pytest.fixture(scope="session")
def lexicon500() -> tuple[Lexicon, list[str]]:
    words = homophone_free_words(500)
    lex = Lexicon()
    for w in words:
        lex.add_vietnamese(w)
    return lex, words


def random_sentences(words: list[str], n: int, seed: int = 1, lo: int = 3, hi: int = 9) -> list[str]:
    rng = np.random.default_rng(seed)
    return [" ".join(rng.choice(words, size=int(rng.integers(lo, hi)))) for _ in range(n)]
