import unicodedata

import pytest
from hypothesis import given
from hypothesis import strategies as st

from viphone.errors import IllegalCombination, MultipleToneMarks, NotAVietnameseSyllable
from viphone.phoneme_core import Tone
from viphone.viet_syllable import (
    OrthoSyllable,
    TokenLang,
    classify_token,
    classify_tokens,
    compose,
    decompose,
    default_tables,
    is_legal,
    strip_tone,
)


@pytest.mark.parametrize(
    "syllable, base, tone",
    [("ét", "et", Tone.SAC), ("u", "u", Tone.NGANG), ("vừa", "vưa", Tone.HUYEN), ("giữ", "giư", Tone.NGA),
     ("hỏi", "hoi", Tone.HOI), ("nặng", "năng", Tone.NANG), ("đường", "đương", Tone.HUYEN)],
)
def test_strip_tone(syllable, base, tone):
    assert strip_tone(syllable) == (base, tone)


def test_strip_tone_accepts_combining_marks():
    assert strip_tone(unicodedata.normalize("NFD", "vừa")) == ("vưa", Tone.HUYEN)


def test_strip_tone_rejects_two_marks():
    with pytest.raises(MultipleToneMarks):
        strip_tone("áà")


@given(st.sampled_from(["vừa", "ét", "nghiêng", "quốc", "người", "ậy"]))
def test_strip_tone_idempotent(s):
    base, _ = strip_tone(s)
    assert strip_tone(base) == (base, Tone.NGANG)


def test_decompose_examples():
    assert decompose("nghiêng") == OrthoSyllable("ngh", "iê", "ng", Tone.NGANG)
    assert decompose("a") == OrthoSyllable("", "a", "", Tone.NGANG)
    assert decompose("tuyết") == OrthoSyllable("t", "yê", "t", Tone.SAC, "u")
    assert decompose("quốc") == OrthoSyllable("qu", "ô", "c", Tone.SAC)


@pytest.mark.parametrize("word", ["list", "concert", "camera", "chat", "bb", "", "xyz", "cá1", "ka", "ge", "ngi"])
def test_decompose_rejects(word):
    with pytest.raises(NotAVietnameseSyllable):
        decompose(word)


def test_gi_heuristic():
    # gi is the onset when a vowel follows; otherwise the i is the nucleus
    assert decompose("gia") == OrthoSyllable("gi", "a", "", Tone.NGANG)
    assert decompose("gì") == OrthoSyllable("gi", "i", "", Tone.HUYEN)
    assert decompose("gìn") == OrthoSyllable("gi", "i", "n", Tone.HUYEN)
    assert compose(decompose("giếng")) == "giếng"


def test_compose_examples():
    assert compose(OrthoSyllable("", "e", "t", Tone.SAC)) == "ét"
    assert compose(OrthoSyllable("đ", "ê", "u", Tone.NGANG)) == "đêu"
    with pytest.raises(IllegalCombination):
        compose(OrthoSyllable("", "e", "t", Tone.NGANG))
    with pytest.raises(IllegalCombination):
        compose(OrthoSyllable("k", "a", "", Tone.NGANG))


@pytest.mark.parametrize(
    "syllable",
    # quality vowel wins; ia/ua/ưa mark the first vowel; with a coda the
    # penultimate vowel; oa/oe/uy without coda take the mark on the last vowel
    ["thuở", "người", "mùa", "mưa", "khuya", "bìa", "toán", "hoà", "thuý", "quý", "việt", "ngoằn"],
)
def test_tone_placement(syllable):
    assert compose(decompose(syllable)) == syllable


def test_nfc_entry_point():
    assert compose(decompose(unicodedata.normalize("NFD", "người"))) == "người"
    assert compose(decompose("VIỆT")) == "việt"


def test_exhaustive_grid_round_trip():
    grid = default_tables().legal_grid()
    assert len(grid) >= 10_000
    seen = set()
    for s in grid:
        text = compose(s)
        assert decompose(text) == s, text
        seen.add(text)
    assert len(seen) == len(grid)


def test_classify_examples():
    assert [t.cls for t in classify_tokens("đi dự concert")] == [TokenLang.VIETNAMESE] * 2 + [TokenLang.ENGLISH]
    assert classify_tokens("") == []
    assert [t.cls for t in classify_tokens("camera")] == [TokenLang.ENGLISH]
    assert [t.cls for t in classify_tokens("nhé , 2024 ok!")] == [
        TokenLang.VIETNAMESE, TokenLang.OTHER, TokenLang.OTHER, TokenLang.ENGLISH,
    ]


@pytest.mark.parametrize("token", ["lít", "list", "vi", "deo", "đêu", "xyz", "ét", "chat", "Hôm", "lắm."])
def test_classification_matches_grammar(token):
    core = token.strip(".")
    try:
        decompose(core)
        parses = True
    except NotAVietnameseSyllable:
        parses = False
    assert (classify_token(token) is TokenLang.VIETNAMESE) == parses


def test_is_legal_stop_tone_rule():
    assert is_legal(OrthoSyllable("h", "o", "c", Tone.NANG))
    assert not is_legal(OrthoSyllable("h", "o", "c", Tone.HOI))
