import pytest

from conftest import TABLE2
from viphone.en_adapt import (
    Adapter,
    IpaWord,
    adapt,
    default_pronunciations,
    map_prefix,
    map_rime,
    split_ipa,
)
from viphone.errors import OOVEnglishWord, UnsupportedSegment
from viphone.phoneme_core import Tone, default_inventory
from viphone.viet_syllable import STOP_CODAS, compose, decompose, default_tables


def texts(word, n=None):
    return [v.text for v in adapt(word)][:n]


def test_split_examples(pron):
    assert split_ipa(pron["play"]) == [(("p", "l"), ("eɪ",))]
    assert split_ipa(pron["concert"]) == [(("k",), ("ɒ", "n")), (("s",), ("ə", "t"))]
    assert split_ipa(pron["view"]) == [(("v",), ("j", "uː"))]
    assert split_ipa(pron["video"])[-1] == ((), ("əʊ",))


def test_split_rejects_unknown_segment(adapter):
    with pytest.raises(UnsupportedSegment):
        adapter.parse_ipa("x", "pl@")
    with pytest.raises(UnsupportedSegment):
        adapter.split_ipa(IpaWord("psst", ("p", "s")))


def test_map_prefix_examples():
    assert map_prefix(("p", "l")) == [("p", "l")]
    assert ("s", "tr") in map_prefix(("s", "t", "r"))
    assert map_prefix(("k", "w"))[0] == ("c", "~")


def test_map_rime_examples():
    assert map_rime(("eɪ",)) == ["ây"]
    assert map_rime(("ɪ", "ŋ", "k"))[0] == "in"
    assert map_rime(("e", "t")) == ["ét"]


@pytest.mark.parametrize("row", TABLE2, ids=[r[0] for r in TABLE2])
def test_table2_reproduction(row, adapter, pron):
    word, ipa, pre_ipa, pre_vi, pre_ph, post_ipa, post_vi, post_ph = row
    assert "".join(pron[word].ipa) == ipa
    assert adapter.comparison_row(pron[word]) == {
        "prefix_ipa": pre_ipa, "prefix_vi": pre_vi, "prefix_phone": pre_ph,
        "postfix_ipa": post_ipa, "postfix_vi": post_vi, "postfix_phone": post_ph,
    }


def test_video_variants():
    assert texts("video", 3) == ["vi deo", "vi đêu", "vi đê ô"]
    (first,) = [v for v in adapt("video") if v.rank == 0]
    assert first.grapheme_preserving


@pytest.mark.parametrize(
    "word, rank0",
    [("concert", "con sớt"), ("list", "lít"), ("camera", "ca me ra"), ("queen", "quynh"),
     ("think", "thin"), ("play", "pơ lây"), ("tour", "tua"), ("young", "giăng")],
)
def test_rank0_examples(word, rank0):
    assert texts(word, 1) == [rank0]


def test_merged_cluster_phone_variant():
    variants = adapt("play")
    assert {str(v.phones) for v in variants} >= {"p l ə - 0 iz", "p əː - 0 . l ə - 0 iz"}
    assert all(v.text == "pơ lây" for v in variants)


def test_oov():
    with pytest.raises(OOVEnglishWord):
        adapt("xylophone")


def test_every_variant_is_legal_vietnamese(pron):
    inv = default_inventory()
    tables = default_tables()
    for word in pron:
        variants = adapt(word)
        assert variants, word
        assert [v.rank for v in variants] == list(range(len(variants)))
        for v in variants:
            for s in v.syllables:
                assert tables.check(s) is None, (word, v.text)
                assert decompose(compose(s)) == s
            for sp in v.phones.syllables:
                assert set(sp.onsets) <= inv.onsets and sp.nucleus in inv.nuclei


def test_stop_codas_carry_sac_or_nang(pron):
    for word in pron:
        for v in adapt(word):
            for s in v.syllables:
                if s.coda_g in STOP_CODAS:
                    assert s.tone in (Tone.SAC, Tone.NANG), (word, v.text)


def test_deterministic(pron):
    fresh = Adapter()
    for word in pron:
        assert [(v.text, str(v.phones)) for v in fresh.adapt_word(pron[word])] == [
            (v.text, str(v.phones)) for v in adapt(word)
        ]


def test_dictionary_covers_table_words():
    pron = default_pronunciations()
    assert {r[0] for r in TABLE2} <= set(pron)
