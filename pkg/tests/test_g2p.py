import io

import pytest

from conftest import TABLE2, homophone_free_words
from viphone.errors import OOVEnglishWord, UnmappedGrapheme
from viphone.g2p import (
    G2PTable,
    Lexicon,
    build_lexicon,
    default_g2p,
    render_syllable,
    syllable_to_phones,
    text_to_phones,
    word_to_phones,
)
from viphone.phoneme_core import default_inventory, parse_syllable
from viphone.viet_syllable import OrthoSyllable, Tone, compose, decompose, default_tables

STRICT = default_g2p("north-strict")


@pytest.mark.parametrize(
    "word, phones",
    [("ây", "ə - 0 iz"), ("lít", "l i - 4 tz"), ("nghiêng", "ŋ ie - 0 ŋz"), ("khuya", "x w ie - 0"),
     ("quốc", "k w o - 4 kz"), ("người", "ŋ ɨə - 1 iz"), ("gì", "z i - 1"), ("chào", "c aː - 1 uz"),
     ("trường", "ʈ ɨə - 1 ŋz"), ("vi", "v i - 0"), ("đêu", "d e - 0 uz"), ("deo", "z ɛ - 0 uz")],
)
def test_examples(word, phones):
    assert syllable_to_phones(word).serialize() == phones


@pytest.mark.parametrize("row", TABLE2, ids=[r[0] for r in TABLE2])
def test_table2_postfix_syllables(row):
    vi, phone = row[6], row[7]
    assert syllable_to_phones(vi).serialize() == phone


def test_table2_prefix_onsets():
    table = default_g2p()
    for row in TABLE2:
        graphemes = [g.strip() for g in row[3].split(",")]
        phones = [p.strip() for p in row[4].split(",")]
        assert [table.onset_map[g][0] for g in graphemes] == phones, row[0]


def test_lit_and_list_share_a_key():
    lex = Lexicon()
    lex.add_vietnamese("lít")
    lex.add_english("list", ["lít"])
    (key,) = {r.key for r in lex.rows}
    assert lex.lookup(key) == {("lít", "vi"), ("list", "en")}


def test_dialects_differ_only_on_r():
    north, strict = default_g2p(), STRICT
    assert syllable_to_phones("rồi", north).serialize() == "ʐ o - 1 iz"
    assert syllable_to_phones("rồi", strict).serialize() == "z o - 1 iz"
    diff = {g for g in north.onset_map if north.onset_map[g] != strict.onset_map[g]}
    assert diff == {"r"}
    with pytest.raises(ValueError):
        G2PTable(dialect="south")


def test_tone_is_preserved_over_grid():
    table = default_g2p()
    for s in default_tables().legal_grid():
        assert table.syllable_to_phones(s).tone == s.tone


def test_output_stays_in_inventory():
    inv = default_inventory()
    table = default_g2p()
    for s in default_tables().legal_grid():
        sp = table.syllable_to_phones(s)
        assert set(sp.onsets) <= inv.onsets and sp.nucleus in inv.nuclei
        assert sp.coda is None or sp.coda in inv.codas


def test_unmapped_rime():
    with pytest.raises(UnmappedGrapheme):
        default_g2p().syllable_to_phones(OrthoSyllable("b", "q", "", Tone.NGANG))


def test_render_inverts_homophone_free_words():
    for w in homophone_free_words(200, seed=3):
        sp = syllable_to_phones(w)
        assert syllable_to_phones(render_syllable(sp)) == sp


def test_render_falls_back_token_by_token():
    # not produced by any legal spelling, rendered piecewise
    assert render_syllable(parse_syllable("b ɛ - 4 ŋz")) == "béng"


def test_word_to_phones_multi_syllable():
    assert [s.serialize() for s in word_to_phones("vi deo")] == ["v i - 0", "z ɛ - 0 uz"]


def test_lexicon_save_load_round_trip(tmp_path, adapter, pron):
    lex = build_lexicon(
        [("xin", "vi", None), ("chào", "vi", None), ("video", "en", adapter.adapt_word(pron["video"])),
         ("list", "en", ["lít"])]
    )
    buf = io.StringIO()
    lex.save(buf)
    path = tmp_path / "lex.tsv"
    lex.save(path)
    assert path.read_text(encoding="utf-8") == buf.getvalue()
    back = Lexicon.load(path)
    assert {(r.word, r.lang, r.variant_index, r.key, r.surface) for r in back.rows} == {
        (r.word, r.lang, r.variant_index, r.key, r.surface) for r in lex.rows
    }
    assert [v.text for v in back.english_variants("video")] == [v.text for v in lex.english_variants("video")]


def test_oov_english():
    with pytest.raises(OOVEnglishWord):
        Lexicon().english_variants("zebra")
    with pytest.raises(OOVEnglishWord):
        text_to_phones("đi dự concert")


def test_text_to_phones_sentence(adapter, pron):
    lex = Lexicon()
    lex.add_english("concert", adapter.adapt_word(pron["concert"]))
    seq = text_to_phones("Đi dự concert, nhé!", lex)
    assert str(seq) == "d i - 0 | z ɨ - 5 | k ɔ - 0 nz . s əː - 4 tz | ɲ ɛ - 4"


def test_compose_decompose_agree_with_g2p_keys():
    # distinct spellings that collide in phones are genuine homophones
    table = default_g2p()
    assert table.syllable_to_phones(decompose("gì")) == table.syllable_to_phones(decompose("dì"))
    assert compose(decompose("gì")) != compose(decompose("dì"))
