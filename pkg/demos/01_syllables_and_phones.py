"""
Vietnamese syllables and phone strings
======================================

A written Vietnamese syllable splits into onset, optional medial glide,
nucleus, coda and one of six tones. The g2p table turns that into a phone
string of the form ``onset* nucleus - tone [coda]``.
"""

from viphone.g2p import default_g2p, render_syllable, syllable_to_phones
from viphone.phoneme_core import parse_phone_sequence
from viphone.viet_syllable import classify_tokens, compose, decompose, strip_tone

# Tone marks come off first; the rest is a longest-match parse.
print(strip_tone("vừa"))
print(repr(decompose("nghiêng")))
print(repr(decompose("tuyết")))

# compose is the inverse, and puts the tone mark where modern spelling does.
print(compose(decompose("hòa")))

# Every legal syllable has a phone key. Homophones such as gì / dì share one.
for word in ["ây", "lít", "gì", "dì", "người", "quốc"]:
    print(f"{word:8} {syllable_to_phones(word).serialize()}")

# The dialect profile only changes r.
print(syllable_to_phones("rồi", default_g2p("north-strict")).serialize())

# Phone strings parse back into structured syllables; "|" separates words.
seq = parse_phone_sequence("v i - 0 . z ɛ - 0 uz | ɲ ɛ - 4")
print(seq.words())
print(render_syllable(seq.syllables[1]))

# Tokens that are not legal Vietnamese syllables are treated as English.
print([(t.token, t.cls.value) for t in classify_tokens("đi dự concert nhé")])
