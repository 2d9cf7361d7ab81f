"""
Adapting English words to Vietnamese syllables
==============================================

An English word's IPA is split into syllables, each split into a consonant
prefix and a vowel-led postfix. Ranked rules map both sides to Vietnamese
spelling, and every candidate is checked against the syllable grammar.
"""

from viphone.en_adapt import adapt, default_adapter, default_pronunciations

adapter = default_adapter()
pron = default_pronunciations()

# One-syllable words: the prefix/postfix mapping column by column.
for word in ["play", "think", "foot", "lamp"]:
    print(word, adapter.comparison_row(pron[word]))

# Consonant clusters gain an epenthetic "ơ"; a merged-cluster phone variant
# keeps the cluster in a single syllable.
for v in adapt("play"):
    print(v.rank, v.text, v.phones)

# Several ranked variants per word; the first keeps the English spelling
# when that spelling is already valid Vietnamese.
for v in adapt("video"):
    print(v.rank, v.text, v.phones, "(spelling)" if v.grapheme_preserving else "")

# Words outside the dictionary can be adapted from IPA given directly.
print([v.text for v in adapter.adapt_word(adapter.parse_ipa("zed", "zed"))])
