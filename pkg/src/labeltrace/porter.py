"""Porter suffix-stripping stemmer.

Implements the Porter (1980) algorithm as distributed by its author, i.e.
including the three revisions the author later folded into every official
implementation and into the published sample vocabulary:

* words of length 1 or 2 are left untouched,
* step 2 uses ``(m>0) bli -> ble`` instead of the paper's ``abli -> able``,
* step 2 gains the rule ``(m>0) logi -> log``.

``stem_once`` is that algorithm verbatim. ``stem`` applies it repeatedly
until the token stops changing; the single-pass algorithm is not a fixed
point on its own output (``agree -> agre -> agr``), and the analysis
pipeline needs an idempotent transform so that re-analysing analysed text
is harmless. Tokens containing anything outside ``a-z`` (digits, accented
letters, apostrophes) are returned unchanged: the algorithm is defined for
lowercase English words only.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_consonant(word: str, i: int) -> bool:
    c = word[i]
    if c in _VOWELS:
        return False
    if c == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-to-consonant transitions ([C](VC)^m[V])."""
    n = 0
    i = 0
    length = len(stem)
    while i < length and _is_consonant(stem, i):
        i += 1
    while i < length:
        while i < length and not _is_consonant(stem, i):
            i += 1
        if i == length:
            break
        n += 1
        while i < length and _is_consonant(stem, i):
            i += 1
    return n


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    # consonant-vowel-consonant ending where the final consonant is not w/x/y
    return (
        len(word) >= 3
        and _is_consonant(word, len(word) - 3)
        and not _is_consonant(word, len(word) - 2)
        and _is_consonant(word, len(word) - 1)
        and word[-1] not in "wxy"
    )


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-3] + "i"
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if _measure(word[:-3]) > 0:
            return word[:-1]
        return word
    if word.endswith("ed") and _has_vowel(word[:-2]):
        return _step1b_tidy(word[:-2])
    if word.endswith("ing") and _has_vowel(word[:-3]):
        return _step1b_tidy(word[:-3])
    return word


def _step1b_tidy(stem: str) -> str:
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


# Rule tables for steps 2-4. Each rule fires on the first suffix match and
# ends the step, whether or not the measure condition then allows the
# rewrite; this matches the reference implementation's control flow. Only
# one "case" (keyed by a fixed character of the suffix) can ever match a
# given word, so a flat first-match scan is equivalent to its switch.

_STEP2 = (
    ("ational", "ate"),
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("bli", "ble"),
    ("alli", "al"),
    ("entli", "ent"),
    ("eli", "e"),
    ("ousli", "ous"),
    ("ization", "ize"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3 = (
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
)

_STEP4_BEFORE_ION = (
    "al", "ance", "ence", "er", "ic", "able", "ible",
    "ant", "ement", "ment", "ent",
)
_STEP4_AFTER_ION = ("ou", "ism", "ate", "iti", "ous", "ive", "ize")


def _apply_rules(word: str, rules: tuple[tuple[str, str], ...]) -> str:
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > 0:
                return stem + replacement
            return word
    return word


def _step4(word: str) -> str:
    for suffix in _STEP4_BEFORE_ION:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > 1:
                return stem
            return word
    if word.endswith("ion") and len(word) > 3 and word[-4] in "st":
        stem = word[:-3]
        if _measure(stem) > 1:
            return stem
        return word
    for suffix in _STEP4_AFTER_ION:
        if word.endswith(suffix):
            stem = word[: len(word) - len(suffix)]
            if _measure(stem) > 1:
                return stem
            return word
    return word


def _step5a(word: str) -> str:
    if word.endswith("e"):
        m = _measure(word)  # trailing vowel never closes a VC pair
        if m > 1 or (m == 1 and not _ends_cvc(word[:-1])):
            return word[:-1]
    return word


def _step5b(word: str) -> str:
    if word.endswith("l") and _ends_double_consonant(word) and _measure(word) > 1:
        return word[:-1]
    return word


def stem_once(word: str) -> str:
    """One pass of the Porter algorithm over a lowercase a-z word."""
    if len(word) <= 2:
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _apply_rules(word, _STEP2)
    word = _apply_rules(word, _STEP3)
    word = _step4(word)
    word = _step5a(word)
    word = _step5b(word)
    return word


def stem(token: str) -> str:
    """Stem a token to a fixed point of the Porter pass.

    Non a-z tokens (digits, accents, mixed symbols such as ``n50``) pass
    through unchanged.
    """
    if not token or not token.isascii() or not token.isalpha() or not token.islower():
        return token
    current = stem_once(token)
    while current != token:
        token = current
        current = stem_once(token)
    return current
