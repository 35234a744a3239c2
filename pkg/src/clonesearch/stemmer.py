"""English (Porter2 / Snowball) suffix-stripping stemmer.

Input is a lowercase word; output is its stem. Words of one or two letters
are returned unchanged. R1 and R2 are kept as positions in the word, so a
suffix is "in R1" when it starts at or after ``r1``.

>>> [stem(w) for w in ("copy", "source", "destination", "fis", "using")]
['copi', 'sourc', 'destin', 'fis', 'use']
"""

from __future__ import annotations

from functools import lru_cache

_VOWELS = frozenset("aeiouy")
_DOUBLES = ("bb", "dd", "ff", "gg", "mm", "nn", "pp", "rr", "tt")
_LI_ENDING = frozenset("cdeghkmnrt")

_EXCEPTIONS = {
    "skis": "ski", "skies": "sky", "dying": "die", "lying": "lie", "tying": "tie",
    "idly": "idl", "gently": "gentl", "ugly": "ugli", "early": "earli",
    "only": "onli", "singly": "singl",
    # invariant words
    "sky": "sky", "news": "news", "howe": "howe", "atlas": "atlas",
    "cosmos": "cosmos", "bias": "bias", "andes": "andes",
}
# Checked after step 1a, so plurals land here too.
_INVARIANT_AFTER_1A = frozenset(
    "inning outing canning herring earring proceed exceed succeed".split()
)

_STEP2 = {
    "tional": "tion", "enci": "ence", "anci": "ance", "abli": "able",
    "entli": "ent", "izer": "ize", "ization": "ize", "ational": "ate",
    "ation": "ate", "ator": "ate", "alism": "al", "aliti": "al", "alli": "al",
    "fulness": "ful", "ousli": "ous", "ousness": "ous", "iveness": "ive",
    "iviti": "ive", "biliti": "ble", "bli": "ble", "ogi": "og", "fulli": "ful",
    "lessli": "less", "li": "",
}
_STEP3 = {
    "tional": "tion", "ational": "ate", "alize": "al", "icate": "ic",
    "iciti": "ic", "ical": "ic", "ful": "", "ness": "", "ative": "",
}
_STEP4 = (
    "al ance ence er ic able ible ant ement ment ent ism ate iti ous ive ize ion"
).split()


def _longest(word: str, suffixes) -> str:
    best = ""
    for s in suffixes:
        if len(s) > len(best) and word.endswith(s):
            best = s
    return best


def _regions(w: str) -> tuple[int, int]:
    def after_vc(start: int) -> int:
        for i in range(start + 1, len(w)):
            if w[i] not in _VOWELS and w[i - 1] in _VOWELS:
                return i + 1
        return len(w)

    for prefix in ("gener", "commun", "arsen"):
        if w.startswith(prefix):
            r1 = len(prefix)
            break
    else:
        r1 = after_vc(0)
    r2 = after_vc(r1) if r1 < len(w) else len(w)
    return r1, r2


def _short_syllable_at_end(w: str) -> bool:
    if len(w) == 2:
        return w[0] in _VOWELS and w[1] not in _VOWELS
    return (
        len(w) >= 3
        and w[-3] not in _VOWELS
        and w[-2] in _VOWELS
        and w[-1] not in _VOWELS
        and w[-1] not in "wxY"
    )


def _step1a(w: str) -> str:
    suffix = _longest(w, ("sses", "ied", "ies", "s", "us", "ss"))
    if suffix == "sses":
        return w[:-2]
    if suffix in ("ied", "ies"):
        return w[:-2] if len(w) > 4 else w[:-1]
    if suffix == "s":
        if any(c in _VOWELS for c in w[:-2]):
            return w[:-1]
    return w


def _step1b(w: str, r1: int) -> str:
    suffix = _longest(w, ("eed", "eedly", "ed", "edly", "ing", "ingly"))
    if not suffix:
        return w
    base = w[: -len(suffix)]
    if suffix in ("eed", "eedly"):
        return base + "ee" if len(base) >= r1 else w
    if not any(c in _VOWELS for c in base):
        return w
    if base.endswith(("at", "bl", "iz")):
        return base + "e"
    if base.endswith(_DOUBLES):
        return base[:-1]
    if r1 >= len(base) and _short_syllable_at_end(base):
        return base + "e"
    return base


def _step1c(w: str) -> str:
    if len(w) > 2 and w[-1] in "yY" and w[-2] not in _VOWELS:
        return w[:-1] + "i"
    return w


def _step2(w: str, r1: int) -> str:
    suffix = _longest(w, _STEP2)
    if not suffix or len(w) - len(suffix) < r1:
        return w
    base = w[: -len(suffix)]
    if suffix == "ogi" and not base.endswith("l"):
        return w
    if suffix == "li" and (not base or base[-1] not in _LI_ENDING):
        return w
    return base + _STEP2[suffix]


def _step3(w: str, r1: int, r2: int) -> str:
    suffix = _longest(w, _STEP3)
    start = len(w) - len(suffix)
    if not suffix or start < r1:
        return w
    if suffix == "ative" and start < r2:
        return w
    return w[:start] + _STEP3[suffix]


def _step4(w: str, r2: int) -> str:
    suffix = _longest(w, _STEP4)
    start = len(w) - len(suffix)
    if not suffix or start < r2:
        return w
    if suffix == "ion" and not (start > 0 and w[start - 1] in "st"):
        return w
    return w[:start]


def _step5(w: str, r1: int, r2: int) -> str:
    last = len(w) - 1
    if w.endswith("e"):
        if last >= r2 or (last >= r1 and not _short_syllable_at_end(w[:-1])):
            return w[:-1]
    elif w.endswith("ll") and last >= r2:
        return w[:-1]
    return w


@lru_cache(maxsize=65536)
def stem(word: str) -> str:
    if len(word) <= 2:
        return word
    if word in _EXCEPTIONS:
        return _EXCEPTIONS[word]
    w = word.lstrip("'")
    chars = list(w)
    for i, c in enumerate(chars):
        if c == "y" and (i == 0 or chars[i - 1] in _VOWELS):
            chars[i] = "Y"
    w = "".join(chars)
    r1, r2 = _regions(w)

    for s in ("'s'", "'s", "'"):
        if w.endswith(s):
            w = w[: -len(s)]
            break
    w = _step1a(w)
    if w in _INVARIANT_AFTER_1A:
        return w
    w = _step1b(w, r1)
    w = _step1c(w)
    w = _step2(w, r1)
    w = _step3(w, r1, r2)
    w = _step4(w, r2)
    w = _step5(w, r1, r2)
    return w.replace("Y", "y")
