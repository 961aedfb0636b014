"""Character-level cleaning of Arabic and Latin name strings.

Typographic variants of the same name (hamza carriers, aleph maqsura,
taa marbuta, diacritics on the Arabic side; case, separators and accents
on the Latin side) are collapsed onto a single form so that logically
equal names compare equal everywhere downstream.
"""

from __future__ import annotations

import logging
import unicodedata
from dataclasses import dataclass
from enum import Enum

from .errors import NonArabicContent, NonLatinContent

logger = logging.getLogger(__name__)


class Script(Enum):
    ARABIC = "arabic"
    LATIN = "latin"
    MIXED = "mixed"


_ARABIC_RANGES = (
    (0x0600, 0x06FF),
    (0x0750, 0x077F),
    (0x08A0, 0x08FF),
    (0xFB50, 0xFDFF),
    (0xFE70, 0xFEFF),
)


def _is_arabic_char(ch: str) -> bool:
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _ARABIC_RANGES)


def _is_latin_letter(ch: str) -> bool:
    if ch.isascii():
        return ch.isalpha()
    return ch.isalpha() and "LATIN" in unicodedata.name(ch, "")


def detect_script(text: str) -> Script:
    """Classify a raw string: Arabic, Latin, or Mixed.

    Arabic means at least one Arabic character and no Latin letters;
    Latin is the reverse; everything else (including letterless strings)
    is Mixed.
    """
    has_arabic = any(_is_arabic_char(c) for c in text)
    has_latin = any(_is_latin_letter(c) for c in text)
    if has_arabic and not has_latin:
        return Script.ARABIC
    if has_latin and not has_arabic:
        return Script.LATIN
    return Script.MIXED


@dataclass(frozen=True)
class RawName:
    """A name string as it appears in a dataset row."""

    text: str
    script: Script
    comma_hint: bool = False

    @classmethod
    def of(cls, text: str) -> "RawName":
        # A comma in the raw text is the surname-first signal; it must be
        # captured here because normalization turns commas into spaces.
        return cls(text=text, script=detect_script(text), comma_hint="," in text)


@dataclass(frozen=True)
class NormalizedName:
    """A cleaned name: single-spaced, one canonical spelling per variant group."""

    text: str
    script: Script
    comma_hint: bool = False


@dataclass(frozen=True)
class ArabicFoldOptions:
    """Switches for the two folds the sources disagree on.

    waw_hamza_to: where to fold waw-hamza; "alef" is the published table,
    "waw" is the common alternative (and is what makes the Fuad/Fouad
    variant pair collapse).
    final_hamza: "drop" removes a word-final standalone hamza after a long
    vowel; "yeh" folds it to yeh instead.
    """

    waw_hamza_to: str = "alef"
    final_hamza: str = "drop"


# Latin separator handling: these become a single space.
_LATIN_SEPARATORS = set("-_,./") | {"‐", "‑", "‒", "–", "—"}
# Apostrophes often mark ayn/hamza in transliterations; they are deleted.
_APOSTROPHES = {"'", "’", "ʼ", "`"}
# A few Latin letters that survive NFKD without an ASCII decomposition.
_LATIN_FALLBACK = {
    "æ": "ae",
    "œ": "oe",
    "ø": "o",
    "đ": "d",
    "ł": "l",
    "ð": "d",
    "þ": "th",
    "ı": "i",
}

_ALEF = "ا"
_WAW = "و"
_YEH = "ي"
_HEH = "ه"
_HAMZA = "ء"
_LONG_VOWELS = {_ALEF, _WAW, _YEH}

# Hamza-carrier and variant folds of the published normalization table,
# plus alef wasla which behaves like the plain alef carriers.
_ARABIC_FOLDS = {
    "آ": _ALEF,  # alef madda
    "أ": _ALEF,  # alef hamza above
    "إ": _ALEF,  # alef hamza below
    "ٱ": _ALEF,  # alef wasla
    "ى": _YEH,   # aleph maqsura
    "ة": _HEH,   # taa marbuta
}

# Combining marks removed outright: tashkeel, Koranic annotation marks,
# superscript alef, and the combining hamza/madda left by decomposition.
_ARABIC_DIACRITICS = (
    set(chr(c) for c in range(0x0610, 0x061B))
    | set(chr(c) for c in range(0x064B, 0x0660))
    | set(chr(c) for c in range(0x06D6, 0x06EE))
    | {"ٰ", "ٓ", "ٔ", "ٕ"}
)

_TATWEEL = "ـ"
_ARABIC_SEPARATORS = set("-_,./") | {"،", "؛", "؟"}
_EASTERN_DIGITS = set(chr(c) for c in range(0x0660, 0x066A)) | set(
    chr(c) for c in range(0x06F0, 0x06FA)
)


def _coerce_raw(name: "RawName | str") -> RawName:
    if isinstance(name, RawName):
        return name
    return RawName.of(name)


def _collapse_spaces(chars: list[str]) -> str:
    return " ".join("".join(chars).split())


def normalize_latin(name: "RawName | str") -> NormalizedName:
    """Reduce a Latin name to lowercase a-z words separated by single spaces.

    Separators (hyphen, underscore, comma, dot, slash) become spaces, runs
    of whitespace collapse, accents fold to their base letters, digits are
    stripped. Raises NonLatinContent for anything outside that repertoire,
    Arabic characters included.
    """
    raw = _coerce_raw(name)
    if any(_is_arabic_char(c) for c in raw.text):
        raise NonLatinContent(f"Arabic characters in Latin name: {raw.text!r}")

    decomposed = unicodedata.normalize("NFKD", raw.text)
    out: list[str] = []
    for ch in decomposed:
        if unicodedata.category(ch) == "Mn":
            continue
        if ch in _APOSTROPHES:
            continue
        if ch in _LATIN_SEPARATORS or ch.isspace():
            out.append(" ")
            continue
        if ch.isdigit():
            continue
        if ch.isascii() and ch.isalpha():
            out.append(ch.lower())
            continue
        folded = _LATIN_FALLBACK.get(ch.lower())
        if folded is not None:
            out.append(folded)
            continue
        if _is_latin_letter(ch):
            logger.warning("unfoldable Latin letter %r dropped", ch)
            continue
        raise NonLatinContent(f"non-Latin character {ch!r} in {raw.text!r}")

    return NormalizedName(
        text=_collapse_spaces(out), script=Script.LATIN, comma_hint=raw.comma_hint
    )


def _fold_final_hamza(word: str, options: ArabicFoldOptions) -> str:
    if len(word) >= 2 and word[-1] == _HAMZA and word[-2] in _LONG_VOWELS:
        if options.final_hamza == "yeh" and word[-2] != _YEH:
            return word[:-1] + _YEH
        return word[:-1]
    return word


def normalize_arabic(
    name: "RawName | str", options: ArabicFoldOptions = ArabicFoldOptions()
) -> NormalizedName:
    """Fold Arabic typographic variants onto one spelling.

    Alef carriers (alef madda, hamza above/below, and by default waw-hamza)
    unify to bare alef, aleph maqsura to yeh, taa marbuta to heh; diacritics,
    tatweel and digits are stripped; a word-final standalone hamza after a
    long vowel is dropped (or folded to yeh, per options). Raises
    NonArabicContent when Latin letters are present.
    """
    raw = _coerce_raw(name)
    if any(_is_latin_letter(c) for c in raw.text):
        raise NonArabicContent(f"Latin letters in Arabic name: {raw.text!r}")

    # Compose first so hamza typed as a combining mark, and presentation
    # forms, reach the fold table as the ordinary carrier codepoints.
    composed = unicodedata.normalize("NFKC", raw.text)
    waw_hamza_target = _WAW if options.waw_hamza_to == "waw" else _ALEF

    out: list[str] = []
    for ch in composed:
        if ch in _ARABIC_DIACRITICS or ch == _TATWEEL:
            continue
        if ch in _EASTERN_DIGITS or ch.isdigit():
            continue
        if ch in _ARABIC_SEPARATORS or ch.isspace():
            out.append(" ")
            continue
        if ch == "ؤ":  # waw hamza
            out.append(waw_hamza_target)
            continue
        folded = _ARABIC_FOLDS.get(ch)
        if folded is not None:
            out.append(folded)
            continue
        if _is_arabic_char(ch):
            out.append(ch)
            continue
        logger.warning("non-Arabic character %r dropped from %r", ch, raw.text)

    words = [_fold_final_hamza(w, options) for w in _collapse_spaces(out).split()]
    return NormalizedName(
        text=" ".join(w for w in words if w),
        script=Script.ARABIC,
        comma_hint=raw.comma_hint,
    )


def normalize(
    name: "RawName | str", options: ArabicFoldOptions = ArabicFoldOptions()
) -> NormalizedName:
    """Dispatch on detected script; Mixed input is rejected by both branches."""
    raw = _coerce_raw(name)
    if raw.script is Script.ARABIC:
        return normalize_arabic(raw, options)
    return normalize_latin(raw)
