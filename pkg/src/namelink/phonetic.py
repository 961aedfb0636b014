"""Phonetic codes: Russell Soundex, its Arabic counterpart, and the
8-character combined code for prefixed compound names.

Both alphabets code into the same digit groups, and an Arabic code begins
with the Latin romanization of its first letter, so Arabic and Latin codes
are directly equal-joinable. A first letter like ayn romanizes several
ways (A/E/O), so an Arabic token has a small set of code variants; the
join tries all of them.

Plain 4-character codes collapse compound names that share a prefix
("abdel aziz" and "abdel rahman" both give A134); the combined code keys
prefix and head separately (A134A220 vs A134R550) and restores the
distinction.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Mapping

from .errors import EmptyToken
from .normalize import Script
from .parse import NameToken

logger = logging.getLogger(__name__)

SOUNDEX_RE = re.compile(r"^[A-Z][0-9]{3}$")
COMBINED_RE = re.compile(r"^[A-Z][0-9]{3}([A-Z][0-9]{3})?$")

_ARABIC_ARTICLE = "ال"  # ال


@dataclass(frozen=True)
class CodeTable:
    """Digit groups for both alphabets plus first-letter romanizations."""

    latin: Mapping[str, str]
    arabic: Mapping[str, str]
    romanization: Mapping[str, tuple[str, ...]]

    @classmethod
    def from_files(cls, latin_path, arabic_path, romanization_path) -> "CodeTable":
        read = lambda p: _parse_table(Path(p).read_text(encoding="utf-8"))
        roman = {k: tuple(v) for k, v in read(romanization_path).items()}
        return cls(latin=read(latin_path), arabic=read(arabic_path), romanization=roman)

    @classmethod
    def default(cls) -> "CodeTable":
        return _default_table()

    def latin_letters_for(self, arabic_letter: str) -> tuple[str, ...]:
        return self.romanization.get(arabic_letter, ())

    def arabic_letters_for(self, latin_letter: str) -> frozenset[str]:
        """Inverse romanization: Arabic letters a Latin initial can stand for."""
        target = latin_letter.upper()
        return frozenset(
            ar for ar, latins in self.romanization.items() if target in latins
        )


_TABLE: CodeTable | None = None


def _parse_table(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if not line or line.startswith("#"):
            continue
        key, value = line.split("\t")
        out[key] = value
    return out


def _read_data(filename: str) -> str:
    return resources.files("namelink").joinpath(f"data/{filename}").read_text("utf-8")


def _default_table() -> CodeTable:
    global _TABLE
    if _TABLE is None:
        roman = {k: tuple(v) for k, v in _parse_table(_read_data("romanization.tsv")).items()}
        _TABLE = CodeTable(
            latin=_parse_table(_read_data("soundex_latin.tsv")),
            arabic=_parse_table(_read_data("soundex_arabic.tsv")),
            romanization=roman,
        )
    return _TABLE


def _digits(letters: str, code_map: Mapping[str, str], token: str) -> str:
    """Code letters after the first; same-coded letters adjacent in the
    original spelling collapse to one (a vowel in between keeps both)."""
    out: list[str] = []
    prev = code_map.get(letters[0])
    for ch in letters[1:]:
        code = code_map.get(ch)
        if code is None:
            logger.warning("character %r of %r has no phonetic code; skipped", ch, token)
            prev = None
            continue
        if code != "0" and code != prev:
            out.append(code)
        prev = code
    return ("".join(out) + "000")[:3]


def english_soundex(token: str, table: CodeTable | None = None) -> str:
    """Classic four-character Soundex of one Latin token."""
    table = table or CodeTable.default()
    letters = "".join(c for c in token if c.isalpha()).lower()
    if not letters:
        raise EmptyToken(f"no letters to code in {token!r}")
    return letters[0].upper() + _digits(letters, table.latin, token)


def _arabic_letters(token: str) -> str:
    letters = "".join(c for c in token if not c.isspace())
    if not letters:
        raise EmptyToken(f"no letters to code in {token!r}")
    return letters


def arabic_soundex(token: str, table: CodeTable | None = None) -> str:
    """Arabic Soundex with the first letter emitted as its primary
    romanization, making the code joinable against Latin codes."""
    table = table or CodeTable.default()
    letters = _arabic_letters(token)
    latins = table.latin_letters_for(letters[0])
    if not latins:
        logger.warning("no romanization for %r; using X", letters[0])
        latins = ("X",)
    return latins[0] + _digits(letters, table.arabic, token)


def arabic_soundex_variants(token: str, table: CodeTable | None = None) -> frozenset[str]:
    """One code per romanization of the first letter; digits are shared."""
    table = table or CodeTable.default()
    letters = _arabic_letters(token)
    latins = table.latin_letters_for(letters[0]) or ("X",)
    digits = _digits(letters, table.arabic, token)
    return frozenset(latin + digits for latin in latins)


def soundex(token: str, script: Script, table: CodeTable | None = None) -> str:
    if script is Script.ARABIC:
        return arabic_soundex(token, table)
    return english_soundex(token, table)


def _coding_parts(canonical: str, script: Script) -> tuple[str, ...]:
    """Split a compound's canonical form into (prefix letters, head).

    The Arabic article of the head migrates into the prefix segment so that
    "عبد العزيز" codes its prefix as عبد+ال, mirroring "abdel" on the Latin
    side; both then share the A134 prefix code.
    """
    words = canonical.split()
    if len(words) == 1:
        return (words[0],)
    head = words[-1]
    prefix = "".join(words[:-1])
    if (
        script is Script.ARABIC
        and head.startswith(_ARABIC_ARTICLE)
        and len(head) > len(_ARABIC_ARTICLE)
    ):
        prefix += _ARABIC_ARTICLE
        head = head[len(_ARABIC_ARTICLE):]
    return (prefix, head)


def combined_soundex(
    token: "NameToken | str", script: Script, table: CodeTable | None = None
) -> str:
    """8-character code for compounds (prefix code ++ head code); plain
    4-character code for simple tokens."""
    canonical = token.canonical if isinstance(token, NameToken) else token
    parts = _coding_parts(canonical, script)
    return "".join(soundex(p, script, table) for p in parts)


def combined_soundex_variants(
    token: "NameToken | str", script: Script, table: CodeTable | None = None
) -> frozenset[str]:
    """All first-letter variant expansions of the combined code."""
    canonical = token.canonical if isinstance(token, NameToken) else token
    parts = _coding_parts(canonical, script)
    if script is Script.LATIN:
        return frozenset(["".join(english_soundex(p, table) for p in parts)])
    variant_sets = [arabic_soundex_variants(p, table) for p in parts]
    return frozenset("".join(combo) for combo in product(*variant_sets))


def plain_soundex(token: "NameToken | str", script: Script, table: CodeTable | None = None) -> str:
    """4-character code of the whole token, spaces ignored (the coding that
    cannot tell compound names apart)."""
    canonical = token.canonical if isinstance(token, NameToken) else token
    return soundex(canonical.replace(" ", ""), script, table)


def plain_soundex_variants(
    token: "NameToken | str", script: Script, table: CodeTable | None = None
) -> frozenset[str]:
    canonical = token.canonical if isinstance(token, NameToken) else token
    squeezed = canonical.replace(" ", "")
    if script is Script.LATIN:
        return frozenset([english_soundex(squeezed, table)])
    return arabic_soundex_variants(squeezed, table)
