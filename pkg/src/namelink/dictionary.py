"""The bidirectional Arabic↔Latin name-token dictionary.

Built from aligned full-name pairs by one of four strategies: take every
positional token pair as-is (source-extracted), keep only pairs whose
phonetic codes join (plain or combined Soundex), or layer expert edits on
top. Token pairs whose names disagree in token count after compound
merging are skipped rather than guessed at, since one misalignment poisons
every lookup that touches it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .normalize import Script
from .parse import ParsedName
from .phonetic import CodeTable, combined_soundex, combined_soundex_variants, \
    plain_soundex, plain_soundex_variants

logger = logging.getLogger(__name__)


class Provenance(Enum):
    SOURCE_EXTRACTED = "source_extracted"
    SOUNDEX_JOIN = "soundex_join"
    COMBINED_SOUNDEX_JOIN = "combined_soundex_join"
    EXPERT_VERIFIED = "expert_verified"


@dataclass(frozen=True)
class DictionaryEntry:
    arabic: str
    latin: str
    arabic_code: str
    latin_code: str
    provenance: Provenance
    verified: bool = False

    def key(self) -> tuple[str, str]:
        return (self.arabic, self.latin)


@dataclass(frozen=True)
class ExpertEdit:
    action: str  # add | remove | verify
    arabic: str
    latin: str


class Dictionary:
    """Immutable token map with lookups in both directions.

    Queries are read-only and safe to share; edits return a new value.
    """

    def __init__(
        self,
        entries: Iterable[DictionaryEntry] = (),
        code_table: CodeTable | None = None,
    ):
        self._entries: dict[tuple[str, str], DictionaryEntry] = {}
        self._by_latin: dict[str, set[str]] = {}
        self._by_arabic: dict[str, set[str]] = {}
        self._code_table = code_table or CodeTable.default()
        for entry in entries:
            self._insert(entry)

    def _insert(self, entry: DictionaryEntry) -> None:
        self._entries[entry.key()] = entry
        self._by_latin.setdefault(entry.latin, set()).add(entry.arabic)
        self._by_arabic.setdefault(entry.arabic, set()).add(entry.latin)

    def _remove(self, key: tuple[str, str]) -> None:
        del self._entries[key]
        arabic, latin = key
        self._by_latin[latin].discard(arabic)
        if not self._by_latin[latin]:
            del self._by_latin[latin]
        self._by_arabic[arabic].discard(latin)
        if not self._by_arabic[arabic]:
            del self._by_arabic[arabic]

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._entries

    def __iter__(self) -> Iterator[DictionaryEntry]:
        return iter(self.entries())

    def get(self, arabic: str, latin: str) -> DictionaryEntry | None:
        return self._entries.get((arabic, latin))

    def entries(self) -> list[DictionaryEntry]:
        return [self._entries[k] for k in sorted(self._entries)]

    @property
    def code_table(self) -> CodeTable:
        return self._code_table

    def lookup_latin(self, token: str) -> frozenset[str]:
        """Arabic counterparts of a Latin token; a single letter is treated
        as an initial and matches every known Arabic token whose first
        letter romanizes to it."""
        if len(token) == 1:
            letters = self._code_table.arabic_letters_for(token)
            return frozenset(ar for ar in self._by_arabic if ar[0] in letters)
        return frozenset(self._by_latin.get(token, ()))

    def lookup_arabic(self, token: str) -> frozenset[str]:
        return frozenset(self._by_arabic.get(token, ()))

    def with_edits(self, edits: Iterable[ExpertEdit]) -> "Dictionary":
        """Apply expert add/remove/verify edits in order; returns a new
        dictionary whose touched entries carry expert provenance."""
        new = Dictionary(self._entries.values(), self._code_table)
        for edit in edits:
            key = (edit.arabic, edit.latin)
            if edit.action == "add":
                new._insert(
                    DictionaryEntry(
                        arabic=edit.arabic,
                        latin=edit.latin,
                        arabic_code=combined_soundex(edit.arabic, Script.ARABIC, self._code_table),
                        latin_code=combined_soundex(edit.latin, Script.LATIN, self._code_table),
                        provenance=Provenance.EXPERT_VERIFIED,
                        verified=True,
                    )
                )
            elif edit.action == "remove":
                if key in new._entries:
                    new._remove(key)
                else:
                    logger.warning("remove of missing entry %r/%r", edit.arabic, edit.latin)
            elif edit.action == "verify":
                existing = new._entries.get(key)
                if existing is None:
                    logger.warning("verify of missing entry %r/%r", edit.arabic, edit.latin)
                else:
                    new._entries[key] = replace(
                        existing, provenance=Provenance.EXPERT_VERIFIED, verified=True
                    )
            else:
                raise ValueError(f"unknown edit action {edit.action!r}")
        return new

    def save(self, path: "Path | str") -> None:
        lines = [
            "\t".join(
                (
                    e.arabic,
                    e.latin,
                    e.arabic_code,
                    e.latin_code,
                    e.provenance.value,
                    "true" if e.verified else "false",
                )
            )
            for e in self.entries()
        ]
        Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")

    @classmethod
    def load(cls, path: "Path | str", code_table: CodeTable | None = None) -> "Dictionary":
        entries = []
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 6:
                raise ValueError(f"{path}:{lineno}: expected 6 tab-separated fields")
            entries.append(
                DictionaryEntry(
                    arabic=parts[0],
                    latin=parts[1],
                    arabic_code=parts[2],
                    latin_code=parts[3],
                    provenance=Provenance(parts[4]),
                    verified=parts[5] == "true",
                )
            )
        return cls(entries, code_table)


def aligned_token_pairs(
    pairs: Iterable[tuple[ParsedName, ParsedName]],
) -> tuple[list[tuple[str, str]], int]:
    """Positional (arabic token, latin token) alignment of parsed name pairs.

    Pairs with unequal token counts after compound merging are skipped;
    the skip count is returned for reporting.
    """
    out: list[tuple[str, str]] = []
    skipped = 0
    for arabic, latin in pairs:
        if len(arabic) != len(latin):
            skipped += 1
            logger.warning(
                "token count mismatch (%d vs %d): %r / %r",
                len(arabic), len(latin), arabic.original.text, latin.original.text,
            )
            continue
        out.extend(zip(arabic.canonical_tokens, latin.canonical_tokens))
    if skipped:
        logger.warning("skipped %d name pairs with unequal token counts", skipped)
    return out, skipped


def _entry(
    arabic: str, latin: str, provenance: Provenance, table: CodeTable
) -> DictionaryEntry:
    return DictionaryEntry(
        arabic=arabic,
        latin=latin,
        arabic_code=combined_soundex(arabic, Script.ARABIC, table),
        latin_code=combined_soundex(latin, Script.LATIN, table),
        provenance=provenance,
    )


def build_source_extracted(
    pairs: Iterable[tuple[ParsedName, ParsedName]],
    code_table: CodeTable | None = None,
) -> Dictionary:
    """Trust the data-entry pairs as-is (every aligned token pair kept)."""
    table = code_table or CodeTable.default()
    token_pairs, _ = aligned_token_pairs(pairs)
    return Dictionary(
        (_entry(a, l, Provenance.SOURCE_EXTRACTED, table) for a, l in token_pairs),
        table,
    )


def build_soundex_join(
    pairs: Iterable[tuple[ParsedName, ParsedName]],
    code_table: CodeTable | None = None,
) -> Dictionary:
    """Keep token pairs whose plain 4-character codes join (any first-letter
    variant). Compound names sharing a prefix can still collide here."""
    table = code_table or CodeTable.default()
    token_pairs, _ = aligned_token_pairs(pairs)
    entries = []
    for arabic, latin in token_pairs:
        variants = plain_soundex_variants(arabic, Script.ARABIC, table)
        latin_code = plain_soundex(latin, Script.LATIN, table)
        if latin_code in variants:
            entries.append(
                DictionaryEntry(
                    arabic=arabic,
                    latin=latin,
                    arabic_code=plain_soundex(arabic, Script.ARABIC, table),
                    latin_code=latin_code,
                    provenance=Provenance.SOUNDEX_JOIN,
                )
            )
    return Dictionary(entries, table)


def build_combined_soundex_join(
    pairs: Iterable[tuple[ParsedName, ParsedName]],
    code_table: CodeTable | None = None,
) -> Dictionary:
    """Join on the 8-character combined code, which keys compound prefix and
    head separately and rejects the cross-prefix collisions."""
    table = code_table or CodeTable.default()
    token_pairs, _ = aligned_token_pairs(pairs)
    entries = []
    for arabic, latin in token_pairs:
        variants = combined_soundex_variants(arabic, Script.ARABIC, table)
        latin_code = combined_soundex(latin, Script.LATIN, table)
        if latin_code in variants:
            entries.append(
                DictionaryEntry(
                    arabic=arabic,
                    latin=latin,
                    arabic_code=combined_soundex(arabic, Script.ARABIC, table),
                    latin_code=latin_code,
                    provenance=Provenance.COMBINED_SOUNDEX_JOIN,
                )
            )
    return Dictionary(entries, table)
