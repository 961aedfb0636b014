"""Token-level name parsing: splitting, surname reordering, compound merging.

Arabic convention puts the first name first; several Latin sources store
the surname first instead, so those are rotated. Prefixed compound names
("Abdel Rahman", "Abou El Hassan") are merged into single tokens and their
spelling variants unified onto one canonical form, because a compound left
as two tokens looks like two distinct names to the matcher.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .errors import EmptyName
from .normalize import NormalizedName, Script

logger = logging.getLogger(__name__)


class Convention(Enum):
    FIRST_NAME_FIRST = "first_name_first"
    LAST_NAME_FIRST = "last_name_first"


@dataclass(frozen=True)
class NameToken:
    surface: str
    canonical: str
    is_compound: bool = False


@dataclass(frozen=True)
class ParsedName:
    tokens: tuple[NameToken, ...]
    original: NormalizedName

    @property
    def script(self) -> Script:
        return self.original.script

    @property
    def surfaces(self) -> tuple[str, ...]:
        return tuple(t.surface for t in self.tokens)

    @property
    def canonical_tokens(self) -> tuple[str, ...]:
        return tuple(t.canonical for t in self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


class PrefixTable:
    """Compound-name prefixes/postfixes and their canonical spellings.

    Loaded from a tab-separated data file (`variant<TAB>canonical<TAB>kind`)
    so the list stays an open, user-editable one. Variants may span several
    words; matching is greedy-longest.
    """

    def __init__(self, entries: Iterable[tuple[str, str, str]]):
        prefixes: dict[tuple[str, ...], str] = {}
        postfixes: dict[tuple[str, ...], str] = {}
        for variant, canonical, kind in entries:
            words = tuple(variant.split())
            if not words:
                continue
            if kind == "prefix":
                prefixes[words] = canonical
            elif kind == "postfix":
                postfixes[words] = canonical
            else:
                raise ValueError(f"unknown prefix-table kind: {kind!r}")
        self._prefixes = prefixes
        self._postfixes = postfixes
        # Longest variants first so "abou el" wins over "abou".
        self._prefix_order = sorted(prefixes, key=len, reverse=True)
        self._postfix_order = sorted(postfixes, key=len, reverse=True)

    @property
    def prefixes(self) -> tuple[str, ...]:
        return tuple(" ".join(w) for w in sorted(self._prefixes))

    @property
    def postfixes(self) -> tuple[str, ...]:
        return tuple(" ".join(w) for w in sorted(self._postfixes))

    @property
    def canonical_map(self) -> Mapping[str, str]:
        out = {" ".join(k): v for k, v in self._prefixes.items()}
        out.update({" ".join(k): v for k, v in self._postfixes.items()})
        return out

    def match_prefix_at(self, words: tuple[str, ...], i: int) -> tuple[int, str] | None:
        """Longest prefix variant starting at index i; (word count, canonical)."""
        for variant in self._prefix_order:
            if words[i : i + len(variant)] == variant:
                return len(variant), self._prefixes[variant]
        return None

    def match_postfix_at(self, words: tuple[str, ...], i: int) -> tuple[int, str] | None:
        for variant in self._postfix_order:
            if words[i : i + len(variant)] == variant:
                return len(variant), self._postfixes[variant]
        return None

    @classmethod
    def from_file(cls, path: "Path | str") -> "PrefixTable":
        entries = []
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), 1
        ):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 tab-separated fields")
            entries.append((parts[0], parts[1], parts[2]))
        return cls(entries)

    @classmethod
    def default(cls) -> "PrefixTable":
        return _default_table()


_DEFAULT_TABLE: PrefixTable | None = None


def _default_table() -> PrefixTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        text = resources.files("namelink").joinpath("data/prefixes.tsv").read_text("utf-8")
        entries = []
        for line in text.splitlines():
            if not line or line.startswith("#"):
                continue
            variant, canonical, kind = line.split("\t")
            entries.append((variant, canonical, kind))
        _DEFAULT_TABLE = PrefixTable(entries)
    return _DEFAULT_TABLE


def split(name: NormalizedName) -> ParsedName:
    """Whitespace-split into plain tokens (no compound merging yet)."""
    words = name.text.split()
    if not words:
        raise EmptyName(f"no tokens in {name.text!r}")
    return ParsedName(
        tokens=tuple(NameToken(w, w) for w in words),
        original=name,
    )


def _surname_segment_len(surfaces: tuple[str, ...], table: PrefixTable) -> int:
    """Length of the leading surname segment: article/prefix run plus head."""
    i = 0
    while i < len(surfaces) - 1:
        m = table.match_prefix_at(surfaces, i)
        if m is None:
            break
        i += m[0]
    return min(i + 1, len(surfaces))


def reorder(
    parsed: ParsedName,
    convention: Convention,
    table: PrefixTable | None = None,
) -> ParsedName:
    """Rotate a surname-first name so the surname segment moves to the end.

    The segment includes article prefixes ("El-Baz, ..." rotates as "el baz").
    FIRST_NAME_FIRST input is returned unchanged.
    """
    if convention is Convention.FIRST_NAME_FIRST or len(parsed.tokens) < 2:
        return parsed
    table = table or PrefixTable.default()
    k = _surname_segment_len(parsed.surfaces, table)
    if k >= len(parsed.tokens):
        return parsed
    return replace(parsed, tokens=parsed.tokens[k:] + parsed.tokens[:k])


def merge_compounds(
    parsed: ParsedName,
    table: PrefixTable | None = None,
    merge_bare_articles: bool = True,
) -> ParsedName:
    """Merge prefix runs and postfixes into single compound tokens.

    A maximal run of prefix variants followed by a head token becomes one
    token whose canonical form unifies the prefix spelling; a head followed
    by a postfix variant is merged the same way. A name ending in a prefix
    with no head keeps the token as-is (with a warning).
    """
    table = table or PrefixTable.default()
    words = parsed.surfaces
    out: list[NameToken] = []
    i = 0
    while i < len(words):
        post = None if i + 1 >= len(words) else table.match_postfix_at(words, i + 1)
        if post is not None:
            count, canonical = post
            surface = " ".join(words[i : i + 1 + count])
            out.append(NameToken(surface, f"{words[i]} {canonical}", True))
            i += 1 + count
            continue

        run_words: list[str] = []
        run_canonicals: list[str] = []
        j = i
        while j < len(words):
            m = table.match_prefix_at(words, j)
            if m is None:
                break
            count, canonical = m
            if count == 1 and not merge_bare_articles and words[j] in ("al", "el", "ال"):
                break
            run_words.extend(words[j : j + count])
            run_canonicals.append(canonical)
            j += count
        if run_words:
            if j >= len(words):
                logger.warning(
                    "dangling prefix %r at end of %r", " ".join(run_words), parsed.original.text
                )
                out.extend(NameToken(w, w) for w in run_words)
                i = j
                continue
            surface = " ".join(run_words + [words[j]])
            canonical = " ".join(run_canonicals + [words[j]])
            out.append(NameToken(surface, canonical, True))
            i = j + 1
            continue

        out.append(NameToken(words[i], words[i]))
        i += 1

    return replace(parsed, tokens=tuple(out))


def parse_name(
    name: NormalizedName,
    convention: Convention = Convention.FIRST_NAME_FIRST,
    table: PrefixTable | None = None,
    merge_bare_articles: bool = True,
    honor_comma_hint: bool = True,
) -> ParsedName:
    """split -> reorder -> merge_compounds, with the comma hint applied.

    A comma in the raw text overrides the dataset convention: such rows are
    surname-first regardless of what the descriptor says.
    """
    table = table or PrefixTable.default()
    effective = convention
    if honor_comma_hint and name.comma_hint:
        effective = Convention.LAST_NAME_FIRST
    parsed = split(name)
    parsed = reorder(parsed, effective, table)
    return merge_compounds(parsed, table, merge_bare_articles)
