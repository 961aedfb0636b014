"""Candidate generation and the match decision model.

The flow per source record: restrict the destination set with blocking
conditions, search the block with an ordered wildcard pattern whose slots
come from dictionary lookups, verify initial-letter hits through the
reverse dictionary, score survivors (weighted atomic token, atomic token,
edit distance), and classify into match / non-match / possible. Sources
with no verified candidate go through the iterative relax levels: drop one
middle token, then the last token, then fall back to first-name edit
distance inside the block.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .dictionary import Dictionary
from .errors import ExhaustedRelaxation, NoResolvableTokens, UnknownBlockField
from .normalize import RawName, Script
from .parse import ParsedName
from .similarity import (
    atomic_token_from_matrix,
    levenshtein,
    sim,
    weighted_atomic_token_detail,
)

logger = logging.getLogger(__name__)

RELAX_ORDERS = {
    "middle_first": (1, 2, 3),
    "last_name_first": (2, 1, 3),
}
MAX_RELAX_LEVEL = 3


@dataclass(frozen=True)
class DatasetRecord:
    id: str
    full_name: RawName
    block_fields: Mapping[str, str] = field(default_factory=dict)
    extra: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class PreparedRecord:
    """A dataset record together with its normalized, parsed name."""

    record: DatasetRecord
    parsed: ParsedName

    @property
    def id(self) -> str:
        return self.record.id


@dataclass(frozen=True)
class Thresholds:
    match_threshold: float = 0.85
    floor_threshold: float = 0.4
    max_edit_distance: int = 2


@dataclass(frozen=True)
class CandidatePair:
    source_id: str
    dest_id: str
    wat: float
    at: float
    edit_distance: int
    relax_level: int
    verified: bool = False
    alignment: tuple[tuple[str, "str | None", float], ...] = ()


class Outcome(Enum):
    MATCH = "match"
    NON_MATCH = "non_match"
    POSSIBLE = "possible"


@dataclass(frozen=True)
class MatchDecision:
    source_id: str
    outcome: Outcome
    candidates: tuple[CandidatePair, ...] = ()

    @property
    def multiplicity(self) -> int:
        return len(self.candidates)

    @property
    def dest_ids(self) -> tuple[str, ...]:
        return tuple(c.dest_id for c in self.candidates)


# ---------------------------------------------------------------------------
# Blocking


def _require_fields(record: DatasetRecord, conditions: Sequence[str], side: str) -> None:
    for cond in conditions:
        if cond not in record.block_fields:
            raise UnknownBlockField(f"{side} record {record.id!r} has no field {cond!r}")


class Blocker:
    """Equality-blocking index over the destination records."""

    def __init__(self, dests: Sequence[PreparedRecord], conditions: Sequence[str]):
        self.conditions = tuple(conditions)
        self._all = list(dests)
        self._index: dict[tuple[str, ...], list[PreparedRecord]] = {}
        for prep in dests:
            _require_fields(prep.record, self.conditions, "destination")
            key = tuple(prep.record.block_fields[c] for c in self.conditions)
            self._index.setdefault(key, []).append(prep)

    def bucket(self, source: DatasetRecord) -> list[PreparedRecord]:
        if not self.conditions:
            return self._all
        _require_fields(source, self.conditions, "source")
        key = tuple(source.block_fields[c] for c in self.conditions)
        return self._index.get(key, [])


def block(
    sources: Iterable[DatasetRecord],
    dests: Sequence[DatasetRecord],
    conditions: Sequence[str],
) -> Iterator[tuple[str, str]]:
    """Candidate id pairs that satisfy every blocking condition. Pairs that
    fail a condition are never emitted (assumed true negatives)."""
    index: dict[tuple[str, ...], list[str]] = {}
    for rec in dests:
        _require_fields(rec, conditions, "destination")
        key = tuple(rec.block_fields[c] for c in conditions)
        index.setdefault(key, []).append(rec.id)
    for rec in sources:
        _require_fields(rec, conditions, "source")
        key = tuple(rec.block_fields[c] for c in conditions)
        for dest_id in index.get(key, []):
            yield rec.id, dest_id


# ---------------------------------------------------------------------------
# Search patterns


@dataclass(frozen=True)
class PatternSlot:
    """One ordered pattern position: a set of acceptable destination tokens,
    or (for initials) a set of first letters matched by prefix."""

    alternatives: frozenset[str]
    prefix: bool = False

    def matches(self, token: str) -> bool:
        if self.prefix:
            return bool(token) and token[0] in self.alternatives
        return token in self.alternatives


@dataclass(frozen=True)
class SearchPattern:
    slots: tuple[PatternSlot, ...]
    relax_level: int = 0


def _token_alternatives(
    token: str, source_script: Script, dest_script: Script, dictionary: Dictionary
) -> PatternSlot:
    if len(token) == 1:
        if source_script is dest_script:
            return PatternSlot(frozenset([token]), prefix=True)
        if source_script is Script.LATIN:
            return PatternSlot(dictionary.code_table.arabic_letters_for(token), prefix=True)
        letters = dictionary.code_table.latin_letters_for(token)
        return PatternSlot(frozenset(l.lower() for l in letters), prefix=True)
    if source_script is dest_script:
        return PatternSlot(frozenset([token]))
    if source_script is Script.LATIN:
        return PatternSlot(dictionary.lookup_latin(token))
    return PatternSlot(dictionary.lookup_arabic(token))


def build_pattern(
    source: ParsedName,
    dictionary: Dictionary,
    dest_script: Script = Script.ARABIC,
    relax_level: int = 0,
) -> SearchPattern:
    """Ordered token-alternative sets for the source name. A token the
    dictionary cannot resolve yields an empty slot, which can never match
    and therefore forces relaxation; a fully unresolvable name raises."""
    slots = tuple(
        _token_alternatives(tok, source.script, dest_script, dictionary)
        for tok in source.canonical_tokens
    )
    if all(not slot.alternatives for slot in slots):
        raise NoResolvableTokens(f"no token of {source.original.text!r} resolves")
    return SearchPattern(slots=slots, relax_level=relax_level)


def match_alignment(pattern: SearchPattern, dest: ParsedName) -> "list[int] | None":
    """Greedy ordered-subsequence match; destination token indices per slot,
    or None. Greedy is exact here: taking the earliest feasible token never
    blocks a later slot."""
    tokens = dest.canonical_tokens
    out: list[int] = []
    j = 0
    for slot in pattern.slots:
        while j < len(tokens) and not slot.matches(tokens[j]):
            j += 1
        if j == len(tokens):
            return None
        out.append(j)
        j += 1
    return out


def match_pattern(pattern: SearchPattern, dest: ParsedName) -> bool:
    return match_alignment(pattern, dest) is not None


# ---------------------------------------------------------------------------
# Verification


def _initial_reverse_ok(letter: str, dest_token: str, dictionary: Dictionary) -> bool:
    translits = dictionary.lookup_arabic(dest_token)
    return not translits or any(t.startswith(letter) for t in translits)


def verify_reverse(
    source: ParsedName,
    dest: ParsedName,
    alignment: Sequence[int],
    dictionary: Dictionary,
) -> bool:
    """Reverse-dictionary check of initial-letter hits.

    An initial 'a' pattern reaches every destination token whose first
    letter can romanize to A; but if the matched token's own transliterations
    all start with some other letter, the hit is a false one and is dropped.
    Tokens without reverse entries cannot be disproved and are kept.
    """
    if source.script is not Script.LATIN or dest.script is not Script.ARABIC:
        return True
    for k, token in enumerate(source.canonical_tokens):
        if len(token) != 1:
            continue
        if not _initial_reverse_ok(token, dest.canonical_tokens[alignment[k]], dictionary):
            return False
    return True


def find_verified_alignment(
    pattern: SearchPattern,
    source: ParsedName,
    dest: ParsedName,
    dictionary: Dictionary,
) -> "list[int] | None":
    """Subsequence alignment that also passes reverse verification.

    Greedy matching is exact for plain subsequences, but an initial-letter
    slot can greedily take a destination token whose transliterations later
    fail the reverse check while a later token would pass; this search
    backtracks over those choices, so a destination is only rejected when
    no verifiable alignment exists at all.
    """
    tokens = dest.canonical_tokens
    src = source.canonical_tokens
    check_initials = source.script is Script.LATIN and dest.script is Script.ARABIC

    def acceptable(j: int, i: int) -> bool:
        slot = pattern.slots[j]
        if not slot.matches(tokens[i]):
            return False
        if check_initials and slot.prefix and len(src[j]) == 1:
            return _initial_reverse_ok(src[j], tokens[i], dictionary)
        return True

    def search(j: int, start: int) -> "list[int] | None":
        if j == len(pattern.slots):
            return []
        for i in range(start, len(tokens) - (len(pattern.slots) - j) + 1):
            if acceptable(j, i):
                rest = search(j + 1, i + 1)
                if rest is not None:
                    return [i, *rest]
        return None

    return search(0, 0)


# ---------------------------------------------------------------------------
# Scoring


def _alternatives_for_scoring(
    token: str, source_script: Script, dest_script: Script, dictionary: Dictionary
) -> tuple[str, ...]:
    if source_script is dest_script:
        return (token,)
    if len(token) == 1:
        if source_script is Script.LATIN:
            return tuple(sorted(dictionary.code_table.arabic_letters_for(token)))
        return tuple(l.lower() for l in dictionary.code_table.latin_letters_for(token))
    if source_script is Script.LATIN:
        return tuple(sorted(dictionary.lookup_latin(token)))
    return tuple(sorted(dictionary.lookup_arabic(token)))


def score_pair(
    source: ParsedName,
    dest: ParsedName,
    dictionary: Dictionary,
    relax_level: int,
    source_id: str = "",
    dest_id: str = "",
) -> CandidatePair:
    """Score a source/destination pair on the full names.

    Cross-script pairs are scored in the destination's script: each source
    token contributes the best similarity over its dictionary counterparts
    (initials over their letter expansions). Relaxed queries only find the
    pair; the score always reflects the complete names.
    """
    src_tokens = source.canonical_tokens
    dst_tokens = dest.canonical_tokens
    alt_lists = [
        _alternatives_for_scoring(tok, source.script, dest.script, dictionary)
        for tok in src_tokens
    ]
    matrix = np.array(
        [
            [max((sim(alt, d) for alt in alts), default=0.0) for d in dst_tokens]
            for alts in alt_lists
        ],
        dtype=float,
    )
    wat, detail = weighted_atomic_token_detail(matrix)
    at = atomic_token_from_matrix(matrix)
    paired = {k: (i, w) for k, i, w in detail}
    alignment = tuple(
        (
            src_tokens[k],
            dst_tokens[paired[k][0]] if k in paired and matrix[k, paired[k][0]] > 0 else None,
            float(matrix[k, paired[k][0]]) if k in paired else 0.0,
        )
        for k in range(len(src_tokens))
    )
    return CandidatePair(
        source_id=source_id,
        dest_id=dest_id,
        wat=wat,
        at=at,
        edit_distance=levenshtein(source.original.text, dest.original.text),
        relax_level=relax_level,
        verified=True,
        alignment=alignment,
    )


# ---------------------------------------------------------------------------
# Classification


def classify(
    source_id: str, candidates: Sequence[CandidatePair], thresholds: Thresholds
) -> MatchDecision:
    """Match / non-match / possible from verified scored candidates.

    Candidates under the floor threshold are discarded (unmatched); a single
    survivor above the match threshold is a match; anything else is a
    possible-match list ordered by score, ties broken by edit distance then
    destination id so reruns produce identical reports.
    """
    kept = sorted(
        (c for c in candidates if c.wat >= thresholds.floor_threshold),
        key=lambda c: (-c.wat, c.edit_distance, c.dest_id),
    )
    if not kept:
        return MatchDecision(source_id, Outcome.NON_MATCH)
    if len(kept) == 1 and kept[0].wat >= thresholds.match_threshold:
        return MatchDecision(source_id, Outcome.MATCH, (kept[0],))
    return MatchDecision(source_id, Outcome.POSSIBLE, tuple(kept))


# ---------------------------------------------------------------------------
# Relaxation


def relax_queries(source: ParsedName, level: int) -> list[ParsedName]:
    """Reduced queries for a relax level.

    Level 1 drops one middle token at a time (first and last kept); level 2
    drops the last token; level 3 is the edit-distance fallback and has no
    token queries. Levels past the last raise ExhaustedRelaxation.
    """
    if level == 0:
        return [source]
    n = len(source.tokens)
    if level == 1:
        return [
            replace(source, tokens=source.tokens[:m] + source.tokens[m + 1 :])
            for m in range(1, n - 1)
        ]
    if level == 2:
        return [replace(source, tokens=source.tokens[:-1])] if n >= 2 else []
    if level == 3:
        return []
    raise ExhaustedRelaxation(f"no relax level {level} (max {MAX_RELAX_LEVEL})")


def _levenshtein_fallback(
    source: ParsedName,
    bucket: Sequence[PreparedRecord],
    dictionary: Dictionary,
    thresholds: Thresholds,
) -> list[PreparedRecord]:
    """Final relax step: first names within the block at small edit distance.
    Cross-script sources compare through their dictionary counterparts."""
    first = source.canonical_tokens[0]
    hits = []
    for prep in bucket:
        dest_first = prep.parsed.canonical_tokens[0]
        if source.script is prep.parsed.script:
            forms: tuple[str, ...] = (first,)
        else:
            forms = _alternatives_for_scoring(
                first, source.script, prep.parsed.script, dictionary
            )
        if any(levenshtein(f, dest_first) <= thresholds.max_edit_distance for f in forms):
            hits.append(prep)
    return hits


# ---------------------------------------------------------------------------
# Orchestration


def match_one(
    source: PreparedRecord,
    bucket: Sequence[PreparedRecord],
    dictionary: Dictionary,
    thresholds: Thresholds,
    relax_order: str = "middle_first",
) -> MatchDecision:
    """Run the level ladder for one source record: stop at the first level
    that yields verified candidates, else non-match."""
    levels = (0,) + RELAX_ORDERS[relax_order]
    for level in levels:
        if level == 3:
            found = _levenshtein_fallback(source.parsed, bucket, dictionary, thresholds)
            candidates = [
                score_pair(source.parsed, prep.parsed, dictionary, level, source.id, prep.id)
                for prep in found
            ]
        else:
            candidates = []
            seen: set[str] = set()
            for query in relax_queries(source.parsed, level):
                try:
                    pattern = build_pattern(
                        query, dictionary, _bucket_script(bucket), level
                    )
                except NoResolvableTokens:
                    continue
                for prep in bucket:
                    if prep.id in seen:
                        continue
                    alignment = find_verified_alignment(
                        pattern, query, prep.parsed, dictionary
                    )
                    if alignment is None:
                        continue
                    seen.add(prep.id)
                    candidates.append(
                        score_pair(
                            source.parsed, prep.parsed, dictionary, level, source.id, prep.id
                        )
                    )
        if candidates:
            return classify(source.id, candidates, thresholds)
    return MatchDecision(source.id, Outcome.NON_MATCH)


def _bucket_script(bucket: Sequence[PreparedRecord]) -> Script:
    return bucket[0].parsed.script if bucket else Script.ARABIC


def match_datasets(
    sources: Sequence[PreparedRecord],
    dests: Sequence[PreparedRecord],
    dictionary: Dictionary,
    thresholds: Thresholds = Thresholds(),
    conditions: Sequence[str] = (),
    relax_order: str = "middle_first",
) -> list[MatchDecision]:
    """Match every source record against the blocked destination set.

    Records are processed independently (order does not affect any result)
    and decisions are reported sorted by source id.
    """
    if relax_order not in RELAX_ORDERS:
        raise ValueError(f"unknown relax order {relax_order!r}")
    blocker = Blocker(dests, conditions)
    decisions = [
        match_one(prep, blocker.bucket(prep.record), dictionary, thresholds, relax_order)
        for prep in sources
    ]
    return sorted(decisions, key=lambda d: d.source_id)
