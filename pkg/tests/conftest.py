"""Shared fixtures: a verified Arabic/Latin name bank and the desk-scale
dataset generator used by the pipeline and acceptance tests.

Bank pairs are correct transliterations whose phonetic codes join (a
sanity test asserts this), so dictionaries built from them are usable by
every strategy. The two EXPERT_ONLY pairs deliberately fail the join and
exercise the expert-edit path.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

import pytest

from namelink.dictionary import Dictionary, ExpertEdit
from namelink.engine import DatasetRecord, PreparedRecord
from namelink.normalize import RawName, normalize
from namelink.parse import Convention, parse_name

# (arabic normalized, latin) -- first-name pool
BANK_FIRST = [
    ("محمد", "mohamed"),          # محمد
    ("احمد", "ahmed"),            # احمد
    ("محمود", "mahmoud"),    # محمود
    ("مصطفي", "mostafa"),    # مصطفي
    ("ابراهيم", "ibrahim"),  # ابراهيم
    ("خالد", "khaled"),           # خالد
    ("عمر", "omar"),                   # عمر
    ("يوسف", "youssef"),          # يوسف
    ("طارق", "tarek"),            # طارق
    ("كريم", "karim"),            # كريم
    ("سامي", "samy"),             # سامي
    ("حامد", "hamed"),            # حامد
]

BANK_MIDDLE = [
    ("علي", "ali"),                    # علي
    ("حسن", "hassan"),                 # حسن
    ("حسين", "hussein"),          # حسين
    ("سعيد", "said"),             # سعيد
    ("فاروق", "farouk"),     # فاروق
    ("شريف", "sherif"),           # شريف
    ("جمال", "gamal"),            # جمال
    ("صلاح", "salah"),            # صلاح
    ("عادل", "adel"),             # عادل
    ("نبيل", "nabil"),            # نبيل
    ("فوزي", "fawzy"),            # فوزي
    ("عنتر", "antar"),            # عنتر
    ("عبد العزيز", "abdel aziz"),    # عبد العزيز
    ("عبد الفتاح", "abdel fattah"),  # عبد الفتاح
    ("عبد الحميد", "abdel hamid"),   # عبد الحميد
]

BANK_LAST = [
    ("سلامه", "salama"),     # سلامه
    ("قاسم", "kasem"),            # قاسم
    ("بكير", "bakir"),            # بكير
    ("بلال", "belal"),            # بلال
    ("بلتاجي", "beltagi"),  # بلتاجي
    ("سيد", "sayed"),                  # سيد
    ("رمضان", "ramadan"),    # رمضان
]

# The Eman pair joins phonetically and powers the reverse-verification traps.
EMAN = ("ايمان", "eman")     # ايمان

BANK = BANK_FIRST + BANK_MIDDLE + BANK_LAST + [EMAN]

# Correct pairs the automatic joins cannot find: Arabic spelling omits the
# short vowels, so رحمن and منير collapse adjacent same-group consonants the
# Latin spellings keep apart, and "abdallah" is one word against a two-word
# compound. These enter dictionaries through expert edits only.
EXPERT_ONLY = [
    ("عبد الرحمن", "abdel rahman"),  # عبد الرحمن
    ("عبد الله", "abdallah"),                  # عبد الله
    ("منير", "mounir"),                                       # منير
]

# Unnormalized spellings used in generated CSVs to exercise normalization.
RAW_VARIANTS = {
    "احمد": "أحمد",              # أحمد
    "سلامه": "سلامة",  # سلامة
    "ابراهيم": "إبراهيم",  # إبراهيم
}

GOVERNORATES = ["cairo", "giza", "alexandria"]

ARABIC_TO_LATIN = {a: l for a, l in BANK + EXPERT_ONLY}


def prep(
    rec_id: str,
    text: str,
    block: "dict[str, str] | None" = None,
    convention: Convention = Convention.FIRST_NAME_FIRST,
) -> PreparedRecord:
    raw = RawName.of(text)
    parsed = parse_name(normalize(raw), convention=convention)
    return PreparedRecord(DatasetRecord(rec_id, raw, block or {}), parsed)


@pytest.fixture(scope="session")
def bank_dictionary() -> Dictionary:
    """Expert-style dictionary covering the whole bank (known-good)."""
    edits = [ExpertEdit("add", a, l) for a, l in BANK + EXPERT_ONLY]
    return Dictionary().with_edits(edits)


def generate_fixture(root: Path, seed: int = 20240601) -> dict:
    """Write the desk-scale datasets: 200 Arabic destination records, 50
    transliterated queries with planted ground truth (10 cases where the
    destination lacks a middle name, 5 initial-letter cases of which 3 have
    an Eman-style trap twin), plus the dictionary pair list.

    Returns paths plus the ground-truth and trap id sets.
    """
    rng = random.Random(seed)
    persons = []
    used = set()
    while len(persons) < 50:
        first = rng.choice(BANK_FIRST)
        middles = rng.sample(BANK_MIDDLE, 2)
        last = rng.choice(BANK_LAST)
        key = (first[0], middles[0][0], middles[1][0], last[0])
        if key in used:
            continue
        used.add(key)
        persons.append([first, middles[0], middles[1], last])

    # Trap cases need a Latin first name starting with "a" that is not Eman.
    for idx in range(45, 48):
        persons[idx][0] = ("احمد", "ahmed")

    dest_rows = []
    src_rows = []
    truth: dict[str, str] = {}
    traps: list[str] = []

    def raw_arabic(tokens: list[tuple[str, str]], drop: "int | None" = None) -> str:
        words = []
        for i, (ar, _) in enumerate(tokens):
            if i == drop:
                continue
            words.append(RAW_VARIANTS.get(ar, ar) if rng.random() < 0.4 else ar)
        return " ".join(words)

    for idx, tokens in enumerate(persons):
        sid, did = f"S{idx:03d}", f"D{idx:03d}"
        gov = rng.choice(GOVERNORATES)
        latin = " ".join(l.title() for _, l in tokens)
        if 35 <= idx < 45:
            # Destination lacks one middle name the query still carries.
            dest_rows.append((did, raw_arabic(tokens, drop=rng.choice([1, 2])), gov))
        else:
            dest_rows.append((did, raw_arabic(tokens), gov))
        if 45 <= idx < 50:
            # Query abbreviates the first name to an initial.
            latin = tokens[0][1][0].upper() + ". " + " ".join(l.title() for _, l in tokens[1:])
        src_rows.append((sid, latin, gov))
        truth[sid] = did
        if 45 <= idx < 48:
            tid = f"T{idx:03d}"
            trap_tokens = [EMAN] + tokens[1:]
            dest_rows.append((tid, raw_arabic(trap_tokens), gov))
            traps.append(tid)

    filler_id = 0
    while len(dest_rows) < 200:
        first = rng.choice(BANK_FIRST)
        middle = rng.choice(BANK_MIDDLE)
        last = rng.choice(BANK_LAST)
        dest_rows.append(
            (f"F{filler_id:03d}", raw_arabic([first, middle, last]), rng.choice(GOVERNORATES))
        )
        filler_id += 1

    dest_path = root / "destinations.csv"
    with dest_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["UnID", "FULL_NAME_AR", "governorate"])
        writer.writerows(dest_rows)

    src_path = root / "sources.csv"
    with src_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["UnID", "Author", "governorate"])
        writer.writerows(src_rows)

    pairs_path = root / "pairs.csv"
    with pairs_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["arabic", "latin"])
        writer.writerows(BANK)

    edits_path = root / "edits.tsv"
    edits_path.write_text(
        "".join(f"add\t{a}\t{l}\n" for a, l in EXPERT_ONLY), encoding="utf-8"
    )

    labels_path = root / "labels.csv"
    with labels_path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["source_id", "dest_ids"])
        for sid in sorted(truth):
            writer.writerow([sid, truth[sid]])

    return {
        "dest_path": dest_path,
        "src_path": src_path,
        "pairs_path": pairs_path,
        "edits_path": edits_path,
        "labels_path": labels_path,
        "truth": truth,
        "traps": traps,
    }


@pytest.fixture()
def desk_fixture(tmp_path: Path) -> dict:
    return generate_fixture(tmp_path)
