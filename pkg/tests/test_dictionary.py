import random

from namelink.dictionary import (
    Dictionary,
    ExpertEdit,
    Provenance,
    build_combined_soundex_join,
    build_source_extracted,
    build_soundex_join,
)
from namelink.normalize import RawName, Script, normalize
from namelink.parse import parse_name

from conftest import BANK, EXPERT_ONLY

BAKIR_AR = "بكير"                                      # بكير
ALAA_NORM = "علا"                                           # علا (normalized علاء)
EMAN_AR = "ايمان"                                 # ايمان
AHMED_AR = "احمد"                                      # احمد
MOHAMED_AR = "محمد"                                    # محمد
ALI_AR = "علي"                                              # علي
ABDEL_RAHMAN_AR = "عبد الرحمن"  # عبد الرحمن
ABDEL_AZIZ_AR = "عبد العزيز"    # عبد العزيز


def pair(arabic: str, latin: str):
    return (
        parse_name(normalize(RawName(arabic, Script.ARABIC))),
        parse_name(normalize(RawName(latin, Script.LATIN, False))),
    )


class TestSourceExtracted:
    def test_positional_alignment(self):
        d = build_source_extracted([pair(MOHAMED_AR + " " + ALI_AR, "mohamed ali")])
        assert d.lookup_latin("mohamed") == {MOHAMED_AR}
        assert d.lookup_arabic(ALI_AR) == {"ali"}

    def test_compound_merge_then_align(self):
        d = build_source_extracted(
            [pair(ABDEL_RAHMAN_AR + " " + MOHAMED_AR, "abdel rahman mohamad")]
        )
        assert d.lookup_latin("abdel rahman") == {ABDEL_RAHMAN_AR}
        assert d.lookup_latin("mohamad") == {MOHAMED_AR}

    def test_unequal_counts_skipped(self, caplog):
        with caplog.at_level("WARNING"):
            d = build_source_extracted([pair(MOHAMED_AR, "mohamed ali")])
        assert len(d) == 0
        assert "token count mismatch" in caplog.text

    def test_planted_misalignments_pollute(self):
        # 1000 noisy entry pairs, 10% wrong on purpose: a source-extracted
        # build keeps them all, which is exactly its weakness.
        good = [(a, l) for a, l in BANK]
        pairs = []
        wrong = set()
        for i in range(1000):
            a, l = good[i % len(good)]
            if i % 10 == 0:
                _, other = good[(i + 3) % len(good)]
                wrong.add((a, other))
                pairs.append(pair(a, other))
            else:
                pairs.append(pair(a, l))
        d = build_source_extracted(pairs)
        for a, l in wrong:
            assert d.get(a, l) is not None


class TestSoundexJoin:
    def test_matching_codes_kept(self):
        d = build_soundex_join([pair(BAKIR_AR, "bakir")])
        assert d.get(BAKIR_AR, "bakir") is not None
        assert d.get(BAKIR_AR, "bakir").provenance is Provenance.SOUNDEX_JOIN

    def test_compound_collision_wrongly_kept(self):
        # The plain join cannot tell compound names apart: a mis-entry
        # pairing عبد العزيز with "abdel rahman" joins at A134 anyway.
        d = build_soundex_join([pair(ABDEL_AZIZ_AR, "abdel rahman")])
        assert d.get(ABDEL_AZIZ_AR, "abdel rahman") is not None

    def test_variant_first_letter_join(self):
        d = build_soundex_join([pair("علاء", "ola")])  # علاء
        assert d.lookup_latin("ola") == {ALAA_NORM}

    def test_non_matching_rejected(self):
        d = build_soundex_join([pair(MOHAMED_AR, "bakir")])
        assert len(d) == 0


class TestCombinedJoin:
    def test_compound_pair_kept(self):
        d = build_combined_soundex_join([pair(ABDEL_AZIZ_AR, "abdel aziz")])
        entry = d.get(ABDEL_AZIZ_AR, "abdel aziz")
        assert entry is not None
        assert entry.latin_code == "A134A220"

    def test_compound_collision_rejected(self):
        d = build_combined_soundex_join([pair(ABDEL_AZIZ_AR, "abdel rahman")])
        assert len(d) == 0

    def test_simple_token_kept(self):
        d = build_combined_soundex_join([pair(MOHAMED_AR, "mohamed")])
        assert d.get(MOHAMED_AR, "mohamed").latin_code == "M530"

    def test_agrees_with_plain_join_on_simple_tokens(self):
        simple = [(a, l) for a, l in BANK if " " not in a and " " not in l]
        pairs = [pair(a, l) for a, l in simple]
        plain = {e.key() for e in build_soundex_join(pairs).entries()}
        combined = {e.key() for e in build_combined_soundex_join(pairs).entries()}
        assert plain == combined


class TestExpertEdits:
    def test_add(self):
        d = Dictionary().with_edits([ExpertEdit("add", ALAA_NORM, "ola")])
        entry = d.get(ALAA_NORM, "ola")
        assert entry.verified and entry.provenance is Provenance.EXPERT_VERIFIED

    def test_verify_existing(self):
        d = build_soundex_join([pair(BAKIR_AR, "bakir")])
        d2 = d.with_edits([ExpertEdit("verify", BAKIR_AR, "bakir")])
        assert d2.get(BAKIR_AR, "bakir").verified
        assert not d.get(BAKIR_AR, "bakir").verified  # original untouched

    def test_remove_planted_false_pair(self):
        d = build_soundex_join([pair(ABDEL_AZIZ_AR, "abdel rahman")])
        d2 = d.with_edits([ExpertEdit("remove", ABDEL_AZIZ_AR, "abdel rahman")])
        assert len(d2) == 0

    def test_remove_missing_warns(self, caplog):
        with caplog.at_level("WARNING"):
            Dictionary().with_edits([ExpertEdit("remove", "x", "y")])
        assert "remove of missing entry" in caplog.text


class TestLookup:
    def test_initial_letter_lookup(self, bank_dictionary):
        hits = bank_dictionary.lookup_latin("a")
        assert AHMED_AR in hits
        assert EMAN_AR in hits  # pruned later by reverse verification

    def test_unknown_token_empty(self, bank_dictionary):
        assert bank_dictionary.lookup_latin("zzz-unknown") == frozenset()

    def test_reverse_lookup(self, bank_dictionary):
        assert "eman" in bank_dictionary.lookup_arabic(EMAN_AR)


class TestPersistence:
    def test_roundtrip_bit_identical(self, tmp_path, bank_dictionary):
        p1 = tmp_path / "d1.tsv"
        p2 = tmp_path / "d2.tsv"
        bank_dictionary.save(p1)
        Dictionary.load(p1).save(p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_sorted_output(self, tmp_path, bank_dictionary):
        path = tmp_path / "d.tsv"
        bank_dictionary.save(path)
        lines = path.read_text(encoding="utf-8").splitlines()
        keys = [tuple(line.split("\t")[:2]) for line in lines]
        assert keys == sorted(keys)


class TestIndexConsistency:
    def test_random_edit_sequences(self, bank_dictionary):
        rng = random.Random(31)
        vocab = [(a, l) for a, l in BANK + EXPERT_ONLY]
        d = bank_dictionary
        for _ in range(200):
            a, l = rng.choice(vocab)
            action = rng.choice(["add", "remove", "verify"])
            d = d.with_edits([ExpertEdit(action, a, l)])
            # indexes must stay exact projections of the entry set
            entries = d.entries()
            by_latin: dict[str, set[str]] = {}
            by_arabic: dict[str, set[str]] = {}
            for e in entries:
                by_latin.setdefault(e.latin, set()).add(e.arabic)
                by_arabic.setdefault(e.arabic, set()).add(e.latin)
            for latin, arabics in by_latin.items():
                if len(latin) > 1:
                    assert d.lookup_latin(latin) == arabics
            for arabic, latins in by_arabic.items():
                assert d.lookup_arabic(arabic) == latins
            missing = [l for l in by_latin if len(l) > 1 and not d.lookup_latin(l)]
            assert not missing
