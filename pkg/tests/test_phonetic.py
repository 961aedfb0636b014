import random

import pytest

from namelink.errors import EmptyToken
from namelink.normalize import Script
from namelink.phonetic import (
    COMBINED_RE,
    SOUNDEX_RE,
    CodeTable,
    arabic_soundex,
    arabic_soundex_variants,
    combined_soundex,
    combined_soundex_variants,
    english_soundex,
    plain_soundex,
)

BAKIR_AR = "بكير"          # بكير
BELAL_AR = "بلال"          # بلال
BELTAGI_AR = "بلتاجي"  # بلتاجي
ALAA = "علاء"              # علاء
YOUSSEF_AR = "يوسف"        # يوسف
ABDEL_AZIZ_AR = "عبد العزيز"   # عبد العزيز
ABDEL_RAHMAN_AR = "عبد الرحمن"  # عبد الرحمن


class TestEnglishSoundex:
    @pytest.mark.parametrize(
        "name,code",
        [("bakir", "B260"), ("beltagi", "B432"), ("belal", "B440")],
    )
    def test_dictionary_table_goldens(self, name, code):
        assert english_soundex(name) == code

    def test_padding_only(self):
        assert english_soundex("b") == "B000"

    def test_vowel_separated_repeats_both_kept(self):
        # l-a-l is not adjacent in the original spelling, so both code.
        assert english_soundex("belal") == "B440"

    def test_adjacent_same_code_collapse(self):
        assert english_soundex("hassan") == "H250"

    def test_first_letter_pair_collapses(self):
        assert english_soundex("pfister") == "P236"

    def test_truncation(self):
        assert english_soundex("abdelaziz") == "A134"

    def test_empty_raises(self):
        with pytest.raises(EmptyToken):
            english_soundex("")


class TestArabicSoundex:
    @pytest.mark.parametrize(
        "name,code",
        [(BAKIR_AR, "B260"), (BELAL_AR, "B440"), (BELTAGI_AR, "B432")],
    )
    def test_dictionary_table_goldens(self, name, code):
        assert arabic_soundex(name) == code

    def test_primary_romanization(self):
        assert arabic_soundex(ALAA) == "A400"

    def test_first_letter_variants(self):
        assert arabic_soundex_variants(ALAA) == frozenset({"A400", "E400", "O400"})

    def test_youssef_variants(self):
        variants = arabic_soundex_variants(YOUSSEF_AR)
        assert {"Y210", "U210"} <= variants
        assert all(v.endswith("210") for v in variants)

    def test_single_romanization(self):
        assert arabic_soundex_variants(BAKIR_AR) == frozenset({"B260"})

    def test_unmapped_character_skipped(self, caplog):
        with caplog.at_level("WARNING"):
            code = arabic_soundex("بءل")  # hamza mid-token: skipped
        assert code == "B400"
        assert "no phonetic code" in caplog.text

    def test_empty_raises(self):
        with pytest.raises(EmptyToken):
            arabic_soundex("  ")


class TestCombined:
    def test_latin_compound_codes(self):
        assert combined_soundex("abdel aziz", Script.LATIN) == "A134A220"
        assert combined_soundex("abdel rahman", Script.LATIN) == "A134R550"

    def test_plain_code_collision(self):
        assert plain_soundex("abdel aziz", Script.LATIN) == "A134"
        assert plain_soundex("abdel rahman", Script.LATIN) == "A134"

    def test_combined_discriminates(self):
        a = combined_soundex("abdel aziz", Script.LATIN)
        b = combined_soundex("abdel rahman", Script.LATIN)
        assert a != b

    def test_simple_token_stays_4_chars(self):
        assert combined_soundex("mohamad", Script.LATIN) == "M530"

    def test_arabic_article_joins_prefix_segment(self):
        variants = combined_soundex_variants(ABDEL_AZIZ_AR, Script.ARABIC)
        assert "A134A220" in variants

    def test_cross_prefix_pairs_disjoint(self):
        aziz = combined_soundex_variants(ABDEL_AZIZ_AR, Script.ARABIC)
        assert combined_soundex("abdel rahman", Script.LATIN) not in aziz


class TestCodeTable:
    def test_table_groups_exact(self):
        table = CodeTable.default()
        groups = {"0": "aehiouwy", "1": "bpfv", "2": "cskgjqxz", "3": "dt", "4": "l", "5": "mn", "6": "r"}
        for digit, letters in groups.items():
            for ch in letters:
                assert table.latin[ch] == digit
        arabic_groups = {
            "0": "اآإأحعهوي",
            "1": "بف",
            "2": "خجزسشصغقك",
            "3": "تثدذضطظ",
            "4": "ل",
            "5": "من",
            "6": "ر",
        }
        for digit, letters in arabic_groups.items():
            for ch in letters:
                assert table.arabic[ch] == digit

    def test_romanization_requirements(self):
        table = CodeTable.default()
        assert set(table.latin_letters_for("ع")) == {"A", "E", "O"}
        assert set(table.latin_letters_for("ي")) == {"Y", "U", "I", "E"}
        for letter in table.arabic:
            assert table.latin_letters_for(letter), f"no romanization for {letter!r}"

    def test_inverse_romanization(self):
        table = CodeTable.default()
        assert "ع" in table.arabic_letters_for("a")
        assert "ا" in table.arabic_letters_for("a")
        assert "ا" in table.arabic_letters_for("e")

    def test_code_table_file_roundtrip(self, tmp_path):
        latin = tmp_path / "latin.tsv"
        arabic = tmp_path / "arabic.tsv"
        roman = tmp_path / "roman.tsv"
        latin.write_text("b\t1\na\t0\n", encoding="utf-8")
        arabic.write_text("ب\t1\n", encoding="utf-8")
        roman.write_text("ب\tB\n", encoding="utf-8")
        table = CodeTable.from_files(latin, arabic, roman)
        assert table.latin["b"] == "1"
        assert table.latin_letters_for("ب") == ("B",)


class TestCrossScriptJoin:
    def test_bank_pairs_joinable(self):
        # Every correct transliteration pair in the test bank must share a
        # phonetic code with the Arabic side (plain for simple tokens,
        # combined for compounds).
        from conftest import BANK

        for arabic, latin in BANK:
            if " " in arabic or " " in latin:
                variants = combined_soundex_variants(arabic, Script.ARABIC)
                assert combined_soundex(latin, Script.LATIN) in variants, (arabic, latin)
            else:
                variants = arabic_soundex_variants(arabic)
                assert english_soundex(latin) in variants, (arabic, latin)

    def test_expert_only_pairs_do_not_join(self):
        from conftest import EXPERT_ONLY

        for arabic, latin in EXPERT_ONLY:
            variants = combined_soundex_variants(arabic, Script.ARABIC)
            assert combined_soundex(latin, Script.LATIN) not in variants, (arabic, latin)


class TestFormatProperty:
    def test_random_tokens_match_pattern(self):
        rng = random.Random(7)
        latin_letters = "abcdefghijklmnopqrstuvwxyz"
        arabic_letters = [chr(c) for c in range(0x0621, 0x063B)] + [
            chr(c) for c in range(0x0641, 0x064B)
        ]
        for _ in range(500):
            token = "".join(rng.choices(latin_letters, k=rng.randint(1, 10)))
            assert SOUNDEX_RE.match(english_soundex(token))
            ar = "".join(rng.choices(arabic_letters, k=rng.randint(1, 10)))
            for code in arabic_soundex_variants(ar):
                assert SOUNDEX_RE.match(code)
            assert COMBINED_RE.match(combined_soundex(ar, Script.ARABIC))

    def test_determinism(self):
        assert english_soundex("bakir") == english_soundex("bakir")
        assert arabic_soundex(BAKIR_AR) == arabic_soundex(BAKIR_AR)
