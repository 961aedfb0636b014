"""Cross-script (Arabic/Latin) personal-name record linkage toolkit."""

from .normalize import (
    ArabicFoldOptions,
    NormalizedName,
    RawName,
    Script,
    detect_script,
    normalize,
    normalize_arabic,
    normalize_latin,
)
from .parse import (
    Convention,
    NameToken,
    ParsedName,
    PrefixTable,
    merge_compounds,
    parse_name,
    reorder,
    split,
)
from .phonetic import (
    CodeTable,
    arabic_soundex,
    arabic_soundex_variants,
    combined_soundex,
    combined_soundex_variants,
    english_soundex,
    plain_soundex,
)
from .similarity import atomic_token, levenshtein, sim, weighted_atomic_token
from .dictionary import (
    Dictionary,
    DictionaryEntry,
    ExpertEdit,
    Provenance,
    build_combined_soundex_join,
    build_soundex_join,
    build_source_extracted,
)
from .engine import (
    Blocker,
    CandidatePair,
    DatasetRecord,
    MatchDecision,
    Outcome,
    PreparedRecord,
    SearchPattern,
    Thresholds,
    block,
    build_pattern,
    classify,
    find_verified_alignment,
    match_datasets,
    match_one,
    match_pattern,
    relax_queries,
    verify_reverse,
)
from .metrics import (
    ExtendedConfusionMatrix,
    MetricsReport,
    build_matrix,
    classic_metrics,
    effectiveness,
    emfi,
    emfn,
    emfp,
    emttp,
    etpap,
    evaluate,
    otpa,
    proposed_metrics,
)

__version__ = "0.1.0"
