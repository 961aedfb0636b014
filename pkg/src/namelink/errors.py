"""Exception types shared across the toolkit."""


class NamelinkError(Exception):
    """Base class for all toolkit errors."""


class NonLatinContent(NamelinkError):
    """Latin normalization input contains characters outside the Latin repertoire."""


class NonArabicContent(NamelinkError):
    """Arabic normalization input contains Latin letters."""


class EmptyName(NamelinkError):
    """A name has no tokens left after normalization."""


class EmptyToken(NamelinkError):
    """Phonetic coding was asked to encode an empty token."""


class UnknownBlockField(NamelinkError):
    """A blocking condition references a field absent from a dataset."""


class NoResolvableTokens(NamelinkError):
    """No token of a source name could be resolved through the dictionary."""


class ExhaustedRelaxation(NamelinkError):
    """All relax levels were tried without producing a candidate."""


class KeyMismatch(NamelinkError):
    """Machine results and expert labels are keyed by different source ids."""


class EmptyMatrix(NamelinkError):
    """A metric was requested on a confusion matrix with no counts."""


class ZeroDenominator(NamelinkError):
    """A metric denominator evaluated to zero."""


class ConfigError(NamelinkError):
    """Pipeline configuration is missing or invalid."""


class DictionaryMissing(ConfigError):
    """The configured dictionary file does not exist."""


class DataError(NamelinkError):
    """Input data could not be read."""


class MissingColumn(DataError):
    """A configured column is absent from an input file header."""


class EncodingError(DataError):
    """An input file is not valid UTF-8."""
