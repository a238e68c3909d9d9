"""Exception hierarchy shared by every stage of the pipeline."""


class SeedScopeError(Exception):
    """Base class for all errors raised by seedscope."""


class DataError(SeedScopeError):
    """Input data is unusable (maps to CLI exit status 2)."""


class DegenerateHistogram(DataError):
    pass


class DegenerateRegion(DataError):
    pass


class EmptyRegion(DataError):
    pass


class NoValidPairs(DataError):
    pass


class SingleClassDataset(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class LengthMismatch(DataError):
    pass


class EmptyMatrix(DataError):
    pass


class UndefinedAuc(DataError):
    pass


class UnsupportedFormat(DataError):
    pass


class CorruptFile(DataError):
    pass


class MalformedArff(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MissingClassAttribute(MalformedArff):
    pass


class VersionUnsupported(DataError):
    pass


class DigestMismatch(DataError):
    pass


class FeatureSchemaMismatch(DataError):
    pass
