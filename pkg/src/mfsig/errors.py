"""Exception types raised by mfsig."""


class MFSError(ValueError):
    """Base class for all mfsig errors."""


# image input
class PGMError(MFSError):
    pass


class MissingFile(PGMError, FileNotFoundError):
    pass


class BadMagic(PGMError):
    pass


class MaxvalUnsupported(PGMError):
    pass


class TruncatedData(PGMError):
    pass


class MalformedHeader(PGMError):
    pass


class ImageTooSmall(MFSError):
    pass


# curves
class InvalidDeltaMax(MFSError):
    pass


class CurveTooShort(MFSError):
    pass


class NonPositiveArea(MFSError):
    pass


class CurveLengthMismatch(MFSError):
    pass


class VariantMismatch(MFSError):
    pass


# classifier
class EmptyClass(MFSError):
    pass


class TileSizeMismatch(MFSError):
    pass


class DuplicateLabel(MFSError):
    pass


class UnknownTestLabel(MFSError):
    pass


class ModelFormatError(MFSError):
    pass


# synthetic generators
class LevelOutOfRange(MFSError):
    pass


class BadLevels(MFSError):
    pass


class BadPeriod(MFSError):
    pass


class BadSize(MFSError):
    pass


class BadHurst(MFSError):
    pass
