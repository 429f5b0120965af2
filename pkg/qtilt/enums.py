import enum


class Region(enum.Enum):
    RESTRICTED = 0
    BAND = 1
    PI = 2
    OUTSIDE = 3


class OutputFormats(enum.Enum):
    TEXT = 0
    JSON = 1


class ExitCodes(enum.Enum):
    OK = 0
    CHECK_FAILED = 1
    MALFORMED_INPUT = 2
    CONSERVATION_FAILURE = 3
    UNWRITABLE_CACHE = 4
