"""Exception hierarchy shared by all modules."""


class ChaostegoError(Exception):
    pass


class KeyValidationError(ChaostegoError, ValueError):
    pass


class OutOfRange(KeyValidationError):
    def __init__(self, param, value=None):
        self.param = param
        self.value = value
        super().__init__(f"key parameter {param!r} out of range: {value!r}")


class DegenerateOrbit(KeyValidationError):
    def __init__(self, sequence, reason="constant"):
        self.sequence = sequence
        super().__init__(f"{sequence}-sequence is degenerate ({reason})")


class KeyFormatError(KeyValidationError):
    """Malformed key or manifest text."""


class ImageFormatError(ChaostegoError):
    pass


class UnsupportedFormat(ImageFormatError):
    pass


class UnsupportedDepth(ImageFormatError):
    pass


class DecodeError(ImageFormatError):
    pass


class ImageIOError(ChaostegoError, OSError):
    pass


class LengthMismatch(ChaostegoError, ValueError):
    pass


class PermLengthMismatch(LengthMismatch):
    pass


class DimensionMismatch(ChaostegoError, ValueError):
    pass


class ChannelMismatch(ChaostegoError, ValueError):
    pass


class ZeroVariance(ChaostegoError, ValueError):
    pass


class CapacityExceeded(ChaostegoError):
    def __init__(self, needed, available):
        self.needed = needed
        self.available = available
        super().__init__(f"payload needs {needed} bits but cover holds {available}")
