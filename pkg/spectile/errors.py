from __future__ import annotations


class SpectileError(ValueError):
    """Domain failure carrying a stable code string."""

    code = "SPECTILE_ERROR"

    def __init__(self, message: str | None = None):
        super().__init__(message or self.code)
        self.message = message or self.code


class DegenerateBody(SpectileError):
    code = "DEGENERATE_BODY"


class DimensionMismatch(SpectileError):
    code = "DIMENSION_MISMATCH"


class NonpositiveScale(SpectileError):
    code = "NONPOSITIVE_SCALE"


class UnsupportedDimension(SpectileError):
    code = "UNSUPPORTED_DIMENSION"


class GridTooCoarse(SpectileError):
    code = "GRID_TOO_COARSE"


class WindowTooLarge(SpectileError):
    code = "WINDOW_TOO_LARGE"


class InsufficientWindow(SpectileError):
    code = "INSUFFICIENT_WINDOW"


class SymmetricBody(SpectileError):
    code = "SYMMETRIC_BODY"


class ReportFormatError(SpectileError):
    code = "REPORT_FORMAT"


class InconsistentCertificate(SpectileError):
    code = "INCONSISTENT_CERTIFICATE"

    def __init__(self, field: str, message: str | None = None):
        super().__init__(message or f"certificate field {field!r} failed recomputation")
        self.field = field
