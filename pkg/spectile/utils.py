from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from spectile.errors import ReportFormatError


def to_fraction(value: object) -> Fraction:
    """Exact rational from an int, Fraction, "p/q" string, decimal string or float.

    Floats go through their shortest repr so ``0.1`` means one tenth.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ReportFormatError(f"not a number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ReportFormatError(f"non-finite coordinate: {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        raw = value.strip()
        try:
            if "/" in raw:
                num, den = raw.split("/", 1)
                return Fraction(int(num), int(den))
            return Fraction(Decimal(raw))
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise ReportFormatError(f"not a rational: {value!r}") from exc
    raise ReportFormatError(f"not a rational: {value!r}")


def to_point(values: Iterable[object]) -> tuple[Fraction, ...]:
    return tuple(to_fraction(v) for v in values)


def format_rational(value: Fraction | int) -> str:
    q = Fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_point(point: Sequence[Fraction]) -> list[str]:
    return [format_rational(x) for x in point]


def parse_float_list(raw: str) -> list[float]:
    parts = [p.strip() for p in (raw or "").replace(";", ",").split(",") if p.strip()]
    try:
        return [float(to_fraction(p)) for p in parts]
    except ReportFormatError as exc:
        raise ReportFormatError(f"expected comma-separated numbers, got {raw!r}") from exc


def integer_root(value: Fraction, d: int) -> Fraction | None:
    """Exact d-th root of a nonnegative rational, or None when it is irrational."""
    if value < 0:
        return None

    def iroot(n: int) -> int | None:
        if n < 2:
            return n
        r = round(n ** (1.0 / d))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** d == n:
                return cand
        # float rounding can miss for huge n; fall back to bisection
        lo, hi = 0, 1 << (n.bit_length() // d + 1)
        while lo <= hi:
            mid = (lo + hi) // 2
            p = mid ** d
            if p == n:
                return mid
            if p < n:
                lo = mid + 1
            else:
                hi = mid - 1
        return None

    num = iroot(value.numerator)
    den = iroot(value.denominator)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def rational_root_upper(value: Fraction, d: int, *, steps: int = 48) -> Fraction:
    """Smallest dyadic u found by bisection on [0, 1] with u**d >= value.

    Returns 1 when ``value >= 1``.
    """
    exact = integer_root(value, d)
    if exact is not None and exact <= 1:
        return exact
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(steps):
        mid = (lo + hi) / 2
        if mid ** d >= value:
            hi = mid
        else:
            lo = mid
    return hi


def map_chunks(fn: Callable[[np.ndarray], np.ndarray], rows: np.ndarray, *, workers: int = 1, chunk: int = 2048) -> np.ndarray:
    """Apply ``fn`` to row chunks of ``rows`` (threads when workers > 1), concatenating results."""
    pieces = [rows[i:i + chunk] for i in range(0, len(rows), chunk)] or [rows]
    if workers <= 1 or len(pieces) == 1:
        return np.concatenate([fn(p) for p in pieces])
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return np.concatenate(list(pool.map(fn, pieces)))
