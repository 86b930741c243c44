"""Integers extended with symbolic infinities.

Finite values are plain Python ints (exact arithmetic); the symbolic
endpoints are the IEEE infinities, never large finite sentinels.
Comparisons are total out of the box; only addition needs care, since
(+inf) + (-inf) is undefined and must be rejected.
"""

from __future__ import annotations

from .errors import InputError

NEG_INF = float("-inf")
POS_INF = float("inf")

# Finite extended integers are ints; the only permitted floats are +/-inf.
ExtInt = int | float


def is_finite(v: ExtInt) -> bool:
    return isinstance(v, int)


def ext_add(a: ExtInt, b: ExtInt) -> ExtInt:
    """Saturating addition; raises on opposite infinities."""
    if isinstance(a, int) and isinstance(b, int):
        return a + b
    s = a + b
    if s != s:  # nan, i.e. (+inf) + (-inf)
        raise InputError("cannot add opposite infinities")
    return s


def ext_neg(v: ExtInt) -> ExtInt:
    return -v


def ext_clamp(v: ExtInt, lo: ExtInt, hi: ExtInt) -> ExtInt:
    """median(lo, v, hi); callers guarantee lo <= hi."""
    return max(lo, min(v, hi))


def as_ext(v: object) -> ExtInt:
    """Parse an extended integer from JSON-ish input.

    Accepts ints, the strings "-inf"/"+inf"/"inf", and integral floats
    (including IEEE infinities).
    """
    if isinstance(v, bool):
        raise InputError(f"not an extended integer: {v!r}")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if v == POS_INF:
            return POS_INF
        if v == NEG_INF:
            return NEG_INF
        if v.is_integer():
            return int(v)
        raise InputError(f"not an extended integer: {v!r}")
    if isinstance(v, str):
        s = v.strip().lower()
        if s in ("-inf", "-infinity"):
            return NEG_INF
        if s in ("inf", "+inf", "infinity", "+infinity"):
            return POS_INF
        try:
            return int(s)
        except ValueError:
            raise InputError(f"not an extended integer: {v!r}") from None
    raise InputError(f"not an extended integer: {v!r}")


def ext_to_json(v: ExtInt) -> int | str:
    if isinstance(v, int):
        return v
    return "+inf" if v > 0 else "-inf"
