"""Rational scalars: text form, bounded-denominator rounding and square-root bounds.

Scalars are :class:`fractions.Fraction`, which keeps every value in lowest
terms with a positive denominator.  The text form is ``a//b`` with the
denominator always printed (``1//1``).
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Any, Callable, Iterable

__all__ = [
    "Fraction",
    "as_fraction",
    "format_rational",
    "parse_rational",
    "format_vector",
    "parse_vector",
    "bounded_bracket",
    "sqrt_upper",
    "sqrt_lower",
    "round_to_rational",
]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("refusing to convert a float to an exact rational implicitly")
    return Fraction(x)


def format_rational(x) -> str:
    x = as_fraction(x)
    return f"{x.numerator}//{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``a//b``, ``a/b`` or an integer.  Decimals are rejected."""
    s = text.strip()
    if "//" in s:
        num, den = s.split("//")
    elif "/" in s:
        num, den = s.split("/")
    else:
        num, den = s, "1"
    try:
        n, d = int(num), int(den)
    except ValueError:
        raise ValueError(f"not a rational literal: {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(n, d)


def format_vector(v: Iterable, sep: str = ";") -> str:
    return sep.join(format_rational(x) for x in v)


def parse_vector(line: str, sep: str = ";") -> tuple[Fraction, ...]:
    return tuple(parse_rational(tok) for tok in line.strip().split(sep) if tok.strip())


def bounded_bracket(cmp: Callable[[int, int], int], max_den: int) -> tuple[Fraction, Fraction]:
    """Tightest bracket ``lo <= t <= hi`` with denominators at most ``max_den``.

    ``t`` is a positive real known only through ``cmp(p, q)``, the sign of
    ``p/q - t``.  The walk follows the Stern-Brocot tree, taking whole runs
    of equal turns at once (the continued-fraction expansion of ``t``).  If
    ``t`` itself has denominator ``<= max_den`` both ends equal ``t``.
    """
    lp, lq = 0, 1  # left end, 0/1
    rp, rq = 1, 0  # right end, "infinity"
    while True:
        mp, mq = lp + rp, lq + rq
        if mq > max_den:
            break
        s = cmp(mp, mq)
        if s == 0:
            return Fraction(mp, mq), Fraction(mp, mq)
        if s < 0:
            # mediant below t: advance the left end by as many right-steps as stay below t
            k = _max_steps(lambda j: cmp(lp + j * rp, lq + j * rq) < 0
                           and lq + j * rq <= max_den)
            lp, lq = lp + k * rp, lq + k * rq
        else:
            k = _max_steps(lambda j: cmp(rp + j * lp, rq + j * lq) > 0
                           and rq + j * lq <= max_den)
            rp, rq = rp + k * lp, rq + k * lq
    hi = Fraction(rp, rq) if rq else None
    return Fraction(lp, lq), hi


def _max_steps(ok: Callable[[int], bool]) -> int:
    # largest j >= 1 with ok(j); ok(1) holds and ok is monotone
    lo, hi = 1, 2
    while ok(hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _sqrt_cmp(x: Fraction) -> Callable[[int, int], int]:
    a, b = x.numerator, x.denominator

    def cmp(p: int, q: int) -> int:
        # sign of p/q - sqrt(a/b) for p, q >= 0
        lhs, rhs = p * p * b, a * q * q
        return (lhs > rhs) - (lhs < rhs)

    return cmp


def sqrt_upper(x, max_den: int = 10**6) -> Fraction:
    """Smallest rational ``>= sqrt(x)`` with denominator at most ``max_den``."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0)
    lo, hi = bounded_bracket(_sqrt_cmp(x), max_den)
    if hi is None:  # sqrt(x) larger than anything with the allowed denominators
        return Fraction(isqrt(x.numerator // x.denominator) + 1)
    return hi


def sqrt_lower(x, max_den: int = 10**6) -> Fraction:
    """Largest rational ``<= sqrt(x)`` with denominator at most ``max_den``."""
    x = as_fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0)
    lo, _ = bounded_bracket(_sqrt_cmp(x), max_den)
    return lo


def round_to_rational(values: Any, max_denominator: int) -> Any:
    """Round floating data entrywise to the best rational approximation.

    Works on scalars, (nested) lists and tuples, dicts (values only) and numpy
    arrays, returning the same nesting with Fractions in place of floats.
    """
    if max_denominator < 1:
        raise ValueError("max_denominator must be >= 1")
    if isinstance(values, dict):
        return {k: round_to_rational(v, max_denominator) for k, v in values.items()}
    if hasattr(values, "tolist") and not isinstance(values, (int, float, Fraction)):
        values = values.tolist()
    if isinstance(values, (list, tuple)):
        out = [round_to_rational(v, max_denominator) for v in values]
        return tuple(out) if isinstance(values, tuple) else out
    return Fraction(values).limit_denominator(max_denominator)
