"""Sparse multivariate polynomials with rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .rational import as_fraction, format_rational, parse_rational


class VariableCountMismatch(ValueError):
    pass


class MPoly:
    """Polynomial in ``nvars`` variables stored as ``{exponent tuple: Fraction}``.

    Zero coefficients are never stored.  Instances are treated as immutable;
    arithmetic returns new objects.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise VariableCountMismatch(f"exponent {e} has length != {nvars}")
                c = as_fraction(c)
                if c:
                    clean[e] = clean.get(e, Fraction(0)) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    # constructors
    @classmethod
    def constant(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "MPoly":
        return cls(len(exps), {tuple(exps): c})

    @classmethod
    def linear(cls, coeffs: Sequence, const=0) -> "MPoly":
        """``const + sum_i coeffs[i] * x_i``."""
        n = len(coeffs)
        terms = {(0,) * n: const}
        for i, c in enumerate(coeffs):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = c
        return cls(n, terms)

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "MPoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    # queries
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def items(self):
        """Terms in lexicographic order of exponent tuples."""
        return sorted(self.terms.items())

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MPoly.constant(self.nvars, other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # arithmetic
    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.nvars != self.nvars:
                raise VariableCountMismatch(f"{self.nvars} vs {other.nvars} variables")
            return other
        return MPoly.constant(self.nvars, other)

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return MPoly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = as_fraction(other)
            if not c:
                return MPoly._raw(self.nvars, {})
            return MPoly._raw(self.nvars, {e: c * v for e, v in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MPoly._raw(self.nvars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "MPoly":
        result = MPoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, point: Sequence) -> Fraction:
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise VariableCountMismatch("point has the wrong dimension")
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def substitute(self, images: Sequence["MPoly"]) -> "MPoly":
        """Replace variable ``i`` by ``images[i]`` (all images share a variable count)."""
        if len(images) != self.nvars:
            raise VariableCountMismatch("need one image per variable")
        m = images[0].nvars if images else 0
        total = MPoly(m)
        for e, c in self.terms.items():
            t = MPoly.constant(m, c)
            for img, k in zip(images, e):
                if k:
                    t = t * img ** k
            total = total + t
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return f"MPoly({self.nvars}, 0)"
        parts = []
        for e, c in self.items():
            mon = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            parts.append(f"{c}" + (f"*{mon}" if mon else ""))
        return " + ".join(parts).replace("+ -", "- ")

    # text form: "e1,e2,...=a//b" joined by " ; "
    def to_text(self) -> str:
        return " ; ".join(
            ",".join(map(str, e)) + "=" + format_rational(c) for e, c in self.items())

    @classmethod
    def from_text(cls, nvars: int, text: str) -> "MPoly":
        terms = {}
        for tok in text.split(";"):
            tok = tok.strip()
            if not tok:
                continue
            exps, coef = tok.split("=")
            e = tuple(int(k) for k in exps.split(",")) if nvars else ()
            terms[e] = terms.get(e, 0) + parse_rational(coef)
        return cls(nvars, terms)


def poly_expand_weighted_sum(terms: Iterable[tuple[object, object]]) -> MPoly:
    """Expand ``sum coef_i * factor_i`` exactly.

    Entries may be MPoly or scalars; at least one entry must be an MPoly so
    that the variable count is known.
    """
    terms = list(terms)
    nvars = None
    for a, b in terms:
        for p in (a, b):
            if isinstance(p, MPoly):
                if nvars is None:
                    nvars = p.nvars
                elif p.nvars != nvars:
                    raise VariableCountMismatch(f"{p.nvars} vs {nvars} variables")
    if nvars is None:
        raise ValueError("cannot infer the variable count from scalars only")
    total: dict = {}
    for a, b in terms:
        prod = MPoly.constant(nvars, 1) * a * b if not isinstance(a, MPoly) else a * b
        for e, c in prod.terms.items():
            total[e] = total.get(e, 0) + c
    return MPoly._raw(nvars, {e: c for e, c in total.items() if c})


def monomial_basis(n: int, r: int) -> list[tuple[int, ...]]:
    """All exponent tuples of weight at most ``r`` in ``n`` variables, lexicographically sorted."""
    out = set()
    for deg in range(r + 1):
        for combo in combinations_with_replacement(range(n), deg):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.add(tuple(e))
    return sorted(out)


def weighted_squares(pairs: Iterable[tuple[object, MPoly]], nvars: int) -> MPoly:
    """Expand ``sum gamma * s^2``."""
    total = MPoly(nvars)
    for gamma, s in pairs:
        total = total + (s * s) * gamma
    return total
