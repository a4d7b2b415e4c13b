"""Exact arithmetic: a prime field, dual numbers over any ring, matrix rank
over the field, and the division-free (Berkowitz) characteristic polynomial.
"""

from __future__ import annotations

from typing import Any, Sequence

import numpy as np

DEFAULT_PRIME = (1 << 61) - 1


class FieldElement:
    """Residue modulo a prime ``p``. Mixes with plain ``int`` operands."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    @classmethod
    def _raw(cls, value: int, p: int) -> "FieldElement":
        obj = object.__new__(cls)
        obj.value = value
        obj.p = p
        return obj

    def _coerce(self, other) -> int | None:
        if type(other) is FieldElement:
            if other.p != self.p:
                raise ValueError(f"mixing fields GF({self.p}) and GF({other.p})")
            return other.value
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw((self.value + o) % self.p, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw((self.value - o) % self.p, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw((o - self.value) % self.p, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldElement._raw(self.value * o % self.p, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement._raw(-self.value % self.p, self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElement._raw(pow(self.value, -1, self.p), self.p)

    def __eq__(self, other):
        if type(other) is FieldElement:
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, p={self.p})"


class DualNumber:
    """``re + eps*ε`` with ``ε² = 0`` over any commutative ring.

    Operands that are not :class:`DualNumber` are treated as having zero
    ε-part, so a matrix may hold a single dual entry among plain ones.
    """

    __slots__ = ("re", "eps")

    def __init__(self, re, eps):
        self.re = re
        self.eps = eps

    def __add__(self, other):
        if type(other) is DualNumber:
            return DualNumber(self.re + other.re, self.eps + other.eps)
        return DualNumber(self.re + other, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is DualNumber:
            return DualNumber(self.re - other.re, self.eps - other.eps)
        return DualNumber(self.re - other, self.eps)

    def __rsub__(self, other):
        return DualNumber(other - self.re, -self.eps)

    def __mul__(self, other):
        if type(other) is DualNumber:
            return DualNumber(self.re * other.re, self.re * other.eps + self.eps * other.re)
        return DualNumber(self.re * other, self.eps * other)

    __rmul__ = __mul__

    def __neg__(self):
        return DualNumber(-self.re, -self.eps)

    def __eq__(self, other):
        if type(other) is DualNumber:
            return self.re == other.re and self.eps == other.eps
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"DualNumber({self.re!r}, {self.eps!r})"


def real_part(x):
    return x.re if type(x) is DualNumber else x


def eps_part(x, zero=0):
    return x.eps if type(x) is DualNumber else zero


def char_poly_coeffs(a: Sequence[Sequence[Any]]) -> list:
    """Coefficients ``(c1, ..., ck)`` of ``det(λI - A) = λ^k + c1 λ^(k-1) + ... + ck``.

    Berkowitz's algorithm: only ring operations, so it runs unchanged over
    field elements, dual numbers, fractions or symbolic expressions.
    """
    k = len(a)
    if any(len(row) != k for row in a):
        raise ValueError("char_poly_coeffs needs a square matrix")
    if k == 0:
        return []
    zero = a[0][0] - a[0][0]
    one = zero + 1
    # coefficient vector of the leading r x r principal block, highest degree first
    poly = [one, -a[0][0]]
    for r in range(1, k):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        # Toeplitz column: 1, -a_rr, -R C, -R M C, ..., -R M^(r-1) C
        toeplitz = [one, -a[r][r]]
        v = col
        for j in range(r):
            s = zero
            for x, y in zip(row, v):
                s = s + x * y
            toeplitz.append(-s)
            if j < r - 1:
                nv = []
                for i in range(r):
                    s = zero
                    ai = a[i]
                    for l in range(r):
                        s = s + ai[l] * v[l]
                    nv.append(s)
                v = nv
        grown = []
        for i in range(r + 2):
            s = zero
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                s = s + toeplitz[i - j] * poly[j]
            grown.append(s)
        poly = grown
    return poly[1:]


def _modulus(matrix, p: int | None) -> int:
    if p is not None:
        return p
    for row in matrix:
        for x in row:
            if type(x) is FieldElement:
                return x.p
    return DEFAULT_PRIME


def _residues(matrix, p: int) -> list[list[int]]:
    out = []
    for row in matrix:
        out.append([x.value if type(x) is FieldElement else int(x) % p for x in row])
    return out


def _row_echelon(rows: list[list[int]], p: int, reduced: bool = True) -> tuple[list[list[int]], list[int]]:
    """Row echelon form mod ``p``; returns (pivot rows, pivot columns)."""
    rows = [r[:] for r in rows if any(r)]
    cols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    done: list[list[int]] = []
    for c in range(cols):
        pivot = next((r for r in rows if r[c]), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        inv = pow(pivot[c], -1, p)
        pivot = [x * inv % p for x in pivot]
        rows = [
            [(x - f * y) % p for x, y in zip(r, pivot)] if (f := r[c]) else r
            for r in rows
        ]
        rows = [r for r in rows if any(r)]
        if reduced:
            for i, r in enumerate(done):
                if f := r[c]:
                    done[i] = [(x - f * y) % p for x, y in zip(r, pivot)]
        done.append(pivot)
        pivots.append(c)
        if not rows:
            break
    return done, pivots


def rank(matrix, p: int | None = None) -> int:
    """Exact rank over GF(p) by pivoted Gaussian elimination.

    Entries may be :class:`FieldElement` or integers (reduced mod ``p``);
    ``p`` defaults to the modulus of the entries.
    """
    p = _modulus(matrix, p)
    rows = _residues(matrix, p)
    if not rows or not rows[0]:
        return 0
    return len(_row_echelon(rows, p, reduced=False)[1])


def nullspace(matrix, p: int | None = None, cols: int | None = None) -> list[list[int]]:
    """Basis of the right kernel over GF(p), as lists of residues."""
    p = _modulus(matrix, p)
    rows = _residues(matrix, p)
    if cols is None:
        cols = len(rows[0]) if rows else 0
    if not rows:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    echelon, pivots = _row_echelon(rows, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        vec = [0] * cols
        vec[f] = 1
        for r, c in zip(echelon, pivots):
            vec[c] = -r[f] % p
        basis.append(vec)
    return basis


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Independent reproducible generator for ``(seed, stream...)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=stream)))


def sample_field(rng: np.random.Generator, count: int, p: int = DEFAULT_PRIME) -> list[FieldElement]:
    """``count`` independent uniform draws from GF(p)."""
    if count < 0:
        raise ValueError("count must be non-negative")
    if p >= 1 << 64:
        raise ValueError("sampling supports primes below 2**64")
    draws = rng.integers(0, p, size=count, dtype=np.uint64)
    return [FieldElement._raw(int(x), p) for x in draws]
