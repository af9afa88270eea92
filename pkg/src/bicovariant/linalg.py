"""Sparse exact row reduction over Q or GF(p).

Rows are dicts ``{column: value}`` with hashable, orderable column keys.
"""
from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from gmpy2 import mpq

from .algebra import rational, to_modp

#: Two 61/62-bit primes used for consensus modular ranks.
PRIMES = ((1 << 61) - 1, 4611686018427387847)


class Echelon:
    """Incrementally maintained row-echelon basis.

    ``modulus=None`` works over Q with exact ``mpq`` arithmetic; otherwise
    all values are reduced into GF(modulus).
    """

    def __init__(self, modulus: int | None = None, order=None):
        self.modulus = modulus
        self.pivots: dict[Hashable, dict] = {}
        self._key = order

    def _norm(self, row: Mapping) -> dict:
        p = self.modulus
        out = {}
        for k, v in row.items():
            if p is None:
                v = rational(v)
            else:
                v = to_modp(v, p) if not isinstance(v, int) else v % p
            if v:
                out[k] = v
        return out

    def _lead(self, row):
        return min(row, key=self._key) if self._key else min(row)

    def reduce(self, row: Mapping) -> dict:
        """Return the residue of ``row`` against the current pivots."""
        row = self._norm(row)
        p = self.modulus
        pivots = self.pivots
        # eliminate every pivot column present, in pivot order
        while True:
            hit = [c for c in row if c in pivots]
            if not hit:
                return row
            c = min(hit, key=self._key) if self._key else min(hit)
            f = row[c]
            for k, v in pivots[c].items():
                s = row.get(k, 0) - f * v
                if p is not None:
                    s %= p
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)

    def add(self, row: Mapping) -> bool:
        """Insert ``row``; return True if it enlarged the span."""
        row = self.reduce(row)
        if not row:
            return False
        c = self._lead(row)
        f = row[c]
        if self.modulus is None:
            inv = 1 / f
            row = {k: v * inv for k, v in row.items()}
        else:
            inv = pow(f, -1, self.modulus)
            row = {k: v * inv % self.modulus for k, v in row.items()}
        self.pivots[c] = row
        return True

    def extend(self, rows: Iterable[Mapping]) -> "Echelon":
        for r in rows:
            self.add(r)
        return self

    def contains(self, row: Mapping) -> bool:
        return not self.reduce(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def rows(self) -> list[dict]:
        return list(self.pivots.values())


def rank(rows: Iterable[Mapping], modulus: int | None = None) -> int:
    return Echelon(modulus).extend(rows).rank


def span_contains(basis: Iterable[Mapping], row: Mapping, modulus: int | None = None) -> bool:
    return Echelon(modulus).extend(basis).contains(row)


def spans_equal(a: Iterable[Mapping], b: Iterable[Mapping], modulus: int | None = None) -> tuple[bool, int, int, int]:
    """Row-space equality; returns ``(equal, rank_a, rank_b, rank_union)``."""
    a, b = list(a), list(b)
    ea = Echelon(modulus).extend(a)
    eb = Echelon(modulus).extend(b)
    eu = Echelon(modulus).extend(a).extend(b)
    return (ea.rank == eb.rank == eu.rank, ea.rank, eb.rank, eu.rank)


def solve(rows: list[Mapping], rhs: list, unknowns: list) -> tuple[dict | None, list[dict]]:
    """Solve ``sum_j rows[i][j] x_j = rhs[i]`` exactly over Q.

    Returns ``(particular, nullspace_basis)``; ``particular`` is None when the
    system is inconsistent.  ``rhs`` entries are scalars; the augmented
    column is keyed by the sentinel ``None`` internally.
    """
    order = {u: k for k, u in enumerate(unknowns)}
    big = len(unknowns)
    ech = Echelon(order=lambda c: order.get(c, big))
    for r, b in zip(rows, rhs):
        row = dict(r)
        if b:
            row["__rhs__"] = -rational(b)
        ech.add(row)
    if "__rhs__" in ech.pivots:
        return None, []
    # back-substitute to reduced echelon form
    piv = sorted(ech.pivots, key=lambda c: order[c], reverse=True)
    reduced: dict = {}
    for c in piv:
        row = dict(ech.pivots[c])
        for c2, r2 in reduced.items():
            f = row.get(c2)
            if f:
                for k, v in r2.items():
                    s = row.get(k, 0) - f * v
                    if s:
                        row[k] = s
                    else:
                        row.pop(k, None)
        reduced[c] = row
    free = [u for u in unknowns if u not in reduced]
    particular = {c: -row.get("__rhs__", mpq(0)) for c, row in reduced.items()}
    particular = {c: v for c, v in particular.items() if v}
    null = []
    for f in free:
        vec = {f: mpq(1)}
        for c, row in reduced.items():
            v = row.get(f)
            if v:
                vec[c] = -v
        null.append(vec)
    return particular, null


def modp_row(row: Mapping, p: int) -> dict:
    return {k: to_modp(v, p) for k, v in row.items()}
