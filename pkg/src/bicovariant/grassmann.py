"""Grassmann algebra on the N**2 one-form generators Omega^i_j.

Generator ``(i, j)`` (1-based) has index ``(i-1)*N + (j-1)``; this single
order fixes every sign.  A monomial is a bitmask of generator indices and
stands for the product of its generators in increasing index order.

Matrix-valued forms (Omega, its tilde, Omega**2, ...) are one-space
:class:`~bicovariant.tensors.SpaceTensor` objects with :class:`GrassPoly`
entries.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .linalg import Echelon
from .tensors import SpaceTensor, compose, relabel, transpose_space

DEGREE_CAP = 4


class DegreeOverflow(ArithmeticError):
    """A product exceeded the configured Grassmann degree cap."""


@lru_cache(maxsize=1 << 16)
def mono_mul(m1: int, m2: int) -> tuple[int, int]:
    """Product of two monomials as ``(mask, sign)``; ``sign == 0`` if it vanishes."""
    if m1 & m2:
        return 0, 0
    s = 0
    b = m2
    while b:
        low = b & -b
        s += (m1 >> low.bit_length()).bit_count()
        b ^= low
    return m1 | m2, (-1 if s & 1 else 1)


def bits(m: int) -> list[int]:
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


class GrassPoly:
    """Element of the exterior algebra with scalar coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms: dict[int, object] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    @classmethod
    def _raw(cls, terms):
        g = cls.__new__(cls)
        g.terms = terms
        return g

    @classmethod
    def gen(cls, index: int, coeff=1) -> "GrassPoly":
        return cls._raw({1 << index: coeff})

    @classmethod
    def const(cls, c) -> "GrassPoly":
        return cls._raw({0: c} if c else {})

    @classmethod
    def monomial(cls, indices: Iterable[int], coeff=1) -> "GrassPoly":
        """Product of generators in the given (arbitrary) order."""
        m, s = 0, 1
        for i in indices:
            m, s2 = mono_mul(m, 1 << i)
            if not s2:
                return cls()
            s *= s2
        return cls._raw({m: coeff if s > 0 else -coeff})

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GrassPoly):
            out = dict(self.terms)
            for k, v in other.terms.items():
                s = out[k] + v if k in out else v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return GrassPoly._raw(out)
        if not other:
            return self
        return self + GrassPoly.const(other)

    __radd__ = __add__

    def __neg__(self):
        return GrassPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GrassPoly):
            return wedge_mul(self, other)
        out = {}
        for k, v in self.terms.items():
            w = v * other
            if w:
                out[k] = w
        return GrassPoly._raw(out)

    def __rmul__(self, other):
        out = {}
        for k, v in self.terms.items():
            w = other * v
            if w:
                out[k] = w
        return GrassPoly._raw(out)

    def __bool__(self):
        return any(bool(v) for v in self.terms.values())

    def __eq__(self, other):
        if isinstance(other, GrassPoly):
            return not (self - other)
        if not other:
            return not self
        return NotImplemented

    __hash__ = None

    # inspection ----------------------------------------------------------
    def degree(self) -> int:
        return max((k.bit_count() for k in self.terms), default=-1)

    def homogeneous(self, d: int) -> "GrassPoly":
        return GrassPoly._raw({k: v for k, v in self.terms.items() if k.bit_count() == d})

    def is_homogeneous(self) -> bool:
        return len({k.bit_count() for k in self.terms}) <= 1

    def map_coeffs(self, f) -> "GrassPoly":
        out = {}
        for k, v in self.terms.items():
            w = f(v)
            if w:
                out[k] = w
        return GrassPoly._raw(out)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, key=lambda m: (m.bit_count(), bits(m))):
            mono = "".join(f"t{i}" for i in bits(k)) or "1"
            parts.append(f"({self.terms[k]})*{mono}")
        return " + ".join(parts)


def wedge_mul(u: GrassPoly, v: GrassPoly, cap: int = DEGREE_CAP) -> GrassPoly:
    """Exterior product; raises :class:`DegreeOverflow` beyond ``cap``."""
    if u.degree() + v.degree() > cap:
        for k1 in u.terms:
            for k2 in v.terms:
                if not (k1 & k2) and k1.bit_count() + k2.bit_count() > cap:
                    raise DegreeOverflow(f"product degree exceeds cap {cap}")
    out: dict[int, object] = {}
    for k1, v1 in u.terms.items():
        for k2, v2 in v.terms.items():
            m, s = mono_mul(k1, k2)
            if not s:
                continue
            c = v1 * v2
            if s < 0:
                c = -c
            if m in out:
                c = out[m] + c
                if c:
                    out[m] = c
                else:
                    del out[m]
            elif c:
                out[m] = c
    return GrassPoly._raw(out)


# ---------------------------------------------------------------------------
# matrix-valued forms


def gen_index(N: int, i: int, j: int) -> int:
    return (i - 1) * N + (j - 1)


def gen_pair(N: int, a: int) -> tuple[int, int]:
    return a // N + 1, a % N + 1


def omega(N: int, space: int = 1) -> SpaceTensor:
    """The Cartan form: entry (i, j) is the generator Omega^i_j."""
    ent = {(i, j): GrassPoly.gen(gen_index(N, i, j)) for i in range(1, N + 1) for j in range(1, N + 1)}
    return SpaceTensor._raw(N, (space,), ent)


def form_trace(M: SpaceTensor) -> GrassPoly:
    out = GrassPoly()
    for (i, j), v in M.entries.items():
        if i == j:
            out = out + v
    return out


def trace_omega(N: int) -> GrassPoly:
    return form_trace(omega(N))


def tilde(M: SpaceTensor, C: SpaceTensor, C_inv: SpaceTensor | None = None) -> SpaceTensor:
    """``C M^t C^{-1}`` for a one-space matrix of forms (plain transposition)."""
    if C_inv is None:
        C_inv = invert_metric(C)
    s = M.spaces[0]
    Ct = relabel(C, {C.spaces[0]: s})
    Ci = relabel(C_inv, {C_inv.spaces[0]: s})
    return compose(compose(Ct, transpose_space(M, s)), Ci)


def invert_metric(C: SpaceTensor) -> SpaceTensor:
    """Inverse of a monomial (one nonzero per row) one-space matrix."""
    ent = {}
    rows = set()
    for (i, j), v in C.entries.items():
        if i in rows:
            raise ValueError("metric is not monomial; general inversion unsupported")
        rows.add(i)
        ent[(j, i)] = 1 / mpq(v) if not hasattr(v, "terms") else v**-1
    if len(rows) != C.N:
        raise ZeroDivisionError("singular metric")
    return SpaceTensor._raw(C.N, C.spaces, ent)


def place(M: SpaceTensor, space: int) -> SpaceTensor:
    return relabel(M, {M.spaces[0]: space})


# ---------------------------------------------------------------------------
# generator brackets and their biderivation extension


class GeneratorBracket:
    """Values ``{theta_a, theta_b}`` (degree-2 GrassPolys) on generator pairs.

    The graded symmetry ``{theta_a, theta_b} = {theta_b, theta_a}`` is
    checked on construction unless ``symmetric=False`` is passed.
    """

    def __init__(self, N: int, table: Mapping[tuple[int, int], GrassPoly], symmetric: bool = True):
        self.N = N
        self.V = N * N
        self.table: dict[tuple[int, int], GrassPoly] = {k: v for k, v in table.items() if v}
        self.symmetric = symmetric
        if symmetric:
            bad = self.symmetry_defects()
            if bad:
                raise ValueError(f"generator bracket violates graded symmetry at {bad[:3]}")

    @classmethod
    def from_tensor(cls, T: SpaceTensor, symmetric: bool = True) -> "GeneratorBracket":
        """Read ``{Omega_1, Omega_2}`` stored as a two-space tensor."""
        N = T.N
        table = {}
        for (i1, j1, i2, j2), v in T.entries.items():
            table[(gen_index(N, i1, j1), gen_index(N, i2, j2))] = v
        return cls(N, table, symmetric)

    def to_tensor(self) -> SpaceTensor:
        N = self.N
        ent = {}
        for (a, b), v in self.table.items():
            ent[gen_pair(N, a) + gen_pair(N, b)] = v
        return SpaceTensor._raw(N, (1, 2), ent)

    def __call__(self, a: int, b: int) -> GrassPoly:
        return self.table.get((a, b)) or GrassPoly()

    def symmetry_defects(self) -> list[tuple[int, int]]:
        bad = []
        for (a, b), v in self.table.items():
            if a < b or (b, a) not in self.table:
                if v != self(b, a):
                    bad.append((a, b))
        return bad

    def map_coeffs(self, f) -> "GeneratorBracket":
        return GeneratorBracket(self.N, {k: v.map_coeffs(f) for k, v in self.table.items()}, symmetric=False)

    def __add__(self, other: "GeneratorBracket") -> "GeneratorBracket":
        table = dict(self.table)
        for k, v in other.table.items():
            table[k] = table[k] + v if k in table else v
        return GeneratorBracket(self.N, table, symmetric=False)

    def scale(self, c) -> "GeneratorBracket":
        return GeneratorBracket(self.N, {k: c * v for k, v in self.table.items()}, symmetric=False)

    def bracket(self, u: GrassPoly, v: GrassPoly) -> GrassPoly:
        return extend_biderivation(self, u, v)


def extend_biderivation(B: GeneratorBracket, u: GrassPoly, v: GrassPoly) -> GrassPoly:
    """Extend ``B`` to a graded biderivation and evaluate ``{u, v}``.

    For monomials ``x1..xp`` and ``y1..yq`` (generators, increasing order)::

        {x1..xp, y1..yq} = sum_{i,j} (-1)**(q*(p-i) + j-1)
                           {x_i, y_j} * x1..x_{i-1} y1..^y_j..yq x_{i+1}..xp
    """
    out = GrassPoly()
    acc: dict[int, object] = {}
    for mu, cu in u.terms.items():
        xs = bits(mu)
        p = len(xs)
        if not p:
            continue
        for mv, cv in v.terms.items():
            ys = bits(mv)
            q = len(ys)
            if not q:
                continue
            c = cu * cv
            for i, x in enumerate(xs):
                left = mu & ((1 << x) - 1)
                right = mu & ~((1 << (x + 1)) - 1)
                for j, y in enumerate(ys):
                    b = B(x, y)
                    if not b:
                        continue
                    m1, s1 = mono_mul(left, mv ^ (1 << y))
                    if not s1:
                        continue
                    m2, s2 = mono_mul(m1, right)
                    if not s2:
                        continue
                    sign = s1 * s2 * (-1 if (q * (p - 1 - i) + j) & 1 else 1)
                    for mb, cb in b.terms.items():
                        m3, s3 = mono_mul(mb, m2)
                        if not s3:
                            continue
                        t = cb * c
                        if sign * s3 < 0:
                            t = -t
                        if m3 in acc:
                            t = acc[m3] + t
                            if t:
                                acc[m3] = t
                            else:
                                del acc[m3]
                        elif t:
                            acc[m3] = t
    out.terms = acc
    return out


# ---------------------------------------------------------------------------
# membership tests


def _row(g: GrassPoly) -> dict:
    return dict(g.terms)


def subalgebra_span(generators: list[GrassPoly], d: int) -> Echelon:
    """Echelon basis of the degree-``d`` part of the subalgebra generated by
    the degree-one ``generators``."""
    for g in generators:
        if g.degree() != 1 or not g.is_homogeneous():
            raise ValueError("generators must be homogeneous of degree one")
    ech = Echelon()
    basis = [g for g in generators if ech.add(_row(g))]
    if d == 1:
        return ech
    span = Echelon()
    products = [GrassPoly.const(1)]
    for _ in range(d):
        products = [p * g for p in products for g in basis]
    for p in products:
        span.add(_row(p))
    return span


def subalgebra_membership(u: GrassPoly, generators: list[GrassPoly]) -> bool:
    """Is ``u`` in the subalgebra generated by the degree-one ``generators``?"""
    subalgebra_span(generators, 1)  # validates the generators
    for d in range(1, u.degree() + 1):
        part = u.homogeneous(d)
        if part and not subalgebra_span(generators, d).contains(_row(part)):
            return False
    return True


def degree3_ideal_span(gens: list[GrassPoly], V: int) -> Echelon:
    """Echelon basis of the degree-3 part ``span{g * theta}`` of the ideal."""
    ech = Echelon()
    for g in gens:
        if not g:
            continue
        if g.degree() != 2 or not g.is_homogeneous():
            raise ValueError("ideal generators must be homogeneous quadratic")
        for a in range(V):
            ech.add(_row(g * GrassPoly.gen(a)))
    return ech


def ideal_membership(u: GrassPoly, gens: list[GrassPoly], V: int | None = None, span: Echelon | None = None) -> bool:
    """Is the cubic ``u`` in ``span{g theta, theta g}``?  ``V`` is the number of
    generators; a precomputed ``span`` may be passed for repeated tests."""
    if u and (u.degree() != 3 or not u.is_homogeneous()):
        raise ValueError("ideal_membership expects a homogeneous cubic")
    if not u:
        return True
    if span is None:
        if V is None:
            raise ValueError("V is required without a precomputed span")
        span = degree3_ideal_span(gens, V)
    return span.contains(_row(u))
