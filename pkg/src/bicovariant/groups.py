"""SO(N) and Sp(N) in the fundamental representation.

Metric ``C^{ij} = eps_i delta^{i j'}`` with ``j' = N + 1 - j``; the Lie
algebra is ``{X : X^t = -C X C^{-1}}``.  Classical r-matrices are two-space
:class:`SpaceTensor` objects.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .linalg import Echelon, solve
from .tensors import SpaceTensor, commutator, compose, relabel, swap, transpose_space

PRESETS = {"so5": ("SO", 5), "so7": ("SO", 7), "sp4": ("Sp", 4), "sp6": ("Sp", 6)}


def prime(N: int, i: int) -> int:
    return N + 1 - i


@dataclass(frozen=True)
class GroupData:
    family: str
    N: int
    eps: int
    eps_i: tuple[int, ...]  # 1-based: eps_i[i - 1]
    C: SpaceTensor = field(repr=False)
    C_inv: SpaceTensor = field(repr=False)
    lie_basis: tuple[SpaceTensor, ...] = field(repr=False)
    cartan_basis: tuple[SpaceTensor, ...] = field(repr=False)
    npos_basis: tuple[SpaceTensor, ...] = field(repr=False)
    nneg_basis: tuple[SpaceTensor, ...] = field(repr=False)

    @property
    def tag(self) -> str:
        return f"{self.family.lower()}{self.N}"

    @property
    def dim(self) -> int:
        return len(self.lie_basis)

    @property
    def V(self) -> int:
        return self.N * self.N

    # invariant two-space tensors -----------------------------------------
    def I(self, s1: int = 1, s2: int = 2) -> SpaceTensor:
        return SpaceTensor.identity(self.N, (s1, s2))

    def P(self, s1: int = 1, s2: int = 2) -> SpaceTensor:
        return SpaceTensor.flip(self.N, s1, s2)

    def K0(self, s1: int = 1, s2: int = 2) -> SpaceTensor:
        """``(K0)^{i1 i2}_{j1 j2} = C^{i1 i2} C_{j1 j2}``."""
        ent = {}
        for (i1, i2), c in self.C.entries.items():
            for (j1, j2), ci in self.C_inv.entries.items():
                ent[(i1, j1, i2, j2)] = c * ci
        return relabel(SpaceTensor._raw(self.N, (1, 2), ent), {1: s1, 2: s2})

    def tilde_matrix(self, X: SpaceTensor) -> SpaceTensor:
        """``C X^t C^{-1}`` for a one-space scalar matrix."""
        s = X.spaces[0]
        return compose(compose(relabel(self.C, {1: s}), transpose_space(X, s)), relabel(self.C_inv, {1: s}))

    def in_algebra(self, X: SpaceTensor) -> bool:
        return (self.tilde_matrix(X) + X).is_zero()


def _unit(N, i, j, v=1):
    return SpaceTensor._raw(N, (1,), {(i, j): mpq(v)})


def build_group(family: str, N: int) -> GroupData:
    family = {"so": "SO", "sp": "Sp"}.get(family.lower(), family)
    if family == "SO":
        if N < 4:
            raise ValueError("SO(N) requires N >= 4")
        eps_i = (1,) * N
        eps = 1
    elif family == "Sp":
        if N < 4 or N % 2:
            raise ValueError("Sp(N) requires even N >= 4")
        n = N // 2
        eps_i = (1,) * n + (-1,) * n
        eps = -1
    else:
        raise ValueError(f"unknown family {family!r}")

    C = SpaceTensor._raw(N, (1,), {(i, prime(N, i)): mpq(eps_i[i - 1]) for i in range(1, N + 1)})
    # C^2 = eps, so C^{-1} = eps C
    C_inv = SpaceTensor._raw(N, (1,), {k: eps * v for k, v in C.entries.items()})

    proto = GroupData(family, N, eps, eps_i, C, C_inv, (), (), (), ())
    basis, ech = [], Echelon()
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            X = _unit(N, i, j) - proto.tilde_matrix(_unit(N, i, j))
            if X and ech.add(dict(X.entries)):
                basis.append(X)
    expected = N * (N - 1) // 2 if family == "SO" else N * (N + 1) // 2
    if len(basis) != expected:
        raise RuntimeError(f"Lie algebra basis has dimension {len(basis)}, expected {expected}")
    for X in basis:
        assert proto.in_algebra(X)

    def kind(X):
        ks = {(i > j) - (i < j) for (i, j) in X.entries}
        if len(ks) != 1:
            raise RuntimeError("basis element mixes triangular parts")
        return ks.pop()

    cartan = tuple(X for X in basis if kind(X) == 0)
    npos = tuple(X for X in basis if kind(X) < 0)
    nneg = tuple(X for X in basis if kind(X) > 0)
    return GroupData(family, N, eps, eps_i, C, C_inv, tuple(basis), cartan, npos, nneg)


def group_from_tag(tag: str) -> GroupData:
    try:
        return build_group(*PRESETS[tag.lower()])
    except KeyError:
        raise ValueError(f"unknown group tag {tag!r}; expected one of {sorted(PRESETS)}") from None


# ---------------------------------------------------------------------------
# classical r-matrices


@dataclass(frozen=True)
class ClassicalR:
    r: SpaceTensor
    kind: str  # "quasitriangular" | "triangular"


def outer(A: SpaceTensor, B: SpaceTensor) -> SpaceTensor:
    """``A (x) B`` on spaces (1, 2) from two one-space matrices."""
    return compose(relabel(A, {A.spaces[0]: 1}), relabel(B, {B.spaces[0]: 2}))


def trace_form(X: SpaceTensor, Y: SpaceTensor):
    M = compose(X, Y)
    return sum((v for (i, j), v in M.entries.items() if i == j), mpq(0))


def standard_r(g: GroupData) -> ClassicalR:
    """``r = 1/2 sum (e_mu (x) f_mu - f_mu (x) e_mu)`` with ``f`` the trace-form
    dual basis of the lower-triangular part."""
    e, f = g.npos_basis, g.nneg_basis
    n = len(e)
    # coefficients D with tr(e_mu, sum_nu D[mu][nu] f_nu) = delta
    dual = []
    for mu in range(n):
        rows = [{nu: trace_form(e[k], f[nu]) for nu in range(n)} for k in range(n)]
        rhs = [1 if k == mu else 0 for k in range(n)]
        sol, null = solve(rows, rhs, list(range(n)))
        if sol is None or null:
            raise ValueError("degenerate trace-form Gram matrix")
        fm = SpaceTensor(g.N, (1,))
        for nu, c in sol.items():
            fm = fm + f[nu].scale(c)
        dual.append(fm)
    r = SpaceTensor(g.N, (1, 2))
    for em, fm in zip(e, dual):
        r = r + outer(em, fm) - outer(fm, em)
    return ClassicalR(r.scale(mpq(1, 2)), "quasitriangular")


def abelian_r(g: GroupData, x: SpaceTensor, y: SpaceTensor) -> ClassicalR:
    """Triangular ``r = x (x) y - y (x) x`` from commuting Cartan elements."""
    ech = Echelon()
    if not (ech.add(dict(x.entries)) and ech.add(dict(y.entries))):
        raise ValueError("x and y must be linearly independent")
    if not commutator(x, y).is_zero():
        raise ValueError("x and y must commute")
    return ClassicalR(outer(x, y) - outer(y, x), "triangular")


def diag(N: int, values) -> SpaceTensor:
    return SpaceTensor._raw(N, (1,), {(i + 1, i + 1): mpq(v) for i, v in enumerate(values) if v})


def default_abelian_r(g: GroupData) -> ClassicalR:
    """``x = diag(1, 0, .., 0, -1)``, ``y = diag(0, 1, 0, .., 0, -1, 0)``."""
    N = g.N
    x = [0] * N
    y = [0] * N
    x[0], x[N - 1] = 1, -1
    y[1], y[N - 2] = 1, -1
    return abelian_r(g, diag(N, x), diag(N, y))


def r_spaces(r: SpaceTensor, a: int, b: int) -> SpaceTensor:
    """``r_{ab}``: the two-space tensor ``r`` placed in spaces ``a, b``."""
    if a < b:
        return relabel(r, {1: a, 2: b})
    return relabel(swap(r), {1: b, 2: a})


def cybe_defect(r) -> SpaceTensor:
    """``C(r) = [r12, r23 + r13] + [r13, r23]``."""
    if isinstance(r, ClassicalR):
        r = r.r
    r12, r13, r23 = r_spaces(r, 1, 2), r_spaces(r, 1, 3), r_spaces(r, 2, 3)
    return commutator(r12, r23 + r13) + commutator(r13, r23)


def coproduct_action(t: SpaceTensor, spaces) -> SpaceTensor:
    """``sum_s t_s`` acting on the given spaces."""
    out = None
    for s in spaces:
        ts = relabel(t, {t.spaces[0]: s}).extend(tuple(spaces))
        out = ts if out is None else out + ts
    return out


def ad_invariance_residuals(X: SpaceTensor, g: GroupData) -> list[SpaceTensor]:
    return [commutator(coproduct_action(t, X.spaces), X) for t in g.lie_basis]


def ad_invariance_check(X: SpaceTensor, g: GroupData) -> bool:
    return all(res.is_zero() for res in ad_invariance_residuals(X, g))


def is_skew(r: SpaceTensor) -> bool:
    return (r + swap(r)).is_zero()


def in_lie_square(r: SpaceTensor, g: GroupData) -> bool:
    """Both tensor slots of ``r`` lie in the span of ``lie_basis``."""
    N = g.N
    ech = Echelon().extend(dict(X.entries) for X in g.lie_basis)
    # slices of r with the second (resp. first) slot fixed
    for slot in (0, 1):
        slices: dict = {}
        for k, v in r.entries.items():
            fixed = k[2:] if slot == 0 else k[:2]
            free = k[:2] if slot == 0 else k[2:]
            slices.setdefault(fixed, {})[free] = v
        for row in slices.values():
            if not ech.contains(row):
                return False
    return True
