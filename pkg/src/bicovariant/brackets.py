"""The 20-parameter family of bicovariant graded brackets on Mat(N)-valued
one-forms and the identity suites run on it.

A bracket is the r-matrix term ``[Omega_1, [Omega_2, r_12]]_+`` plus seven
invariant structures, each weighted by ``X = a I + b P + c K0``::

    X1 (Om1^2 + Om2^2)            (~Om1^2 + ~Om2^2) X2
    ~Om1 X3 Om1 + ~Om2 X3 Om2     ~Om1 X4 Om2 + ~Om2 X4 Om1
    X5 (Om1 ~Om1 + Om2 ~Om2)      (X6 (~Om1 + ~Om2) + (Om1 + Om2) X7) tr Om

``c5`` is always zero: ``K0 (Om1 ~Om1 + Om2 ~Om2)`` vanishes identically.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .algebra import MPoly, rational
from .grassmann import (
    GeneratorBracket,
    GrassPoly,
    extend_biderivation,
    form_trace,
    gen_index,
    omega,
    place,
    degree3_ideal_span,
    subalgebra_membership,
    subalgebra_span,
    tilde,
)
from .groups import ClassicalR, GroupData, cybe_defect, standard_r
from .linalg import Echelon, solve
from .tensors import SpaceTensor, commutator, compose, partial_trace, relabel, tilde_space

PARAM_NAMES: tuple[str, ...] = tuple(
    f"{x}{i}" for x in "abc" for i in range(1, 8) if (x, i) != ("c", 5)
)
STRUCTURES = (1, 2, 3, 4, 5, 6, 7)


class ShapeError(ValueError):
    """{Omega, tr Omega} does not decompose into the six expected structures."""


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class BracketParams:
    """The twenty coefficients ``a_i, b_i, c_i`` (``c5`` fixed to zero).

    Values may be rationals or :class:`MPoly` expressions in free symbols.
    """

    values: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        vals = {}
        for k, v in dict(self.values).items():
            if k == "c5":
                if v:
                    raise ValueError("c5 is redundant and must be zero")
                continue
            if k not in PARAM_NAMES:
                raise ValueError(f"unknown bracket parameter {k!r}")
            if isinstance(v, MPoly) and v.is_constant():
                v = v.constant()
            if isinstance(v, MPoly):
                vals[k] = v
            elif v:
                vals[k] = rational(v)
        object.__setattr__(self, "values", vals)

    def __getitem__(self, name: str):
        if name == "c5":
            return mpq(0)
        return self.values.get(name, mpq(0))

    @classmethod
    def zero(cls) -> "BracketParams":
        return cls({})

    @classmethod
    def symbolic(cls) -> "BracketParams":
        return cls({n: MPoly.var(n) for n in PARAM_NAMES})

    @classmethod
    def random(cls, seed, bound: int = 1 << 20) -> "BracketParams":
        rng = random.Random(seed)
        return cls({n: mpq(rng.randint(-bound, bound)) for n in PARAM_NAMES})

    def subs(self, point: Mapping[str, object]) -> "BracketParams":
        return BracketParams(
            {k: (v.subs(point) if isinstance(v, MPoly) else v) for k, v in self.values.items()}
        )

    def free_symbols(self) -> list[str]:
        names = set()
        for v in self.values.values():
            if isinstance(v, MPoly):
                names.update(v.variables())
        return sorted(names)

    def is_symbolic(self) -> bool:
        return any(isinstance(v, MPoly) and not v.is_constant() for v in self.values.values())


def X_tensor(g: GroupData, a, b, c) -> SpaceTensor:
    return g.I().scale(a) + g.P().scale(b) + g.K0().scale(c)


# ---------------------------------------------------------------------------
# structure tensors


class Forms:
    """Matrix-valued forms of one group placed in spaces 1, 2 (and 3)."""

    def __init__(self, g: GroupData):
        self.g = g
        N = g.N
        self.N = N
        self.omega = omega(N)
        self.tilde = tilde(self.omega, g.C, g.C_inv)
        self.trace = form_trace(self.omega)
        self.minus = self.omega - self.tilde
        self.plus = self.omega + self.tilde

    def at(self, M: SpaceTensor, s: int) -> SpaceTensor:
        return place(M, s)

    def sq(self, M: SpaceTensor) -> SpaceTensor:
        return compose(M, M)


def r_term(F: Forms, r: SpaceTensor, A: SpaceTensor | None = None, B: SpaceTensor | None = None) -> SpaceTensor:
    """``[A_1, [B_2, r_12]]_+`` with ``A = B = Omega`` by default."""
    A = F.omega if A is None else A
    B = F.omega if B is None else B
    inner = commutator(place(B, 2), r)
    return commutator(place(A, 1), inner, anti=True)


def structure_tensor(F: Forms, k: int, X: SpaceTensor) -> SpaceTensor:
    """The ``k``-th invariant structure weighted by the scalar tensor ``X``."""
    O, T = F.omega, F.tilde
    O1, O2, T1, T2 = place(O, 1), place(O, 2), place(T, 1), place(T, 2)
    if k == 1:
        return compose(X, place(F.sq(O), 1) + place(F.sq(O), 2))
    if k == 2:
        return compose(place(F.sq(T), 1) + place(F.sq(T), 2), X)
    if k == 3:
        return compose(compose(T1, X), O1) + compose(compose(T2, X), O2)
    if k == 4:
        return compose(compose(T1, X), O2) + compose(compose(T2, X), O1)
    if k == 5:
        OT = compose(O, T)
        return compose(X, place(OT, 1) + place(OT, 2))
    if k == 6:
        return compose(X, T1 + T2).scale(F.trace, left=False)
    if k == 7:
        return compose(O1 + O2, X).scale(F.trace, left=False)
    raise ValueError(f"no structure {k}")


@lru_cache(maxsize=None)
def _basis_tables(family: str, N: int):
    from .groups import build_group

    g = build_group(family, N)
    F = Forms(g)
    tabs = {}
    for name in PARAM_NAMES:
        kind, k = name[0], int(name[1:])
        X = {"a": g.I(), "b": g.P(), "c": g.K0()}[kind]
        tabs[name] = GeneratorBracket.from_tensor(structure_tensor(F, k, X))
    return tabs


def basis_tables(g: GroupData) -> dict[str, GeneratorBracket]:
    """Generator tables of the twenty parameter directions (cached per group)."""
    return _basis_tables(g.family, g.N)


def r_table(g: GroupData, r: SpaceTensor) -> GeneratorBracket:
    return GeneratorBracket.from_tensor(r_term(Forms(g), r))


def combine_tables(N: int, parts: Iterable[tuple[object, GeneratorBracket]], symmetric: bool = True) -> GeneratorBracket:
    acc: dict[tuple[int, int], dict] = {}
    for c, tab in parts:
        if not c:
            continue
        for key, poly in tab.table.items():
            d = acc.setdefault(key, {})
            for m, v in poly.terms.items():
                t = c * v
                if m in d:
                    t = d[m] + t
                    if t:
                        d[m] = t
                    else:
                        del d[m]
                elif t:
                    d[m] = t
    return GeneratorBracket(N, {k: GrassPoly._raw(v) for k, v in acc.items() if v}, symmetric=symmetric)


# ---------------------------------------------------------------------------
# the bracket object


class BicovBracket:
    """A member of the family: parameters, r-matrix and the tabulated bracket."""

    def __init__(self, params: BracketParams, r, group: GroupData, table: GeneratorBracket | None = None):
        self.params = params
        self.r = r.r if isinstance(r, ClassicalR) else r
        self.group = group
        self.N = group.N
        self.V = group.N * group.N
        if table is None:
            parts = [(params[n], t) for n, t in basis_tables(group).items()]
            if self.r is not None and self.r:
                parts.append((1, r_table(group, self.r)))
            table = combine_tables(group.N, parts)
        self.table = table
        self._forms = None
        self._dtrace = None

    @property
    def forms(self) -> Forms:
        if self._forms is None:
            self._forms = Forms(self.group)
        return self._forms

    def __call__(self, u: GrassPoly, v: GrassPoly) -> GrassPoly:
        return extend_biderivation(self.table, u, v)

    def gen(self, a: int) -> GrassPoly:
        return GrassPoly.gen(a)

    def trace_derivative(self) -> list[GrassPoly]:
        """``{theta_a, tr Omega}`` for every generator ``a``."""
        if self._dtrace is None:
            N = self.N
            diag = [gen_index(N, i, i) for i in range(1, N + 1)]
            out = []
            for a in range(self.V):
                acc = GrassPoly()
                for d in diag:
                    acc = acc + self.table(a, d)
                out.append(acc)
            self._dtrace = out
        return self._dtrace

    def with_trace(self, u: GrassPoly) -> GrassPoly:
        """``{u, tr Omega}``."""
        return self(u, self.forms.trace)

    def matrix_bracket(self, A: SpaceTensor, B: SpaceTensor) -> SpaceTensor:
        """``{A_1, B_2}`` for one-space matrices of forms."""
        N = self.N
        ent = {}
        for (i1, j1), u in A.entries.items():
            for (i2, j2), v in B.entries.items():
                w = self(u, v)
                if w:
                    ent[(i1, j1, i2, j2)] = w
        return SpaceTensor._raw(N, (1, 2), ent)

    def matrix_with(self, A: SpaceTensor, x: GrassPoly) -> SpaceTensor:
        """Entrywise ``{A, x}``."""
        return A.map(lambda u: self(u, x))

    def specialize(self, point: Mapping[str, object]) -> "BicovBracket":
        tab = self.table.map_coeffs(lambda c: c.evaluate(point) if isinstance(c, MPoly) else c)
        return BicovBracket(self.params.subs(point), self.r, self.group, tab)


def build_bracket(params: BracketParams, r, group: GroupData) -> BicovBracket:
    if params["c5"]:
        raise ValueError("c5 must be zero")
    return BicovBracket(params, r, group)


def bracket_from_tensor(T: SpaceTensor, group: GroupData, symmetric: bool = True) -> BicovBracket:
    """Wrap an arbitrary ``{Omega_1, Omega_2}`` tensor as a bracket object."""
    return BicovBracket(BracketParams.zero(), None, group, GeneratorBracket.from_tensor(T, symmetric))


def build_r_only(group: GroupData, r=None) -> BicovBracket:
    r = standard_r(group) if r is None else r
    return build_bracket(BracketParams.zero(), r, group)


# ---------------------------------------------------------------------------
# residual reports


@dataclass
class Residuals:
    """Outcome of an identity sweep; ``nonzero`` maps locations to residuals."""

    name: str
    checked: int = 0
    nonzero: dict = field(default_factory=dict)
    complete: bool = True

    @property
    def passed(self) -> bool:
        return not self.nonzero

    def first(self):
        return next(iter(self.nonzero.items()), None)

    def __repr__(self):
        status = "pass" if self.passed else f"{len(self.nonzero)} nonzero"
        return f"Residuals({self.name}: {status}, checked={self.checked}{'' if self.complete else ', stopped early'})"


def _specialized(B: BicovBracket, seed) -> BicovBracket:
    if seed is None or not B.params.is_symbolic():
        return B
    names = set(B.params.free_symbols())
    rng = random.Random(seed)
    point = {n: mpq(rng.randint(-(1 << 30), 1 << 30)) for n in sorted(names)}
    return B.specialize(point)


def check_jacobi(B: BicovBracket, stop_at_first: bool = False, seed=None, triples=None) -> Residuals:
    """Jacobiator ``{{a,b},c} + {{b,c},a} + {{c,a},b}`` on generator triples.

    The Jacobiator of odd generators is totally symmetric, so ``a <= b <= c``
    covers every triple.  ``seed`` specializes free symbols to random
    rationals first.
    """
    B = _specialized(B, seed)
    tab = B.table
    V = B.V
    gens = [GrassPoly.gen(a) for a in range(V)]
    res = Residuals("jacobi")
    if triples is None:
        triples = ((a, b, c) for a in range(V) for b in range(a, V) for c in range(b, V))
    for a, b, c in triples:
        j = (
            extend_biderivation(tab, tab(a, b), gens[c])
            + extend_biderivation(tab, tab(b, c), gens[a])
            + extend_biderivation(tab, tab(c, a), gens[b])
        )
        res.checked += 1
        if j:
            res.nonzero[(a, b, c)] = j
            if stop_at_first:
                res.complete = False
                break
    return res


def jacobiator(B: BicovBracket, u: GrassPoly, v: GrassPoly, w: GrassPoly) -> GrassPoly:
    """Jacobiator for degree-one arguments (sums of generators)."""
    return B(B(u, v), w) + B(B(v, w), u) + B(B(w, u), v)


def check_nilpotency(B: BicovBracket) -> Residuals:
    """``{{Omega, tr Omega}, tr Omega}`` entrywise."""
    D = B.trace_derivative()
    t = B.forms.trace
    res = Residuals("nilpotency")
    N = B.N
    for a in range(B.V):
        w = B(D[a], t)
        res.checked += 1
        if w:
            res.nonzero[(a // N + 1, a % N + 1)] = w
    return res


def leibniz_residual(B: BicovBracket, u: GrassPoly, v: GrassPoly) -> GrassPoly:
    """``{{u,v},t} + {{u,t},v} - {u,{v,t}}`` with ``t = tr Omega``."""
    t = B.forms.trace
    return B(B(u, v), t) + B(B(u, t), v) - B(u, B(v, t))


def check_leibniz(B: BicovBracket, seed=None, stop_at_first: bool = False) -> Residuals:
    B = _specialized(B, seed)
    D = B.trace_derivative()
    tab = B.table
    res = Residuals("leibniz")
    V = B.V
    gens = [GrassPoly.gen(a) for a in range(V)]
    t = B.forms.trace
    for a in range(V):
        for b in range(a, V):
            w = (
                extend_biderivation(tab, tab(a, b), t)
                + extend_biderivation(tab, D[a], gens[b])
                - extend_biderivation(tab, gens[a], D[b])
            )
            res.checked += 1
            if w:
                res.nonzero[(a, b)] = w
                if stop_at_first:
                    res.complete = False
                    return res
    return res


# ---------------------------------------------------------------------------
# mu extraction


MU_LABELS = ("Om^2", "~Om^2", "~Om Om", "Om ~Om", "~Om trOm", "Om trOm")


def mu_structures(F: Forms) -> list[SpaceTensor]:
    O, T, t = F.omega, F.tilde, F.trace
    return [
        compose(O, O),
        compose(T, T),
        compose(T, O),
        compose(O, T),
        T.scale(t, left=False),
        O.scale(t, left=False),
    ]


def flatten_forms(M: SpaceTensor) -> dict:
    """Coordinates ``(index..., monomial) -> coefficient`` of a form tensor."""
    out = {}
    for k, g in M.entries.items():
        for m, c in g.terms.items():
            out[k + (m,)] = c
    return out


def _components(x) -> dict[str, mpq]:
    if isinstance(x, MPoly):
        return x.linear_parts()
    return {"": rational(x)} if x else {}


def decompose_linear(target: dict, basis: list[dict]) -> list:
    """Exact coefficients ``mu`` with ``sum mu_k basis_k == target``.

    ``target`` values may be affine MPolys; they are solved component by
    component.  Raises :class:`ShapeError` on a nonzero residual.
    """
    n = len(basis)
    coords = sorted(set().union(*[set(b) for b in basis]) | set(target), key=repr)
    rows = [{k: b.get(c, 0) for k, b in enumerate(basis) if b.get(c, 0)} for c in coords]
    comps: dict[str, dict] = {}
    for c, v in target.items():
        for name, val in _components(v).items():
            comps.setdefault(name, {})[c] = val
    result: list = [mpq(0)] * n
    for name, vec in comps.items():
        rhs = [vec.get(c, 0) for c in coords]
        sol, null = solve(rows, rhs, list(range(n)))
        if sol is None:
            raise ShapeError(f"residual does not vanish (component {name or 'constant'})")
        if null:
            raise ShapeError("structures are linearly dependent")
        scale = MPoly.var(name) if name else 1
        for k, v in sol.items():
            result[k] = result[k] + scale * v
    return result


@dataclass(frozen=True)
class MuVector:
    mu: tuple

    def __getitem__(self, k: int):
        """1-based access: ``mv[1]`` is mu_1."""
        return self.mu[k - 1]

    def __iter__(self):
        return iter(self.mu)


def trace_bracket_matrix(B: BicovBracket) -> SpaceTensor:
    """``{Omega, tr Omega}`` as a matrix of quadratic forms."""
    D = B.trace_derivative()
    N = B.N
    return SpaceTensor._raw(N, (1,), {(a // N + 1, a % N + 1): D[a] for a in range(B.V) if D[a]})


def mu_extract(B: BicovBracket) -> MuVector:
    F = B.forms
    target = flatten_forms(trace_bracket_matrix(B))
    basis = [flatten_forms(M) for M in mu_structures(F)]
    return MuVector(tuple(decompose_linear(target, basis)))


def k4_formulas(g: GroupData, p: BracketParams) -> MuVector:
    """The closed-form mu_1..mu_6 as polynomials in the parameters."""
    e, N = g.eps, g.N
    a, b, c = (lambda i: p[f"a{i}"]), (lambda i: p[f"b{i}"]), (lambda i: p[f"c{i}"])
    return MuVector((
        2 * b(1) + e * c(1) - e * c(2) + e * c(4) + N * a(1),
        -e * c(1) + e * c(2) + e * c(4) + 2 * b(2) + N * a(2),
        e * c(3) + b(3) + 2 * b(4) + N * a(3),
        e * c(3) - b(3) + 2 * b(5) + N * a(5),
        a(4) + N * a(6) + 2 * b(6) + e * (c(6) + c(7)),
        -a(4) + N * a(7) + 2 * b(7) + e * (c(6) + c(7)),
    ))


# ---------------------------------------------------------------------------
# nilpotency at the level of mu-vectors


MU_FAMILIES = ("i", "ii", "iii", "iv")


def mu_tensor(F: Forms, mu) -> SpaceTensor:
    """``sum_k mu_k S_k`` for the six structures of :func:`mu_structures`."""
    out = SpaceTensor(F.N, (1,))
    for m, S in zip(mu, mu_structures(F)):
        if m:
            out = out + S.scale(m)
    return out


def trace_derivation(g: GroupData, D: SpaceTensor) -> GeneratorBracket:
    """A (non-symmetric) generator table whose bracket with ``tr Omega`` is
    the derivation ``theta_a -> D[a]``; other brackets are meaningless."""
    N = g.N
    d0 = gen_index(N, 1, 1)
    return GeneratorBracket(N, {(gen_index(N, i, j), d0): v for (i, j), v in D.entries.items()}, symmetric=False)


def check_nilpotency_mu(g: GroupData, mu, F: Forms | None = None) -> Residuals:
    """(nil) for any bracket whose ``{Omega, tr Omega}`` has the given mu-vector.

    ``{{Omega, t}, t}`` only involves the derivation ``u -> {u, t}``, which is
    fixed by the mu-vector, so the test needs no bracket parameters.
    """
    F = Forms(g) if F is None else F
    tab = trace_derivation(g, mu_tensor(F, mu))
    t = F.trace
    res = Residuals("nilpotency")
    for (i, j), u in mu_tensor(F, mu).entries.items():
        res.checked += 1
        w = extend_biderivation(tab, u, t)
        if w:
            res.nonzero[(i, j)] = w
    return res


def mu_family_member(kind: str, rng: random.Random, bound: int = 1 << 20) -> tuple:
    """A random member of one of the four admissible forms of ``{Omega, tr Omega}``."""
    x = lambda: mpq(rng.randint(-bound, bound) or 1, rng.randint(1, 97))
    z = mpq(0)
    if kind == "i":
        m, n = x(), x()
        return (m, n, n, n, z, z)
    if kind == "ii":
        m = x()
        return (m, m, -m, -m, z, z)
    if kind == "iii":
        m = x()
        return (z, z, z, z, m, -m)
    if kind == "iv":
        return (z,) * 6
    raise ValueError(f"unknown family {kind!r}")


def random_mu(rng: random.Random, bound: int = 1 << 20) -> tuple:
    """Six independent random rationals (off every family with probability one)."""
    return tuple(mpq(rng.randint(-bound, bound), rng.randint(1, 97)) for _ in range(6))


# ---------------------------------------------------------------------------
# Omega^- closure and the pure r-term Jacobiator


def jai_sides(B: BicovBracket) -> tuple[SpaceTensor, SpaceTensor]:
    """Both sides of the three-space identity for the pure r-term bracket:

        {{Om1-, Om2-}, Om3-} + (cycle) = -[Om1-, [Om2-, [Om3-, C(r)]]_+]

    returned as ``(lhs, rhs)``.
    """
    g = B.group
    F = B.forms
    Om = F.minus
    ents = sorted(Om.entries.items())
    pair: dict = {}

    def br(x, y):
        k = (x, y)
        if k not in pair:
            pair[k] = B(Om.entries[x], Om.entries[y])
        return pair[k]

    lhs: dict = {}
    for x, u in ents:
        for y, v in ents:
            for z, w in ents:
                j = B(br(x, y), w) + B(br(y, z), u) + B(br(z, x), v)
                if j:
                    lhs[x + y + z] = j
    L = SpaceTensor._raw(g.N, (1, 2, 3), lhs)
    C = cybe_defect(B.r) if B.r is not None else SpaceTensor(g.N, (1, 2, 3))
    inner = commutator(place(Om, 3), C)
    mid = commutator(place(Om, 2), inner, anti=True)
    R = -commutator(place(Om, 1), mid)
    return L, R


def jai_identity(B: BicovBracket) -> bool:
    """The r-term Jacobiator on ``Omega^-`` equals the CYBE-defect expression."""
    if any(B.params[n] for n in PARAM_NAMES):
        raise ValueError("jai_identity needs the pure r-term bracket (all parameters zero)")
    L, R = jai_sides(B)
    return (L - R).is_zero()


@dataclass
class ClosureData:
    Z_plus: SpaceTensor
    Z_minus: SpaceTensor
    V_plus: SpaceTensor
    V_minus: SpaceTensor
    alpha_plus: object
    alpha_minus: object
    beta_plus: object
    beta_minus: object
    closed: bool
    failing: list = field(default_factory=list)


def closure_tensors(g: GroupData, p: BracketParams) -> dict[str, SpaceTensor]:
    """``Z^+-`` and ``V^+-`` from the weights ``X^(1), X^(2), X^(6), X^(7)``."""
    X = {k: X_tensor(g, p[f"a{k}"], p[f"b{k}"], p[f"c{k}"]) for k in (1, 2, 6, 7)}
    d, s = X[1] - X[2], X[6] + X[7]
    dt, st = g.tilde_matrix(d), g.tilde_matrix(s)
    return {"Z+": d + dt, "Z-": d - dt, "V+": s + st, "V-": s - st}


def closure_analysis(B: BicovBracket, seed=0) -> ClosureData:
    """Does ``{Omega^-_1, Omega^-_2}`` close on the subalgebra generated by
    ``Omega^-``?  Symbolic parameters are specialized at a random point."""
    p, g = B.params, B.group
    e = g.eps
    T = closure_tensors(g, p)
    Bs = _specialized(B, seed)
    F = Bs.forms
    gens = [v for _, v in sorted(F.minus.entries.items())]
    span = subalgebra_span(gens, 2)
    failing = []
    M = Bs.matrix_bracket(F.minus, F.minus)
    for k, v in sorted(M.entries.items()):
        if v.degree() != 2 or not v.is_homogeneous() or not span.contains(dict(v.terms)):
            failing.append(k)
    return ClosureData(
        T["Z+"], T["Z-"], T["V+"], T["V-"],
        p["b1"] - p["b2"] + e * (p["c1"] - p["c2"]),
        p["b1"] - p["b2"] - e * (p["c1"] - p["c2"]),
        p["b6"] + p["b7"] + e * (p["c6"] + p["c7"]),
        p["b6"] + p["b7"] - e * (p["c6"] + p["c7"]),
        not failing,
        failing,
    )


def differential_d(B: BicovBracket, u: GrassPoly, kappa=1) -> GrassPoly:
    """``d u = (1/kappa) {tr Omega, u}``."""
    if not kappa:
        raise ValueError("kappa must be nonzero")
    return B(B.forms.trace, u) * (1 / rational(kappa))


@dataclass
class MinusTraceReport:
    identity_residual: SpaceTensor  # {Om-, tr Om} + 2 (Om-)^2
    leibniz_residual: SpaceTensor  # (dd) restricted to Om- entries

    @property
    def identity_holds(self) -> bool:
        return self.identity_residual.is_zero()

    @property
    def leibniz_holds(self) -> bool:
        return self.leibniz_residual.is_zero()


def omega_minus_trace_bracket(B: BicovBracket) -> MinusTraceReport:
    F = B.forms
    Om, t = F.minus, F.trace
    ident = B.matrix_with(Om, t) + compose(Om, Om).scale(2)
    ents = sorted(Om.entries.items())
    dd = {}
    for x, u in ents:
        for y, v in ents:
            w = leibniz_residual(B, u, v)
            if w:
                dd[x + y] = w
    return MinusTraceReport(ident, SpaceTensor._raw(B.N, (1, 2), dd))


# ---------------------------------------------------------------------------
# the bracket -G_12 on the quotient by K Om1 Om2 + Om1 Om2 K


def gg_tensor(g: GroupData, r) -> SpaceTensor:
    """``G_12 = -[Om1,[Om2,r]]_+ + P(Om1^2+Om2^2) - eps(K Om1 Om2 + Om1 Om2 K + Om1 K Om2 + Om2 K Om1)``."""
    r = r.r if isinstance(r, ClassicalR) else r
    F = Forms(g)
    O1, O2 = place(F.omega, 1), place(F.omega, 2)
    K, P = g.K0(), g.P()
    O12 = compose(O1, O2)
    sq = place(F.sq(F.omega), 1) + place(F.sq(F.omega), 2)
    quartet = compose(K, O12) + compose(O12, K) + compose(compose(O1, K), O2) + compose(compose(O2, K), O1)
    return -r_term(F, r) + compose(P, sq) - quartet.scale(g.eps)


def gru_generators(g: GroupData) -> list[GrassPoly]:
    """Components of ``K Om1 Om2 + Om1 Om2 K``."""
    F = Forms(g)
    O12 = compose(place(F.omega, 1), place(F.omega, 2))
    T = compose(g.K0(), O12) + compose(O12, g.K0())
    return [v for _, v in sorted(T.entries.items())]


@dataclass
class ConstrainedPoissonReport:
    ideal_dim2: int
    ideal_dim3: int
    symmetry_defects: int  # entries of the 1<->2 defect outside the ideal
    jacobi_outside_ideal: int
    jacobi_nonzero_raw: int
    triples: int

    @property
    def passed(self) -> bool:
        return self.symmetry_defects == 0 and self.jacobi_outside_ideal == 0


def constrained_poisson_check(group: GroupData, r=None, T: SpaceTensor | None = None) -> ConstrainedPoissonReport:
    """Check that ``{Om1, Om2} = T`` (default ``-G_12``) is a graded-symmetric
    Poisson bracket modulo the ideal generated by the (gru) components.

    The generator table is symmetrized before the Jacobiator is formed; the
    symmetrization is harmless exactly when the symmetry defect lies in the
    ideal, which is checked first.

    The default ``r`` is the one read off the FRT R-matrix at first order,
    ``r~ - (P - eps K0)``; it equals ``-4 * standard_r``.  The check is not
    scale invariant, so ``standard_r`` itself fails it.
    """
    if r is None:
        from .semiclassical import semiclassical_r

        r = semiclassical_r(group)
    if T is None:
        T = -gg_tensor(group, r)
    gens = gru_generators(group)
    V = group.N * group.N
    ech2 = Echelon()
    for u in gens:
        if u:
            ech2.add(dict(u.terms))
    ech3 = degree3_ideal_span(gens, V)
    raw = GeneratorBracket.from_tensor(T, symmetric=False)
    half = mpq(1, 2)
    sym = {}
    bad_sym = 0
    for a in range(V):
        for b in range(a, V):
            x, y = raw(a, b), raw(b, a)
            if x != y and not ech2.contains(dict((x - y).terms)):
                bad_sym += 1
            s = (x + y) * half
            if s:
                sym[(a, b)] = s
                sym[(b, a)] = s
    tab = GeneratorBracket(group.N, sym)
    gp = [GrassPoly.gen(a) for a in range(V)]
    outside = raw_nz = n = 0
    for a in range(V):
        for b in range(a, V):
            for c in range(b, V):
                j = (extend_biderivation(tab, tab(a, b), gp[c]) + extend_biderivation(tab, tab(b, c), gp[a])
                     + extend_biderivation(tab, tab(c, a), gp[b]))
                n += 1
                if j:
                    raw_nz += 1
                    if not ech3.contains(dict(j.terms)):
                        outside += 1
    return ConstrainedPoissonReport(ech2.rank, ech3.rank, bad_sym, outside, raw_nz, n)
