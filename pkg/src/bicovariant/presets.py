"""Closed-form differential brackets, written as sums of tensor expressions
in ``Omega``, ``~Omega``, ``Omega^+-`` and ``tr Omega``, and matched onto the
twenty-parameter family by exact linear algebra.

Each preset term list is the authoritative form of the bracket (minus the
r-matrix term, which is always present with coefficient one).  Matching is
done per group because several of the structures coincide for small N.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from gmpy2 import mpq

from .algebra import MPoly
from .brackets import (
    PARAM_NAMES,
    BicovBracket,
    BracketParams,
    Forms,
    ShapeError,
    build_bracket,
    flatten_forms,
    mu_extract,
    structure_tensor,
)
from .grassmann import place
from .groups import GroupData
from .linalg import solve
from .tensors import SpaceTensor, compose

PRESET_TAGS = ("A1i", "A1ii", "A1iii", "A2", "A3")

#: expected shape of {Omega, tr Omega} for each preset
PRESET_SHAPE = {"A1i": "i", "A1ii": "i", "A1iii": "i", "A2": "ii", "A3": "iii"}


class Expr:
    """Tensor-expression helpers for one group."""

    def __init__(self, g: GroupData):
        self.g = g
        F = Forms(g)
        self.F = F
        self.O, self.T, self.Op, self.Om = F.omega, F.tilde, F.plus, F.minus
        self.I, self.P, self.K = g.I(), g.P(), g.K0()

    def sq(self, A):
        """``A_1^2 + A_2^2``."""
        AA = compose(A, A)
        return place(AA, 1) + place(AA, 2)

    def prod(self, A, B):
        """``A_1 B_1 + A_2 B_2``."""
        AB = compose(A, B)
        return place(AB, 1) + place(AB, 2)

    def sandwich(self, A, X, B):
        """``A_1 X B_2``."""
        return compose(compose(place(A, 1), X), place(B, 2))

    def cross(self, A, B):
        """``A_2 B_1 + A_1 B_2`` (entry order as written)."""
        return compose(place(A, 2), place(B, 1)) + compose(place(A, 1), place(B, 2))

    def s1(self, A):
        return place(A, 1)

    def s12(self, A):
        return place(A, 1) + place(A, 2)

    def tr(self, E):
        return E.scale(self.F.trace, left=False)


@dataclass(frozen=True)
class Term:
    coeff: object  # MPoly in the preset's free symbols
    label: str
    build: Callable[[Expr], SpaceTensor]


def _v(name):
    return MPoly.var(name)


def _terms(tag: str, g: GroupData) -> list[Term]:
    N, e = g.N, g.eps
    a1, a2, a3, a6 = _v("a1"), _v("a2"), _v("a3"), _v("a6")
    b1, b2, b3, b4 = _v("b1"), _v("b2"), _v("b3"), _v("b4")
    c1, c2, c3, c6, c7 = _v("c1"), _v("c2"), _v("c3"), _v("c6"), _v("c7")
    mu, nu = _v("mu"), _v("nu")
    half = mpq(1, 2)
    invN = mpq(1, N)

    if tag == "A1i":
        return [
            Term(-invN * (2 * b2 + e * c3 + N * a2 - mu), "-(1/N)(2b2+eps c3+N a2-mu)(Om1^2+Om2^2)", lambda x: x.sq(x.O)),
            Term(a2, "a2((Om1+)^2+(Om2+)^2)", lambda x: x.sq(x.Op)),
            Term(c3, "c3 Om1+ K Om2+", lambda x: x.sandwich(x.Op, x.K, x.Op)),
            Term(b2, "b2 P((Om1+)^2+(Om2+)^2)", lambda x: compose(x.P, x.sq(x.Op))),
            Term(c6, "c6(K Om1+ - Om1+ K) trOm", lambda x: x.tr(compose(x.K, x.s1(x.Op)) - compose(x.s1(x.Op), x.K))),
        ]
    if tag == "A1ii":
        return [
            Term(-invN * (2 * b1 + e * c3 + N * a2 - nu), "-(1/N)(2b1+eps c3+N a2-nu)(Om1^2+Om2^2)", lambda x: x.sq(x.O)),
            Term(a2, "a2((Om1+)^2+(Om2+)^2)", lambda x: x.sq(x.Op)),
            Term(c3, "c3 Om1+ K Om2+", lambda x: x.sandwich(x.Op, x.K, x.Op)),
            Term(b1, "b1 P((Om1+)^2+(Om2+)^2)", lambda x: compose(x.P, x.sq(x.Op))),
            Term(-half * nu, "-(1/2)nu(~Om1^2+~Om2^2)P", lambda x: compose(x.sq(x.T), x.P)),
            Term(-half * e * nu, "-(1/2)eps nu(K(Om1^2+Om2^2)+(Om1^2+Om2^2)K)",
                 lambda x: compose(x.K, x.sq(x.O)) + compose(x.sq(x.O), x.K)),
            Term(c6, "c6(K Om1+ - Om1+ K) trOm", lambda x: x.tr(compose(x.K, x.s1(x.Op)) - compose(x.s1(x.Op), x.K))),
        ]
    if tag == "A1iii":
        return [
            Term(-invN * (2 * b2 + e * c3 - nu), "-(1/N)(2b2+eps c3-nu)((Om1+)^2+(Om2+)^2)", lambda x: x.sq(x.Op)),
            Term(c3, "c3 Om1+ K Om2+", lambda x: x.sandwich(x.Op, x.K, x.Op)),
            Term(b1, "b1 P((Om1+)^2+(Om2+)^2)", lambda x: compose(x.P, x.sq(x.Op))),
            Term(a6, "a6(~Om1+~Om2) trOm", lambda x: x.tr(x.s12(x.T))),
            Term(-3 * a6, "-3a6(Om1+Om2) trOm", lambda x: x.tr(x.s12(x.O))),
            Term(-half * e * (c6 + c7), "-(1/2)eps(c6+c7)P(Om1+ + Om2+) trOm", lambda x: x.tr(compose(x.P, x.s12(x.Op)))),
            Term(c6, "c6 K Om1+ trOm", lambda x: x.tr(compose(x.K, x.s1(x.Op)))),
            Term(c7, "c7 Om1+ K trOm", lambda x: x.tr(compose(x.s1(x.Op), x.K))),
        ]
    if tag == "A2":
        b3 = -e * (c1 + c2)
        return [
            Term(a1, "a1((Om1-)^2+(Om2-)^2)", lambda x: x.sq(x.Om)),
            Term(c3, "c3 Om1- K Om2-", lambda x: x.sandwich(x.Om, x.K, x.Om)),
            Term(-half * b3, "-(1/2)b3 P(Om1+ Om1- + Om2+ Om2-)", lambda x: compose(x.P, x.prod(x.Op, x.Om))),
            Term(b3, "b3(~Om1 P Om1 + ~Om2 P Om2)", lambda x: structure_tensor(x.F, 3, x.P)),
            Term(c1, "(-eps c1 P + c1 K)(Om1^2+Om2^2)", lambda x: compose(x.K - x.P.scale(e), x.sq(x.O))),
            Term(c1, "(~Om1^2+~Om2^2)(eps c1 P)", lambda x: compose(x.sq(x.T), x.P.scale(e))),
            Term(c2, "(~Om1^2+~Om2^2)(c2 K)", lambda x: compose(x.sq(x.T), x.K)),
            Term(a6, "a6(Om1+ + Om2+) trOm", lambda x: x.tr(x.s12(x.Op))),
            Term(c6, "((eps P + K) Om1+ + Om1+(eps P + K)) c6 trOm",
                 lambda x: x.tr(compose(x.P.scale(e) + x.K, x.s1(x.Op)) + compose(x.s1(x.Op), x.P.scale(e) + x.K))),
        ]
    if tag == "A3":
        b3 = -(N * a3 + 2 * b4)
        out = [
            Term(-a3, "-a3(Om1^2+Om2^2)", lambda x: x.sq(x.O)),
            Term(-b4, "-b4 P(Om1^2+Om2^2)", lambda x: compose(x.P, x.sq(x.O))),
            Term(c1, "c1 K(Om1^2+Om2^2)", lambda x: compose(x.K, x.sq(x.O))),
            Term(a3, "(~Om1^2+~Om2^2)a3", lambda x: x.sq(x.T)),
            Term(b4, "(~Om1^2+~Om2^2)b4 P", lambda x: compose(x.sq(x.T), x.P)),
            Term(c1, "(~Om1^2+~Om2^2) c1 K", lambda x: compose(x.sq(x.T), x.K)),
            Term(a3, "a3(Om1+ Om1- + Om2+ Om2-)", lambda x: x.prod(x.Op, x.Om)),
            Term(b4, "b4 P(Om1+ Om1- + Om2+ Om2-)", lambda x: compose(x.P, x.prod(x.Op, x.Om))),
            Term(mu, "mu(~Om2 Om1 + ~Om1 Om2)", lambda x: x.cross(x.T, x.O)),
            Term(b3, "b3 P(~Om2 Om1 + ~Om1 Om2)", lambda x: compose(x.P, x.cross(x.T, x.O))),
        ]
        for kind in "abc":
            for k in (6, 7):
                name = f"{kind}{k}"
                out.append(Term(_v(name), f"{name}-structure trOm",
                                lambda x, kind=kind, k=k: structure_tensor(x.F, k, {"a": x.I, "b": x.P, "c": x.K}[kind])))
        return out
    raise ValueError(f"unknown preset tag {tag!r}; expected one of {PRESET_TAGS}")


def preset_terms(tag: str, g: GroupData) -> list[Term]:
    return _terms(tag, g)


def preset_constraints(tag: str, g: GroupData) -> dict[str, MPoly]:
    """Relations among the free symbols that the displayed family needs in
    order to satisfy (nil) and (dd); empty when the symbols are independent."""
    N, e = g.N, g.eps
    if tag == "A1iii":
        return {"a6": MPoly()}
    if tag == "A2":
        return {"a6": _v("c6") * mpq(-4 * e, N)}
    if tag == "A3":
        # pins the trace block so that {Omega, tr Omega} = mu(~Omega - Omega)-type
        s = e * (_v("c6") + _v("c7"))
        return {"a6": (2 * _v("b6") + s) * mpq(-1, N), "a7": (2 * _v("b7") + s) * mpq(-1, N)}
    if tag not in PRESET_TAGS:
        raise ValueError(f"unknown preset tag {tag!r}; expected one of {PRESET_TAGS}")
    return {}


def _constrained_terms(tag: str, g: GroupData) -> list[Term]:
    cons = preset_constraints(tag, g)
    if not cons:
        return _terms(tag, g)
    out = []
    for t in _terms(tag, g):
        c = t.coeff.subs(cons) if isinstance(t.coeff, MPoly) else t.coeff
        out.append(Term(c, t.label, t.build))
    return out


@lru_cache(maxsize=None)
def _structure_flats(family: str, N: int):
    from .groups import build_group

    g = build_group(family, N)
    F = Forms(g)
    X = {"a": g.I(), "b": g.P(), "c": g.K0()}
    return g, [flatten_forms(structure_tensor(F, int(n[1:]), X[n[0]])) for n in PARAM_NAMES]


def match_tensor(T: SpaceTensor, g: GroupData) -> dict[str, mpq]:
    """Rational parameters whose structures sum to ``T`` (a particular
    solution when the structures are dependent).  Raises ShapeError if ``T``
    is outside the family."""
    _, basis = _structure_flats(g.family, g.N)
    target = flatten_forms(T)
    coords = sorted(set().union(*[set(b) for b in basis]) | set(target), key=repr)
    rows = [{k: b[c] for k, b in enumerate(basis) if c in b} for c in coords]
    sol, _ = solve(rows, [target.get(c, 0) for c in coords], list(range(len(basis))))
    if sol is None:
        raise ShapeError("expression is not a member of the twenty-parameter family")
    return {PARAM_NAMES[k]: v for k, v in sol.items()}


def appendix_preset(tag: str, g: GroupData) -> BracketParams:
    """Parameter assignment (symbolic in the preset's free symbols)."""
    return _preset_cached(tag, g.family, g.N)


@lru_cache(maxsize=None)
def _preset_cached(tag, family, N):
    from .groups import build_group

    g = build_group(family, N)
    x = Expr(g)
    acc: dict[str, object] = {}
    for t in _constrained_terms(tag, g):
        for name, v in match_tensor(t.build(x), g).items():
            acc[name] = acc.get(name, 0) + t.coeff * v
    return BracketParams(acc)


def preset_free_symbols(tag: str, g: GroupData) -> list[str]:
    names = set()
    for t in _constrained_terms(tag, g):
        if isinstance(t.coeff, MPoly):
            names.update(t.coeff.variables())
    return sorted(names)


def preset_expansion_tensor(tag: str, g: GroupData, point) -> SpaceTensor:
    """Sum of the preset's appendix terms at a numeric point of its free symbols."""
    x = Expr(g)
    out = SpaceTensor(g.N, (1, 2))
    for t in _constrained_terms(tag, g):
        c = t.coeff.evaluate(point) if isinstance(t.coeff, MPoly) else t.coeff
        if c:
            out = out + t.build(x).scale(c)
    return out


def random_point(names, seed, bound: int = 1 << 30) -> dict:
    rng = random.Random(seed)
    return {n: mpq(rng.randint(-bound, bound), rng.randint(1, 97)) for n in sorted(names)}


def check_expansion(tag: str, g: GroupData, seed=0) -> bool:
    """The parameter assignment reproduces the appendix term list exactly
    (compared at a random rational point of the free symbols)."""
    pt = random_point(preset_free_symbols(tag, g), seed)
    params = appendix_preset(tag, g).subs(pt)
    F = Forms(g)
    X = {"a": g.I(), "b": g.P(), "c": g.K0()}
    built = SpaceTensor(g.N, (1, 2))
    for n in PARAM_NAMES:
        c = params[n]
        if c:
            built = built + structure_tensor(F, int(n[1:]), X[n[0]]).scale(c)
    return (built - preset_expansion_tensor(tag, g, pt)).is_zero()


# ---------------------------------------------------------------------------
# shape classification of {Omega, tr Omega}


def classify_mu(mu) -> str:
    """Which of the four admissible forms a numeric mu-vector has, or ``"none"``."""
    m1, m2, m3, m4, m5, m6 = mu
    if not any(mu):
        return "iv"
    if m5 == 0 and m6 == 0 and m2 == m3 == m4 and (m1 or m2):
        return "i"
    if m5 == 0 and m6 == 0 and m1 == m2 == -m3 == -m4 and m1:
        return "ii"
    if m1 == m2 == m3 == m4 == 0 and m5 == -m6 and m5:
        return "iii"
    return "none"


def trace_bracket_shape(tag: str, g: GroupData, r=None, seed=0) -> str:
    """Classify ``{Omega, tr Omega}`` of a preset into one of the four forms.

    The mu-vector is extracted symbolically and then specialized at a random
    point, so accidental coincidences have negligible probability.
    """
    params = appendix_preset(tag, g)
    B = build_bracket(params, r, g)
    mv = mu_extract(B)
    pt = random_point(preset_free_symbols(tag, g), seed)
    vals = tuple((m.evaluate(pt) if isinstance(m, MPoly) else m) for m in mv)
    shape = classify_mu(vals)
    if shape == "none":
        raise ShapeError(f"preset {tag} has mu-vector outside the four admissible forms")
    return shape
