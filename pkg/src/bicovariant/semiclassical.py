"""First order in hbar (q = 1 + hbar): the classical r-matrix hidden in the
FRT R-matrix, and the graded bracket forced by a quadratic relation set
through the correspondence

    Om^a Om^b  ->  theta_a theta_b + (hbar / 2) {theta_a, theta_b} + O(hbar^2),

i.e. ordered words have the classical wedge product as antisymmetric part
and half the bracket as symmetric part.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from gmpy2 import mpq

from .algebra import LaurentQ, hjet_of_laurent
from .brackets import (
    BicovBracket,
    BracketParams,
    Forms,
    bracket_from_tensor,
    check_jacobi,
    check_nilpotency,
    constrained_poisson_check,
    gg_tensor,
    gru_generators,
    omega_minus_trace_bracket,
    r_term,
)
from .grassmann import GeneratorBracket, GrassPoly, place
from .groups import ClassicalR, GroupData, ad_invariance_check, cybe_defect, is_skew, standard_r
from .linalg import Echelon
from .quantum import RMatrixData, RelationSet, build_rmatrix, relations_watamura, relations_unique
from .tensors import SpaceTensor, compose, swap


def _jet_tensor(T: SpaceTensor, parametrization: str = "linear") -> tuple[SpaceTensor, SpaceTensor]:
    o0, o1 = {}, {}
    for k, v in T.entries.items():
        j = hjet_of_laurent(v, parametrization) if isinstance(v, LaurentQ) else None
        a, b = (j.order0, j.order1) if j is not None else (mpq(v), mpq(0))
        if a:
            o0[k] = a
        if b:
            o1[k] = b
    return SpaceTensor._raw(T.N, T.spaces, o0), SpaceTensor._raw(T.N, T.spaces, o1)


@dataclass
class SemiclassicalData:
    group: GroupData
    r_tilde: SpaceTensor
    r: SpaceTensor
    K0: SpaceTensor
    K1: SpaceTensor
    G: SpaceTensor
    checks: dict = field(default_factory=dict)
    qe_constant: object = None  # the constant c in K1 - eps K1 P = K0 r~ + c K0

    @property
    def classical_r(self) -> ClassicalR:
        return ClassicalR(self.r, "quasitriangular")


def semiclassical_expand(Rm: RMatrixData, parametrization: str = "linear") -> SemiclassicalData:
    g = Rm.group
    N, e = g.N, g.eps
    P, K0 = g.P(), g.K0()
    R0, R1 = _jet_tensor(Rm.Rhat, parametrization)
    Kq0, K1 = _jet_tensor(Rm.K, parametrization)
    rt = compose(P, R1)
    r = rt - (P - K0.scale(e))
    quoted = -e * (1 - e * N)
    # fit the constant in the first identity, then test both with it
    lhs1 = K1 - compose(K1, P).scale(e)
    lhs2 = K1 - compose(P, K1).scale(e)
    d1 = lhs1 - compose(K0, rt)
    d2 = lhs2 - compose(swap(rt), K0)
    c = None
    for k, v in K0.entries.items():
        c = d1[k] / v if k in d1.entries else mpq(0)
        break
    C = cybe_defect(r)
    checks = {
        "order0 R=P": (R0 - P).is_zero(),
        "order0 K=K0": (Kq0 - K0).is_zero(),
        "r~ CYBE": cybe_defect(rt).is_zero(),
        "qe1": (d1 - K0.scale(quoted)).is_zero(),
        "qe2": (d2 - K0.scale(quoted)).is_zero(),
        "r skew": is_skew(r),
        "C(r) ad-invariant": ad_invariance_check(C, g),
        "C(r) nonzero": not C.is_zero(),
    }
    if parametrization == "linear":
        other = semiclassical_expand(Rm, "exp")
        checks["parametrization independent"] = (other.r_tilde - rt).is_zero()
    return SemiclassicalData(g, rt, r, K0, K1, gg_tensor(g, r), checks, c)


def semiclassical_r(group: GroupData) -> SpaceTensor:
    return semiclassical_expand(build_rmatrix(group)).r


def r_scale_against_standard(Sd: SemiclassicalData):
    """``lambda`` with ``r = lambda * standard_r``, or None if not proportional."""
    s = standard_r(Sd.group).r
    lam = None
    for k, v in s.entries.items():
        lam = Sd.r[k] / v if k in Sd.r.entries else mpq(0)
        break
    return lam if lam is not None and (Sd.r - s.scale(lam)).is_zero() else None


# ---------------------------------------------------------------------------
# order-hbar extraction


def _pairs(V):
    return [(a, b) for a in range(V) for b in range(a, V)]


def _monomials(V):
    return [(1 << a) | (1 << b) for a, b in combinations(range(V), 2)]


@dataclass
class ExtractionReport:
    relation_set: str
    order0_ok: bool
    consistent: bool
    unknowns: int
    nullity: int
    bracket: GeneratorBracket | None
    rows: list = field(repr=False, default_factory=list)

    @property
    def unique(self) -> bool:
        return self.consistent and self.nullity == 0


def _wedge(a: int, b: int) -> GrassPoly:
    return GrassPoly.gen(a) * GrassPoly.gen(b)


def extraction_rows(S: RelationSet) -> tuple[bool, list[tuple[dict, GrassPoly]]]:
    """Order-hbar equations of ``S``.

    The system is block diagonal over degree-2 monomials with one shared
    coefficient matrix, so each equation is returned once as ``(coef, rhs)``:
    ``coef`` maps generator pairs ``(a, b)``, ``a <= b``, to rationals and the
    Grassmann-valued ``rhs`` carries every monomial at once.  The first
    return value says whether the order-0 part vanishes in the exterior
    algebra (a precondition for the correspondence to make sense).
    """
    V = S.V
    half = mpq(1, 2)
    order0_ok = True
    out = []
    for key in sorted(S.rows):
        coef: dict = {}
        rhs = GrassPoly()
        zero = GrassPoly()
        for w, c in S.rows[key].items():
            j = hjet_of_laurent(c)
            a, b = divmod(w, V)
            if j.order0:
                zero = zero + _wedge(a, b) * j.order0
                p = (a, b) if a <= b else (b, a)
                coef[p] = coef.get(p, 0) + half * j.order0
            if j.order1:
                rhs = rhs - _wedge(a, b) * j.order1
        if zero:
            order0_ok = False
        coef = {p: v for p, v in coef.items() if v}
        if coef or rhs:
            out.append((coef, rhs))
    return order0_ok, out


@dataclass
class BlockSolution:
    consistent: bool
    rank: int
    solution: dict  # pair -> GrassPoly, free unknowns set to 0
    pivots: dict = field(repr=False, default_factory=dict)


def block_solve(rows, pairs) -> BlockSolution:
    """Exact elimination of ``sum_p coef[p] x_p = rhs`` with Grassmann-valued
    ``x_p`` and ``rhs``; pivots are taken in the order of ``pairs``."""
    order = {p: i for i, p in enumerate(pairs)}
    piv: dict = {}
    consistent = True
    for coef, rhs in rows:
        r = {p: mpq(v) for p, v in coef.items() if v}
        b = rhs
        while True:
            hit = [c for c in r if c in piv]
            if not hit:
                break
            c = min(hit, key=order.__getitem__)
            f = r[c]
            pr, pb = piv[c]
            for k, v in pr.items():
                t = r.get(k, 0) - f * v
                if t:
                    r[k] = t
                else:
                    r.pop(k, None)
            b = b - pb * f
        if not r:
            if b:
                consistent = False
            continue
        c = min(r, key=order.__getitem__)
        inv = 1 / r[c]
        piv[c] = ({k: v * inv for k, v in r.items()}, b * inv)
    # each pivot row only holds columns after its lead: back-substitute
    x: dict = {}
    for c in sorted(piv, key=order.__getitem__, reverse=True):
        pr, pb = piv[c]
        val = pb
        for k, v in pr.items():
            if k != c and k in x:
                val = val - x[k] * v
        x[c] = val
    return BlockSolution(consistent, len(piv), {p: v for p, v in x.items() if v}, piv)


def _residual_free(rows, x) -> bool:
    for coef, rhs in rows:
        acc = -rhs
        for p, v in coef.items():
            if p in x:
                acc = acc + x[p] * v
        if acc:
            return False
    return True


def _table_from_solution(N: int, sol: dict) -> GeneratorBracket:
    tab: dict = {}
    for (a, b), v in sol.items():
        tab[(a, b)] = v
        tab[(b, a)] = v
    return GeneratorBracket(N, tab)


def extract_order_h_bracket(S: RelationSet, Sd: SemiclassicalData | None = None) -> ExtractionReport:
    """Solve the order-hbar part of ``S`` for the generator brackets.

    Unknowns are the coefficients of every degree-2 monomial in every
    ``{theta_a, theta_b}``; the nullity counts all of them.
    """
    V = S.V
    pairs, monos = _pairs(V), _monomials(V)
    ok0, rows = extraction_rows(S)
    bs = block_solve(rows, pairs)
    bracket = _table_from_solution(S.N, bs.solution) if bs.consistent else None
    return ExtractionReport(
        S.name, ok0, bs.consistent, len(pairs) * len(monos), (len(pairs) - bs.rank) * len(monos), bracket, rows
    )


def genw_rows(Sd: SemiclassicalData) -> list[tuple[dict, GrassPoly]]:
    """``(I - P0^)(B + G) - (B + G) P0^ = 0`` in the format of :func:`extraction_rows`."""
    from .grassmann import gen_pair

    g = Sd.group
    N, V = g.N, g.N * g.N
    p0 = g.K0().scale(mpq(g.eps, N))
    L = g.I() - p0

    def op(T):
        return compose(L, T) - compose(T, p0)

    cols: dict = {}
    for a, b in _pairs(V):
        ia, ib = gen_pair(N, a), gen_pair(N, b)
        E = SpaceTensor._raw(N, (1, 2), {ia + ib: mpq(1), ib + ia: mpq(1)})
        for k, v in op(E).entries.items():
            cols.setdefault(k, {})[(a, b)] = v
    GG = op(Sd.G)
    out = []
    for k in sorted(set(cols) | set(GG.entries)):
        coef = {p: v for p, v in cols.get(k, {}).items() if v}
        rhs = -GG.entries[k] if k in GG.entries else GrassPoly()
        if coef or rhs:
            out.append((coef, rhs))
    return out


def genw_nullity_oracle(g: GroupData) -> int:
    """Independent count of the undetermined brackets left by (genw).

    The kernel of ``X -> (I - P0^) X - X P0^`` consists of the two
    off-diagonal blocks relative to the rank-one ``P0^``; the exchange
    symmetry of ``{Om_1, Om_2}`` keeps the vectors in the ``eps``-eigenspace
    of the flip minus the singlet, once per block and per monomial.
    """
    N, V = g.N, g.N * g.N
    flip_eig = N * (N + 1) // 2 if g.eps == 1 else N * (N - 1) // 2
    return 2 * (flip_eig - 1) * len(_monomials(V))


def same_solution_set(rows_a, rows_b, V: int) -> bool:
    """Both systems consistent with the same homogeneous span and each
    other's particular solutions."""
    pairs = _pairs(V)
    A, B = block_solve(rows_a, pairs), block_solve(rows_b, pairs)
    if not (A.consistent and B.consistent) or A.rank != B.rank:
        return False
    ech = Echelon()
    for c, (r, _) in A.pivots.items():
        ech.add({pairs.index(p): v for p, v in r.items()})
    if not all(ech.contains({pairs.index(p): v for p, v in r.items()}) for r, _ in B.pivots.values()):
        return False
    return _residual_free(rows_b, A.solution) and _residual_free(rows_a, B.solution)


def fgf_tensor(g: GroupData, r, eps_weighted: bool = False) -> SpaceTensor:
    """``[Om1,[Om2,r]]_+ - P(Om1^2 + Om2^2) + (Om1 K Om2 + Om2 K Om1)``.

    With ``eps_weighted`` the last bracket carries a factor ``eps``, which is
    what ``-G`` reduces to modulo the (gru) ideal; the two agree for SO.
    """
    r = r.r if isinstance(r, ClassicalR) else r
    F = Forms(g)
    O1, O2 = place(F.omega, 1), place(F.omega, 2)
    K = g.K0()
    sq = place(F.sq(F.omega), 1) + place(F.sq(F.omega), 2)
    cross = compose(compose(O1, K), O2) + compose(compose(O2, K), O1)
    if eps_weighted:
        cross = cross.scale(g.eps)
    return r_term(F, r) - compose(g.P(), sq) + cross


@dataclass
class FgfReport:
    group: str
    eps_weighted: bool
    wat_order0_ok: bool
    extracted_matches: bool
    params: dict
    nilpotency_fails: bool
    jacobi_fails: bool
    minus_trace_identity: bool
    minus_leibniz_fails: bool
    poisson_mod_gru: bool
    equals_poi_mod_gru: bool

    @property
    def as_expected(self) -> bool:
        return all((self.wat_order0_ok, self.extracted_matches, self.nilpotency_fails, self.jacobi_fails,
                    self.minus_trace_identity, self.minus_leibniz_fails, self.poisson_mod_gru,
                    self.equals_poi_mod_gru))

    @property
    def failed(self) -> list[str]:
        names = ("wat_order0_ok", "extracted_matches", "nilpotency_fails", "jacobi_fails", "minus_trace_identity",
                 "minus_leibniz_fails", "poisson_mod_gru", "equals_poi_mod_gru")
        return [n for n in names if not getattr(self, n)]


def fgf_no_go(group: GroupData, eps_weighted: bool = False) -> FgfReport:
    """Extract the bracket from (wat) and run it through the bracket lab.

    ``extracted_matches`` compares against :func:`fgf_tensor` with the same
    ``eps_weighted`` flag.  The remaining checks are run on that tensor even
    when the extraction fails, so each verdict is reported separately.
    """
    from .presets import match_tensor

    Rm = build_rmatrix(group)
    Sd = semiclassical_expand(Rm)
    ex = extract_order_h_bracket(relations_watamura(Rm), Sd)
    T = fgf_tensor(group, Sd.r, eps_weighted)
    B = bracket_from_tensor(T, group)
    matches = ex.order0_ok and ex.unique and ex.bracket is not None and ex.bracket.table == B.table.table
    params = match_tensor(T - r_term(Forms(group), Sd.r), group)
    om = omega_minus_trace_bracket(B)
    cp = constrained_poisson_check(group, Sd.r, T=T)
    # (fgf) minus (-G) lies in the span of the (gru) components
    ech = Echelon()
    for u in gru_generators(group):
        if u:
            ech.add(dict(u.terms))
    D = T + Sd.G
    same = all(ech.contains(dict(v.terms)) for v in D.entries.values())
    return FgfReport(
        group.tag,
        eps_weighted,
        ex.order0_ok,
        matches,
        params,
        not check_nilpotency(B).passed,
        not check_jacobi(B, stop_at_first=True).passed,
        om.identity_holds,
        not om.leibniz_holds,
        cp.passed,
        same,
    )
