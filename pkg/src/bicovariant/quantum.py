"""q-deformed side: the FRT R-matrix of SO_q(N) / Sp_q(N), its projectors,
the quadratic relation sets of the bicovariant exterior algebra and
dimension probes on them.

Scalars are Laurent polynomials (:class:`LaurentQ`).  For odd SO(N) the
Weyl vector has half-integer entries, so those groups work over
``s = q**(1/2)``.  Denominators (``mu`` and ``q + 1/q``) are always cleared,
so every identity is checked as an exact polynomial identity.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .algebra import LaurentQ, lam, q_number, rational, to_modp
from .groups import GroupData, build_group
from .linalg import PRIMES, Echelon
from .tensors import SpaceTensor, compose, relabel

# ---------------------------------------------------------------------------
# helpers


def _L(x, base: str) -> LaurentQ:
    if isinstance(x, LaurentQ):
        return x.to_s() if base == "s" else x
    return LaurentQ({0: x} if x else {}, base)


def qpow(exp, base: str, coeff=1) -> LaurentQ:
    return LaurentQ.monomial(exp, coeff, base)


def identity2(N: int, base: str) -> SpaceTensor:
    return SpaceTensor.identity(N, (1, 2), one=_L(1, base))


def flip2(N: int, base: str) -> SpaceTensor:
    one = _L(1, base)
    return SpaceTensor._raw(N, (1, 2), {(i, j, j, i): one for i in range(1, N + 1) for j in range(1, N + 1)})


def evaluate_tensor(T: SpaceTensor, q0, modulus: int | None = None) -> SpaceTensor:
    def ev(v):
        if isinstance(v, LaurentQ):
            return v.evaluate(q0, modulus)
        return v % modulus if modulus else rational(v)

    out = {}
    for k, v in T.entries.items():
        x = ev(v)
        if x:
            out[k] = x
    return SpaceTensor._raw(T.N, T.spaces, out)


def weyl_vector(family: str, N: int) -> list[Fraction]:
    """``rho_i`` (antisymmetric under ``i -> N+1-i``)."""
    half = N // 2
    if family == "SO":
        top = [Fraction(N, 2) - i for i in range(1, half + 1)]
    else:
        top = [Fraction(N, 2) - i + 1 for i in range(1, half + 1)]
    mid = [Fraction(0)] if N % 2 else []
    return top + mid + [-x for x in reversed(top)]


# ---------------------------------------------------------------------------
# R-matrix


@dataclass
class RMatrixData:
    group: GroupData
    base: str
    Rhat: SpaceTensor
    K: SpaceTensor
    Cq: SpaceTensor
    Cq_inv: SpaceTensor
    nu: LaurentQ
    mu: LaurentQ
    convention: dict
    validation: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return self.group.N

    @property
    def eps(self) -> int:
        return self.group.eps

    def q(self, exp=1) -> LaurentQ:
        return qpow(exp, self.base)

    @property
    def lam(self) -> LaurentQ:
        return lam(self.base)

    @property
    def qq(self) -> LaurentQ:
        """``q + 1/q``."""
        return self.q(1) + self.q(-1)

    def projector_numerators(self) -> dict[str, SpaceTensor]:
        """``mu (q + 1/q) P^(+-)`` and ``mu P^(0) = K``; all Laurent polynomial."""
        I = identity2(self.N, self.base)
        R, K, mu, nu = self.Rhat, self.K, self.mu, self.nu
        out = {}
        for sgn, key in ((1, "+"), (-1, "-")):
            qm = self.q(-sgn)
            out[key] = (R.scale(mu * sgn) + I.scale(mu * qm)) - K.scale(qm + nu * sgn)
        out["0"] = K
        return out

    def projector_scales(self) -> dict[str, LaurentQ]:
        """``P = numerator / scale``."""
        return {"+": self.mu * self.qq, "-": self.mu * self.qq, "0": self.mu}

    def mu_pm(self) -> dict[str, tuple[LaurentQ, LaurentQ]]:
        """``mu_+-`` as (numerator, denominator)."""
        return {"+": (-(self.q(-1) + self.nu), self.mu), "-": (-(self.q(1) - self.nu), self.mu)}


def _assemble(g: GroupData, conv: dict) -> RMatrixData:
    N, e, fam = g.N, g.eps, g.family
    rho = weyl_vector(fam, N)
    base = "s" if any(x.denominator != 1 for x in rho) else "q"
    sr, sc = conv["rho_sign"], conv["metric_sign"]
    eps_i = list(g.eps_i)
    prime = lambda i: N + 1 - i
    lm = lam(base)
    ent = {}

    def add(key, val):
        v = ent.get(key)
        v = val if v is None else v + val
        if v:
            ent[key] = v
        else:
            ent.pop(key, None)

    for i in range(1, N + 1):
        for j in range(1, N + 1):
            add((i, i, j, j), qpow(int(i == j) - int(j == prime(i)), base))
    for i in range(1, N + 1):
        for j in range(1, i):
            add((i, j, j, i), lm)
            ex = sr * (rho[i - 1] - rho[j - 1])
            add((i, j, prime(i), prime(j)), qpow(ex, base, -eps_i[i - 1] * eps_i[j - 1]) * lm)
    R = SpaceTensor._raw(N, (1, 2), ent)
    Rhat = compose(flip2(N, base), R)
    Cq = SpaceTensor._raw(N, (1,), {(i, prime(i)): qpow(sc * rho[i - 1], base, eps_i[i - 1]) for i in range(1, N + 1)})
    # the inverse of an antidiagonal matrix of monomials
    Ci = {}
    for (i, j), v in Cq.entries.items():
        Ci[(j, i)] = v ** -1
    Cq_inv = SpaceTensor._raw(N, (1,), Ci)
    K = {}
    for (i1, i2), c in Cq.entries.items():
        for (a, b), d in Cq_inv.entries.items():
            j1, j2 = (a, b) if conv["lower"] == "ab" else (b, a)
            K[(i1, j1, i2, j2)] = c * d
    K = SpaceTensor._raw(N, (1, 2), K)
    nu = qpow(e - N, base, e)
    mu = _L(1, base) + q_number(N - e, base) * e
    return RMatrixData(g, base, Rhat, K, Cq, Cq_inv, nu, mu, dict(conv))


CONVENTIONS = [
    {"rho_sign": a, "metric_sign": b, "lower": c}
    for a, b, c in itertools.product((1, -1), (1, -1), ("ab", "ba"))
]


def validate_rmatrix(Rm: RMatrixData, braid: bool = True) -> dict[str, bool]:
    """Every defining identity, checked exactly in Laurent polynomials."""
    N, base = Rm.N, Rm.base
    R, K, mu, nu, lm = Rm.Rhat, Rm.K, Rm.mu, Rm.nu, Rm.lam
    I = identity2(N, base)
    RR = compose(R, R)
    RK, KR = compose(R, K), compose(K, R)
    out = {
        # R - R^{-1} = lambda (1 - K), multiplied through by R
        "w18": (RR - I - (R - RK).scale(lm)).is_zero(),
        "KR=nuK": (KR - K.scale(nu)).is_zero(),
        "RK=nuK": (RK - K.scale(nu)).is_zero(),
        "K^2=muK": (compose(K, K) - K.scale(mu)).is_zero(),
    }
    if braid:
        out["braid"] = braid_defect(R).is_zero()
    out.update(projector_identities(Rm))
    return out


def braid_defect(Rhat: SpaceTensor) -> SpaceTensor:
    R12 = Rhat
    R23 = relabel(Rhat, {1: 2, 2: 3})
    return compose(compose(R12, R23), R12) - compose(compose(R23, R12), R23)


def projector_identities(Rm: RMatrixData) -> dict[str, bool]:
    """Idempotence, orthogonality and completeness with denominators cleared."""
    A = Rm.projector_numerators()
    s = Rm.projector_scales()
    I = identity2(Rm.N, Rm.base)
    out = {}
    for k in "+-0":
        out[f"P{k} idempotent"] = (compose(A[k], A[k]) - A[k].scale(s[k])).is_zero()
    for a, b in (("+", "-"), ("+", "0"), ("-", "0")):
        out[f"P{a}P{b}=0"] = compose(A[a], A[b]).is_zero() and compose(A[b], A[a]).is_zero()
    # P+ + P- + P0 = I  times  mu (q + 1/q)
    tot = A["+"] + A["-"] + A["0"].scale(Rm.qq)
    out["complete"] = (tot - I.scale(Rm.mu * Rm.qq)).is_zero()
    return out


def ww_identities(Rm: RMatrixData) -> dict[str, bool]:
    """``(mu_+ + mu_-)/(q+1/q) = -1/mu`` and ``(q mu_+ - mu_-/q)/(q+1/q) = -nu/mu``
    with ``mu_+-`` written over the common denominator ``mu``."""
    m = Rm.mu_pm()
    (np_, _), (nm, _) = m["+"], m["-"]
    qq = Rm.qq
    return {
        "ww1": np_ + nm == -qq,
        "ww2": Rm.q(1) * np_ - Rm.q(-1) * nm == -Rm.nu * qq,
    }


def projector_ranks(Rm: RMatrixData) -> tuple[int, int, int]:
    """Traces of ``P^(+)``, ``P^(-)``, ``P^(0)`` (exact, at a sample q)."""
    q0 = 4  # a square, so it is valid for the half-integer base as well
    A = Rm.projector_numerators()
    s = Rm.projector_scales()
    out = []
    for k in "+-0":
        M = evaluate_tensor(A[k], q0)
        tr = sum((v for (i1, j1, i2, j2), v in M.entries.items() if i1 == j1 and i2 == j2), rational(0))
        out.append(tr / s[k].evaluate(q0))
    if any(x.denominator != 1 for x in out):
        raise ArithmeticError(f"non-integral projector trace {out}")
    return tuple(int(x) for x in out)


class RMatrixValidationError(ValueError):
    pass


_RM_CACHE: dict = {}


def build_rmatrix(family: str, N: int | None = None) -> RMatrixData:
    """Assemble the FRT R-matrix and calibrate conventions.

    The candidate conventions (sign of rho in R and in the quantum metric,
    index order of the lower metric in K) are tried in a fixed order; the
    first assembly passing every identity is returned.
    """
    g = family if isinstance(family, GroupData) else build_group(family, N)
    key = (g.family, g.N)
    if key in _RM_CACHE:
        return _RM_CACHE[key]
    tried = []
    for conv in CONVENTIONS:
        Rm = _assemble(g, conv)
        cheap = validate_rmatrix(Rm, braid=False)
        if not all(cheap.values()):
            tried.append((conv, [k for k, v in cheap.items() if not v]))
            continue
        full = validate_rmatrix(Rm, braid=True)
        if all(full.values()):
            Rm.validation = full
            Rm.validation.update(ww_identities(Rm))
            _RM_CACHE[key] = Rm
            return Rm
        tried.append((conv, [k for k, v in full.items() if not v]))
    raise RMatrixValidationError(f"no convention passes validation for {g.tag}: {tried}")


# ---------------------------------------------------------------------------
# relation sets


@dataclass
class RelationSet:
    """Quadratic relations as rows over ordered words ``Om^a Om^b``.

    ``rows`` maps an output index ``(i1, j1, i2, j2)`` to a dict
    ``word -> LaurentQ`` where ``word = a * N**2 + b`` for generators
    ``a, b`` (``a = (i-1) N + (j-1)``).
    """

    name: str
    N: int
    base: str
    rows: dict

    @property
    def V(self) -> int:
        return self.N * self.N

    def evaluate(self, q0, modulus: int | None = None) -> list[dict]:
        out = []
        for _, row in sorted(self.rows.items()):
            r = {}
            for w, c in row.items():
                x = c.evaluate(q0, modulus)
                if x:
                    r[w] = x
            if r:
                out.append(r)
        return out

    def union(self, other: "RelationSet", name: str | None = None) -> "RelationSet":
        rows = {("a",) + k: v for k, v in self.rows.items()}
        rows.update({("b",) + k: v for k, v in other.rows.items()})
        return RelationSet(name or f"{self.name}+{other.name}", self.N, self.base, rows)

    def scale(self, c: LaurentQ) -> "RelationSet":
        return RelationSet(self.name, self.N, self.base,
                           {k: {w: v * c for w, v in row.items() if v * c} for k, row in self.rows.items()})

    def __add__(self, other: "RelationSet") -> "RelationSet":
        rows = {k: dict(v) for k, v in self.rows.items()}
        for k, row in other.rows.items():
            d = rows.setdefault(k, {})
            for w, c in row.items():
                t = d[w] + c if w in d else c
                if t:
                    d[w] = t
                else:
                    d.pop(w, None)
        return RelationSet(self.name, self.N, self.base, {k: v for k, v in rows.items() if v})

    def export(self) -> str:
        """Plain-text rows ``((i1,j1),(i2,j2)) -> {word: laurent}``."""
        N = self.N
        lines = [f"# relation set {self.name}, N={N}, base={self.base}"]
        for key, row in sorted(self.rows.items(), key=lambda kv: repr(kv[0])):
            i1, j1, i2, j2 = key[-4:]
            terms = []
            for w in sorted(row):
                a, b = divmod(w, N * N)
                terms.append(f"O[{a // N + 1},{a % N + 1}]O[{b // N + 1},{b % N + 1}]: {row[w]}")
            lines.append(f"(({i1},{j1}),({i2},{j2})) -> " + "; ".join(terms))
        return "\n".join(lines) + "\n"

    def word_tensor(self, key) -> SpaceTensor:
        """Coefficient of each word for one relation, as a two-space tensor."""
        N = self.N
        ent = {}
        for w, c in self.rows[key].items():
            a, b = divmod(w, N * N)
            ent[(a // N + 1, a % N + 1, b // N + 1, b % N + 1)] = c
        return SpaceTensor._raw(N, (1, 2), ent)


def sandwich(N: int, base: str, terms) -> dict:
    """Rows of ``sum c * A Om' B Om' C`` (``Om' = Om_2``; ``None`` = identity).

    Entry ``(i1 i2; j1 j2)`` is
    ``A^{i1 i2}_{k1 k2} Om^{k2}_{l2} B^{k1 l2}_{m1 m2} Om^{m2}_{n2} C^{m1 n2}_{j1 j2}``.
    """
    V = N * N
    rng = range(1, N + 1)
    rows: dict = {}

    def index(T, first):
        d: dict = {}
        if T is None:
            return None
        for (a1, b1, a2, b2), v in T.entries.items():
            key = (a1, a2) if first else (b1, b2)
            d.setdefault(key, []).append((a1, b1, a2, b2, v))
        return d

    for c, A, B, Cm in terms:
        c = _L(c, base)
        B_rows = index(B, True)
        C_rows = index(Cm, True)
        if A is None:
            A_ent = [((i1, i1, i2, i2), _L(1, base)) for i1 in rng for i2 in rng]
        else:
            A_ent = list(A.entries.items())
        for (i1, k1, i2, k2), a in A_ent:
            ca = c * a
            for l2 in rng:
                if B_rows is None:
                    b_list = [(k1, k1, l2, l2, 1)]
                else:
                    b_list = B_rows.get((k1, l2), ())
                for _, m1, _, m2, b in b_list:
                    cab = ca * b if b != 1 else ca
                    for n2 in rng:
                        if C_rows is None:
                            c_list = [(m1, m1, n2, n2, 1)]
                        else:
                            c_list = C_rows.get((m1, n2), ())
                        w = ((k2 - 1) * N + l2 - 1) * V + (m2 - 1) * N + n2 - 1
                        for _, j1, _, j2, cc in c_list:
                            val = cab * cc if cc != 1 else cab
                            key = (i1, j1, i2, j2)
                            row = rows.setdefault(key, {})
                            t = row[w] + val if w in row else val
                            if t:
                                row[w] = t
                            else:
                                del row[w]
    return {k: v for k, v in rows.items() if v}


def _rs(Rm: RMatrixData, name: str, terms) -> RelationSet:
    return RelationSet(name, Rm.N, Rm.base, sandwich(Rm.N, Rm.base, terms))


def relation_X(Rm: RMatrixData, left: str, right: str) -> RelationSet:
    """``X^(ab) = P^(a) Om' R Om' P^(b)`` with cleared projector numerators."""
    A = Rm.projector_numerators()
    return _rs(Rm, f"X({left}{right})", [(1, A[left], Rm.Rhat, A[right])])


def relations_woronowicz(Rm: RMatrixData) -> RelationSet:
    """``X^(++) = X^(--) = X^(00) = 0``."""
    sets = [relation_X(Rm, a, a) for a in "+-0"]
    out = sets[0].union(sets[1]).union(sets[2], "w19c")
    return out


def relations_unique(Rm: RMatrixData) -> RelationSet:
    """The single relation equivalent to the Woronowicz relations, times ``mu``."""
    R, K, mu, nu = Rm.Rhat, Rm.K, Rm.mu, Rm.nu
    terms = [
        (mu, R, R, R),
        (mu, None, R, None),
        (-1, K, R, None),
        (-1, None, R, K),
        (-nu, K, R, R),
        (-nu, R, R, K),
    ]
    # K Om' R Om' R: A=K, B=R, C=R;  R Om' R Om' K: A=R, B=R, C=K
    return _rs(Rm, "w22", terms)


def relations_rel1(Rm: RMatrixData) -> RelationSet:
    return relation_X(Rm, "0", "+").union(relation_X(Rm, "+", "0"), "rel1")


def relations_watamura(Rm: RMatrixData) -> RelationSet:
    """``R Om' R Om' R + Om' R Om' + (nu/q - 1)/mu (K Om' R Om' + Om' R Om' K)``, times ``mu``."""
    R, K, mu, nu = Rm.Rhat, Rm.K, Rm.mu, Rm.nu
    c = nu * Rm.q(-1) - 1
    return _rs(Rm, "wat", [(mu, R, R, R), (mu, None, R, None), (c, K, R, None), (c, None, R, K)])


def weh_combination(Rm: RMatrixData, x00: str = "K") -> RelationSet:
    """``q X^(++) + X^(--)/q - (q mu_+^2 + mu_-^2/q)/(q+1/q)^2 X^(00)``.

    ``X^(+-+-)`` use the true projectors.  With ``x00="K"`` the singlet term is
    ``K Om' R Om' K``, for which the combination equals the unique relation
    divided by ``q + 1/q``; with ``x00="P0"`` it is ``P0 Om' R Om' P0`` and the
    result differs from it by a multiple of ``X^(00)``.  Rows are multiplied
    by ``mu^2 (q + 1/q)^2`` (``x00="K"``) or ``mu^4 (q + 1/q)^2`` (``"P0"``).
    """
    A = Rm.projector_numerators()
    m = Rm.mu_pm()
    npl, nmi = m["+"][0], m["-"][0]
    R = Rm.Rhat
    c00 = -(Rm.q(1) * npl * npl + Rm.q(-1) * nmi * nmi)
    if x00 == "K":
        pre = _L(1, Rm.base)
    elif x00 == "P0":
        pre = Rm.mu * Rm.mu
    else:
        raise ValueError("x00 must be 'K' or 'P0'")
    terms = [
        (Rm.q(1) * pre, A["+"], R, A["+"]),
        (Rm.q(-1) * pre, A["-"], R, A["-"]),
        (c00, A["0"], R, A["0"]),
    ]
    return _rs(Rm, "weh", terms)


def proportional(A: RelationSet, B: RelationSet) -> tuple[bool, tuple | None]:
    """Is ``A = f B`` for one scalar rational function ``f``?  Returns the
    ratio as a (numerator, denominator) pair of Laurent polynomials."""
    if set(A.rows) != set(B.rows):
        return False, None
    ref = None
    for k in sorted(A.rows):
        ra, rb = A.rows[k], B.rows[k]
        if set(ra) != set(rb):
            return False, None
        for w in ra:
            if ref is None:
                ref = (ra[w], rb[w])
                continue
            if ra[w] * ref[1] != rb[w] * ref[0]:
                return False, None
    return True, ref


# ---------------------------------------------------------------------------
# spans and dimension probes


class DegenerateSample(ValueError):
    pass


def _check_sample(Rm: RMatrixData, q0):
    q0 = rational(q0)
    if q0 == 0:
        raise DegenerateSample("q = 0")
    if Rm.mu.evaluate(q0) == 0 or Rm.qq.evaluate(q0) == 0:
        raise DegenerateSample(f"q = {q0} is a root of mu or of q + 1/q")


def _rank(rows: list[dict], modulus: int) -> int:
    ech = Echelon(modulus)
    for r in rows:
        ech.add(r)
    return ech.rank


@dataclass
class SpanComparison:
    equal: bool
    samples: list  # (q0, prime, rank A, rank B, rank A+B)

    @property
    def stable(self) -> bool:
        return len({s[2:] for s in self.samples}) == 1


def span_equal(Rm: RMatrixData, A: RelationSet, B: RelationSet, q_samples, primes=PRIMES) -> SpanComparison:
    """Row-space equality at every sample ``q`` and prime."""
    if len(set(rational(q) for q in q_samples)) < 2:
        raise ValueError("need at least two distinct q samples")
    out = []
    for q0 in q_samples:
        _check_sample(Rm, q0)
        for p in primes:
            ra, rb = A.evaluate(q0, p), B.evaluate(q0, p)
            out.append((rational(q0), p, _rank(ra, p), _rank(rb, p), _rank(ra + rb, p)))
    eq = all(a == b == ab for _, _, a, b, ab in out)
    return SpanComparison(eq, out)


def span_ranks(Rm: RMatrixData, A: RelationSet, q0, p: int = PRIMES[0]) -> int:
    _check_sample(Rm, q0)
    return _rank(A.evaluate(q0, p), p)


def quotient_dims(S: RelationSet, q0, p: int, degree: int) -> int:
    """``dim`` of the degree-``degree`` part of the quadratic algebra at ``q0`` (mod ``p``)."""
    V = S.V
    ech = Echelon(p)
    for r in S.evaluate(q0, p):
        ech.add(r)
    if degree == 2:
        return V * V - ech.rank
    if degree != 3:
        raise ValueError("degree must be 2 or 3")
    basis = ech.rows()
    big = Echelon(p)
    V2 = V * V
    for r in basis:
        for x in range(V):
            big.add({w * V + x: c for w, c in r.items()})
            big.add({x * V2 + w: c for w, c in r.items()})
    return V ** 3 - big.rank


@dataclass
class PBWReport:
    relation_set: str
    degree: int
    classical: int
    free: int
    generic: dict  # (q0, prime) -> dim
    at_one: dict  # prime -> dim
    stable: bool
    matches_q1: bool

    @property
    def dim(self) -> int | None:
        """The generic-q dimension when all samples agree."""
        vals = set(self.generic.values())
        return vals.pop() if len(vals) == 1 else None

    @property
    def dim_q1(self) -> int | None:
        vals = set(self.at_one.values())
        return vals.pop() if len(vals) == 1 else None

    @property
    def matches_classical(self) -> bool:
        return self.stable and self.dim == self.classical

    @property
    def verdict(self) -> str:
        if not self.stable:
            return "unstable across samples"
        if self.matches_q1:
            return "generic-q dimension equals the q=1 dimension (not a PBW proof)"
        return "generic-q dimension differs from the q=1 dimension: PBW fails"


def pbw_probe(Rm: RMatrixData, S: RelationSet, degree: int, q_samples=(4, 9), primes=PRIMES) -> PBWReport:
    V = S.V
    gen = {}
    for q0 in q_samples:
        _check_sample(Rm, q0)
        for p in primes:
            gen[(rational(q0), p)] = quotient_dims(S, q0, p, degree)
    one = {p: quotient_dims(S, 1, p, degree) for p in primes}
    vals = set(gen.values())
    stable = len(vals) == 1 and len(set(one.values())) == 1
    return PBWReport(
        S.name, degree, comb(V, degree), V ** degree, gen, one, stable,
        stable and vals == set(one.values()),
    )
