"""Counting invariant tensors ``W`` with ``W_1234 = W_2134 = -W_1243``.

``W`` lives in ``Sym^2 V (x) Lambda^2 V`` with ``V = Mat(N)`` under the
adjoint action of the group.  Two independent counts are provided:

* :func:`invariant_count` -- weight-zero vectors killed by every positive
  root vector, i.e. highest-weight vectors of weight zero, by exact rank
  modulo a prime;
* :func:`weyl_invariant_count` -- the trivial multiplicity from weight
  multiplicities alone, ``sum_w sign(w) mult(w rho - rho)`` over the Weyl
  group (signed permutations).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product

from .groups import GroupData
from .linalg import Echelon

DEFAULT_PRIME = 2_147_483_647


def _index_weights(g: GroupData) -> list[tuple]:
    """Weight of the basis vector ``e_i`` of ``C^N`` in Cartan coordinates."""
    return [tuple(H.entries.get((i, i), 0) for H in g.cartan_basis) for i in range(1, g.N + 1)]


def _gl_basis(N: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]


def _ad_matrix(X, N: int) -> dict[int, dict[int, object]]:
    """``[X, e_ij]`` as ``{source index: {target index: coefficient}}``."""
    basis = _gl_basis(N)
    pos = {b: n for n, b in enumerate(basis)}
    out: dict[int, dict] = {}
    for n, (i, j) in enumerate(basis):
        col: dict = {}
        for (k, l), v in X.entries.items():
            if l == i:  # X e_ij
                col[pos[(k, j)]] = col.get(pos[(k, j)], 0) + v
            if k == j:  # e_ij X
                col[pos[(i, l)]] = col.get(pos[(i, l)], 0) - v
        out[n] = {t: v for t, v in col.items() if v}
    return out


@dataclass
class InvariantCount:
    group: str
    ambient: int
    weight_zero: int
    rank: int
    prime: int

    @property
    def count(self) -> int:
        return self.weight_zero - self.rank


def _sym(a, b):
    return (a, b) if a <= b else (b, a)


def _act(ad, key):
    """Leibniz action on ``(a b) (x) (c ^ d)`` with ``a <= b`` and ``c < d``."""
    (a, b), (c, d) = key
    out: dict = {}

    def put(k, v):
        out[k] = out.get(k, 0) + v

    for t, v in ad[a].items():
        put((_sym(t, b), (c, d)), v)
    for t, v in ad[b].items():
        put((_sym(a, t), (c, d)), v)
    for t, v in ad[c].items():
        if t != d:
            put(((a, b), (t, d) if t < d else (d, t)), v if t < d else -v)
    for t, v in ad[d].items():
        if t != c:
            put(((a, b), (c, t) if c < t else (t, c)), v if c < t else -v)
    return {k: v for k, v in out.items() if v}


def invariant_count(g: GroupData, prime: int = DEFAULT_PRIME) -> InvariantCount:
    """Dimension of the invariants of ``Sym^2 V (x) Lambda^2 V``, ``V = Mat(N)``."""
    N, V = g.N, g.V
    iw = _index_weights(g)
    wt = [tuple(x - y for x, y in zip(iw[i - 1], iw[j - 1])) for i, j in _gl_basis(N)]
    zero = tuple(0 for _ in g.cartan_basis)

    def total(*idx):
        return tuple(sum(c) for c in zip(*(wt[n] for n in idx)))

    w0 = [((a, b), (c, d))
          for a in range(V) for b in range(a, V)
          for c in range(V) for d in range(c + 1, V)
          if total(a, b, c, d) == zero]
    ads = [_ad_matrix(X, N) for X in g.npos_basis]
    ech = Echelon(prime)
    for key in w0:
        col = {}
        for n, ad in enumerate(ads):
            for k, v in _act(ad, key).items():
                col[(n,) + k] = v
        ech.add(col)
    ambient = (V * (V + 1) // 2) * (V * (V - 1) // 2)
    return InvariantCount(g.tag, ambient, len(w0), ech.rank, prime)


def _weight_multiset(g: GroupData) -> Counter:
    iw = _index_weights(g)
    return Counter(tuple(x - y for x, y in zip(iw[i], iw[j])) for i in range(g.N) for j in range(g.N))


def _mul(a: Counter, b: Counter) -> Counter:
    out: Counter = Counter()
    for u, m in a.items():
        for v, n in b.items():
            out[tuple(x + y for x, y in zip(u, v))] += m * n
    return out


def _double(a: Counter) -> Counter:
    return Counter({tuple(2 * x for x in u): m for u, m in a.items()})


def _rho(g: GroupData) -> tuple:
    n = len(g.cartan_basis)
    if g.family == "Sp":
        return tuple(Fraction(n - k) for k in range(n))
    if g.N % 2:
        return tuple(Fraction(2 * (n - k) - 1, 2) for k in range(n))
    return tuple(Fraction(n - 1 - k) for k in range(n))


def _weyl_group(g: GroupData):
    n = len(g.cartan_basis)
    even_flips = g.family == "SO" and g.N % 2 == 0
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        for signs in product((1, -1), repeat=n):
            flips = signs.count(-1)
            if even_flips and flips % 2:
                continue
            sgn = (-1) ** inv * (1 if even_flips else (-1) ** flips)
            yield perm, signs, sgn


def weyl_trivial_multiplicity(g: GroupData, M: Counter) -> int:
    """Multiplicity of the trivial module in a representation with weights ``M``."""
    rho = _rho(g)
    total = 0
    for perm, signs, sgn in _weyl_group(g):
        w_rho = tuple(signs[k] * rho[perm[k]] for k in range(len(rho)))
        shift = tuple(a - b for a, b in zip(w_rho, rho))
        if all(x.denominator == 1 for x in shift):
            total += sgn * M.get(tuple(int(x) for x in shift), 0)
    return total


def weyl_invariant_count(g: GroupData) -> int:
    """Trivial multiplicity in ``Sym^2 V (x) Lambda^2 V`` from characters only."""
    ch = _weight_multiset(g)
    sq, sq2 = _mul(ch, ch), _double(ch)
    sym = Counter({w: (sq[w] + sq2[w]) // 2 for w in set(sq) | set(sq2)})
    alt = Counter({w: (sq[w] - sq2[w]) // 2 for w in set(sq) | set(sq2)})
    return weyl_trivial_multiplicity(g, _mul(+sym, +alt))


def structure_rank(g: GroupData) -> tuple[int, list[str]]:
    """Rank of the twenty parameter directions of the bracket family, and the
    directions that depend on earlier ones (in parameter order)."""
    from .brackets import PARAM_NAMES, basis_tables

    tabs = basis_tables(g)
    ech, dependent = Echelon(), []
    for name in PARAM_NAMES:
        row = {(pair, m): v for pair, poly in tabs[name].table.items() for m, v in poly.terms.items()}
        if not ech.add(row):
            dependent.append(name)
    return ech.rank, dependent
