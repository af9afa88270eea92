"""Sparse exact tensors on products of matrix spaces Mat(N)^{(x)k}.

A :class:`SpaceTensor` lives on an ordered set of small-integer space labels.
An entry key is the flat tuple ``(row_s1, col_s1, row_s2, col_s2, ...)``
in increasing label order, indices running over ``1..N``.  Entries may be
any ring elements (rationals, :class:`~bicovariant.algebra.MPoly`,
Laurent polynomials, Grassmann or word polynomials); products keep the
left-to-right order of factors, which matters for odd entries.
"""
from __future__ import annotations

from collections import defaultdict
from typing import Callable, Iterable, Mapping, Sequence

from gmpy2 import mpq


class SpaceTensor:
    __slots__ = ("N", "spaces", "entries")

    def __init__(self, N: int, spaces: Iterable[int], entries: Mapping[tuple, object] | None = None):
        spaces = tuple(spaces)
        if list(spaces) != sorted(set(spaces)):
            raise ValueError(f"space labels must be distinct and sorted, got {spaces}")
        self.N = N
        self.spaces = spaces
        self.entries: dict[tuple, object] = {}
        if entries:
            width = 2 * len(spaces)
            for k, v in entries.items():
                if len(k) != width or not all(1 <= i <= N for i in k):
                    raise ValueError(f"bad entry key {k} for N={N}, spaces={spaces}")
                if v:
                    self.entries[k] = v

    @classmethod
    def _raw(cls, N, spaces, entries):
        t = cls.__new__(cls)
        t.N, t.spaces, t.entries = N, tuple(spaces), entries
        return t

    # constructors --------------------------------------------------------
    @classmethod
    def identity(cls, N: int, spaces: Sequence[int] = (1,), one=1) -> "SpaceTensor":
        spaces = tuple(sorted(spaces))
        keys = [()]
        for _ in spaces:
            keys = [k + (i, i) for k in keys for i in range(1, N + 1)]
        return cls._raw(N, spaces, {k: one for k in keys})

    @classmethod
    def from_matrix(cls, M, space: int = 1) -> "SpaceTensor":
        """One-space tensor from a nested list / array (0-based input)."""
        N = len(M)
        ent = {}
        for i in range(N):
            for j in range(N):
                if M[i][j]:
                    ent[(i + 1, j + 1)] = M[i][j]
        return cls._raw(N, (space,), ent)

    @classmethod
    def unit(cls, N: int, i: int, j: int, space: int = 1, value=1) -> "SpaceTensor":
        return cls._raw(N, (space,), {(i, j): value})

    @classmethod
    def flip(cls, N: int, s1: int = 1, s2: int = 2) -> "SpaceTensor":
        """The permutation P_{s1 s2}."""
        a, b = sorted((s1, s2))
        return cls._raw(N, (a, b), {(i, j, j, i): 1 for i in range(1, N + 1) for j in range(1, N + 1)})

    # structure -----------------------------------------------------------
    def _pos(self, s: int) -> int:
        try:
            return self.spaces.index(s)
        except ValueError:
            raise KeyError(f"space {s} not in {self.spaces}") from None

    def __getitem__(self, key):
        return self.entries.get(tuple(key), 0)

    def __iter__(self):
        return iter(self.entries.items())

    def __len__(self):
        return len(self.entries)

    def __bool__(self):
        return bool(self.entries)

    def map(self, f: Callable) -> "SpaceTensor":
        out = {}
        for k, v in self.entries.items():
            w = f(v)
            if w:
                out[k] = w
        return SpaceTensor._raw(self.N, self.spaces, out)

    # linear structure ----------------------------------------------------
    def _check(self, other: "SpaceTensor"):
        if self.N != other.N:
            raise ValueError(f"dimension mismatch: {self.N} vs {other.N}")

    def __add__(self, other):
        if isinstance(other, SpaceTensor):
            self._check(other)
            if other.spaces != self.spaces:
                spaces = tuple(sorted(set(self.spaces) | set(other.spaces)))
                return self.extend(spaces) + other.extend(spaces)
            out = dict(self.entries)
            for k, v in other.entries.items():
                s = out[k] + v if k in out else v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return SpaceTensor._raw(self.N, self.spaces, out)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return SpaceTensor._raw(self.N, self.spaces, {k: -v for k, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c, left: bool = True) -> "SpaceTensor":
        out = {}
        for k, v in self.entries.items():
            w = c * v if left else v * c
            if w:
                out[k] = w
        return SpaceTensor._raw(self.N, self.spaces, out)

    def __mul__(self, other):
        if isinstance(other, SpaceTensor):
            return compose(self, other)
        return self.scale(other, left=False)

    def __rmul__(self, other):
        return self.scale(other, left=True)

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if isinstance(other, SpaceTensor):
            return (self - other).is_zero()
        if other == 0:
            return self.is_zero()
        return NotImplemented

    __hash__ = None

    def is_zero(self) -> bool:
        return all(not v for v in self.entries.values())

    def extend(self, spaces: Sequence[int]) -> "SpaceTensor":
        """Tensor with the identity on the extra ``spaces``."""
        spaces = tuple(sorted(spaces))
        if not set(self.spaces) <= set(spaces):
            raise ValueError("extend must keep existing spaces")
        if spaces == self.spaces:
            return self
        extra = [s for s in spaces if s not in self.spaces]
        return compose(self, SpaceTensor.identity(self.N, extra))

    # the dump format used by golden files ---------------------------------
    def dump(self) -> str:
        lines = []
        for k in sorted(self.entries):
            parts = [f"{s}:({k[2 * n]},{k[2 * n + 1]})" for n, s in enumerate(self.spaces)]
            lines.append(" ".join(parts) + f" = {self.entries[k]}")
        return "\n".join(lines)

    def __repr__(self):
        return f"SpaceTensor(N={self.N}, spaces={self.spaces}, nnz={len(self.entries)})"


def compose(A: SpaceTensor, B: SpaceTensor) -> SpaceTensor:
    """Product ``A B``: matrix product in shared spaces, tensor product in the
    others.  Entry products are formed as ``a * b`` in that order."""
    if A.N != B.N:
        raise ValueError(f"dimension mismatch: {A.N} vs {B.N}")
    shared = [s for s in A.spaces if s in B.spaces]
    spaces = tuple(sorted(set(A.spaces) | set(B.spaces)))
    a_pos = {s: n for n, s in enumerate(A.spaces)}
    b_pos = {s: n for n, s in enumerate(B.spaces)}

    # index B by its row indices on shared spaces
    b_index: dict[tuple, list] = defaultdict(list)
    for kb, vb in B.entries.items():
        b_index[tuple(kb[2 * b_pos[s]] for s in shared)].append((kb, vb))

    plan = []
    for s in spaces:
        if s in a_pos and s in b_pos:
            plan.append((0, 2 * a_pos[s], 2 * b_pos[s] + 1))
        elif s in a_pos:
            plan.append((1, 2 * a_pos[s], 2 * a_pos[s] + 1))
        else:
            plan.append((2, 2 * b_pos[s], 2 * b_pos[s] + 1))
    a_cols = [2 * a_pos[s] + 1 for s in shared]

    out: dict[tuple, object] = {}
    for ka, va in A.entries.items():
        matches = b_index.get(tuple(ka[c] for c in a_cols))
        if not matches:
            continue
        for kb, vb in matches:
            key = []
            for kind, x, y in plan:
                if kind == 0:
                    key += (ka[x], kb[y])
                elif kind == 1:
                    key += (ka[x], ka[y])
                else:
                    key += (kb[x], kb[y])
            key = tuple(key)
            prod = va * vb
            if key in out:
                out[key] = out[key] + prod
            else:
                out[key] = prod
    return SpaceTensor._raw(A.N, spaces, {k: v for k, v in out.items() if v})


def commutator(A: SpaceTensor, B: SpaceTensor, anti: bool = False) -> SpaceTensor:
    """``[A, B]`` or, with ``anti=True``, ``[A, B]_+``."""
    if anti:
        return compose(A, B) + compose(B, A)
    return compose(A, B) - compose(B, A)


def partial_trace(A: SpaceTensor, spaces_to_trace: Iterable[int]) -> SpaceTensor | object:
    """Trace over the given spaces; a full trace returns the bare scalar."""
    tr = list(spaces_to_trace)
    for s in tr:
        if s not in A.spaces:
            raise KeyError(f"space {s} not in {A.spaces}")
    keep = [s for s in A.spaces if s not in tr]
    pos_tr = [A.spaces.index(s) for s in tr]
    pos_keep = [A.spaces.index(s) for s in keep]
    out: dict[tuple, object] = {}
    for k, v in A.entries.items():
        if any(k[2 * p] != k[2 * p + 1] for p in pos_tr):
            continue
        key = tuple(x for p in pos_keep for x in (k[2 * p], k[2 * p + 1]))
        out[key] = out[key] + v if key in out else v
    if not keep:
        return out.get((), 0)
    return SpaceTensor._raw(A.N, keep, {k: v for k, v in out.items() if v})


def relabel(A: SpaceTensor, mapping: Mapping[int, int]) -> SpaceTensor:
    """Rename spaces by ``mapping`` (old -> new); unmapped labels are kept."""
    new = [mapping.get(s, s) for s in A.spaces]
    if len(set(new)) != len(new):
        raise ValueError(f"label collision in relabel {dict(mapping)}")
    order = sorted(range(len(new)), key=lambda n: new[n])
    out = {}
    for k, v in A.entries.items():
        out[tuple(x for n in order for x in (k[2 * n], k[2 * n + 1]))] = v
    return SpaceTensor._raw(A.N, tuple(new[n] for n in order), out)


embed = relabel


def permute_spaces(A: SpaceTensor, perm: Mapping[int, int]) -> SpaceTensor:
    """Apply a permutation of the existing labels, e.g. ``{1: 2, 2: 1}``."""
    if sorted(perm.keys()) != sorted(perm.values()):
        raise ValueError("perm must be a permutation")
    return relabel(A, perm)


def swap(A: SpaceTensor, s1: int = 1, s2: int = 2) -> SpaceTensor:
    return permute_spaces(A, {s1: s2, s2: s1})


def transpose_space(A: SpaceTensor, s: int) -> SpaceTensor:
    """Partial transposition in space ``s`` (entries untouched)."""
    p = A._pos(s)
    out = {}
    for k, v in A.entries.items():
        k = list(k)
        k[2 * p], k[2 * p + 1] = k[2 * p + 1], k[2 * p]
        out[tuple(k)] = v
    return SpaceTensor._raw(A.N, A.spaces, out)


def conjugate_space(A: SpaceTensor, s: int, C: SpaceTensor, C_inv: SpaceTensor) -> SpaceTensor:
    """``C_s A C_s^{-1}`` for one-space ``C``."""
    return compose(compose(relabel(C, {C.spaces[0]: s}), A), relabel(C_inv, {C_inv.spaces[0]: s}))


def tilde_space(A: SpaceTensor, s: int, C: SpaceTensor, C_inv: SpaceTensor) -> SpaceTensor:
    """``C_s A^{t_s} C_s^{-1}``: the tilde operation acting in space ``s``."""
    return conjugate_space(transpose_space(A, s), s, C, C_inv)


def symmetric_part_defect(A: SpaceTensor) -> SpaceTensor:
    """``A - swap(A)`` on a two-space tensor."""
    return A - swap(A, *A.spaces)


def to_dense(A: SpaceTensor):
    """Dense nested-list matrix (rows/cols flattened lexicographically) for
    one- and two-space tensors of plain scalars."""
    N = A.N
    k = len(A.spaces)
    dim = N**k
    M = [[mpq(0)] * dim for _ in range(dim)]
    for key, v in A.entries.items():
        r = c = 0
        for n in range(k):
            r = r * N + key[2 * n] - 1
            c = c * N + key[2 * n + 1] - 1
        M[r][c] = v
    return M
