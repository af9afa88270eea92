"""Exact scalar rings: rationals, sparse multivariate polynomials, Laurent
polynomials in ``q`` (or ``s = q**(1/2)``), first-order hbar-jets, and
random specialization for identity testing.

Rationals are ``gmpy2.mpq``; every ring here accepts plain ``int`` and
``mpq`` operands on either side.
"""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable, Mapping

import gmpy2
from gmpy2 import mpq

#: 2**61 - 1, the default modulus for prime-field specialization.
PRIME_61 = (1 << 61) - 1

VARIABLES: tuple[str, ...] = (
    tuple(f"a{i}" for i in range(1, 8))
    + tuple(f"b{i}" for i in range(1, 8))
    + tuple(f"c{i}" for i in range(1, 8))
    + ("mu", "nu", "kappa")
)
_VAR_INDEX = {name: k for k, name in enumerate(VARIABLES)}
_BITS = 8
_MASK = (1 << _BITS) - 1


def rational(x) -> mpq:
    """Coerce ints, strings ("3/4"), Fractions and mpq to ``mpq``."""
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def is_zero(x) -> bool:
    return not x


# ---------------------------------------------------------------------------
# multivariate polynomials


def _unpack(key: int) -> list[int]:
    exps = []
    while key:
        exps.append(key & _MASK)
        key >>= _BITS
    return exps + [0] * (len(VARIABLES) - len(exps))


class MPoly:
    """Sparse polynomial in the fixed parameter names ``VARIABLES``.

    Monomials are packed into a single integer, ``_BITS`` bits per exponent,
    so multiplying monomials is integer addition.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms: dict[int, mpq] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = mpq(v)

    @classmethod
    def var(cls, name: str) -> "MPoly":
        try:
            k = _VAR_INDEX[name]
        except KeyError:
            raise ValueError(f"unknown parameter name {name!r}") from None
        return cls({1 << (_BITS * k): 1})

    @classmethod
    def const(cls, c) -> "MPoly":
        return cls({0: c})

    @classmethod
    def _raw(cls, terms: dict) -> "MPoly":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # arithmetic ----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, MPoly):
            out = dict(self.terms)
            for k, v in other.terms.items():
                s = out.get(k, 0) + v
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
            return MPoly._raw(out)
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            if not other:
                return self
            out = dict(self.terms)
            s = out.get(0, 0) + rational(other)
            if s:
                out[0] = s
            else:
                out.pop(0, None)
            return MPoly._raw(out)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return MPoly._raw({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MPoly):
            out: dict[int, mpq] = {}
            for k1, v1 in self.terms.items():
                for k2, v2 in other.terms.items():
                    k = k1 + k2
                    s = out.get(k, 0) + v1 * v2
                    if s:
                        out[k] = s
                    else:
                        out.pop(k, None)
            return MPoly._raw(out)
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            if not other:
                return MPoly._raw({})
            c = rational(other)
            return MPoly._raw({k: v * c for k, v in self.terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = MPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        c = rational(other)
        return MPoly._raw({k: v / c for k, v in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.terms == other.terms
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            if not other:
                return not self.terms
            return self.terms == {0: rational(other)}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    # inspection ----------------------------------------------------------
    def variables(self) -> list[str]:
        used = 0
        for k in self.terms:
            used |= k
        return [n for i, n in enumerate(VARIABLES) if (used >> (_BITS * i)) & _MASK]

    def degree(self) -> int:
        return max((sum(_unpack(k)) for k in self.terms), default=-1)

    def is_constant(self) -> bool:
        return all(k == 0 for k in self.terms)

    def constant(self) -> mpq:
        return self.terms.get(0, mpq(0))

    def coefficient(self, name: str) -> mpq:
        """Coefficient of the degree-one monomial ``name``."""
        return self.terms.get(1 << (_BITS * _VAR_INDEX[name]), mpq(0))

    def linear_parts(self) -> dict[str, mpq]:
        """Split an affine polynomial into ``{"": constant, name: coeff}``."""
        out: dict[str, mpq] = {}
        for k, v in self.terms.items():
            if k == 0:
                out[""] = v
                continue
            exps = _unpack(k)
            if sum(exps) != 1:
                raise ValueError("polynomial is not affine")
            out[VARIABLES[exps.index(1)]] = v
        return out

    def subs(self, values: Mapping[str, object]) -> "MPoly":
        """Substitute scalars (or MPolys) for some or all variables."""
        out = MPoly()
        for k, v in self.terms.items():
            term = MPoly._raw({0: v})
            rest = 0
            for i, e in enumerate(_unpack(k)):
                if not e:
                    continue
                name = VARIABLES[i]
                if name in values:
                    term = term * values[name] ** e
                else:
                    rest += e << (_BITS * i)
            out = out + term * MPoly._raw({rest: mpq(1)})
        return out

    def evaluate(self, values: Mapping[str, object], modulus: int | None = None):
        """Evaluate with every variable assigned; reduce mod ``modulus`` if given."""
        total = mpq(0) if modulus is None else 0
        for k, v in self.terms.items():
            t = v if modulus is None else to_modp(v, modulus)
            for i, e in enumerate(_unpack(k)):
                if e:
                    x = values[VARIABLES[i]]
                    t = t * x**e if modulus is None else (t * pow(int(x), e, modulus)) % modulus
            total = total + t if modulus is None else (total + t) % modulus
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms):
            v = self.terms[k]
            mono = "*".join(
                (VARIABLES[i] if e == 1 else f"{VARIABLES[i]}^{e}")
                for i, e in enumerate(_unpack(k))
                if e
            )
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def poly_arith(a: MPoly, b: MPoly, op: str) -> MPoly:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def symbols(names: str) -> tuple[MPoly, ...]:
    return tuple(MPoly.var(n) for n in names.replace(",", " ").split())


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentQ:
    """Laurent polynomial in ``q`` (``base="q"``) or in ``s`` with ``q = s**2``."""

    __slots__ = ("terms", "base")

    def __init__(self, terms: Mapping[int, object] | None = None, base: str = "q"):
        if base not in ("q", "s"):
            raise ValueError("base must be 'q' or 's'")
        self.base = base
        self.terms: dict[int, mpq] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[int(k)] = mpq(v)

    @classmethod
    def monomial(cls, exp, coeff=1, base: str = "q") -> "LaurentQ":
        """``coeff * q**exp``; half-integer ``exp`` needs ``base="s"``."""
        e = Fraction(exp)
        if base == "s":
            e2 = 2 * e
            if e2.denominator != 1:
                raise ValueError(f"exponent {exp} not representable in s")
            return cls({int(e2): coeff}, "s")
        if e.denominator != 1:
            raise ValueError(f"half-integer exponent {exp} requires base 's'")
        return cls({int(e): coeff}, "q")

    @classmethod
    def _raw(cls, terms, base):
        p = cls.__new__(cls)
        p.terms = terms
        p.base = base
        return p

    def _coerce(self, other):
        if isinstance(other, LaurentQ):
            if other.base == self.base:
                return other
            if self.base == "s":
                return other.to_s()
            return None
        if isinstance(other, (int, type(mpq(0)), Fraction)):
            return LaurentQ({0: other} if other else {}, self.base)
        return None

    def to_s(self) -> "LaurentQ":
        if self.base == "s":
            return self
        return LaurentQ._raw({2 * k: v for k, v in self.terms.items()}, "s")

    def __add__(self, other):
        if isinstance(other, LaurentQ) and other.base == "s" and self.base == "q":
            return self.to_s() + other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentQ._raw(out, self.base)

    __radd__ = __add__

    def __neg__(self):
        return LaurentQ._raw({k: -v for k, v in self.terms.items()}, self.base)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, LaurentQ) and other.base == "s" and self.base == "q":
            return self.to_s() * other
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out: dict[int, mpq] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = k1 + k2
                s = out.get(k, 0) + v1 * v2
                if s:
                    out[k] = s
                else:
                    out.pop(k, None)
        return LaurentQ._raw(out, self.base)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (k, v), = self.terms.items()
            return LaurentQ._raw({k * n: 1 / v ** (-n)}, self.base)
        out = LaurentQ({0: 1}, self.base)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        c = rational(other)
        return LaurentQ._raw({k: v / c for k, v in self.terms.items()}, self.base)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, LaurentQ):
            if other.base != self.base:
                return self.to_s().terms == other.to_s().terms
            return self.terms == other.terms
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.to_s().terms.items()))

    def exponent_range(self) -> tuple[int, int]:
        if not self.terms:
            return (0, 0)
        return (min(self.terms), max(self.terms))

    def evaluate(self, q0, modulus: int | None = None):
        """Exact value at ``q = q0``.

        With base ``s`` the sample must be a perfect rational square.  With
        ``modulus`` the value is returned as an element of GF(modulus).
        """
        q0 = rational(q0)
        if q0 == 0:
            raise ZeroDivisionError("Laurent polynomial evaluated at q = 0")
        x = q0
        if self.base == "s":
            x = rational_sqrt(q0)
        if modulus is None:
            return sum((v * x**k for k, v in self.terms.items()), mpq(0))
        xm = to_modp(x, modulus)
        xi = pow(xm, -1, modulus)
        total = 0
        for k, v in self.terms.items():
            total += to_modp(v, modulus) * (pow(xm, k, modulus) if k >= 0 else pow(xi, -k, modulus))
        return total % modulus

    def __repr__(self):
        if not self.terms:
            return "0"
        var = self.base
        parts = []
        for k in sorted(self.terms, reverse=True):
            v = self.terms[k]
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                parts.append(str(v))
            elif v == 1:
                parts.append(mono)
            elif v == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{v}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def rational_sqrt(x) -> mpq:
    x = rational(x)
    if x < 0:
        raise ValueError("negative sample has no rational square root")
    n, d = gmpy2.isqrt_rem(x.numerator), gmpy2.isqrt_rem(x.denominator)
    if n[1] or d[1]:
        raise ValueError(f"{x} is not a rational square; choose q0 = s0**2")
    return mpq(n[0], d[0])


def laurent_eval(p: LaurentQ, q0) -> mpq:
    return p.evaluate(q0)


def q_var(base: str = "q") -> LaurentQ:
    return LaurentQ.monomial(1, base=base)


def q_number(x: int, base: str = "q") -> LaurentQ:
    """``[x]_q = (q**x - q**-x)/(q - q**-1)`` as a Laurent polynomial."""
    sign = 1 if x >= 0 else -1
    x = abs(x)
    out = LaurentQ({}, base)
    for k in range(x):
        out = out + LaurentQ.monomial(x - 1 - 2 * k, sign, base)
    return out


def lam(base: str = "q") -> LaurentQ:
    """``lambda = q - q**-1``."""
    return LaurentQ.monomial(1, 1, base) - LaurentQ.monomial(-1, 1, base)


# ---------------------------------------------------------------------------
# first-order hbar-jets


class HJet:
    """``order0 + hbar * order1`` with products truncated at ``hbar**2``."""

    __slots__ = ("order0", "order1")

    def __init__(self, order0=0, order1=0):
        self.order0 = order0
        self.order1 = order1

    def __add__(self, other):
        if isinstance(other, HJet):
            return HJet(self.order0 + other.order0, self.order1 + other.order1)
        return HJet(self.order0 + other, self.order1)

    __radd__ = __add__

    def __neg__(self):
        return HJet(-self.order0, -self.order1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HJet):
            return HJet(
                self.order0 * other.order0,
                self.order0 * other.order1 + self.order1 * other.order0,
            )
        return HJet(self.order0 * other, self.order1 * other)

    def __rmul__(self, other):
        if isinstance(other, HJet):
            return other.__mul__(self)
        return HJet(other * self.order0, other * self.order1)

    def __bool__(self):
        return bool(self.order0) or bool(self.order1)

    def __eq__(self, other):
        if isinstance(other, HJet):
            return self.order0 == other.order0 and self.order1 == other.order1
        if isinstance(other, tuple):
            return (self.order0, self.order1) == other
        return not self.order1 and self.order0 == other

    def __hash__(self):
        return hash((self.order0, self.order1))

    def __repr__(self):
        return f"HJet({self.order0}, {self.order1})"


def hjet_of_laurent(p: LaurentQ, parametrization: str = "linear") -> HJet:
    """Expand ``p`` around ``q = 1`` to first order in hbar.

    ``parametrization`` is ``"linear"`` (q = 1 + hbar) or ``"exp"``
    (q = 1 + hbar + hbar**2/2); the first-order coefficient is the same.
    """
    if parametrization not in ("linear", "exp"):
        raise ValueError("parametrization must be 'linear' or 'exp'")
    # dq/dhbar = 1 at hbar = 0 for both; d(s)/dhbar = 1/2.
    scale = mpq(1, 2) if p.base == "s" else mpq(1)
    o0 = sum(p.terms.values(), mpq(0))
    o1 = sum((k * v for k, v in p.terms.items()), mpq(0)) * scale
    return HJet(o0, o1)


# ---------------------------------------------------------------------------
# modular helpers and random specialization


def to_modp(x, p: int) -> int:
    x = rational(x)
    num = int(x.numerator) % p
    den = int(x.denominator) % p
    if den == 0:
        raise ZeroDivisionError(f"denominator divisible by {p}")
    return num * pow(den, -1, p) % p


def random_point(names: Iterable[str], seed, prime: int | None = None, bound: int = 1 << 40) -> dict:
    """Independent uniform values for ``names``: in GF(prime), or integers in
    ``[-bound, bound]`` when ``prime`` is None."""
    rng = random.Random(seed)
    if prime is None:
        return {n: mpq(rng.randint(-bound, bound)) for n in names}
    return {n: rng.randrange(prime) for n in names}


def random_specialize(p: MPoly, seed, prime: int | None = None):
    """Evaluate ``p`` at a seeded random point of Q (or GF(prime)).

    A nonzero ``p`` of total degree ``d`` vanishes with probability at most
    ``d / prime`` (``d / (2*bound+1)`` over Q).
    """
    point = random_point(VARIABLES, seed, prime)
    return p.evaluate(point, modulus=prime)


def specialize(x, point: Mapping[str, object]):
    """Substitute a full parameter point into a scalar that may be an MPoly."""
    if isinstance(x, MPoly):
        return x.evaluate(point)
    return x
