"""Exact arithmetic in the cyclotomic field Q(zeta_p) and its ring of integers.

Elements are stored in the power basis 1, zeta, ..., zeta^(p-2) with integer
coefficients over a positive rational-integer denominator.  The same class
covers cyclotomic integers (denominator 1), general field elements and
members of the maximal real subfield (elements fixed by conjugation).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from mpmath.ctx_iv import MPIntervalContext
from sympy import isprime

__all__ = [
    "Cyclotomic",
    "ComplexInterval",
    "SplitPrime",
    "SplitPrimeSearchError",
    "ExceptionalPrimeError",
    "zeta",
    "conjugate",
    "galois_apply",
    "complex_embed",
    "find_split_primes",
    "reduce_mod",
    "restrict_scalars",
    "in_real_subfield",
]


def _check_prime(p: int) -> None:
    if p < 3 or p % 2 == 0 or not isprime(p):
        raise ValueError(f"p must be an odd prime, got {p}")


class Cyclotomic:
    """An element of Q(zeta_p), kept in canonical reduced form.

    ``coeffs[i]`` is the coefficient of ``zeta**i`` for ``0 <= i <= p-2``;
    the value is ``sum(coeffs[i] * zeta**i) / den``.
    """

    __slots__ = ("p", "coeffs", "den", "_hash")

    def __init__(self, p: int, coeffs: Iterable[int], den: int = 1):
        c = [int(a) for a in coeffs]
        n = len(c)
        if n > p:
            # fold an arbitrary polynomial through zeta^p = 1
            folded = [0] * p
            for i, a in enumerate(c):
                folded[i % p] += a
            c = folded
            n = p
        if n == p:
            top = c[p - 1]
            c = [a - top for a in c[: p - 1]] if top else c[: p - 1]
        elif n < p - 1:
            c = c + [0] * (p - 1 - n)
        den = int(den)
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            den = -den
            c = [-a for a in c]
        if den != 1:
            g = den
            for a in c:
                if g == 1:
                    break
                g = math.gcd(g, a)
            if g != 1:
                den //= g
                c = [a // g for a in c]
        self.p = p
        self.coeffs = tuple(c)
        self.den = den
        self._hash = None

    # -- constructors -----------------------------------------------------

    @classmethod
    def _raw(cls, p: int, coeffs: tuple, den: int) -> "Cyclotomic":
        obj = object.__new__(cls)
        obj.p = p
        obj.coeffs = coeffs
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def from_int(cls, p: int, n: int) -> "Cyclotomic":
        return cls._raw(p, (int(n),) + (0,) * (p - 2), 1)

    @classmethod
    def from_rational(cls, p: int, x) -> "Cyclotomic":
        x = Fraction(x)
        return cls(p, [x.numerator], x.denominator)

    @classmethod
    def zeta_power(cls, p: int, k: int) -> "Cyclotomic":
        c = [0] * p
        c[k % p] = 1
        return cls(p, c)

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_integral(self) -> bool:
        return self.den == 1

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_real(self) -> bool:
        return self == self.conjugate()

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.coeffs[0], self.den)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Cyclotomic":
        if isinstance(other, Cyclotomic):
            if other.p != self.p:
                raise ValueError(f"mixing Q(zeta_{self.p}) and Q(zeta_{other.p})")
            return other
        if isinstance(other, int):
            return Cyclotomic.from_int(self.p, other)
        if isinstance(other, Fraction):
            return Cyclotomic.from_rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Cyclotomic(self.p, [a + b for a, b in zip(self.coeffs, o.coeffs)], self.den)
        return Cyclotomic(
            self.p,
            [a * o.den + b * self.den for a, b in zip(self.coeffs, o.coeffs)],
            self.den * o.den,
        )

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self.p, tuple(-a for a in self.coeffs), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Cyclotomic(self.p, [a * other for a in self.coeffs], self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        acc = [0] * p
        bc = o.coeffs
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(bc):
                if b:
                    k = i + j
                    if k >= p:
                        k -= p
                    acc[k] += a * b
        return Cyclotomic(p, acc, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q(zeta_p)")
            return Cyclotomic(self.p, self.coeffs, self.den * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyclotomic.from_int(self.p, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.den == o.den and self.coeffs == o.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.coeffs, self.den))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- Galois action --------------------------------------------------------

    def galois(self, j: int) -> "Cyclotomic":
        """Image under the automorphism zeta -> zeta**j."""
        p = self.p
        j %= p
        if j == 0:
            raise ValueError(f"exponent must be coprime to p={p}")
        if j == 1:
            return self
        acc = [0] * p
        for i, a in enumerate(self.coeffs):
            acc[(i * j) % p] += a
        return Cyclotomic(p, acc, self.den)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(self.p - 1)

    def norm(self) -> Fraction:
        """Absolute norm N_{K/Q}."""
        prod = self
        for j in range(2, self.p):
            prod = prod * self.galois(j)
        return prod.to_fraction()

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_p)")
        if self.is_rational():
            return Cyclotomic.from_rational(self.p, 1 / self.to_fraction())
        others = Cyclotomic.from_int(self.p, 1)
        for j in range(2, self.p):
            others = others * self.galois(j)
        n = (self * others).to_fraction()
        return others * Cyclotomic.from_rational(self.p, 1 / n)

    # -- display / serialization ----------------------------------------------

    def __repr__(self):
        terms = []
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            mon = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mon and a == 1:
                terms.append(mon)
            elif mon and a == -1:
                terms.append("-" + mon)
            else:
                terms.append(f"{a}{'*' + mon if mon else ''}")
        body = " + ".join(terms).replace("+ -", "- ") or "0"
        if self.den != 1:
            return f"({body})/{self.den}"
        return body

    def to_json(self) -> dict:
        d = {"p": self.p, "basis": "power", "coeffs": [str(a) for a in self.coeffs]}
        if self.den != 1:
            d["den"] = str(self.den)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Cyclotomic":
        if d.get("basis") != "power":
            raise ValueError(f"unsupported basis {d.get('basis')!r}")
        p = int(d["p"])
        coeffs = [int(a) for a in d["coeffs"]]
        if len(coeffs) != p - 1:
            raise ValueError(f"expected {p - 1} coefficients, got {len(coeffs)}")
        return cls(p, coeffs, int(d.get("den", "1")))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def zeta(p: int) -> Cyclotomic:
    _check_prime(p)
    return Cyclotomic.zeta_power(p, 1)


def conjugate(x: Cyclotomic) -> Cyclotomic:
    return x.conjugate()


def galois_apply(x: Cyclotomic, j: int) -> Cyclotomic:
    if j % x.p == 0:
        raise ValueError(f"galois_apply needs j coprime to p={x.p}, got {j}")
    return x.galois(j)


def in_real_subfield(x: Cyclotomic) -> bool:
    return x.is_real()


def galois_orbit(x: Cyclotomic) -> list[Cyclotomic]:
    """Distinct images of ``x`` under Gal(Q(zeta_p)/Q)."""
    seen = []
    for j in range(1, x.p):
        y = x.galois(j)
        if y not in seen:
            seen.append(y)
    return seen


# -- complex embedding ---------------------------------------------------------


@dataclass(frozen=True)
class ComplexInterval:
    """Rectangular enclosure ``re + i*im`` with real interval components."""

    re: object
    im: object

    def contains(self, z: complex) -> bool:
        return z.real in self.re and z.imag in self.im

    def width(self) -> float:
        return float(max(self.re.delta, self.im.delta))

    def is_real(self) -> bool:
        return 0 in self.im

    def real_sign(self) -> int | None:
        """Certified sign of the real part, or None if the interval straddles 0."""
        if self.re.a > 0:
            return 1
        if self.re.b < 0:
            return -1
        return None

    def __mul__(self, other: "ComplexInterval") -> "ComplexInterval":
        return ComplexInterval(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )


def embedding_exponent(p: int) -> int:
    """zeta_p is sent to exp(2*pi*i*m/p) with m = (p+1)/2."""
    return (p + 1) // 2


def complex_embed(x: Cyclotomic, precision: int = 64) -> ComplexInterval:
    """Rigorous enclosure of the image of ``x`` in C.

    The embedding sends zeta_p to (e^{2 pi i/p})^{(p+1)/2}, the root for which
    the TQFT Hermitian form is positive definite.
    """
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    p = x.p
    m = embedding_exponent(p)
    cos_, sin_ = _root_table(p, precision)
    ctx = _interval_context(precision)
    re = ctx.mpf(0)
    im = ctx.mpf(0)
    for i, a in enumerate(x.coeffs):
        if a:
            k = (i * m) % p
            re += a * cos_[k]
            im += a * sin_[k]
    return ComplexInterval(re / x.den, im / x.den)


@lru_cache(maxsize=None)
def _interval_context(precision: int) -> MPIntervalContext:
    # one context per precision; never mutated after creation
    ctx = MPIntervalContext()
    ctx.prec = precision
    return ctx


@lru_cache(maxsize=None)
def _root_table(p: int, precision: int):
    ctx = _interval_context(precision)
    angles = [2 * ctx.pi * k / p for k in range(p)]
    return [ctx.cos(a) for a in angles], [ctx.sin(a) for a in angles]


# -- completely split primes and reduction --------------------------------------


@dataclass(frozen=True)
class SplitPrime:
    """A rational prime q = 1 (mod p) with a chosen root of exact order p in F_q."""

    p: int
    q: int
    root: int

    def __post_init__(self):
        if (self.q - 1) % self.p:
            raise ValueError(f"q={self.q} is not 1 mod p={self.p}")
        if pow(self.root, self.p, self.q) != 1 or self.root % self.q == 1:
            raise ValueError(f"{self.root} does not have order {self.p} in F_{self.q}")

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "root": self.root}


class SplitPrimeSearchError(RuntimeError):
    def __init__(self, msg: str, partial: list[SplitPrime]):
        super().__init__(msg)
        self.partial = partial


class ExceptionalPrimeError(ValueError):
    """The element's denominator vanishes modulo q."""


def _order_p_root(p: int, q: int) -> int:
    e = (q - 1) // p
    for a in range(2, q):
        c = pow(a, e, q)
        if c != 1:
            return c
    raise AssertionError(f"no element of order {p} in F_{q}")


def split_prime(p: int, q: int) -> SplitPrime:
    if not isprime(q) or q % p != 1:
        raise ValueError(f"{q} is not a prime congruent to 1 mod {p}")
    return SplitPrime(p, q, _order_p_root(p, q))


def find_split_primes(p: int, count: int, min_q: int = 2, max_q: int | None = None) -> list[SplitPrime]:
    """The first ``count`` primes q >= min_q with q = 1 (mod p)."""
    _check_prime(p)
    out: list[SplitPrime] = []
    q = max(min_q, 2)
    q += (1 - q) % p
    while len(out) < count:
        if max_q is not None and q > max_q:
            raise SplitPrimeSearchError(
                f"found {len(out)} of {count} split primes below {max_q}", out
            )
        if isprime(q):
            out.append(SplitPrime(p, q, _order_p_root(p, q)))
        q += p
    return out


def reduce_mod(x: Cyclotomic, sp: SplitPrime) -> int:
    """Image of ``x`` under Z[zeta_p] -> F_q, zeta -> sp.root."""
    if x.p != sp.p:
        raise ValueError(f"element of Q(zeta_{x.p}) reduced at a prime for p={sp.p}")
    q = sp.q
    if x.den % q == 0:
        raise ExceptionalPrimeError(f"denominator {x.den} divisible by q={q}")
    acc = 0
    for a in reversed(x.coeffs):
        acc = (acc * sp.root + a) % q
    if x.den != 1:
        acc = acc * pow(x.den, -1, q) % q
    return acc


# -- restriction of scalars K -> k ------------------------------------------------


@lru_cache(maxsize=None)
def _real_basis_data(p: int):
    z = zeta(p)
    zi = z.conjugate()
    return z, zi, z + zi, (z - zi).inverse()


def real_coordinates(z: Cyclotomic) -> tuple[Cyclotomic, Cyclotomic]:
    """Write z = a + b*zeta with a, b in the real subfield."""
    zeta_, _, _, inv_diff = _real_basis_data(z.p)
    b = (z - z.conjugate()) * inv_diff
    a = z - b * zeta_
    return a, b


def restrict_scalars(M: Sequence[Sequence[Cyclotomic]]) -> list[list[Cyclotomic]]:
    """Replace each entry a + b*zeta by the 2x2 block [[a, -b], [b, a + b*t]]."""
    n = len(M)
    if n == 0:
        return []
    t = _real_basis_data(M[0][0].p)[2]
    out = [[None] * (2 * n) for _ in range(2 * n)]
    for i, row in enumerate(M):
        for j, z in enumerate(row):
            a, b = real_coordinates(z)
            if not (a.is_real() and b.is_real()):
                raise AssertionError("real-subfield coordinates are not conjugation fixed")
            out[2 * i][2 * j] = a
            out[2 * i][2 * j + 1] = -b
            out[2 * i + 1][2 * j] = b
            out[2 * i + 1][2 * j + 1] = a + b * t
    return out
