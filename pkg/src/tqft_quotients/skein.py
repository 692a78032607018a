"""Kauffman bracket recoupling coefficients for the SO(3) theory at A = -zeta_p^((p+1)/2).

Colors are the even integers 0, 2, ..., p-3.  Quantum integers, loop
values, theta and tetrahedron networks follow the Kauffman-Lins
conventions; all values are exact elements of Q(zeta_p).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from sympy import isprime, legendre_symbol

from .cyclotomic import Cyclotomic, complex_embed

CONVENTION = "KL-SO3/A=-zeta^((p+1)/2)/twist=(-1)^c*A^(c(c+2))"


class DomainError(ValueError):
    """Non-admissible coloring or color outside the color set."""


@dataclass(frozen=True)
class SkeinParams:
    p: int
    A: Cyclotomic = field(init=False, compare=False, repr=False)
    colors: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        p = self.p
        if not isprime(p) or p % 4 != 3:
            raise ValueError(f"p must be a prime congruent to 3 mod 4, got {p}")
        object.__setattr__(self, "A", -Cyclotomic.zeta_power(p, (p + 1) // 2))
        object.__setattr__(self, "colors", tuple(range(0, p - 2, 2)))

    @property
    def max_sum(self) -> int:
        return 2 * (self.p - 2)

    def check_color(self, c: int) -> None:
        if c not in self.colors:
            raise DomainError(f"color {c} not in {self.colors}")


def A_power(params: SkeinParams, n: int) -> Cyclotomic:
    """A**n, exact; A is a primitive 2p-th root of unity."""
    p = params.p
    n %= 2 * p
    sign = -1 if n % 2 else 1
    # A = -zeta^m with m = (p+1)/2
    return Cyclotomic.zeta_power(p, n * ((p + 1) // 2)) * sign


def is_admissible(params: SkeinParams, a: int, b: int, c: int) -> bool:
    return (
        (a + b + c) % 2 == 0
        and abs(a - b) <= c <= a + b
        and a + b + c <= params.max_sum
        and min(a, b, c) >= 0
    )


def _require_triple(params: SkeinParams, a: int, b: int, c: int) -> None:
    if not is_admissible(params, a, b, c):
        raise DomainError(f"triple ({a}, {b}, {c}) is not admissible at p={params.p}")


@lru_cache(maxsize=None)
def _qint(p: int, n: int) -> Cyclotomic:
    if n < 0:
        return -_qint(p, -n)
    # [n] = zeta^(n-1) + zeta^(n-3) + ... + zeta^(-(n-1))
    c = [0] * p
    for k in range(n):
        c[(n - 1 - 2 * k) % p] += 1
    return Cyclotomic(p, c)


def quantum_int(params: SkeinParams, n: int) -> Cyclotomic:
    """[n] = (A^{2n} - A^{-2n}) / (A^2 - A^{-2})."""
    return _qint(params.p, n)


@lru_cache(maxsize=None)
def _qfact(p: int, n: int) -> Cyclotomic:
    out = Cyclotomic.from_int(p, 1)
    for k in range(2, n + 1):
        out = out * _qint(p, k)
    return out


def quantum_factorial(params: SkeinParams, n: int) -> Cyclotomic:
    if n < 0:
        raise DomainError("negative quantum factorial")
    return _qfact(params.p, n)


def delta(params: SkeinParams, c: int) -> Cyclotomic:
    """Loop value (-1)^c [c+1]."""
    params.check_color(c)
    return _delta(params.p, c)


@lru_cache(maxsize=None)
def _delta(p: int, c: int) -> Cyclotomic:
    v = _qint(p, c + 1)
    return -v if c % 2 else v


@lru_cache(maxsize=None)
def _theta(p: int, a: int, b: int, c: int) -> Cyclotomic:
    i = (b + c - a) // 2
    j = (a + c - b) // 2
    k = (a + b - c) // 2
    num = _qfact(p, i + j + k + 1) * _qfact(p, i) * _qfact(p, j) * _qfact(p, k)
    den = _qfact(p, i + j) * _qfact(p, j + k) * _qfact(p, i + k)
    v = num / den
    return -v if (i + j + k) % 2 else v


def theta(params: SkeinParams, a: int, b: int, c: int) -> Cyclotomic:
    _require_triple(params, a, b, c)
    return _theta(params.p, a, b, c)


@lru_cache(maxsize=None)
def _tet(p: int, A: int, B: int, E: int, C: int, D: int, F: int) -> Cyclotomic:
    a = [(A + D + E) // 2, (B + C + E) // 2, (A + B + F) // 2, (C + D + F) // 2]
    b = [(B + D + E + F) // 2, (A + C + E + F) // 2, (A + B + C + D) // 2]
    lo, hi = max(a), min(b)
    inner = 1
    for bj in b:
        for ai in a:
            inner = inner * _qfact(p, bj - ai)
    outer = 1
    for x in (A, B, C, D, E, F):
        outer = outer * _qfact(p, x)
    total = Cyclotomic.from_int(p, 0)
    for s in range(lo, hi + 1):
        den = 1
        for ai in a:
            den = den * _qfact(p, s - ai)
        for bj in b:
            den = den * _qfact(p, bj - s)
        term = _qfact(p, s + 1) / den
        total = total + (-term if s % 2 else term)
    return total * inner / outer


def tet(params: SkeinParams, A: int, B: int, E: int, C: int, D: int, F: int) -> Cyclotomic:
    """Tetrahedral network Tet[A B E; C D F] with faces ADE, BCE, ABF, CDF."""
    for tri in ((A, D, E), (B, C, E), (A, B, F), (C, D, F)):
        _require_triple(params, *tri)
    return _tet(params.p, A, B, E, C, D, F)


def sixj(params: SkeinParams, a: int, b: int, i: int, c: int, d: int, j: int) -> Cyclotomic:
    """Recoupling coefficient {a b i; c d j} = Tet[a b i; c d j] Delta_i / (theta(a,d,i) theta(b,c,i))."""
    return tet(params, a, b, i, c, d, j) * delta(params, i) / (theta(params, a, d, i) * theta(params, b, c, i))


def twist_coeff(params: SkeinParams, c: int) -> Cyclotomic:
    """Twist eigenvalue mu_c = (-1)^c A^{c(c+2)}."""
    params.check_color(c)
    v = A_power(params, c * (c + 2))
    return -v if c % 2 else v


def loop_eigenvalue(params: SkeinParams, c: int) -> Cyclotomic:
    """Scalar by which a plain loop encircling a c-colored edge acts: -A^{2(c+1)} - A^{-2(c+1)}."""
    return -(A_power(params, 2 * (c + 1)) + A_power(params, -2 * (c + 1)))


def loop2_eigenvalue(params: SkeinParams, c: int) -> Cyclotomic:
    """Same for a 2-colored encircling loop: [3(c+1)] / [c+1]."""
    return quantum_int(params, 3 * (c + 1)) / quantum_int(params, c + 1)


@lru_cache(maxsize=None)
def _gauss_sum(p: int) -> Cyclotomic:
    return Cyclotomic(p, [0] + [legendre_symbol(a, p) for a in range(1, p)])


@lru_cache(maxsize=None)
def _dnorm(p: int) -> Cyclotomic:
    params = SkeinParams(p)
    d2 = Cyclotomic.from_int(p, 0)
    for c in params.colors:
        d2 = d2 + _delta(p, c) * _delta(p, c)
    z = Cyclotomic.zeta_power(p, 1)
    cand = _gauss_sum(p) / (z - z.conjugate())
    if cand * cand != d2:
        raise AssertionError("Gauss sum square root of the global dimension failed")
    if complex_embed(cand).real_sign() == -1:
        cand = -cand
    return cand


def global_dimension(params: SkeinParams) -> Cyclotomic:
    """D with D^2 = sum of Delta_c^2, the sign chosen positive at the preferred embedding."""
    return _dnorm(params.p)


def eta(params: SkeinParams) -> Cyclotomic:
    return _dnorm(params.p).inverse()


# -- rank counts --------------------------------------------------------------


def admissible_triples(params: SkeinParams) -> list[tuple[int, int, int]]:
    cs = params.colors
    return [t for t in itertools.product(cs, repeat=3) if is_admissible(params, *t)]


def count_colorings(params: SkeinParams, spine) -> int:
    """Brute-force count of admissible colorings of a spine graph."""
    cs = params.colors
    n = 0
    for coloring in itertools.product(cs, repeat=len(spine.edges)):
        if all(is_admissible(params, *(coloring[e] for e in v)) for v in spine.vertices):
            n += 1
    return n


def transfer_rank(g: int, params: SkeinParams) -> int:
    """Rank via transfer matrices along the ladder spine (see :mod:`spine`)."""
    cs = params.colors
    if g == 1:
        return len(cs)

    def N(a, b, c):
        return 1 if is_admissible(params, a, b, c) else 0

    if g == 2:
        return sum(N(x, y, z) for x in cs for y in cs for z in cs)
    states = [(t, b) for t in cs for b in cs]
    u = [sum(N(x, y, t) * N(x, y, b) for x in cs for y in cs) for t, b in states]
    M = [
        [sum(N(t, r, t2) * N(b, r, b2) for r in cs) for (t2, b2) in states]
        for (t, b) in states
    ]
    vec = u
    for _ in range(g - 3):
        vec = [sum(vec[i] * M[i][j] for i in range(len(states))) for j in range(len(states))]
    return sum(v * w for v, w in zip(vec, u))


def verlinde_rank(g: int, params: SkeinParams) -> int:
    """Dimension N_g(p) of the genus-g TQFT space."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    return transfer_rank(g, params)
