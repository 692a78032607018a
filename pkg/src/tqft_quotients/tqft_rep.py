"""Mapping class group representations on the skein spaces of closed surfaces.

Basis vectors are admissible colorings of the ladder spine (see
:mod:`tqft_quotients.spine`), listed in lexicographic order of the color
tuple indexed by ``Spine.edges``.  Curve operators are computed by skein
fusion; a Dehn twist is the polynomial in its curve operator that sends
the color-c eigenvalue to the twist coefficient mu_c.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Sequence

from sympy import factorint

from . import exact_linalg as la
from .cyclotomic import Cyclotomic, complex_embed, galois_orbit
from .skein import (
    DomainError,
    SkeinParams,
    delta,
    global_dimension,
    is_admissible,
    loop2_eigenvalue,
    loop_eigenvalue,
    quantum_int,
    tet,
    theta,
    twist_coeff,
)
from .spine import Spine, ladder_spine

log = logging.getLogger(__name__)

Matrix = la.Matrix

CERTIFIED_GENERA = (1, 2)


class ReducibleError(RuntimeError):
    """The invariant-form equations do not have a one-dimensional solution space."""


class CertificationError(RuntimeError):
    """Interval arithmetic could not certify a sign within the precision ceiling."""


@dataclass(frozen=True)
class ColoredSpine:
    genus: int
    colors: tuple[int, ...]

    def coloring(self, spine: Spine) -> dict[str, int]:
        return dict(zip(spine.edges, self.colors))


@dataclass
class RepMatrix:
    label: str
    genus: int
    p: int
    entries: Matrix
    experimental: bool = False
    notes: dict = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.entries)

    def max_denominator(self) -> int:
        d = 1
        for row in self.entries:
            for x in row:
                d = max(d, x.den)
        return d

    def denominators_are_p_powers(self) -> bool:
        return all(set(factorint(x.den)) <= {self.p} for row in self.entries for x in row)

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "genus": self.genus,
            "p": self.p,
            "N": self.N,
            "experimental": self.experimental,
            "entries": [[x.to_json() for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, d: dict) -> "RepMatrix":
        entries = [[Cyclotomic.from_json(x) for x in row] for row in d["entries"]]
        return cls(d["label"], d["genus"], d["p"], entries, d.get("experimental", False))


@dataclass
class HermitianForm:
    """Diagonal Hermitian form; ``scale`` records how it was normalized."""

    diagonal: list[Cyclotomic]
    scale: str = "raw"

    def matrix(self) -> Matrix:
        return la.diagonal(self.diagonal)

    def ratio_to(self, other: "HermitianForm") -> Cyclotomic | None:
        """The scalar c with self = c * other, or None."""
        c = self.diagonal[0] / other.diagonal[0]
        if all(x == c * y for x, y in zip(self.diagonal, other.diagonal)):
            return c
        return None


# -- basis ---------------------------------------------------------------------


def basis(g: int, params: SkeinParams) -> list[ColoredSpine]:
    if g < 1:
        raise ValueError("genus must be >= 1")
    spine = ladder_spine(g)
    cs = params.colors
    if g == 1:
        return [ColoredSpine(1, (c,)) for c in cs]
    out = []
    # itertools.product is lexicographic in the edge order already
    for col in itertools.product(cs, repeat=len(spine.edges)):
        if all(is_admissible(params, *(col[e] for e in v)) for v in spine.vertices):
            out.append(ColoredSpine(g, col))
    return out


def _index(vectors: Sequence[ColoredSpine]) -> dict[tuple[int, ...], int]:
    return {v.colors: i for i, v in enumerate(vectors)}


# -- genus one -----------------------------------------------------------------


def genus1_matrices(params: SkeinParams) -> dict[str, RepMatrix]:
    """S and T on the solid-torus basis (core colored c)."""
    p = params.p
    cs = params.colors
    Dinv = global_dimension(params).inverse()
    S = [[quantum_int(params, (a + 1) * (b + 1)) * Dinv for b in cs] for a in cs]
    T = la.diagonal([twist_coeff(params, c) for c in cs])
    return {"S": RepMatrix("S", 1, p, S), "T": RepMatrix("T", 1, p, T)}


def genus1_anomaly(params: SkeinParams) -> Cyclotomic:
    """The scalar (S T)^3 S^-2."""
    m = genus1_matrices(params)
    S, T = m["S"].entries, m["T"].entries
    ST = la.mat_mul(S, T)
    lhs = la.mat_mul(la.mat_pow(ST, 3), la.mat_pow(S, -2))
    c = la.scalar_value(lhs)
    if c is None:
        raise AssertionError("(ST)^3 S^-2 is not scalar")
    return c


# -- curve operators -----------------------------------------------------------


def _fusion2_operator(g: int, hole, params: SkeinParams, vectors) -> Matrix:
    """Action of a 2-colored copy of a hole curve on the coloring basis."""
    p = params.p
    n = len(vectors)
    index = _index(vectors)
    zero = Cyclotomic.from_int(p, 0)
    M = [[zero] * n for _ in range(n)]
    cs = set(params.colors)
    for j, vec in enumerate(vectors):
        col = vec.colors
        options = [[k for k in (col[e] - 2, col[e], col[e] + 2) if k in cs and is_admissible(params, 2, col[e], k)]
                   for e in hole.edges]
        for ks in itertools.product(*options):
            new = list(col)
            for e, k in zip(hole.edges, ks):
                new[e] = k
            i = index.get(tuple(new))
            if i is None:
                continue
            if g == 1:
                # parallel cores fuse with multiplicity one
                coeff = Cyclotomic.from_int(p, 1)
            else:
                coeff = Cyclotomic.from_int(p, 1)
                for e, k in zip(hole.edges, ks):
                    coeff = coeff * delta(params, k) / theta(params, 2, col[e], k)
                for fv in hole.corners:
                    c_in, c_out, c_f = col[fv.edge_in], col[fv.edge_out], col[fv.third]
                    k_in, k_out = new[fv.edge_in], new[fv.edge_out]
                    coeff = coeff * tet(params, 2, c_out, c_in, c_f, k_in, k_out)
                    coeff = coeff / theta(params, k_in, k_out, c_f)
            M[i][j] = M[i][j] + coeff
    return M


def _spectral_map(params: SkeinParams, target) -> list[Cyclotomic]:
    """Interpolation coefficients sending loop2_eigenvalue(c) to target(c)."""
    nodes = [loop2_eigenvalue(params, c) for c in params.colors]
    values = [target(c) for c in params.colors]
    return la.lagrange_coefficients(nodes, values)


def _check_genus(g: int) -> bool:
    if g < 1:
        raise ValueError("genus must be >= 1")
    experimental = g not in CERTIFIED_GENERA
    if experimental:
        log.warning("genus %d is outside the certified range; results are experimental", g)
    return experimental


def _curve_data(curve: str, g: int, params: SkeinParams, vectors):
    """('diag', entries) for meridians or ('full', Z2 matrix) for hole curves."""
    spine = ladder_spine(g)
    try:
        kind, data = spine.curve(curve)
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    if kind == "meridian":
        return "diag", [v.colors[data] for v in vectors]
    return "full", _fusion2_operator(g, data, params, vectors)


def curve_operator(curve: str, g: int, params: SkeinParams) -> RepMatrix:
    """Skein multiplication by the 1-colored curve."""
    experimental = _check_genus(g)
    vectors = basis(g, params)
    kind, data = _curve_data(curve, g, params, vectors)
    if kind == "diag":
        M = la.diagonal([loop_eigenvalue(params, c) for c in data])
    else:
        coeffs = _spectral_map(params, lambda c: loop_eigenvalue(params, c))
        M = la.poly_eval(coeffs, data)
    return RepMatrix(f"Z({curve})", g, params.p, M, experimental)


def dehn_twist_matrix(curve: str, g: int, params: SkeinParams) -> RepMatrix:
    experimental = _check_genus(g)
    vectors = basis(g, params)
    kind, data = _curve_data(curve, g, params, vectors)
    if kind == "diag":
        M = la.diagonal([twist_coeff(params, c) for c in data])
    else:
        coeffs = _spectral_map(params, lambda c: twist_coeff(params, c))
        M = la.poly_eval(coeffs, data)
    return RepMatrix(f"t_{curve}", g, params.p, M, experimental)


def generators(g: int, params: SkeinParams) -> list[RepMatrix]:
    """Standard generating set: S, T in genus one, Lickorish twists otherwise."""
    if g == 1:
        m = genus1_matrices(params)
        return [m["S"], m["T"]]
    return [dehn_twist_matrix(c, g, params) for c in ladder_spine(g).curve_names()]


# -- Hermitian form ------------------------------------------------------------


def _certify_sign(x: Cyclotomic, precision: int, ceiling: int) -> int:
    prec = precision
    while prec <= ceiling:
        s = complex_embed(x, prec).real_sign()
        if s is not None:
            return s
        prec *= 2
    raise CertificationError(f"sign of {x!r} not certified below {ceiling} bits")


def hermitian_form(g: int, params: SkeinParams, precision: int = 64, ceiling: int = 1024) -> HermitianForm:
    """Diagonal invariant form D^(g-1) prod theta(v) / prod Delta(e) on the coloring basis.

    In genus one the core vectors are orthonormal.  The form is checked to
    be conjugation-fixed, nonzero and positive at the preferred embedding.
    """
    _check_genus(g)
    vectors = basis(g, params)
    p = params.p
    if g == 1:
        diag = [Cyclotomic.from_int(p, 1) for _ in vectors]
    else:
        spine = ladder_spine(g)
        Dg = global_dimension(params) ** (g - 1)
        diag = []
        for v in vectors:
            x = Dg
            for tri in spine.vertices:
                x = x * theta(params, *(v.colors[e] for e in tri))
            for c in v.colors:
                x = x / delta(params, c)
            diag.append(x)
    for x in diag:
        if x.is_zero() or x.conjugate() != x:
            raise AssertionError("form entry is zero or not real")
        if _certify_sign(x, precision, ceiling) != 1:
            raise AssertionError("form is not positive at the preferred embedding")
    return HermitianForm(diag, "raw")


def invariant_form_solve(matrices: Sequence[RepMatrix | Matrix]) -> HermitianForm:
    """Solve conj(M)^T H M = H exactly for every M.

    Diagonal generators are used first to cut down the unknown entries of
    H; the remaining linear system must have a one-dimensional kernel.
    """
    mats = [m.entries if isinstance(m, RepMatrix) else m for m in matrices]
    n = len(mats[0])
    p = mats[0][0][0].p
    # entries H_kl that survive every diagonal generator
    pairs = [(k, l) for k in range(n) for l in range(n)]
    for M in mats:
        if la.is_diagonal(M):
            pairs = [(k, l) for k, l in pairs if M[k][k].conjugate() * M[l][l] == 1]
    col = {pr: i for i, pr in enumerate(pairs)}
    one = Cyclotomic.from_int(p, 1)
    zero = Cyclotomic.from_int(p, 0)
    rows = []
    for M in mats:
        if la.is_diagonal(M):
            continue
        Mbar = [[x.conjugate() for x in row] for row in M]
        for i in range(n):
            for j in range(n):
                row = [zero] * len(pairs)
                nz = False
                for (k, l), c in col.items():
                    a = Mbar[k][i]
                    b = M[l][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    row[c] = row[c] + a * b
                    nz = True
                if (i, j) in col:
                    row[col[(i, j)]] = row[col[(i, j)]] - one
                    nz = True
                if nz and any(not x.is_zero() for x in row):
                    rows.append(row)
    if not pairs:
        raise ReducibleError("no invariant form survives the diagonal generators")
    if rows:
        kernel = la.nullspace(rows)
    else:
        kernel = [[one if c == i else zero for c in range(len(pairs))] for i in range(len(pairs))]
    if len(kernel) != 1:
        raise ReducibleError(f"invariant form space has dimension {len(kernel)}")
    sol = kernel[0]
    H = [[zero] * n for _ in range(n)]
    for (k, l), c in col.items():
        H[k][l] = sol[c]
    if not la.is_diagonal(H):
        raise ReducibleError("invariant form is not diagonal in the coloring basis")
    first = H[0][0]
    if first.is_zero():
        raise ReducibleError("first diagonal entry vanishes")
    inv = first.inverse()
    return HermitianForm([H[i][i] * inv for i in range(n)], "normalized")


# -- checks and diagnostics ----------------------------------------------------


def _entries(M) -> Matrix:
    return M.entries if isinstance(M, RepMatrix) else M


def verify_unitary(M, H: HermitianForm | Matrix) -> bool:
    A = _entries(M)
    Hm = H.matrix() if isinstance(H, HermitianForm) else H
    return la.mat_eq(la.mat_prod(la.conj_transpose(A), Hm, A), Hm)


def root_exponent(x: Cyclotomic) -> int | None:
    """k in [0, 2p) with x = zeta^k (k < p) or x = -zeta^(k-p); None otherwise."""
    for k in range(2 * x.p):
        if x == _unit_root(x.p, k):
            return k
    return None


def _unit_root(p: int, k: int) -> Cyclotomic:
    """The 2p-th root of unity indexed by k: zeta^k for k < p, -zeta^(k-p) otherwise."""
    z = Cyclotomic.zeta_power(p, k % p)
    return z if k < p else -z


def root_order(x: Cyclotomic) -> int | None:
    """Multiplicative order of x if it is a 2p-th root of unity."""
    p = x.p
    one = Cyclotomic.from_int(p, 1)
    y = x
    for n in range(1, 2 * p + 1):
        if y == one:
            return n
        y = y * x
    return None


def det_check(M) -> Cyclotomic:
    A = _entries(M)
    d = la.det(A)
    if d ** (2 * d.p) != 1:
        raise AssertionError("determinant is not a 2p-th root of unity")
    return d


def sl_normalize(M) -> tuple[Matrix, Cyclotomic]:
    """Rescale M by a 2p-th root of unity so that det = 1; returns (matrix, scalar).

    Raises ValueError when no such scalar exists.
    """
    A = _entries(M)
    p = A[0][0].p
    n = len(A)
    d = det_check(A)
    for k in range(2 * p):
        lam = _unit_root(p, k)
        if lam ** n * d == 1:
            return la.mat_scale(lam, A), lam
    raise ValueError("no root of unity rescales the matrix into SL")


def adjoint_trace(M) -> Cyclotomic:
    t = la.trace(_entries(M))
    return t * t.conjugate() - 1


@dataclass
class WordHit:
    word: str
    adjoint_trace: Cyclotomic
    orbit_size: int


def search_full_orbit_word(params: SkeinParams, max_length: int = 6) -> WordHit | None:
    """Shortest word in S, T, t (= T^-1) whose adjoint trace has a full real Galois orbit."""
    m = genus1_matrices(params)
    S, T = m["S"].entries, m["T"].entries
    letters = {"S": S, "T": T, "t": la.inverse(T)}
    target = (params.p - 1) // 2
    frontier = [("", la.identity(params.p, len(S)))]
    for _ in range(max_length):
        nxt = []
        for word, W in frontier:
            for name, L in letters.items():
                if word and {word[-1], name} in ({"T", "t"},):
                    continue
                if word.endswith("S") and name == "S":
                    continue
                w2 = word + name
                W2 = la.mat_mul(W, L)
                x = adjoint_trace(W2)
                size = len(galois_orbit(x))
                if size == target:
                    return WordHit(w2, x, size)
                nxt.append((w2, W2))
        frontier = nxt
    return None
