"""Embedding finite groups into PSL(N, q).

A group H of order n acts on itself by left multiplication, giving
H -> S_n; groups given by permutations keep their own action.  A
permutation matrix has determinant equal to the sign of the permutation, so appending that sign as an extra diagonal entry lands in
SL(n+1, Z).  Reducing mod an odd prime q and passing to PSL(n+1, q) keeps
the map injective; this is checked by computing the image order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from sympy import isprime
from sympy.combinatorics import Permutation

from .finite_groups import (
    DEFAULT_SEED,
    FqMatrix,
    psl_image_order,
    psl_quotient_order,
    reduce_matrix,
    verify_surjectivity,
)

Perm = tuple[int, ...]  # images of 0..n-1

_CYCLE = re.compile(r"\(([^()]*)\)")


class InvalidGroupError(ValueError):
    """Raised with a list of axiom violations."""

    def __init__(self, report: list[str]):
        super().__init__("; ".join(report[:5]) + (" ..." if len(report) > 5 else ""))
        self.report = report


@dataclass
class FiniteGroupInput:
    """A finite group given by a multiplication table or by permutation generators."""

    name: str = "H"
    table: list[list[int]] | None = None
    permutations: list[Perm] | None = None
    degree: int | None = None
    _elements: list[Perm] | None = field(default=None, repr=False)

    @classmethod
    def from_json(cls, d: dict) -> "FiniteGroupInput":
        name = d.get("name", "H")
        if "table" in d:
            return cls(name=name, table=[list(map(int, row)) for row in d["table"]])
        if "permutations" in d:
            degree = d.get("degree")
            perms = [parse_cycles(s, degree) for s in d["permutations"]]
            n = degree or max((len(p) for p in perms), default=1)
            perms = [p + tuple(range(len(p), n)) for p in perms]
            return cls(name=name, permutations=perms, degree=n)
        raise InvalidGroupError(["input needs a 'table' or a 'permutations' field"])

    def order(self) -> int:
        if self.table is not None:
            return len(self.table)
        return len(self.elements())

    def elements(self) -> list[Perm]:
        """All group elements as permutations (only for permutation input)."""
        if self._elements is None:
            n = self.degree or 1
            ident = tuple(range(n))
            seen = {ident}
            frontier = [ident]
            gens = self.permutations or []
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = compose(g, x)
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
                frontier = nxt
            self._elements = sorted(seen)
        return self._elements

    def multiplication_table(self) -> list[list[int]]:
        if self.table is not None:
            return self.table
        els = self.elements()
        idx = {e: i for i, e in enumerate(els)}
        return [[idx[compose(a, b)] for b in els] for a in els]


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse 1-based cycle notation such as '(1 2 3)(4 5)'; '()' is the identity."""
    cycles = []
    for body in _CYCLE.findall(text):
        pts = [int(t) - 1 for t in re.split(r"[\s,]+", body.strip()) if t]
        if any(x < 0 for x in pts) or len(set(pts)) != len(pts):
            raise InvalidGroupError([f"bad cycle ({body})"])
        if pts:
            cycles.append(pts)
    if _CYCLE.sub("", text).strip():
        raise InvalidGroupError([f"cannot parse permutation {text!r}"])
    n = max([x + 1 for c in cycles for x in c] + [degree or 0, 1])
    img = list(range(n))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a] = b
    return tuple(img)


def compose(a: Perm, b: Perm) -> Perm:
    """(a*b)(i) = a(b(i)): apply b first."""
    return tuple(a[i] for i in b)


def sign(perm: Perm) -> int:
    return -1 if Permutation(list(perm)).is_odd else 1


def check_table(table: Sequence[Sequence[int]], max_assoc: int = 512) -> list[str]:
    """Group-axiom violations of a multiplication table (empty list if valid)."""
    report = []
    n = len(table)
    if n == 0:
        return ["empty table"]
    T = np.array(table, dtype=np.int64)
    if T.shape != (n, n):
        return [f"table is not square ({T.shape})"]
    if T.min() < 0 or T.max() >= n:
        return ["entries out of range"]
    ids = [e for e in range(n) if np.array_equal(T[e], np.arange(n)) and np.array_equal(T[:, e], np.arange(n))]
    if not ids:
        report.append("no two-sided identity")
    for a in range(n):
        if len(set(T[a].tolist())) != n:
            report.append(f"row {a} is not a permutation (missing inverses or cancellation)")
        if len(set(T[:, a].tolist())) != n:
            report.append(f"column {a} is not a permutation")
    if n <= max_assoc:
        for a in range(n):
            # (a b) c versus a (b c) for all b, c at once
            left = T[T[a]]  # left[b, c] = (a b) c
            right = T[a][T]  # right[b, c] = a (b c)
            bad = np.argwhere(left != right)
            for b, c in bad[:3]:
                report.append(f"associativity fails for ({a}, {b}, {c})")
            if len(report) > 20:
                break
    return report


def cayley_embed(H: FiniteGroupInput) -> list[Perm]:
    """Left-regular permutations of every element of H, on n = |H| points.

    Element i of a table acts by x -> i*x.  For permutation input the
    elements are first enumerated (sorted), then multiplied as tables.
    """
    table = H.multiplication_table()
    if H.table is not None:
        report = check_table(table)
        if report:
            raise InvalidGroupError(report)
    return [tuple(row) for row in table]


def permutation_embedding(H: FiniteGroupInput) -> list[Perm]:
    """Faithful permutation generators for H.

    Permutation input is already a faithful action on its ``degree`` points
    and is used as given; a table goes through :func:`cayley_embed`.
    """
    if H.permutations is not None:
        n = H.degree or 1
        return [p for p in H.permutations if p != tuple(range(n))] or [tuple(range(n))]
    perms = cayley_embed(H)
    return generating_subset(perms) or [perms[0]]


def generating_subset(perms: Sequence[Perm]) -> list[Perm]:
    """Greedy subset of ``perms`` generating the same group."""
    if not perms:
        return []
    n = len(perms[0])
    ident = tuple(range(n))
    gens: list[Perm] = []
    closure = {ident}
    for p in perms:
        if p in closure:
            continue
        gens.append(p)
        frontier = list(closure)
        closure = set(closure)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = compose(g, x)
                    if y not in closure:
                        closure.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


def perm_to_sl(perm: Perm) -> np.ndarray:
    """(n+1)x(n+1) integer matrix: permutation block plus the sign in the corner."""
    n = len(perm)
    M = np.zeros((n + 1, n + 1), dtype=np.int64)
    for i, j in enumerate(perm):
        M[j, i] = 1
    M[n, n] = sign(perm)
    return M


@dataclass
class InvolvementCertificate:
    H: str
    order: int
    n: int
    N: int
    q: int
    generators: list[list[list[int]]]
    image_order: int
    injective: bool
    psl_order: int
    surjection: dict
    seed: int

    def to_json(self) -> dict:
        return {
            "H": self.H,
            "order": self.order,
            "n": self.n,
            "N": self.N,
            "q": self.q,
            "generators": self.generators,
            "image_order": self.image_order,
            "injective": self.injective,
            "psl_order": str(self.psl_order),
            "surjection": self.surjection,
            "seed": self.seed,
        }


def embed_into_psl(H: FiniteGroupInput, q: int, seed: int = DEFAULT_SEED) -> InvolvementCertificate:
    if q == 2 or not isprime(q):
        raise ValueError("q must be an odd prime")
    gens = permutation_embedding(H)
    n = len(gens[0])
    N = n + 1
    mats = [FqMatrix(q, perm_to_sl(p)) for p in gens] or [FqMatrix.identity(q, N)]
    # the image is a quotient of H, so no line orbit exceeds |H|
    image = psl_image_order(mats, seed=seed, threshold=None, orbit_limit=max(H.order(), 1))
    return InvolvementCertificate(
        H=H.name,
        order=H.order(),
        n=n,
        N=N,
        q=q,
        generators=[m.tolist() for m in mats],
        image_order=image,
        injective=image == H.order(),
        psl_order=psl_quotient_order(N, q) if N >= 2 else 1,
        surjection={"provenance": "none"},
        seed=seed,
    )


SURJECTION_CITATION = (
    "existence of surjections of the mapping class group onto PSL(N, q) "
    "for infinitely many primes q; cited, not computed here"
)


def involvement_certificate(
    H: FiniteGroupInput, g: int, p: int, q: int | None = None, seed: int = DEFAULT_SEED
) -> InvolvementCertificate:
    """Embedding certificate plus the provenance of a surjection Gamma_g -> PSL(N, q).

    When g = 1 and N equals the genus-one rank at p, the reduced TQFT image is
    actually computed and its exact verdict attached.  Otherwise the
    surjection is recorded as a citation.
    """
    from .cyclotomic import find_split_primes, split_prime
    from .skein import CONVENTION, SkeinParams, verlinde_rank
    from .tqft_rep import genus1_matrices, sl_normalize

    if g < 1:
        raise ValueError("genus must be >= 1")
    params = SkeinParams(p)
    n = H.order()
    if q is None:
        q = find_split_primes(p, 1, min_q=3)[0].q
    cert = embed_into_psl(H, q, seed)
    if n == 1:
        cert.surjection = {"provenance": "trivial"}
        return cert
    if g == 1 and cert.N == verlinde_rank(1, params):
        sp = split_prime(p, q)
        m = genus1_matrices(params)
        gens = [reduce_matrix(sl_normalize(m[k])[0], sp) for k in ("S", "T")]
        sc = verify_surjectivity(gens, cert.N, q, "exact", p=p, g=1, seed=seed, convention=CONVENTION)
        cert.surjection = {"provenance": "computed", "certificate": sc.to_json()}
    else:
        cert.surjection = {"provenance": "cited", "statement": SURJECTION_CITATION, "g": g, "p": p}
    return cert
