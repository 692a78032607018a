"""Matrix groups over prime fields F_q.

Group orders come from a Schreier-Sims stabilizer chain for the action on
projective points (lines of F_q^N).  The base is the coordinate lines
followed by the all-ones line; an element fixing all of them is scalar, so
the chain ends with the cyclic group of scalars contained in the group.

Random Schreier-Sims gives a candidate chain whose order is a lower bound.
When that bound already equals |SL(N, q)| it is exact; otherwise every
Schreier generator is sifted deterministically (within a budget).
"""

from __future__ import annotations

import hashlib
import math
import random
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
from sympy import GF, Poly, factorint, symbols

DEFAULT_THRESHOLD = 10**7
DEFAULT_SEED = 20240229
MAX_Q = 1 << 25


class BudgetExceeded(RuntimeError):
    """The exact computation is above the configured size bound."""


class NotInSL(ValueError):
    pass


# -- matrices ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FqMatrix:
    q: int
    a: np.ndarray

    def __post_init__(self):
        if self.q >= MAX_Q:
            raise ValueError(f"q={self.q} too large for int64 arithmetic")
        arr = np.asarray(self.a, dtype=np.int64) % self.q
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)

    @classmethod
    def from_rows(cls, q: int, rows) -> "FqMatrix":
        return cls(q, np.array(rows, dtype=np.int64))

    @classmethod
    def identity(cls, q: int, N: int) -> "FqMatrix":
        return cls(q, np.eye(N, dtype=np.int64))

    @property
    def N(self) -> int:
        return self.a.shape[0]

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        return FqMatrix(self.q, (self.a @ other.a) % self.q)

    def __eq__(self, other) -> bool:
        return isinstance(other, FqMatrix) and self.q == other.q and np.array_equal(self.a, other.a)

    def __hash__(self):
        return hash(self.key())

    def key(self) -> bytes:
        return self.a.tobytes()

    def digest(self) -> str:
        return hashlib.sha256(f"{self.q}:{self.N}:".encode() + self.key()).hexdigest()

    def is_identity(self) -> bool:
        return np.array_equal(self.a, np.eye(self.N, dtype=np.int64))

    def scalar(self) -> int | None:
        d = self.a[0, 0]
        if np.array_equal(self.a, d * np.eye(self.N, dtype=np.int64)):
            return int(d)
        return None

    def det(self) -> int:
        return det_mod(self.a, self.q)

    def inverse(self) -> "FqMatrix":
        return FqMatrix(self.q, inv_mod(self.a, self.q))

    def transpose(self) -> "FqMatrix":
        return FqMatrix(self.q, self.a.T.copy())

    def scale(self, c: int) -> "FqMatrix":
        return FqMatrix(self.q, self.a * c)

    def power(self, n: int) -> "FqMatrix":
        if n < 0:
            return self.inverse().power(-n)
        result = FqMatrix.identity(self.q, self.N)
        base = self
        while n:
            if n & 1:
                result = result @ base
            n >>= 1
            if n:
                base = base @ base
        return result

    def tolist(self) -> list[list[int]]:
        return self.a.tolist()


def _echelon(A: np.ndarray, q: int):
    """Row-reduced echelon form mod q; returns (R, pivot columns, det factor)."""
    R = np.array(A, dtype=np.int64) % q
    rows, cols = R.shape
    pivots = []
    r = 0
    dfac = 1
    for c in range(cols):
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
            dfac = -dfac
        pv = int(R[r, c])
        dfac = dfac * pv % q
        R[r] = R[r] * pow(pv, -1, q) % q
        others = np.nonzero(R[:, c])[0]
        for i in others:
            if i != r:
                R[i] = (R[i] - R[i, c] * R[r]) % q
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots, dfac % q


def det_mod(A: np.ndarray, q: int) -> int:
    n = A.shape[0]
    _, pivots, dfac = _echelon(A, q)
    return dfac if len(pivots) == n else 0


def inv_mod(A: np.ndarray, q: int) -> np.ndarray:
    n = A.shape[0]
    aug = np.concatenate([np.asarray(A, dtype=np.int64) % q, np.eye(n, dtype=np.int64)], axis=1)
    R, pivots, _ = _echelon(aug, q)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix mod q")
    return R[:, n:].copy()


def rank_mod(A: np.ndarray, q: int) -> int:
    return len(_echelon(A, q)[1])


def nullspace_mod(A: np.ndarray, q: int) -> np.ndarray:
    """Rows form a basis of {x : A x = 0}."""
    R, pivots, _ = _echelon(A, q)
    n = A.shape[1]
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(pivots):
            out[t, c] = (-R[i, f]) % q
    return out


def spin(vectors: np.ndarray, gens: Sequence[FqMatrix], q: int) -> np.ndarray:
    """Echelon basis of the smallest gens-invariant subspace containing the rows of ``vectors``."""
    basis = _echelon(np.atleast_2d(vectors), q)[0]
    basis = basis[np.any(basis != 0, axis=1)]
    queue = list(basis)
    while queue:
        v = queue.pop()
        for g in gens:
            w = (g.a @ v) % q
            trial = np.vstack([basis, w])
            if rank_mod(trial, q) > basis.shape[0]:
                basis = _echelon(trial, q)[0]
                basis = basis[np.any(basis != 0, axis=1)]
                queue.append(w)
                if basis.shape[0] == g.N:
                    return basis
    return basis


# -- classical orders ----------------------------------------------------------


def sl_order(N: int, q: int) -> int:
    if N < 2:
        raise ValueError("N must be >= 2")
    out = q ** (N * (N - 1) // 2)
    for i in range(2, N + 1):
        out *= q**i - 1
    return out


def psl_quotient_order(N: int, q: int) -> int:
    return sl_order(N, q) // math.gcd(N, q - 1)


def _scalar_roots(N: int, q: int) -> list[int]:
    return sorted(x for x in range(1, q) if pow(x, N, q) == 1)


def project_to_psl(gens: Iterable[FqMatrix]) -> list[FqMatrix]:
    """Canonical representative of each coset M * Z(SL(N, q)).

    Among the scalar multiples lambda*M with lambda^N = 1 the one whose first
    nonzero entry of the first row is smallest is chosen.
    """
    out = []
    for g in gens:
        roots = _scalar_roots(g.N, g.q)
        row = g.a[0]
        j = int(np.nonzero(row)[0][0])
        best = min(roots, key=lambda lam: lam * int(row[j]) % g.q)
        out.append(g.scale(best))
    return out


# -- orbits and Schreier-Sims --------------------------------------------------


def normalize_line(v: np.ndarray, q: int) -> bytes:
    nz = np.nonzero(v)[0]
    lead = int(v[nz[0]])
    w = v * pow(lead, -1, q) % q
    return w.tobytes()


def _point(key: bytes) -> np.ndarray:
    return np.frombuffer(key, dtype=np.int64)


@dataclass
class _Level:
    base: bytes
    gens: list[FqMatrix]
    transversal: dict[bytes, FqMatrix] = field(default_factory=dict)
    inverses: dict[bytes, FqMatrix] = field(default_factory=dict)

    def rebuild(self, q: int, N: int, limit: int) -> None:
        ident = FqMatrix.identity(q, N)
        self.transversal = {self.base: ident}
        self.inverses = {self.base: ident}
        gen_inv = [s.inverse() for s in self.gens]
        queue = deque([self.base])
        while queue:
            x = queue.popleft()
            ux = self.transversal[x]
            xv = _point(x)
            for s, s_inv in zip(self.gens, gen_inv):
                y = normalize_line((s.a @ xv) % q, q)
                if y not in self.transversal:
                    self.transversal[y] = s @ ux
                    self.inverses[y] = self.inverses[x] @ s_inv
                    if len(self.transversal) > limit:
                        raise BudgetExceeded("orbit larger than the configured limit")
                    queue.append(y)


@dataclass
class StabilizerChain:
    q: int
    N: int
    levels: list[_Level]
    scalar_order: int  # order of the group of scalar matrices contained in G
    verified: bool = False

    @property
    def orbit_lengths(self) -> list[int]:
        return [len(lv.transversal) for lv in self.levels]

    def order(self) -> int:
        return math.prod(self.orbit_lengths) * self.scalar_order

    def projective_order(self) -> int:
        return math.prod(self.orbit_lengths)


def _base_points(N: int, q: int) -> list[bytes]:
    pts = []
    for i in range(N):
        e = np.zeros(N, dtype=np.int64)
        e[i] = 1
        pts.append(e.tobytes())
    pts.append(np.ones(N, dtype=np.int64).tobytes())
    return pts


def _scalar_element_order(c: int, q: int) -> int:
    n = q - 1
    for r in factorint(q - 1):
        while n % r == 0 and pow(c, n // r, q) == 1:
            n //= r
    return n


class _Chain:
    def __init__(self, N: int, q: int, limit: int):
        self.N, self.q, self.limit = N, q, limit
        self.levels = [_Level(b, []) for b in _base_points(N, q)]
        for lv in self.levels:
            lv.rebuild(q, N, limit)
        self.scalar_order = 1

    def sift(self, g: FqMatrix) -> tuple[FqMatrix, int]:
        """Residue after sifting and the level where it dropped out (len(levels) if it got through)."""
        q = self.q
        for i, lv in enumerate(self.levels):
            x = normalize_line((g.a @ _point(lv.base)) % q, q)
            u_inv = lv.inverses.get(x)
            if u_inv is None:
                return g, i
            g = u_inv @ g
        return g, len(self.levels)

    def add(self, residue: FqMatrix, level: int) -> bool:
        """Record a nontrivial sift residue; True if the chain changed."""
        if level == len(self.levels):
            c = residue.scalar()
            if c is None:
                raise AssertionError("element fixing the base is not scalar")
            if c == 1:
                return False
            new = math.lcm(self.scalar_order, _scalar_element_order(c, self.q))
            changed = new != self.scalar_order
            self.scalar_order = new
            return changed
        for j in range(level + 1):
            if residue not in self.levels[j].gens:
                self.levels[j].gens.append(residue)
                self.levels[j].rebuild(self.q, self.N, self.limit)
        return True

    def sift_and_add(self, g: FqMatrix) -> bool:
        residue, level = self.sift(g)
        if level == len(self.levels) and residue.is_identity():
            return False
        return self.add(residue, level)


class _ProductReplacement:
    def __init__(self, gens: Sequence[FqMatrix], rng: random.Random, slots: int = 10, burn: int = 50):
        self.rng = rng
        pool = list(gens)
        while len(pool) < slots:
            pool.append(gens[len(pool) % len(gens)])
        self.pool = pool
        self.acc = FqMatrix.identity(gens[0].q, gens[0].N)
        for _ in range(burn):
            self.next()

    def next(self) -> FqMatrix:
        i, j = self.rng.sample(range(len(self.pool)), 2)
        if self.rng.random() < 0.5:
            self.pool[i] = self.pool[i] @ self.pool[j]
        else:
            self.pool[i] = self.pool[j] @ self.pool[i]
        self.acc = self.acc @ self.pool[i]
        return self.acc


def _check_gens(gens: Sequence[FqMatrix]) -> tuple[int, int]:
    if not gens:
        raise ValueError("need at least one generator")
    q, N = gens[0].q, gens[0].N
    for g in gens:
        if g.q != q or g.N != N:
            raise ValueError("generators must share q and N")
        if g.det() == 0:
            raise ValueError("generator is singular")
    return q, N


def stabilizer_chain(
    gens: Sequence[FqMatrix],
    threshold: int | None = DEFAULT_THRESHOLD,
    seed: int = DEFAULT_SEED,
    budget: int = 2_000_000,
    target: int | None = None,
    orbit_limit: int | None = None,
) -> StabilizerChain:
    """Stabilizer chain of <gens> acting on lines, exact unless the budget runs out.

    ``threshold`` bounds the worst-case orbit q^(N-1); pass None together with
    ``orbit_limit`` when the group is known to be small (e.g. a finite image
    of known order) so large N stays feasible.
    """
    q, N = _check_gens(gens)
    if threshold is not None and q ** (N - 1) > threshold:
        raise BudgetExceeded(
            f"orbit bound q^(N-1) = {q}^{N - 1} exceeds {threshold}; use evidence mode"
        )
    limit = (q**N - 1) // (q - 1)
    if orbit_limit is not None:
        limit = min(limit, orbit_limit)
    chain = _Chain(N, q, limit)
    for g in gens:
        chain.sift_and_add(g)

    # random phase: stop after 40 consecutive trivial sifts
    rng = random.Random(seed)
    pr = _ProductReplacement(list(gens), rng)
    quiet = 0
    while quiet < 40:
        quiet = 0 if chain.sift_and_add(pr.next()) else quiet + 1

    def current():
        return StabilizerChain(q, N, chain.levels, chain.scalar_order)

    if target is not None and current().order() == target:
        # the order of <gens> divides target and is at least the chain order
        out = current()
        out.verified = True
        return out

    # deterministic phase: every Schreier generator must sift to the identity
    work = 0
    changed = True
    while changed:
        changed = False
        for i in reversed(range(len(chain.levels))):
            lv = chain.levels[i]
            for x, ux in list(lv.transversal.items()):
                xv = _point(x)
                for s in list(lv.gens):
                    y = normalize_line((s.a @ xv) % q, q)
                    sg = lv.inverses[y] @ s @ ux
                    work += 1
                    if work > budget:
                        raise BudgetExceeded("Schreier generator verification budget exhausted")
                    residue, level = chain.sift(sg)
                    if level == len(chain.levels) and residue.is_identity():
                        continue
                    if chain.add(residue, level):
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    out = current()
    out.verified = True
    return out


def group_order(gens: Sequence[FqMatrix], budget: int = 2_000_000, threshold: int = DEFAULT_THRESHOLD,
                seed: int = DEFAULT_SEED) -> int:
    """Exact order of the group generated by ``gens``."""
    q, N = _check_gens(gens)
    target = sl_order(N, q) if all(g.det() == 1 for g in gens) else None
    return stabilizer_chain(gens, threshold, seed, budget, target).order()


def psl_image_order(gens: Sequence[FqMatrix], **kw) -> int:
    """Order of the image of <gens> in PGL(N, q) (equal to the PSL image for SL inputs)."""
    q, N = _check_gens(gens)
    target = sl_order(N, q) if all(g.det() == 1 for g in gens) else None
    return stabilizer_chain(gens, target=target, **kw).projective_order()


def bfs_closure(gens: Sequence[FqMatrix], limit: int = 10**5) -> set[bytes]:
    """All elements of <gens> by breadth-first closure (independent oracle)."""
    q, N = _check_gens(gens)
    ident = FqMatrix.identity(q, N)
    seen = {ident.key()}
    queue = deque([ident])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x @ g
            k = y.key()
            if k not in seen:
                seen.add(k)
                if len(seen) > limit:
                    raise BudgetExceeded("closure exceeds limit")
                queue.append(y)
    return seen


# -- element orders ------------------------------------------------------------


@lru_cache(maxsize=None)
def _gl_exponent(N: int, q: int) -> tuple[int, dict[int, int]]:
    """Exponent of GL(N, q) and its factorization.

    Every element has order dividing q^k * lcm(q^i - 1, i <= N) where q^k is
    the least power of q that is at least N (the unipotent part).
    """
    k = 0
    while q**k < N:
        k += 1
    fac: dict[int, int] = {q: k} if k else {}
    for i in range(1, N + 1):
        for r, e in factorint(q**i - 1).items():
            fac[r] = max(fac.get(r, 0), e)
    return math.prod(r**e for r, e in fac.items()), fac


def _pow_raw(a: np.ndarray, n: int, q: int) -> np.ndarray:
    result = np.eye(a.shape[0], dtype=np.int64)
    base = a
    while n:
        if n & 1:
            result = (result @ base) % q
        n >>= 1
        if n:
            base = (base @ base) % q
    return result


def _order_with(g: FqMatrix, trivial) -> int:
    """Least n with trivial(g^n), where trivial is closed under powers."""
    q = g.q
    n, fac = _gl_exponent(g.N, q)
    order = 1
    for r, e in fac.items():
        # the r-part of the order of g
        h = _pow_raw(g.a, n // r**e, q)
        k = 0
        while not trivial(h):
            h = _pow_raw(h, r, q)
            k += 1
        order *= r**k
    return order


def element_order(g: FqMatrix) -> int:
    """Order of g, computed prime by prime from the exponent of GL(N, q)."""
    ident = np.eye(g.N, dtype=np.int64)
    return _order_with(g, lambda h: np.array_equal(h, ident))


def projective_order(g: FqMatrix) -> int:
    """Order of the image of g modulo scalars."""
    ident = np.eye(g.N, dtype=np.int64)
    return _order_with(g, lambda h: np.array_equal(h, h[0, 0] * ident))


def primitive_prime_divisors(q: int, e: int) -> list[int]:
    """Primes dividing q^e - 1 but no q^i - 1 for i < e."""
    out = []
    for r in factorint(q**e - 1):
        if all((q**i - 1) % r for i in range(1, e)):
            out.append(r)
    return sorted(out)


# -- irreducibility ------------------------------------------------------------

_X = symbols("x")


@dataclass
class IrreducibilityResult:
    verdict: bool | None  # None means unknown
    witness: list[list[int]] | None = None
    tries: int = 0

    def __bool__(self):
        return bool(self.verdict)


def _charpoly_factors(M: np.ndarray, q: int):
    from sympy import Matrix

    cp = Matrix(M.tolist()).charpoly(_X).as_expr()
    poly = Poly(cp, _X, domain=GF(q))
    return [f for f, _ in poly.factor_list()[1]]


def _poly_of_matrix(f: Poly, M: np.ndarray, q: int) -> np.ndarray:
    N = M.shape[0]
    out = np.zeros((N, N), dtype=np.int64)
    for c in f.all_coeffs():
        out = (out @ M + int(c) % q * np.eye(N, dtype=np.int64)) % q
    return out


def is_irreducible(gens: Sequence[FqMatrix], seed: int = DEFAULT_SEED, tries: int = 40,
                   max_degree: int = 3) -> IrreducibilityResult:
    """Norton's irreducibility test.

    Random elements of the enveloping algebra are formed; for a factor f of
    small degree of the characteristic polynomial with nullity(f(a)) = deg f,
    a kernel vector of f(a) and one of f(a)^T are spun.  Both spinning up to
    the whole space proves irreducibility; a proper span is a witness of
    reducibility (for the transposed spin, a witness for the dual module).
    """
    q, N = _check_gens(gens)
    rng = random.Random(seed)
    transposes = [g.transpose() for g in gens]
    words = list(gens)
    for t in range(1, tries + 1):
        # grow a pool of products and take a random linear combination
        words.append(rng.choice(words) @ rng.choice(gens))
        pick = rng.sample(words, min(len(words), 4))
        a = np.zeros((N, N), dtype=np.int64)
        for w in pick:
            a = (a + rng.randrange(1, q) * w.a) % q
        for f in _charpoly_factors(a, q):
            d = f.degree()
            if d > max_degree:
                continue
            B = _poly_of_matrix(f, a, q)
            ker = nullspace_mod(B, q)
            if ker.shape[0] == 0:
                continue
            sub = spin(ker[:1], gens, q)
            if sub.shape[0] < N:
                return IrreducibilityResult(False, sub.tolist(), t)
            if ker.shape[0] != d:
                continue
            kerT = nullspace_mod(B.T.copy(), q)
            subT = spin(kerT[:1], transposes, q)
            if subT.shape[0] < N:
                return IrreducibilityResult(False, subT.tolist(), t)
            return IrreducibilityResult(True, None, t)
    return IrreducibilityResult(None, None, tries)


def invariant_lines(gens: Sequence[FqMatrix]) -> list[bytes]:
    """Exhaustive scan of all lines fixed by every generator (small q, N only)."""
    q, N = _check_gens(gens)
    found = []
    # enumerate normalized vectors: leading coordinate 1 at position i
    for i in range(N):
        for tail in np.ndindex(*([q] * (N - i - 1))):
            v = np.zeros(N, dtype=np.int64)
            v[i] = 1
            v[i + 1:] = tail
            key = v.tobytes()
            if all(normalize_line((g.a @ v) % q, q) == key for g in gens):
                found.append(key)
    return found


# -- surjectivity certificates -------------------------------------------------


@dataclass
class SurjectivityCertificate:
    mode: str
    p: int | None
    g: int | None
    q: int
    N: int
    generators: list[str]
    sl_order: int
    verdict: str
    seed: int
    convention: str
    order: int | None = None
    psl_image_order: int | None = None
    evidence: dict | None = None

    def to_json(self) -> dict:
        d = {
            "mode": self.mode,
            "p": self.p,
            "g": self.g,
            "q": self.q,
            "N": self.N,
            "generators": self.generators,
            "sl_order": str(self.sl_order),
            "verdict": self.verdict,
            "seed": self.seed,
            "convention": self.convention,
        }
        if self.order is not None:
            d["order"] = str(self.order)
        if self.psl_image_order is not None:
            d["psl_image_order"] = str(self.psl_image_order)
        if self.evidence is not None:
            d["evidence"] = self.evidence
        return d


def order_fingerprint(gens: Sequence[FqMatrix], seed: int, samples: int = 30) -> dict:
    q, N = gens[0].q, gens[0].N
    rng = random.Random(seed)
    pr = _ProductReplacement(list(gens), rng)
    orders = sorted(projective_order(pr.next()) for _ in range(samples))
    ppd = {e: primitive_prime_divisors(q, e) for e in (N, N - 1) if e >= 2}
    hits = {str(e): any(any(o % r == 0 for r in rs) for o in orders) for e, rs in ppd.items()}
    return {
        "projective_orders": orders,
        "ppd_primes": {str(e): rs for e, rs in ppd.items()},
        "ppd_elements_found": hits,
    }


def verify_surjectivity(
    gens: Sequence[FqMatrix],
    N: int,
    q: int,
    mode: str = "exact",
    *,
    p: int | None = None,
    g: int | None = None,
    seed: int = DEFAULT_SEED,
    threshold: int = DEFAULT_THRESHOLD,
    convention: str = "",
) -> SurjectivityCertificate:
    if mode not in ("exact", "evidence"):
        raise ValueError("mode must be 'exact' or 'evidence'")
    qq, NN = _check_gens(gens)
    if (qq, NN) != (q, N):
        raise ValueError("generators do not match (N, q)")
    for m in gens:
        if m.det() != 1:
            raise NotInSL("generator has determinant != 1")
    target = sl_order(N, q)
    hashes = [m.digest() for m in gens]
    if mode == "exact":
        chain = stabilizer_chain(gens, threshold=threshold, seed=seed, target=target)
        order = chain.order()
        verdict = "surjective" if order == target else "not-surjective"
        return SurjectivityCertificate(
            "exact", p, g, q, N, hashes, target, verdict, seed, convention,
            order=order, psl_image_order=chain.projective_order(),
        )
    irr = is_irreducible(gens, seed=seed)
    evidence = {"irreducible": irr.verdict if irr.verdict is not None else "unknown"}
    evidence.update(order_fingerprint(gens, seed))
    return SurjectivityCertificate("evidence", p, g, q, N, hashes, target, "evidence-only", seed, convention,
                                   evidence=evidence)


def reduce_matrix(M, sp) -> FqMatrix:
    """Entrywise reduction of a matrix over Q(zeta_p) at a split prime (see cyclotomic.reduce_mod)."""
    from .cyclotomic import reduce_mod

    rows = M.entries if hasattr(M, "entries") else M
    return FqMatrix.from_rows(sp.q, [[reduce_mod(x, sp) for x in row] for row in rows])
