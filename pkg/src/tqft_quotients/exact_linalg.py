"""Dense linear algebra over Q(zeta_p).

Matrices are lists of rows of :class:`Cyclotomic`.  They are never mutated
after construction by anything in this package.
"""

from __future__ import annotations

from typing import Sequence

from .cyclotomic import Cyclotomic

Matrix = list[list[Cyclotomic]]


def identity(p: int, n: int) -> Matrix:
    one = Cyclotomic.from_int(p, 1)
    zero = Cyclotomic.from_int(p, 0)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(p: int, n: int, m: int | None = None) -> Matrix:
    zero = Cyclotomic.from_int(p, 0)
    return [[zero] * (n if m is None else m) for _ in range(n)]


def diagonal(entries: Sequence[Cyclotomic]) -> Matrix:
    p = entries[0].p
    out = zeros(p, len(entries))
    for i, x in enumerate(entries):
        out[i][i] = x
    return out


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    p = A[0][0].p
    zero = Cyclotomic.from_int(p, 0)
    cols = list(zip(*B))
    out = []
    for row in A:
        nz = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
        new_row = []
        for col in cols:
            acc = zero
            for k, a in nz:
                b = col[k]
                if not b.is_zero():
                    acc = acc + a * b
            new_row.append(acc)
        out.append(new_row)
    return out


def mat_prod(*mats: Matrix) -> Matrix:
    out = mats[0]
    for M in mats[1:]:
        out = mat_mul(out, M)
    return out


def mat_add(A: Matrix, B: Matrix) -> Matrix:
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A: Matrix) -> Matrix:
    return [[c * a for a in row] for row in A]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def conj_transpose(A: Matrix) -> Matrix:
    return [[a.conjugate() for a in col] for col in zip(*A)]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def trace(A: Matrix) -> Cyclotomic:
    acc = A[0][0]
    for i in range(1, len(A)):
        acc = acc + A[i][i]
    return acc


def mat_pow(A: Matrix, n: int) -> Matrix:
    if n < 0:
        return mat_pow(inverse(A), -n)
    p = A[0][0].p
    result = identity(p, len(A))
    base = A
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def scalar_value(A: Matrix) -> Cyclotomic | None:
    """The scalar c if A == c*Id, else None."""
    c = A[0][0]
    for i, row in enumerate(A):
        for j, a in enumerate(row):
            if i == j:
                if a != c:
                    return None
            elif not a.is_zero():
                return None
    return c


def is_diagonal(A: Matrix) -> bool:
    return all(a.is_zero() for i, row in enumerate(A) for j, a in enumerate(row) if i != j)


def poly_eval(coeffs: Sequence[Cyclotomic], A: Matrix) -> Matrix:
    """sum(coeffs[k] * A**k) by Horner's rule."""
    p = A[0][0].p
    n = len(A)
    out = mat_scale(coeffs[-1], identity(p, n))
    for c in reversed(coeffs[:-1]):
        out = mat_mul(out, A)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def _row_reduce(A: Matrix, augment: Matrix | None = None):
    """Reduced row echelon form; returns (R, pivots, augmented part)."""
    R = [list(row) for row in A]
    Aug = [list(row) for row in augment] if augment is not None else None
    nrows = len(R)
    ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if not R[i][c].is_zero():
                piv = i
                break
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        if Aug is not None:
            Aug[r], Aug[piv] = Aug[piv], Aug[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        if Aug is not None:
            Aug[r] = [x * inv for x in Aug[r]]
        for i in range(nrows):
            if i != r and not R[i][c].is_zero():
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
                if Aug is not None:
                    Aug[i] = [x - f * y for x, y in zip(Aug[i], Aug[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return R, pivots, Aug


def rank(A: Matrix) -> int:
    return len(_row_reduce(A)[1])


def nullspace(A: Matrix) -> list[list[Cyclotomic]]:
    """Basis of {x : A x = 0}."""
    p = A[0][0].p
    ncols = len(A[0])
    R, pivots, _ = _row_reduce(A)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Cyclotomic.from_int(p, 0)] * ncols
        v[f] = Cyclotomic.from_int(p, 1)
        for i, c in enumerate(pivots):
            v[c] = -R[i][f]
        basis.append(v)
    return basis


def inverse(A: Matrix) -> Matrix:
    p = A[0][0].p
    n = len(A)
    R, pivots, Aug = _row_reduce(A, identity(p, n))
    if len(pivots) != n:
        raise ZeroDivisionError("matrix is singular")
    return Aug


def det(A: Matrix) -> Cyclotomic:
    p = A[0][0].p
    R = [list(row) for row in A]
    n = len(R)
    result = Cyclotomic.from_int(p, 1)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not R[i][c].is_zero():
                piv = i
                break
        if piv is None:
            return Cyclotomic.from_int(p, 0)
        if piv != c:
            R[c], R[piv] = R[piv], R[c]
            result = -result
        pv = R[c][c]
        result = result * pv
        inv = pv.inverse()
        for i in range(c + 1, n):
            if not R[i][c].is_zero():
                f = R[i][c] * inv
                R[i] = [x - f * y for x, y in zip(R[i], R[c])]
    return result


def mat_vec(A: Matrix, v: Sequence[Cyclotomic]) -> list[Cyclotomic]:
    out = []
    for row in A:
        acc = Cyclotomic.from_int(v[0].p, 0)
        for a, x in zip(row, v):
            if not a.is_zero() and not x.is_zero():
                acc = acc + a * x
        out.append(acc)
    return out


def lagrange_coefficients(nodes: Sequence[Cyclotomic], values: Sequence[Cyclotomic]) -> list[Cyclotomic]:
    """Coefficients (low degree first) of the interpolating polynomial."""
    p = nodes[0].p
    n = len(nodes)
    zero = Cyclotomic.from_int(p, 0)
    one = Cyclotomic.from_int(p, 1)
    total = [zero] * n
    for i, (xi, yi) in enumerate(zip(nodes, values)):
        basis = [one]
        denom = one
        for j, xj in enumerate(nodes):
            if j == i:
                continue
            diff = xi - xj
            if diff.is_zero():
                raise ValueError("interpolation nodes collide")
            denom = denom * diff
            # multiply basis polynomial by (x - xj)
            new = [zero] * (len(basis) + 1)
            for k, b in enumerate(basis):
                new[k + 1] = new[k + 1] + b
                new[k] = new[k] - b * xj
            basis = new
        scale = yi * denom.inverse()
        for k, b in enumerate(basis):
            total[k] = total[k] + b * scale
    return total
