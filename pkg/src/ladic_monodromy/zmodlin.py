"""Linear algebra over the chain ring ℤ/ℓ^M.

Matrices are lists of rows of Python ints, always reduced into ``[0, ℓ^M)``.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def vval(x: int, ell: int, M: int) -> int:
    """Valuation of a residue mod ℓ^M, with zero mapped to M."""
    x %= ell ** M
    if x == 0:
        return M
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def reduce(A: Sequence[Sequence[int]], mod: int) -> Matrix:
    return [[int(x) % mod for x in row] for row in A]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Matrix, B: Matrix, mod: int) -> Matrix:
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % mod for col in cols] for row in A]


def mat_sub(A: Matrix, B: Matrix, mod: int) -> Matrix:
    return [[(a - b) % mod for a, b in zip(r, s)] for r, s in zip(A, B)]


def mat_vec(A: Matrix, v: Sequence[int], mod: int) -> List[int]:
    return [sum(a * b for a, b in zip(row, v)) % mod for row in A]


def mat_inv(A: Matrix, ell: int, M: int) -> Matrix:
    """Inverse of a matrix invertible mod ℓ."""
    mod = ell ** M
    n = len(A)
    aug = [list(row) + identity(n)[i] for i, row in enumerate(reduce(A, mod))]
    for c in range(n):
        piv = next((r for r in range(c, n) if aug[r][c] % ell), None)
        if piv is None:
            raise ValueError("matrix is not invertible mod ℓ")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], -1, mod)
        aug[c] = [x * inv % mod for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(x - f * y) % mod for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def smith_form(A: Sequence[Sequence[int]], ell: int, M: int) -> Tuple[Matrix, List[int], Matrix]:
    """Return (P, vals, Q) with P·A·Q diagonal mod ℓ^M.

    The diagonal is ``ℓ^vals[i]`` for i < len(vals); remaining diagonal
    entries are zero.  ``vals`` is nondecreasing and every entry is < M.
    """
    mod = ell ** M
    A = reduce(A, mod)
    r = len(A)
    c = len(A[0]) if r else 0
    P, Q = identity(r), identity(c)
    vals: List[int] = []
    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j]:
                    v = vval(A[i][j], ell, M)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        a, i, j = best
        A[t], A[i] = A[i], A[t]
        P[t], P[i] = P[i], P[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            for row in Q:
                row[t], row[j] = row[j], row[t]
        unit = A[t][t] // ell ** a
        inv = pow(unit, -1, mod)
        A[t] = [x * inv % mod for x in A[t]]
        P[t] = [x * inv % mod for x in P[t]]
        pa = ell ** a
        for i in range(t + 1, r):
            if A[i][t]:
                f = A[i][t] // pa
                A[i] = [(x - f * y) % mod for x, y in zip(A[i], A[t])]
                P[i] = [(x - f * y) % mod for x, y in zip(P[i], P[t])]
        for j in range(t + 1, c):
            if A[t][j]:
                f = A[t][j] // pa
                for row in A:
                    row[j] = (row[j] - f * row[t]) % mod
                for row in Q:
                    row[j] = (row[j] - f * row[t]) % mod
        vals.append(a)
    return P, vals, Q


def howell_basis(vectors: Sequence[Sequence[int]], ell: int, M: int) -> Matrix:
    """Echelon generating set of the submodule spanned by ``vectors``.

    Pivot entries are powers of ℓ, and the set has the Howell property: an
    element of the span vanishing in the first k coordinates is a
    combination of the rows whose pivot lies beyond k.
    """
    mod = ell ** M
    work = [r for r in reduce(vectors, mod) if any(r)]
    n = len(work[0]) if work else 0
    basis: Matrix = []
    for col in range(n):
        idx = [i for i, r in enumerate(work) if r[col]]
        if not idx:
            continue
        k = min(idx, key=lambda i: vval(work[i][col], ell, M))
        a = vval(work[k][col], ell, M)
        pa = ell ** a
        inv = pow(work[k][col] // pa, -1, mod)
        piv = [x * inv % mod for x in work[k]]
        rest = []
        for i, r in enumerate(work):
            if i == k:
                continue
            if r[col]:
                f = r[col] // pa
                r = [(x - f * y) % mod for x, y in zip(r, piv)]
            if any(r):
                rest.append(r)
        if a:
            killed = [x * ell ** (M - a) % mod for x in piv]
            if any(killed):
                rest.append(killed)
        for b in basis:
            if b[col] >= pa:
                f = b[col] // pa
                b[:] = [(x - f * y) % mod for x, y in zip(b, piv)]
        basis.append(piv)
        work = rest
    return basis


def in_span(v: Sequence[int], basis: Matrix, ell: int, M: int) -> bool:
    mod = ell ** M
    v = [x % mod for x in v]
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        if v[col]:
            pa = row[col]
            if v[col] % pa:
                return False
            f = v[col] // pa
            v = [(x - f * y) % mod for x, y in zip(v, row)]
    return not any(v)


def module_min_valuation(basis: Matrix, ell: int, M: int) -> int:
    """Least valuation of any element of the span (M for the zero module)."""
    return min((vval(x, ell, M) for row in basis for x in row if x), default=M)


def module_length(basis: Matrix, ell: int, M: int) -> int:
    """log_ℓ of the module's cardinality, from Howell pivots."""
    total = 0
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        total += M - vval(row[col], ell, M)
    return total
