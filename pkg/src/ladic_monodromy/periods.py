"""Integral ℓ-adic periods of a lattice with an endomorphism and a stable sublattice.

For ``F = [[A, B], [0, C]]`` acting on ``V = W ⊕ V/W`` (W the first ``w``
coordinates), a map ``S = [X; ℓ^e·I]`` is an F-equivariant section of
``ℓ^e`` times the projection exactly when ``A·X - X·C = -ℓ^e·B``.  The
period is the least such e.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .padic import INF, is_prime
from .zmodlin import Matrix, mat_inv, mat_mul, reduce, smith_form, vval


@dataclass(frozen=True)
class PeriodTriple:
    ell: int
    precision: int
    matrix: Tuple[Tuple[int, ...], ...]
    w: int

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.precision < 1:
            raise ValueError("precision must be positive")
        mod = self.ell ** self.precision
        rows = tuple(tuple(int(x) % mod for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        if not 0 <= self.w <= n:
            raise ValueError("sublattice dimension out of range")
        if any(rows[i][j] for i in range(self.w, n) for j in range(self.w)):
            raise ValueError("matrix does not preserve the sublattice")
        mat_inv([list(r) for r in rows], self.ell, 1)

    @property
    def n(self) -> int:
        return len(self.matrix)

    def blocks(self) -> Tuple[Matrix, Matrix, Matrix]:
        w, F = self.w, self.matrix
        A = [list(r[:w]) for r in F[:w]]
        B = [list(r[w:]) for r in F[:w]]
        C = [list(r[w:]) for r in F[w:]]
        return A, B, C

    @classmethod
    def from_json(cls, text: str) -> "PeriodTriple":
        data = json.loads(text)
        for key in ("ell", "precision", "w", "matrix"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        rows = data["matrix"]
        if rows and not isinstance(rows[0], list):
            n = int(round(len(rows) ** 0.5))
            if n * n != len(rows):
                raise ValueError("flat matrix must have a square number of entries")
            rows = [rows[i * n:(i + 1) * n] for i in range(n)]
        matrix = tuple(tuple(int(str(x)) for x in r) for r in rows)
        return cls(int(data["ell"]), int(data["precision"]), matrix, int(data["w"]))


def _sylvester_matrix(A: Matrix, C: Matrix, mod: int) -> Matrix:
    """Matrix of X ↦ A·X - X·C on w×p matrices flattened row-major."""
    w, p = len(A), len(C)
    T = [[0] * (w * p) for _ in range(w * p)]
    for i in range(w):
        for j in range(p):
            row = T[i * p + j]
            for k in range(w):
                row[k * p + j] += A[i][k]
            for k in range(p):
                row[i * p + k] -= C[k][j]
    return [[x % mod for x in r] for r in T]


def integral_period(t: PeriodTriple):
    """Least e with an F-equivariant section of ℓ^e·π; ``INF`` if none below M."""
    ell, M = t.ell, t.precision
    mod = ell ** M
    if t.w in (0, t.n):
        return 0
    A, B, C = t.blocks()
    T = _sylvester_matrix(A, C, mod)
    target = [(-x) % mod for row in B for x in row]
    P, vals, _ = smith_form(T, ell, M)
    y = [sum(a * b for a, b in zip(row, target)) % mod for row in P]
    e = 0
    for i, yi in enumerate(y):
        a = vals[i] if i < len(vals) else M
        e = max(e, a - vval(yi, ell, M))
    return INF if e >= M else e


def section_for(t: PeriodTriple, e: int) -> Optional[Matrix]:
    """An explicit section ``[X; ℓ^e·I]`` if one exists, else ``None``."""
    ell, M = t.ell, t.precision
    mod = ell ** M
    A, B, C = t.blocks()
    w, p = len(A), len(C)
    T = _sylvester_matrix(A, C, mod)
    target = [(-x) * ell ** e % mod for row in B for x in row]
    P, vals, Q = smith_form(T, ell, M)
    y = [sum(a * b for a, b in zip(row, target)) % mod for row in P]
    z = []
    for i, yi in enumerate(y):
        a = vals[i] if i < len(vals) else M
        if yi and vval(yi, ell, M) < a:
            return None
        z.append(yi // ell ** a if i < len(vals) else 0)
    z = z[:len(Q)] + [0] * (len(Q) - len(z))
    x = [sum(q * zz for q, zz in zip(row, z)) % mod for row in Q]
    X = [x[i * p:(i + 1) * p] for i in range(w)]
    scale = ell ** e % mod
    return X + [[scale * int(i == j) for j in range(p)] for i in range(p)]


def is_equivariant_section(t: PeriodTriple, S: Matrix, e: int) -> bool:
    """Check F·S = S·F̄ and π∘S = ℓ^e·id modulo ℓ^M."""
    mod = t.ell ** t.precision
    w = t.w
    _, _, C = t.blocks()
    F = [list(r) for r in t.matrix]
    left = mat_mul(F, S, mod)
    right = mat_mul(S, C, mod)
    if left != right:
        return False
    p = t.n - w
    scale = t.ell ** e % mod
    return all(S[w + i][j] % mod == scale * int(i == j) for i in range(p) for j in range(p))


def search_integral_period(t: PeriodTriple):
    """Independent oracle: digit-by-digit exhaustive search for a section.

    For each e, looks for X with A·X - X·C ≡ -ℓ^e·B by choosing the ℓ-adic
    digits of X one level at a time over all ℓ^{w·p} digit patterns, with
    memoization on the remaining residual.
    """
    ell, M = t.ell, t.precision
    mod = ell ** M
    if t.w in (0, t.n):
        return 0
    A, B, C = t.blocks()
    w, p = len(A), len(C)
    N = w * p

    def apply(X):
        out = []
        for i in range(w):
            for j in range(p):
                s = sum(A[i][k] * X[k * p + j] for k in range(w))
                s -= sum(X[i * p + k] * C[k][j] for k in range(p))
                out.append(s)
        return out

    digits = []
    for code in range(ell ** N):
        d = []
        for _ in range(N):
            d.append(code % ell)
            code //= ell
        digits.append((d, apply(d)))

    def solvable(residual: Tuple[int, ...], level: int, memo) -> bool:
        if level == M:
            return True
        key = (residual, level)
        if key in memo:
            return memo[key]
        ok = False
        rmod = ell ** (M - level)
        for d, td in digits:
            diff = [(r - x) for r, x in zip(residual, td)]
            if all(x % ell == 0 for x in diff):
                nxt = tuple((x // ell) % (rmod // ell) if rmod > ell else 0 for x in diff)
                if solvable(nxt, level + 1, memo):
                    ok = True
                    break
        memo[key] = ok
        return ok

    for e in range(M):
        target = tuple((-x) * ell ** e % mod for row in B for x in row)
        if solvable(target, 0, {}):
            return e
    return INF
