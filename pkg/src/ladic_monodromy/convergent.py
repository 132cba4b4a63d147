"""Valuation growth, radius diagnostics, r0 estimation and ρ_r evaluation.

For an element x of the truncated algebra, ``v_n(x)`` is the least
coefficient valuation among words of length < n (``INF`` when there are
none); x lies in the radius-r convergent ring when ``v_n + r·n → ∞``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .freealg import AlgebraElement, Word
from .padic import INF, PadicScalar, PrecisionError, is_prime
from .zmodlin import (Matrix, howell_basis, identity, mat_inv, mat_mul, mat_sub,
                      module_length, module_min_valuation, reduce, vval)


class ConvergenceError(ArithmeticError):
    """Partial sums did not stabilize inside the truncation window."""


@dataclass(frozen=True)
class RepSpec:
    """Generator matrices of a representation modulo ℓ^M."""

    ell: int
    precision: int
    dim: int
    generators: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if self.precision < 1 or self.dim < 1:
            raise ValueError("precision and dimension must be positive")
        mod = self.ell ** self.precision
        gens = []
        for idx, A in enumerate(self.generators):
            rows = tuple(tuple(int(x) % mod for x in row) for row in A)
            if len(rows) != self.dim or any(len(r) != self.dim for r in rows):
                raise ValueError(f"generator {idx} is not {self.dim}x{self.dim}")
            gens.append(rows)
        object.__setattr__(self, "generators", tuple(gens))
        ell, n = self.ell, self.dim
        for idx, A in enumerate(self.generators):
            N = [[(A[i][j] - (i == j)) % ell for j in range(n)] for i in range(n)]
            P = identity(n)
            for _ in range(n):
                P = mat_mul(P, N, ell)
            if any(any(r) for r in P):
                raise ValueError(f"generator {idx} is not unipotent mod {ell}")

    @property
    def modulus(self) -> int:
        return self.ell ** self.precision

    def matrices(self) -> List[Matrix]:
        return [[list(r) for r in A] for A in self.generators]

    def nilpotent_parts(self) -> List[Matrix]:
        n = self.dim
        return [mat_sub(A, identity(n), self.modulus) for A in self.matrices()]

    @classmethod
    def from_dict(cls, data: dict) -> "RepSpec":
        for key in ("ell", "precision", "dim", "generators"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        dim = int(data["dim"])
        gens = []
        for idx, g in enumerate(data["generators"]):
            if g and not isinstance(g[0], list):
                if len(g) != dim * dim:
                    raise ValueError(f"generator {idx} must have {dim * dim} entries")
                g = [g[i * dim:(i + 1) * dim] for i in range(dim)]
            gens.append(tuple(tuple(int(str(x)) for x in row) for row in g))
        return cls(int(data["ell"]), int(data["precision"]), dim, tuple(gens))

    @classmethod
    def from_json(cls, text: str) -> "RepSpec":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {"ell": self.ell, "precision": self.precision, "dim": self.dim,
                "generators": [[[str(x) for x in row] for row in A] for A in self.generators]}


# valuation sequences ------------------------------------------------------------


@dataclass
class ValuationSequence:
    entries: List[Union[int, float]]
    ell: int

    def __getitem__(self, n: int):
        """v_n for n ≥ 1 (v_0 is the empty minimum, INF)."""
        if n <= 0:
            return INF
        return self.entries[n - 1]

    def __len__(self):
        return len(self.entries)


def valuation_sequence(x: AlgebraElement, N: int) -> ValuationSequence:
    D = x.signature.degree
    if N > D + 1:
        raise ValueError("window exceeds the truncation degree")
    best: Dict[int, Union[int, float]] = {}
    for w, c in x.terms.items():
        best[len(w)] = min(best.get(len(w), INF), c.valuation)
    entries = []
    running = INF
    for n in range(1, N + 1):
        running = min(running, best.get(n - 1, INF))
        entries.append(running)
    return ValuationSequence(entries, x.signature.ell)


@dataclass
class RadiusReport:
    r: Fraction
    margins: List[Tuple[int, Union[Fraction, float]]]
    min_margin: Union[Fraction, float]
    trend: Optional[Fraction]
    verdict: str


def _slope(points: Sequence[Tuple[int, Fraction]]) -> Fraction:
    k = len(points)
    mx = Fraction(sum(n for n, _ in points), k)
    my = sum((m for _, m in points), Fraction(0)) / k
    num = sum(((n - mx) * (m - my) for n, m in points), Fraction(0))
    den = sum(((n - mx) ** 2 for n, _ in points), Fraction(0))
    return num / den


def radius_report(seq: ValuationSequence, r, delta=Fraction(1, 10)) -> RadiusReport:
    """Three-valued radius-r membership verdict over the window of ``seq``.

    * member-at-window: the least-squares slope of the margins over the last
      third of the window is nonnegative and the tail never drops below the
      earlier minimum;
    * non-member-witness: over the tail every step decreases by ≥ delta;
    * inconclusive otherwise.
    """
    r = Fraction(r)
    margins = [(n, (v + r * n) if v != INF else INF)
               for n, v in enumerate(seq.entries, 1)]
    finite = [(n, m) for n, m in margins if m != INF]
    min_margin = min((m for _, m in finite), default=INF)
    if len(finite) < 2:
        return RadiusReport(r, margins, min_margin, None, "member-at-window"
                            if not finite else "inconclusive")
    tail_len = max(2, math.ceil(len(finite) / 3))
    head, tail = finite[:-tail_len], finite[-tail_len:]
    trend = _slope(tail)
    steps = [b[1] - a[1] for a, b in zip(tail, tail[1:])]
    tail_min = min(m for _, m in tail)
    head_min = min((m for _, m in head), default=tail_min)
    if trend >= 0 and tail_min >= head_min:
        verdict = "member-at-window"
    elif all(s <= -delta for s in steps):
        verdict = "non-member-witness"
    else:
        verdict = "inconclusive"
    return RadiusReport(r, margins, min_margin, trend, verdict)


def product_bound_check(x: AlgebraElement, y: AlgebraElement, N: int) -> bool:
    """v_n(xy) ≥ min over a + b = n + 1 (a, b ≥ 1) of v_a(x) + v_b(y), for n ≤ N."""
    vx = valuation_sequence(x, N + 1)
    vy = valuation_sequence(y, N + 1)
    vxy = valuation_sequence(x * y, N)
    for n in range(1, N + 1):
        bound = min(vx[a] + vy[n + 1 - a] for a in range(1, n + 1))
        if vxy[n] < bound:
            return False
    return True


# r0 estimation ---------------------------------------------------------------------


def _flatten(A: Matrix) -> List[int]:
    return [x for row in A for x in row]


def _unflatten(v: Sequence[int], n: int) -> Matrix:
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def _bimodule_closure(gens: List[Matrix], mults: List[Matrix], ell: int, M: int) -> Matrix:
    mod = ell ** M
    n = len(mults[0])
    basis = howell_basis([_flatten(g) for g in gens], ell, M)
    size = module_length(basis, ell, M)
    while True:
        extra = []
        for v in basis:
            B = _unflatten(v, n)
            for N in mults:
                extra.append(_flatten(mat_mul(N, B, mod)))
                extra.append(_flatten(mat_mul(B, N, mod)))
        basis = howell_basis(basis + extra, ell, M)
        new_size = module_length(basis, ell, M)
        if new_size == size:
            return basis
        size = new_size


@dataclass
class R0Estimate:
    m: List[int]
    r0_lower: Union[Fraction, float]
    unipotent_detected: bool
    precision_capped: bool
    depth: int

    def m_text(self, M: int) -> List[str]:
        return [f">={x}" if x >= M else str(x) for x in self.m]


def image_powers(rep: RepSpec, S: int) -> List[Matrix]:
    """Howell bases of V_1..V_S, the images of the augmentation-ideal powers."""
    ell, M = rep.ell, rep.precision
    mod = ell ** M
    n = rep.dim
    nil = rep.nilpotent_parts()
    V1 = _bimodule_closure(nil, nil, ell, M)
    powers = [V1]
    for _ in range(2, S + 1):
        prev = powers[-1]
        prods = [_flatten(mat_mul(_unflatten(a, n), _unflatten(b, n), mod))
                 for a in prev for b in V1]
        powers.append(howell_basis(prods, ell, M) if prods else [])
    return powers


def estimate_r0(rep: RepSpec, S: int) -> R0Estimate:
    """Lower-bound estimate of r0 from the valuations of V_s, s ≤ S."""
    if S < 1:
        raise ValueError("depth must be positive")
    ell, M = rep.ell, rep.precision
    powers = image_powers(rep, S)
    m = [module_min_valuation(b, ell, M) for b in powers]
    zero_at = next((s for s, b in enumerate(powers, 1) if not b), None)
    detected = zero_at is not None and zero_at <= rep.dim
    capped = any(x >= M for x in m) and not detected
    if detected:
        r0 = INF
    else:
        lo = math.ceil(S / 2)
        r0 = min(Fraction(m[s - 1], s) for s in range(max(lo, 1), S + 1))
    return R0Estimate(m, r0, detected, capped, S)


# evaluation of ρ_r -----------------------------------------------------------------


@dataclass
class RhoValue:
    matrix: List[List[PadicScalar]]
    precision: Union[int, float]
    increments: List[Union[int, float]] = field(default_factory=list)

    def agrees_with(self, other: List[List[PadicScalar]], digits) -> bool:
        """Entrywise congruence modulo ℓ^digits."""
        for row, orow in zip(self.matrix, other):
            for a, b in zip(row, orow):
                if (a - b).valuation < digits:
                    return False
        return True


def matrix_product(A: List[List[PadicScalar]], B: List[List[PadicScalar]]):
    n = len(A)
    zero = A[0][0] - A[0][0]
    out = []
    for i in range(n):
        row = []
        for j in range(len(B[0])):
            acc = zero
            for k in range(len(B)):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(row)
    return out


def evaluate_rho_r(x: AlgebraElement, rep: RepSpec,
                   required_precision: Optional[int] = None) -> RhoValue:
    """Sum ρ over the terms of x, with ρ(X_j) = A_j - I.

    The partial sums are grouped by word length; the returned precision is
    the least valuation of the increments over the last third of the
    window, which bounds the size of the neglected tail.  A negative
    least-squares slope of increment valuation against length signals
    divergence.
    """
    sig = x.signature
    if sig.ell != rep.ell:
        raise ValueError("prime mismatch")
    if len(rep.generators) != sig.rank:
        raise ValueError("one matrix per algebra generator is required")
    n = rep.dim
    nil = rep.nilpotent_parts()
    cache: Dict[Word, Matrix] = {(): identity(n)}

    def rho(word: Word) -> Matrix:
        m = cache.get(word)
        if m is None:
            prev = rho(word[:-1])
            N = nil[word[-1]]
            m = [[sum(prev[i][k] * N[k][j] for k in range(n)) for j in range(n)]
                 for i in range(n)]
            cache[word] = m
        return m

    zero = sig.scalar(0)
    D = sig.degree
    increments = [[[zero] * n for _ in range(n)] for _ in range(D + 1)]
    for w, c in x.terms.items():
        R = rho(w)
        inc = increments[len(w)]
        for i in range(n):
            for j in range(n):
                if R[i][j]:
                    inc[i][j] = inc[i][j] + c * R[i][j]
    vals = [min(e.valuation for row in inc for e in row) for inc in increments]
    total = [[zero] * n for _ in range(n)]
    for inc in increments:
        total = [[a + b for a, b in zip(r, s)] for r, s in zip(total, inc)]
    window = max(1, math.ceil((D + 1) / 3))
    stable = min(vals[-window:])
    cap = x.min_valuation() + rep.precision
    precision = min(stable, cap)
    finite = [(n, Fraction(v)) for n, v in enumerate(vals) if v != INF]
    if len(finite) >= 2 and _slope(finite) < 0:
        raise ConvergenceError("increment valuations decrease along the window")
    if required_precision is not None and precision < required_precision:
        raise ConvergenceError(f"only {precision} stable digits, "
                               f"{required_precision} required")
    return RhoValue(total, precision, vals)
