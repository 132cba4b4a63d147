"""Unipotence threshold and the geometric-origin gate for representations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from .convergent import RepSpec
from .padic import PrecisionError, _val_qs_minus_one, is_prime, order_mod
from .zmodlin import Matrix, identity, mat_inv, mat_mul, smith_form, vval

EXCLUDED = "EXCLUDED"
UNIPOTENT = "UNIPOTENT"
INCONCLUSIVE = "INCONCLUSIVE"


def cyclotomic_generator(ell: int) -> int:
    """3 for ℓ = 2, else the least integer generating (ℤ/ℓ²)^×."""
    if ell == 2:
        return 3
    mod = ell * ell
    target = ell * (ell - 1)
    for g in range(2, mod):
        if g % ell == 0:
            continue
        x, k = g, 1
        while x != 1:
            x = x * g % mod
            k += 1
        if k == target:
            return g
    raise ValueError(f"no generator mod {ell}^2")


@dataclass(frozen=True)
class CyclotomicSpec:
    ell: int
    q: Optional[int] = None
    surjective: bool = False
    precision: int = 20

    def __post_init__(self):
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        q = self.q
        if q is None:
            if not self.surjective:
                raise ValueError("give q or declare the cyclotomic character surjective")
            q = cyclotomic_generator(self.ell)
        q = int(q) % self.ell ** self.precision
        if q % self.ell == 0:
            raise ValueError(f"q must be prime to {self.ell}")
        object.__setattr__(self, "q", q)

    def hypothesis(self) -> str:
        return (f"q = {self.q} lies in the image of the {self.ell}-adic cyclotomic character "
                f"of the field generated by the cross-ratios of the punctures")


@dataclass(frozen=True)
class Threshold:
    bound: Fraction
    N: int
    order: int
    valuation: int


def threshold(spec: CyclotomicSpec) -> Threshold:
    """bound = (v_ℓ(q^s - 1) + 1/(ℓ-1) + ε)/s and N = ⌊bound⌋ + 1."""
    ell = spec.ell
    s = order_mod(spec.q, ell)
    v = _val_qs_minus_one(spec.q, ell, s, spec.precision)
    eps = 1 if ell == 2 else 0
    bound = (v + Fraction(1, ell - 1) + eps) / s
    return Threshold(bound, math.floor(bound) + 1, s, v)


def triviality_level(rep: RepSpec) -> int:
    """Least valuation among the entries of A_j - I, capped at M."""
    M = rep.precision
    return min((vval(x, rep.ell, M) for N in rep.nilpotent_parts() for row in N for x in row),
               default=M)


@dataclass
class UnipotenceResult:
    status: str
    flag_basis: Optional[Matrix] = None
    quotient_dim: Optional[int] = None
    obstruction_valuation: Optional[int] = None
    guard: int = 0

    @property
    def certified(self) -> bool:
        return self.status == "true"

    def to_dict(self) -> dict:
        d = {"status": self.status, "guard": self.guard}
        if self.flag_basis is not None:
            d["flag_basis_columns"] = [[str(row[j]) for row in self.flag_basis]
                                       for j in range(len(self.flag_basis))]
        if self.quotient_dim is not None:
            d["witness"] = {"quotient_dim": self.quotient_dim,
                            "obstruction_valuation": self.obstruction_valuation}
        return d


def _block_diag_embed(T: Matrix, p: int, Q: Matrix, mod: int) -> Matrix:
    n = len(T)
    E = identity(n)
    for i, row in enumerate(Q):
        for j, x in enumerate(row):
            E[p + i][p + j] = x
    return mat_mul(T, E, mod)


def is_unipotent(rep: RepSpec, guard: Optional[int] = None) -> UnipotenceResult:
    """Search for a flag of common fixed vectors modulo ℓ^M.

    Each step takes a primitive vector killed by every A_j - I on the current
    quotient lattice and passes to the quotient by it.  When no such vector
    exists, the largest Smith exponent of the stacked operator measures how
    close the quotient comes to having one; below ``M - guard`` this is a
    certified obstruction, otherwise the answer is undetermined.
    """
    ell, M, n = rep.ell, rep.precision, rep.dim
    mod = ell ** M
    guard = n if guard is None else guard
    nil = rep.nilpotent_parts()
    T = identity(n)
    for p in range(n):
        Tinv = mat_inv(T, ell, M)
        conj = [mat_mul(mat_mul(Tinv, N, mod), T, mod) for N in nil]
        stacked = [row[p:] for C in conj for row in C[p:]]
        _, vals, Q = smith_form(stacked, ell, M)
        d = n - p
        if len(vals) < d:
            k = len(vals)
            order = [k] + [j for j in range(d) if j != k]
            Qk = [[row[j] for j in order] for row in Q]
            T = _block_diag_embed(T, p, Qk, mod)
            continue
        worst = max(vals)
        status = "undetermined" if worst >= M - guard else "false"
        return UnipotenceResult(status, None, d, worst, guard)
    return UnipotenceResult("true", T, guard=guard)


def verify_flag(rep: RepSpec, basis: Matrix) -> bool:
    """Every A_j - I is strictly upper triangular in the given basis mod ℓ^M."""
    ell, M, n = rep.ell, rep.precision, rep.dim
    mod = ell ** M
    Tinv = mat_inv(basis, ell, M)
    for N in rep.nilpotent_parts():
        C = mat_mul(mat_mul(Tinv, N, mod), basis, mod)
        if any(C[i][j] for i in range(n) for j in range(i + 1)):
            return False
    return True


@dataclass
class Verdict:
    classification: str
    threshold: Threshold
    k: int
    unipotence: UnipotenceResult
    hypothesis: str
    caveats: List[str] = field(default_factory=list)
    precision: int = 0

    @property
    def exit_code(self) -> int:
        return 10 if self.classification == EXCLUDED else 0

    def to_dict(self) -> dict:
        k_text = f">={self.k}" if self.k >= self.precision else str(self.k)
        return {
            "classification": self.classification,
            "bound": str(self.threshold.bound),
            "N": self.threshold.N,
            "order_of_q": self.threshold.order,
            "valuation_q_power": self.threshold.valuation,
            "k": k_text,
            "unipotence": self.unipotence.to_dict(),
            "hypothesis": self.hypothesis,
            "caveats": list(self.caveats),
        }


def verdict(spec: CyclotomicSpec, rep: RepSpec, punctures: Optional[int] = None) -> Verdict:
    if spec.ell != rep.ell:
        raise ValueError("prime mismatch between cyclotomic data and representation")
    if punctures is not None and len(rep.generators) != punctures - 1:
        raise ValueError(f"{punctures} punctures need {punctures - 1} generator matrices, "
                         f"got {len(rep.generators)}")
    th = threshold(spec)
    k = triviality_level(rep)
    uni = is_unipotent(rep)
    caveats = []
    if uni.status == "true":
        cls = UNIPOTENT
        caveats.append(f"flag certified modulo {rep.ell}^{rep.precision} only")
    elif uni.status == "false" and k >= th.N:
        cls = EXCLUDED
        caveats.append("exclusion is conditional on the stated cyclotomic hypothesis")
    else:
        cls = INCONCLUSIVE
        if uni.status == "undetermined":
            caveats.append("unipotence undetermined at the working precision")
        if k < th.N:
            caveats.append(f"triviality level {k} is below the threshold {th.N}")
    if k >= rep.precision:
        caveats.append("triviality level reached the working precision")
    return Verdict(cls, th, k, uni, spec.hypothesis(), caveats, rep.precision)


__all__ = ["CyclotomicSpec", "Threshold", "threshold", "triviality_level", "is_unipotent",
           "verify_flag", "UnipotenceResult", "Verdict", "verdict", "cyclotomic_generator",
           "EXCLUDED", "UNIPOTENT", "INCONCLUSIVE", "PrecisionError"]
