"""Quasi-scalar automorphisms, eigenvector lifting and canonical paths.

A quasi-scalar of degree q sends ``X_j`` to ``(1 + X_j)^{q^{d_j}} - 1 + P_j``
where ``d_j`` is the grade of the generator and ``P_j`` has grade at least
``d_j + 1``.  On the grade-m graded piece it acts by ``q^m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .freealg import (AlgebraElement, AlgebraSignature, Word, from_text, mul, power_of_generator,
                      word_key)
from .groupoid import TorsorElement
from .padic import INF, PrecisionError, cbound, val_qpow, valuation


class QuasiScalar:
    """Algebra endomorphism determined by its generator images."""

    def __init__(self, signature: AlgebraSignature, q: int,
                 perturbations: Optional[Mapping[Union[int, str], AlgebraElement]] = None):
        ell, M = signature.ell, signature.precision
        q = int(q)
        if q % ell == 0:
            raise ValueError(f"degree q={q} is not a unit at ℓ={ell}")
        if (q - 1) % ell ** M == 0:
            raise PrecisionError("q ≡ 1 at the working precision")
        self.signature = signature
        self.q = q
        self.perturbations: Dict[int, AlgebraElement] = {}
        for gen, p in (perturbations or {}).items():
            j = signature.index(gen)
            if p.signature != signature:
                raise ValueError("perturbation signature mismatch")
            if not p.is_zero():
                self.perturbations[j] = p
        self.images: List[AlgebraElement] = []
        for j, d in enumerate(signature.grades):
            img = power_of_generator(signature, j, q ** d) - 1
            if j in self.perturbations:
                img = img + self.perturbations[j]
            self.images.append(img)
        self._cache: Dict[Word, AlgebraElement] = {(): AlgebraElement.one(signature)}
        self._verified: Optional[Tuple[bool, Optional[int]]] = None

    def image(self, word: Word) -> AlgebraElement:
        """σ applied to a single word, memoized by prefix."""
        img = self._cache.get(word)
        if img is None:
            img = mul(self.image(word[:-1]), self.images[word[-1]])
            self._cache[word] = img
        return img

    def apply(self, a: AlgebraElement, max_grade: Optional[int] = None) -> AlgebraElement:
        if a.signature != self.signature:
            raise ValueError("signature mismatch")
        sig = self.signature
        grade = sig.grade
        out = {}
        for w, c in a.terms.items():
            if max_grade is not None and grade(w) > max_grade:
                continue
            for u, d in self.image(w).terms.items():
                if max_grade is not None and grade(u) > max_grade:
                    continue
                p = c * d
                prev = out.get(u)
                out[u] = p if prev is None else prev + p
        return AlgebraElement._raw(sig, out)

    def scalar_power(self, m: int):
        return self.signature.scalar(self.q ** m)

    @classmethod
    def from_dict(cls, data: dict, degree: int) -> "QuasiScalar":
        """Build from ``ell``, ``precision``, ``degree_q``, ``generators`` and
        optional ``perturbations`` (generator name -> element text)."""
        for key in ("ell", "precision", "degree_q", "generators"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        gens = []
        for idx, g in enumerate(data["generators"]):
            if not isinstance(g, dict) or "name" not in g or "grade" not in g:
                raise ValueError(f"generators[{idx}]: expected an object with name and grade")
            gens.append((g["name"], int(g["grade"])))
        sig = AlgebraSignature(int(data["ell"]), int(data["precision"]), degree, tuple(gens))
        perturbations = {}
        for name, text in (data.get("perturbations") or {}).items():
            try:
                perturbations[name] = from_text(sig, text)
            except ValueError as exc:
                raise ValueError(f"perturbations[{name!r}]: {exc}") from None
        return cls(sig, int(str(data["degree_q"])), perturbations)


def apply_sigma(sigma: QuasiScalar, a: AlgebraElement) -> AlgebraElement:
    return sigma.apply(a)


def verify_quasi_scalar(sigma: QuasiScalar) -> Tuple[bool, Optional[int]]:
    """Check that σ preserves grades and acts by q^m on every grade-m monomial.

    Returns ``(True, None)`` or ``(False, first failing grade)``.
    """
    if sigma._verified is not None:
        return sigma._verified
    sig = sigma.signature
    grade = sig.grade
    failing = None
    for w in sorted(sig.words(), key=lambda w: (grade(w), w)):
        m = grade(w)
        if failing is not None and m >= failing:
            break
        img = sigma.image(w)
        if any(grade(u) < m for u in img.terms):
            failing = m
            continue
        leading = img.component(m)
        expected = AlgebraElement._raw(sig, {w: sigma.scalar_power(m)})
        if leading != expected:
            failing = m
    sigma._verified = (failing is None, failing)
    return sigma._verified


def _require_quasi_scalar(sigma: QuasiScalar):
    ok, grade = verify_quasi_scalar(sigma)
    if not ok:
        raise ValueError(f"σ is not quasi-scalar: leading terms fail at grade {grade}")


def _qk_minus_one(sigma: QuasiScalar, k: int):
    sig = sigma.signature
    if val_qpow(sigma.q, k, sig.ell, precision=sig.precision) >= sig.precision:
        raise PrecisionError(f"v(q^{k} - 1) exceeds the working precision")
    return sig.scalar(sigma.q ** k - 1)


def eigen_lift(sigma: QuasiScalar, seed: AlgebraElement, target: int):
    """Lift ``seed`` to a σ-eigenvector modulo grades above ``target``.

    The leading (lowest-grade) part of ``seed`` fixes the eigenvalue q^m;
    higher-grade parts are corrected one grade at a time.  Returns the
    eigenvector and its measured period ``max(0, -min coefficient valuation)``.
    """
    _require_quasi_scalar(sigma)
    m = seed.w_grade()
    if m == INF:
        raise ValueError("seed must be nonzero")
    qm = sigma.scalar_power(m)
    v = seed.truncate(max_grade=target)
    sv = sigma.apply(v, max_grade=target)
    for g in range(m + 1, target + 1):
        defect = (sv - v.scale(qm)).component(g)
        if defect.is_zero():
            continue
        denom = qm * _qk_minus_one(sigma, g - m)
        x = defect.scale(-denom.inverse())
        v = v + x
        sv = sv + sigma.apply(x, max_grade=target)
    return v, max(0, -v.min_valuation()) if not v.is_zero() else 0


def lift_bound(sigma: QuasiScalar, span: int) -> int:
    """Σ_{k=1}^{span} v_ℓ(q^k - 1)."""
    sig = sigma.signature
    return sum(val_qpow(sigma.q, k, sig.ell) for k in range(1, span + 1))


@dataclass
class GradeDiagnostic:
    grade: int
    count: int
    worst_period: int
    valuation_sum: int
    cbound: Fraction

    @property
    def passed(self) -> bool:
        return self.worst_period <= self.valuation_sum <= self.cbound


@dataclass
class Eigenbasis:
    vectors: List[Tuple[str, AlgebraElement, int]]
    diagnostics: List[GradeDiagnostic]
    triangular: bool

    @property
    def passed(self) -> bool:
        return self.triangular and all(d.passed for d in self.diagnostics)


def eigenbasis(sigma: QuasiScalar, target: int) -> Eigenbasis:
    """Eigen-lift every monomial of grade ≤ target."""
    _require_quasi_scalar(sigma)
    sig = sigma.signature
    grade = sig.grade
    vectors = []
    per_grade: Dict[int, List[int]] = {}
    triangular = True
    words = sorted((w for w in sig.words() if grade(w) <= target),
                   key=lambda w: (grade(w), w))
    for w in words:
        m = grade(w)
        seed = AlgebraElement._raw(sig, {w: sig.scalar(1)})
        vec, period = eigen_lift(sigma, seed, target)
        if vec.component(m) != seed:
            triangular = False
        vectors.append((sig.word_text(w), vec, period))
        per_grade.setdefault(m, []).append(period)
    diagnostics = [GradeDiagnostic(m, len(ps), max(ps), lift_bound(sigma, target - m),
                                   cbound(sigma.q, sig.ell, target - m))
                   for m, ps in sorted(per_grade.items())]
    return Eigenbasis(vectors, diagnostics, triangular)


@dataclass
class TorsorCocycle:
    """Galois action on the path torsor: σ_T(a·p0) = σ(a)·u·p0."""

    sigma: QuasiScalar
    cocycle: AlgebraElement

    def __post_init__(self):
        if self.cocycle.augment() != 1:
            raise ValueError("cocycle must have augmentation 1")

    def apply(self, t: TorsorElement, max_grade: Optional[int] = None) -> TorsorElement:
        body = mul(self.sigma.apply(t.body, max_grade), self.cocycle, max_grade=max_grade)
        return TorsorElement(body, t.source, t.target)


@dataclass
class CanonicalPath:
    path: TorsorElement
    periods: Dict[int, int] = field(default_factory=dict)


def canonical_path(c: TorsorCocycle, target: int, reverse_order: bool = False) -> CanonicalPath:
    """The unique σ-fixed w·p0 with ε(w) = 1, modulo grades above ``target``.

    ``periods[n]`` is the integral period b_n: the largest denominator
    exponent among the coefficients of grade < n.
    """
    sigma = c.sigma
    _require_quasi_scalar(sigma)
    sig = sigma.signature
    grade = sig.grade
    w = AlgebraElement.one(sig)
    for g in range(1, target + 1):
        residual = (mul(sigma.apply(w, g), c.cocycle, max_grade=g) - w).component(g)
        if residual.is_zero():
            continue
        factor = (-_qk_minus_one(sigma, g)).inverse()
        items = sorted(residual.terms.items(), key=lambda kv: word_key(kv[0]),
                       reverse=reverse_order)
        correction = {}
        for word, coeff in items:
            correction[word] = coeff * factor
        w = w + AlgebraElement._raw(sig, correction)
    periods = {}
    worst = 0
    for n in range(1, target + 2):
        layer = w.component(n - 1)
        if not layer.is_zero():
            worst = max(worst, -layer.min_valuation())
        periods[n] = worst
    return CanonicalPath(TorsorElement(w, "a", "b"), periods)


def ext_annihilator(lam_sub: int, lam_quot: int, ell: int, precision: int):
    """v_ℓ(1 - λ_sub/λ_quot) modulo ℓ^precision; ``INF`` when the ratio is 1."""
    mod = ell ** precision
    if lam_sub % ell == 0 or lam_quot % ell == 0:
        raise ValueError("eigenvalues must be units")
    ratio = lam_sub * pow(lam_quot, -1, mod) % mod
    t = (1 - ratio) % mod
    return INF if t == 0 else valuation(t, ell)
