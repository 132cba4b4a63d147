"""Independent reference computations over exact rationals.

Nothing here imports the package's algebra code; every routine works on
plain dicts ``word -> Fraction`` or integer lists.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, Tuple

Series = Dict[Tuple[int, ...], Fraction]


def v_ell(x, ell):
    """ℓ-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    n, d = x.numerator, x.denominator
    while n % ell == 0:
        n //= ell
        v += 1
    while d % ell == 0:
        d //= ell
        v -= 1
    return v


def series_mul(a: Series, b: Series, degree: int) -> Series:
    out: Series = {}
    for u, x in a.items():
        for w, y in b.items():
            if len(u) + len(w) <= degree:
                out[u + w] = out.get(u + w, 0) + x * y
    return {w: c for w, c in out.items() if c}


def series_add(a: Series, b: Series, sign=1) -> Series:
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + sign * c
    return {w: c for w, c in out.items() if c}


def general_binomial(e, i) -> Fraction:
    e = Fraction(e)
    out = Fraction(1)
    for j in range(i):
        out = out * (e - j) / (j + 1)
    return out


def generator_power(gen: int, e, degree: int) -> Series:
    """(1 + X_gen)^e truncated at the given length, e rational."""
    return {(gen,) * i: general_binomial(e, i) for i in range(degree + 1)
            if general_binomial(e, i)}


def series_log(a: Series, degree: int) -> Series:
    """log(a) for a with constant term 1, via the alternating series."""
    x = series_add(a, {(): Fraction(1)}, -1)
    out: Series = {}
    power: Series = {(): Fraction(1)}
    for n in range(1, degree + 1):
        power = series_mul(power, x, degree)
        out = series_add(out, {w: c * Fraction((-1) ** (n + 1), n) for w, c in power.items()})
    return out


def series_exp(a: Series, degree: int) -> Series:
    out: Series = {(): Fraction(1)}
    power: Series = {(): Fraction(1)}
    for n in range(1, degree + 1):
        power = series_mul(power, a, degree)
        out = series_add(out, {w: c / math.factorial(n) for w, c in power.items()})
    return out


def deshuffle_coproduct(word: Tuple[int, ...], degree: int):
    """Δ of the monomial X_w for grouplike 1 + X_j: sum over covering pairs of subsets.

    Each letter X of the word lands left, right or both (Δ X = X⊗1 + 1⊗X + X⊗X).
    """
    out = {}
    for choice in itertools.product((0, 1, 2), repeat=len(word)):
        left = tuple(g for g, c in zip(word, choice) if c in (0, 2))
        right = tuple(g for g, c in zip(word, choice) if c in (1, 2))
        if len(left) + len(right) <= degree:
            out[(left, right)] = out.get((left, right), 0) + 1
    return out


def sylvester_solvable_brute(A, B, C, ell, M, e):
    """Exhaustive search over every X mod ℓ^M; only for tiny sizes."""
    mod = ell ** M
    w, p = len(A), len(C)
    for flat in itertools.product(range(mod), repeat=w * p):
        X = [flat[i * p:(i + 1) * p] for i in range(w)]
        ok = True
        for i in range(w):
            for j in range(p):
                s = sum(A[i][k] * X[k][j] for k in range(w))
                s -= sum(X[i][k] * C[k][j] for k in range(p))
                if (s + ell ** e * B[i][j]) % mod:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False


def cbound_closed(q, ell, k) -> Fraction:
    """Closed-form bound recomputed from the order of q mod ℓ (mod 4 when ℓ = 2)."""
    base = 4 if ell == 2 else ell
    s = 1
    while pow(q, s, base) != 1:
        s += 1
    v = v_ell(q ** s - 1, ell)
    if k == 0:
        return Fraction(0)
    if ell == 2:
        return Fraction(k, s) * (v + 2) + Fraction(1, s)
    return Fraction(k, s) * (v + Fraction(1, ell - 1))
