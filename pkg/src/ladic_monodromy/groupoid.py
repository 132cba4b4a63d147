"""Two-object Hopf groupoid over the free model, and finite ℓ-group algebras.

The objects are ``"a"`` and ``"b"``.  Every arrow space is free of rank one
over the algebra at its source: an element of G(s, t) is stored as
``body · p(s, t)`` where ``p(a, b) = p0``, ``p(b, a) = p0^{-1}`` and
``p(s, s) = 1``.  The algebra at ``b`` is identified with the one at ``a``
by conjugation through ``p0``, so composition multiplies bodies and
concatenates paths.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .freealg import (AlgebraElement, AlgebraSignature, TensorElement, antipode,
                      coproduct, from_text, group_element, mul, tensor, to_text)

OBJECTS = ("a", "b")


class TorsorElement:
    """An arrow ``body · p(source, target)`` of the two-object groupoid."""

    __slots__ = ("body", "source", "target")

    def __init__(self, body: AlgebraElement, source: str = "a", target: str = "b"):
        if source not in OBJECTS or target not in OBJECTS:
            raise ValueError(f"objects must be among {OBJECTS}")
        self.body = body
        self.source = source
        self.target = target

    @property
    def signature(self) -> AlgebraSignature:
        return self.body.signature

    @property
    def terms(self):
        return self.body.terms

    @classmethod
    def base_path(cls, sig: AlgebraSignature, source="a", target="b") -> "TorsorElement":
        return cls(AlgebraElement.one(sig), source, target)

    def hom(self) -> Tuple[str, str]:
        return self.source, self.target

    def augment(self):
        return self.body.augment()

    def i_degree(self):
        return self.body.i_degree()

    def __add__(self, other: "TorsorElement"):
        self._same_hom(other)
        return TorsorElement(self.body + other.body, self.source, self.target)

    def __sub__(self, other: "TorsorElement"):
        self._same_hom(other)
        return TorsorElement(self.body - other.body, self.source, self.target)

    def scale(self, c):
        return TorsorElement(self.body.scale(c), self.source, self.target)

    def _same_hom(self, other):
        if self.hom() != other.hom():
            raise ValueError("arrows live in different hom spaces")

    def __eq__(self, other):
        if not isinstance(other, TorsorElement):
            return NotImplemented
        return self.hom() == other.hom() and self.body == other.body

    __hash__ = None

    def __repr__(self):
        return f"({self.body})·p[{self.source}→{self.target}]"


def compose(x: TorsorElement, y: TorsorElement) -> TorsorElement:
    """Path composition x then y, from G(s, t) ⊗ G(t, u) to G(s, u)."""
    if x.target != y.source:
        raise ValueError(f"cannot compose {x.hom()} with {y.hom()}")
    return TorsorElement(mul(x.body, y.body), x.source, y.target)


def torsor_compose(a: AlgebraElement, t: TorsorElement) -> TorsorElement:
    """Left action of G(s, s) on G(s, t)."""
    return compose(TorsorElement(a, t.source, t.source), t)


def torsor_compose_right(t: TorsorElement, b: AlgebraElement) -> TorsorElement:
    """Right action of G(t, t) on G(s, t), transported through the base path."""
    return compose(t, TorsorElement(b, t.target, t.target))


def unit(sig: AlgebraSignature, obj: str = "a") -> TorsorElement:
    return TorsorElement(AlgebraElement.one(sig), obj, obj)


def torsor_antipode(t: TorsorElement) -> TorsorElement:
    return TorsorElement(antipode(t.body), t.target, t.source)


def torsor_coproduct(t: TorsorElement) -> TensorElement:
    """Coproduct of the body; both tensor factors stay in the hom space of t."""
    return coproduct(t.body)


def torsor_counit(t: TorsorElement):
    return t.body.augment()


def left_module_degree(t: TorsorElement):
    """Largest n with t ∈ I(s,s)^n · G(s,t)."""
    return t.body.i_degree()


def right_module_degree(t: TorsorElement, path: Optional[TorsorElement] = None):
    """Largest n with t ∈ path · I(t,t)^n for a grouplike ``path`` in G(s,t)."""
    path = path or TorsorElement.base_path(t.signature, t.source, t.target)
    return compose(torsor_antipode(path), t).body.i_degree()


def abelianization_iso(t: TorsorElement, path: Optional[TorsorElement] = None) -> AlgebraElement:
    """Class of t ∘ path^{-1} in I(s,s)/I(s,s)^2, as its length-one part.

    ``path`` must be a grouplike arrow with the same endpoints (default p0).
    """
    if not t.body.augment().is_zero():
        raise ValueError("element is not in the augmentation submodule")
    sig = t.signature
    path = path or TorsorElement.base_path(sig, t.source, t.target)
    if path.hom() != t.hom():
        raise ValueError("path must share endpoints with the element")
    inverse = torsor_antipode(path)
    return compose(t, inverse).body.truncate(max_length=1)


def abelianization_rank(sig: AlgebraSignature) -> int:
    """Rank of I/I^2 spanned by the classes of γ_j - 1."""
    rows = []
    for j in range(sig.rank):
        cls = (group_element(sig, [j]) - 1).truncate(max_length=1)
        rows.append([cls.coefficient((i,)) for i in range(sig.rank)])
    return _qp_rank(rows)


def _qp_rank(rows) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, len(rows)):
            if not rows[i][col].is_zero() and (
                    pivot is None or rows[i][col].valuation < rows[pivot][col].valuation):
                pivot = i
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for i in range(rank + 1, len(rows)):
            if not rows[i][col].is_zero():
                f = rows[i][col] / rows[rank][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def torsor_to_text(t: TorsorElement) -> str:
    return to_text(t.body, suffix="*p0")


def torsor_from_text(sig: AlgebraSignature, text: str) -> TorsorElement:
    return TorsorElement(from_text(sig, text, suffix="*p0"), "a", "b")


# finite ℓ-group algebras over F_ℓ -------------------------------------------------


class FiniteGroupAlgebra:
    """Group algebra F_ℓ[G] of a finite ℓ-group given by its multiplication table."""

    def __init__(self, ell: int, table: Sequence[Sequence[int]]):
        n = len(table)
        if n == 0 or any(len(row) != n for row in table):
            raise ValueError("multiplication table must be square and nonempty")
        if any(not 0 <= x < n for row in table for x in row):
            raise ValueError("table entries must be element indices")
        order = n
        while order % ell == 0:
            order //= ell
        if order != 1:
            raise ValueError(f"group order {n} is not a power of {ell}")
        self.ell = ell
        self.table = [list(map(int, row)) for row in table]
        ids = [e for e in range(n) if all(self.table[e][x] == x == self.table[x][e]
                                          for x in range(n))]
        if not ids:
            raise ValueError("table has no identity element")
        self.identity = ids[0]
        for x in range(n):
            if self.identity not in self.table[x]:
                raise ValueError(f"element {x} has no inverse")
        for x, y, z in itertools.product(range(n), repeat=3):
            if self.table[self.table[x][y]][z] != self.table[x][self.table[y][z]]:
                raise ValueError(f"table is not associative at {(x, y, z)}")

    @property
    def order(self) -> int:
        return len(self.table)

    @classmethod
    def cyclic(cls, ell: int, n: int) -> "FiniteGroupAlgebra":
        return cls(ell, [[(i + j) % n for j in range(n)] for i in range(n)])

    @classmethod
    def abelian(cls, ell: int, moduli: Sequence[int]) -> "FiniteGroupAlgebra":
        elems = list(itertools.product(*[range(m) for m in moduli]))
        index = {e: i for i, e in enumerate(elems)}
        table = [[index[tuple((a + b) % m for a, b, m in zip(x, y, moduli))] for y in elems]
                 for x in elems]
        return cls(ell, table)

    @classmethod
    def from_json(cls, text: str) -> "FiniteGroupAlgebra":
        data = json.loads(text)
        for key in ("ell", "order", "table"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        ell, order, flat = int(data["ell"]), int(data["order"]), data["table"]
        if flat and isinstance(flat[0], list):
            flat = [x for row in flat for x in row]
        if len(flat) != order * order:
            raise ValueError("table must have order^2 entries")
        table = [[int(flat[i * order + j]) for j in range(order)] for i in range(order)]
        return cls(ell, table)

    def _times_augmentation_generator(self, x: List[int], g: int) -> List[int]:
        """x · (g - e) in F_ℓ[G]."""
        out = [(-c) % self.ell for c in x]
        for h, c in enumerate(x):
            if c:
                k = self.table[h][g]
                out[k] = (out[k] + c) % self.ell
        return out

    def augmentation_basis(self) -> List[List[int]]:
        e = self.identity
        basis = []
        for g in range(self.order):
            if g != e:
                v = [0] * self.order
                v[g], v[e] = 1, self.ell - 1
                basis.append(v)
        return basis

    def _row_reduce(self, vectors: List[List[int]]) -> List[List[int]]:
        p = self.ell
        basis: List[List[int]] = []
        pivots: List[int] = []
        for v in vectors:
            v = list(v)
            for b, col in zip(basis, pivots):
                if v[col]:
                    f = v[col]
                    v = [(x - f * y) % p for x, y in zip(v, b)]
            nz = next((i for i, x in enumerate(v) if x), None)
            if nz is None:
                continue
            inv = pow(v[nz], -1, p)
            v = [x * inv % p for x in v]
            for i, b in enumerate(basis):
                if b[nz]:
                    f = b[nz]
                    basis[i] = [(x - f * y) % p for x, y in zip(b, v)]
            basis.append(v)
            pivots.append(nz)
        return basis

    def power_dimensions(self) -> List[int]:
        """Dimensions of I, I^2, ... down to the first zero power."""
        gens = [g for g in range(self.order) if g != self.identity]
        current = self._row_reduce(self.augmentation_basis())
        dims = [len(current)]
        while current:
            products = [self._times_augmentation_generator(x, g) for x in current for g in gens]
            current = self._row_reduce(products)
            dims.append(len(current))
        return dims

    def nilpotency_index(self) -> int:
        """Least c with I^c = 0, by iterated span of products."""
        dims = self.power_dimensions()
        return dims.index(0) + 1

    def brute_nilpotency_index(self) -> int:
        """Least c such that every product of c elements g - e vanishes."""
        gens = [g for g in range(self.order) if g != self.identity]
        if not gens:
            return 1
        e = [0] * self.order
        e[self.identity] = 1
        layer = [e]
        c = 0
        while layer:
            c += 1
            nxt = []
            seen = set()
            for x in layer:
                for g in gens:
                    y = self._times_augmentation_generator(x, g)
                    key = tuple(y)
                    if any(y) and key not in seen:
                        seen.add(key)
                        nxt.append(y)
            layer = nxt
        return c


# randomized Hopf axiom verification ------------------------------------------------


@dataclass
class DiagramResult:
    name: str
    passed: bool
    checked: int
    witness: Optional[str] = None


@dataclass
class HopfReport:
    results: List[DiagramResult] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)

    def result(self, name: str) -> DiagramResult:
        return next(r for r in self.results if r.name == name)

    def to_dict(self):
        return {"all_passed": self.all_passed,
                "diagrams": [{"name": r.name, "passed": r.passed, "checked": r.checked,
                              "witness": r.witness} for r in self.results]}


def random_element(sig: AlgebraSignature, rng: random.Random, density: float = 0.5,
                   span: int = 4) -> AlgebraElement:
    terms = {}
    for w in sig.words():
        if rng.random() < density:
            c = rng.randint(-span, span)
            if c:
                terms[w] = c
    return AlgebraElement(sig, terms)


def random_group_word(sig: AlgebraSignature, rng: random.Random, length: int = 3):
    return [(rng.randrange(sig.rank), rng.choice([-2, -1, 1, 2, 3])) for _ in range(length)]


def _random_arrow(sig, rng, hom):
    if rng.random() < 0.3:
        body = group_element(sig, random_group_word(sig, rng))
    else:
        body = random_element(sig, rng)
    return TorsorElement(body, *hom)


def _triple_coproduct(t: TensorElement, side: str) -> Dict[tuple, object]:
    """(Δ⊗id)Δ or (id⊗Δ)Δ as a map from word triples to coefficients."""
    sig = t.signature
    out: Dict[tuple, object] = {}
    for (w1, w2), c in t.terms.items():
        if side == "left":
            inner = coproduct(AlgebraElement._raw(sig, {w1: sig.scalar(1)}))
            for (u1, u2), d in inner.terms.items():
                if len(u1) + len(u2) + len(w2) <= sig.degree:
                    k = (u1, u2, w2)
                    out[k] = out[k] + c * d if k in out else c * d
        else:
            inner = coproduct(AlgebraElement._raw(sig, {w2: sig.scalar(1)}))
            for (u1, u2), d in inner.terms.items():
                if len(w1) + len(u1) + len(u2) <= sig.degree:
                    k = (w1, u1, u2)
                    out[k] = out[k] + c * d if k in out else c * d
    return {k: v for k, v in out.items() if not v.is_zero()}


def _same_map(x: Dict, y: Dict) -> bool:
    for k in set(x) | set(y):
        a, b = x.get(k), y.get(k)
        if a is None or b is None:
            if not (a if a is not None else b).is_zero():
                return False
        elif a != b:
            return False
    return True


def verify_hopf_axioms(sample_count: int = 100, degree: int = 4,
                       grades: Sequence[int] = (1,), ell: int = 3, precision: int = 20,
                       seed: int = 0) -> HopfReport:
    """Randomized check of the Hopf groupoid axioms on the two-object model."""
    sig = AlgebraSignature.simple(ell, precision, degree, grades)
    rng = random.Random(seed)
    homs = list(itertools.product(OBJECTS, repeat=2))
    checks = {name: [0, None] for name in (
        "antipode-left", "antipode-right", "counit-composition", "bialgebra",
        "coassociativity", "associativity", "unit", "counit", "antipode-involution")}

    def record(name, ok, witness):
        entry = checks[name]
        entry[0] += 1
        if not ok and entry[1] is None:
            entry[1] = witness

    for _ in range(sample_count):
        s, t = rng.choice(homs)
        u = rng.choice(OBJECTS)
        v = rng.choice(OBJECTS)
        x = _random_arrow(sig, rng, (s, t))
        y = _random_arrow(sig, rng, (t, u))
        z = _random_arrow(sig, rng, (u, v))
        one = AlgebraElement.one(sig)

        dx = torsor_coproduct(x)
        left = sum((compose(torsor_antipode(TorsorElement(
            AlgebraElement._raw(sig, {w1: sig.scalar(1)}), s, t)),
            TorsorElement(AlgebraElement._raw(sig, {w2: c}), s, t)).body
            for (w1, w2), c in dx.terms.items()), AlgebraElement.zero(sig))
        record("antipode-left", left == one.scale(x.augment()), f"x={x}")
        right = sum((compose(TorsorElement(AlgebraElement._raw(sig, {w1: c}), s, t),
                             torsor_antipode(TorsorElement(
                                 AlgebraElement._raw(sig, {w2: sig.scalar(1)}), s, t))).body
                     for (w1, w2), c in dx.terms.items()), AlgebraElement.zero(sig))
        record("antipode-right", right == one.scale(x.augment()), f"x={x}")

        xy = compose(x, y)
        record("counit-composition",
               torsor_counit(xy) == torsor_counit(x) * torsor_counit(y), f"x={x}, y={y}")
        record("bialgebra", torsor_coproduct(xy) == dx * torsor_coproduct(y),
               f"x={x}, y={y}")
        record("coassociativity",
               _same_map(_triple_coproduct(dx, "left"), _triple_coproduct(dx, "right")),
               f"x={x}")
        record("associativity", compose(xy, z) == compose(x, compose(y, z)),
               f"x={x}, y={y}, z={z}")
        record("unit", compose(unit(sig, s), x) == x == compose(x, unit(sig, t)), f"x={x}")
        eps_left = sum((AlgebraElement._raw(sig, {w2: c * (1 if not w1 else 0)})
                        for (w1, w2), c in dx.terms.items()), AlgebraElement.zero(sig))
        eps_right = sum((AlgebraElement._raw(sig, {w1: c * (1 if not w2 else 0)})
                         for (w1, w2), c in dx.terms.items()), AlgebraElement.zero(sig))
        record("counit", eps_left == x.body == eps_right, f"x={x}")
        record("antipode-involution", torsor_antipode(torsor_antipode(x)) == x, f"x={x}")

    return HopfReport([DiagramResult(name, witness is None, n, witness)
                       for name, (n, witness) in checks.items()])


def grouplike_antipode_identity(sig: AlgebraSignature) -> bool:
    """∇(S⊗id)Δ(p0) = 1 in G(b, b)."""
    p0 = TorsorElement.base_path(sig)
    dp = torsor_coproduct(p0)
    total = AlgebraElement.zero(sig)
    for (w1, w2), c in dp.terms.items():
        a = TorsorElement(AlgebraElement._raw(sig, {w1: c}), "a", "b")
        b = TorsorElement(AlgebraElement._raw(sig, {w2: sig.scalar(1)}), "a", "b")
        r = compose(torsor_antipode(a), b)
        assert r.hom() == ("b", "b")
        total = total + r.body
    return total == AlgebraElement.one(sig)


__all__ = [
    "TorsorElement", "compose", "torsor_compose", "torsor_compose_right", "unit",
    "torsor_antipode", "torsor_coproduct", "torsor_counit", "left_module_degree",
    "right_module_degree", "abelianization_iso", "abelianization_rank", "torsor_to_text",
    "torsor_from_text", "FiniteGroupAlgebra", "verify_hopf_axioms", "HopfReport",
    "DiagramResult", "random_element", "random_group_word", "grouplike_antipode_identity",
]
