"""Truncated free noncommutative power series with Hopf structure.

Elements live in the completed group ring of a free pro-ℓ group, written in
the variables ``X_j = γ_j - 1`` and truncated at word length ``D``.  Words
are tuples of generator indices.  Every generator carries a weight grade
(1 or 2); the grade of a word is the sum of its letters' grades.

Tensor elements are truncated by *total* length ``len(w1) + len(w2) <= D``,
which is the truncation under which the coproduct of a truncated element is
well defined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Sequence, Tuple, Union

from .padic import INF, Number, PadicScalar, PrecisionError, is_prime

Word = Tuple[int, ...]


@dataclass(frozen=True)
class AlgebraSignature:
    ell: int
    precision: int
    degree: int
    generators: Tuple[Tuple[str, int], ...]
    _grade_cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        gens = tuple((str(n), int(g)) for n, g in self.generators)
        object.__setattr__(self, "generators", gens)
        if not is_prime(self.ell):
            raise ValueError(f"{self.ell} is not prime")
        if not gens:
            raise ValueError("a signature needs at least one generator")
        if self.degree < 1:
            raise ValueError("truncation degree must be at least 1")
        if any(g not in (1, 2) for _, g in gens):
            raise ValueError("generator grades must be 1 or 2")
        names = [n for n, _ in gens]
        if len(set(names)) != len(names):
            raise ValueError("generator names must be distinct")
        for n in names:
            if not n or "*" in n or n == "1" or any(ch.isspace() for ch in n):
                raise ValueError(f"invalid generator name {n!r}")
        PadicScalar.one(self.ell, self.precision)

    @classmethod
    def simple(cls, ell: int, precision: int, degree: int, grades: Sequence[int] = (1,),
               names: Sequence[str] | None = None) -> "AlgebraSignature":
        if names is None:
            names = ["X"] if len(grades) == 1 else [f"X{i + 1}" for i in range(len(grades))]
        return cls(ell, precision, degree, tuple(zip(names, grades)))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> List[str]:
        return [n for n, _ in self.generators]

    @property
    def grades(self) -> List[int]:
        return [g for _, g in self.generators]

    def index(self, gen: Union[int, str]) -> int:
        if isinstance(gen, int):
            if not 0 <= gen < self.rank:
                raise IndexError(f"no generator {gen}")
            return gen
        return self.names.index(gen)

    def grade(self, word: Word) -> int:
        g = self._grade_cache.get(word)
        if g is None:
            gr = self.grades
            g = sum(gr[i] for i in word)
            self._grade_cache[word] = g
        return g

    def scalar(self, x: Number) -> PadicScalar:
        return PadicScalar.from_rational(x, self.ell, self.precision)

    def words(self, max_length: int | None = None) -> Iterator[Word]:
        """All words of length ≤ max_length in canonical order."""
        top = self.degree if max_length is None else min(max_length, self.degree)
        layer: List[Word] = [()]
        for n in range(top + 1):
            yield from layer
            layer = [w + (j,) for w in layer for j in range(self.rank)]

    def word_text(self, word: Word) -> str:
        return "*".join(self.names[i] for i in word) if word else "1"

    def parse_word(self, text: str) -> Word:
        text = text.strip()
        if text == "1":
            return ()
        return tuple(self.index(part) for part in text.split("*"))


def word_key(word: Word):
    return (len(word), word)


class AlgebraElement:
    """Finite sparse sum of words with ℓ-adic coefficients."""

    __slots__ = ("signature", "terms")

    def __init__(self, signature: AlgebraSignature, terms=None):
        self.signature = signature
        clean: Dict[Word, PadicScalar] = {}
        for w, c in (terms or {}).items():
            w = tuple(w)
            if len(w) > signature.degree:
                continue
            if any(not 0 <= i < signature.rank for i in w):
                raise ValueError(f"word {w} uses an unknown generator")
            c = signature.scalar(c)
            if w in clean:
                c = clean[w] + c
            clean[w] = c
        self.terms = {w: c for w, c in clean.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, signature, terms):
        e = object.__new__(cls)
        e.signature = signature
        e.terms = {w: c for w, c in terms.items() if c.valuation != INF}
        return e

    @classmethod
    def zero(cls, signature):
        return cls._raw(signature, {})

    @classmethod
    def one(cls, signature):
        return cls.scalar(signature, 1)

    @classmethod
    def scalar(cls, signature, c: Number):
        return cls._raw(signature, {(): signature.scalar(c)})

    @classmethod
    def generator(cls, signature, gen: Union[int, str]):
        return cls._raw(signature, {(signature.index(gen),): signature.scalar(1)})

    @classmethod
    def monomial(cls, signature, word: Sequence[Union[int, str]], coeff: Number = 1):
        w = tuple(signature.index(g) for g in word)
        return cls(signature, {w: coeff})

    # basic access -------------------------------------------------------

    def _check(self, other: "AlgebraElement"):
        if other.signature is not self.signature and other.signature != self.signature:
            raise ValueError("signature mismatch")

    def coefficient(self, word: Sequence[int]) -> PadicScalar:
        c = self.terms.get(tuple(word))
        return c if c is not None else self.signature.scalar(0)

    def items(self) -> List[Tuple[Word, PadicScalar]]:
        return sorted(self.terms.items(), key=lambda kv: word_key(kv[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def augment(self) -> PadicScalar:
        return self.coefficient(())

    def is_integral(self) -> bool:
        return all(c.valuation >= 0 for c in self.terms.values())

    def min_valuation(self):
        return min((c.valuation for c in self.terms.values()), default=INF)

    def i_degree(self):
        return min((len(w) for w in self.terms), default=INF)

    def w_grade(self):
        g = self.signature.grade
        return min((g(w) for w in self.terms), default=INF)

    def truncate(self, max_length: int | None = None, max_grade: int | None = None):
        g = self.signature.grade
        return AlgebraElement._raw(self.signature, {
            w: c for w, c in self.terms.items()
            if (max_length is None or len(w) <= max_length)
            and (max_grade is None or g(w) <= max_grade)})

    def component(self, grade: int) -> "AlgebraElement":
        g = self.signature.grade
        return AlgebraElement._raw(self.signature,
                                   {w: c for w, c in self.terms.items() if g(w) == grade})

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(self.signature, other)
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        return AlgebraElement._raw(self.signature, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw(self.signature, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = AlgebraElement.scalar(self.signature, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Number) -> "AlgebraElement":
        c = self.signature.scalar(c)
        return AlgebraElement._raw(self.signature, {w: c * x for w, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined for general elements")
        result = AlgebraElement.one(self.signature)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, Fraction, PadicScalar)):
                other = AlgebraElement.scalar(self.signature, other)
            else:
                return NotImplemented
        if other.signature != self.signature:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        if not self.terms:
            return "0"
        sig = self.signature
        parts = []
        for w, c in self.items():
            q = c.lift()
            word = sig.word_text(w)
            parts.append(str(q) if word == "1" else f"({q})*{word}")
        return " + ".join(parts)


def mul(a: AlgebraElement, b: AlgebraElement, max_grade: int | None = None) -> AlgebraElement:
    """Concatenation product truncated at length D (and optionally at a grade)."""
    a._check(b)
    sig = a.signature
    D = sig.degree
    grade = sig.grade
    right = sorted(b.terms.items(), key=lambda kv: len(kv[0]))
    out: Dict[Word, PadicScalar] = {}
    for w1, c1 in a.terms.items():
        room = D - len(w1)
        g1 = grade(w1) if max_grade is not None else 0
        for w2, c2 in right:
            if len(w2) > room:
                break
            if max_grade is not None and g1 + grade(w2) > max_grade:
                continue
            w = w1 + w2
            p = c1 * c2
            prev = out.get(w)
            out[w] = p if prev is None else prev + p
    return AlgebraElement._raw(sig, out)


def augment(a: AlgebraElement) -> PadicScalar:
    return a.augment()


def filtration_degree(a: AlgebraElement):
    """(I-adic degree, weight grade); ``(INF, INF)`` for zero."""
    return a.i_degree(), a.w_grade()


# group elements ------------------------------------------------------------


def binomial(e: Union[Number], i: int, ell: int, precision: int) -> PadicScalar:
    """binom(e, i) for an integer, rational or ℓ-adic exponent e."""
    if isinstance(e, PadicScalar):
        num = PadicScalar.one(ell, precision)
        for j in range(i):
            num = num * (e - j)
        fact = 1
        for j in range(2, i + 1):
            fact *= j
        return num / fact
    e = Fraction(e)
    num = Fraction(1)
    for j in range(i):
        num *= (e - j) / (j + 1)
    return PadicScalar.from_rational(num, ell, precision)


def power_of_generator(sig: AlgebraSignature, gen: Union[int, str], e) -> AlgebraElement:
    """(1 + X_gen)^e expanded by the binomial series."""
    j = sig.index(gen)
    return AlgebraElement._raw(sig, {
        (j,) * i: binomial(e, i, sig.ell, sig.precision) for i in range(sig.degree + 1)})


def group_element(sig: AlgebraSignature, word: Iterable) -> AlgebraElement:
    """Image of a formal group word.

    ``word`` is a sequence of ``(generator, exponent)`` pairs; a bare
    generator stands for exponent 1.
    """
    result = AlgebraElement.one(sig)
    for letter in word:
        gen, e = (letter, 1) if isinstance(letter, (int, str)) else letter
        result = result * power_of_generator(sig, gen, e)
    return result


# tensors and coproduct -------------------------------------------------------


class TensorElement:
    """Sparse element of A ⊗ A truncated at total length D."""

    __slots__ = ("signature", "terms")

    def __init__(self, signature: AlgebraSignature, terms=None):
        self.signature = signature
        out: Dict[Tuple[Word, Word], PadicScalar] = {}
        for (w1, w2), c in (terms or {}).items():
            key = (tuple(w1), tuple(w2))
            if len(key[0]) + len(key[1]) > signature.degree:
                continue
            c = signature.scalar(c)
            out[key] = out[key] + c if key in out else c
        self.terms = {k: c for k, c in out.items() if not c.is_zero()}

    @classmethod
    def _raw(cls, signature, terms):
        t = object.__new__(cls)
        t.signature = signature
        t.terms = {k: c for k, c in terms.items() if c.valuation != INF}
        return t

    def items(self):
        return sorted(self.terms.items(),
                      key=lambda kv: (word_key(kv[0][0]), word_key(kv[0][1])))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TensorElement"):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return TensorElement._raw(self.signature, out)

    def __neg__(self):
        return TensorElement._raw(self.signature, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "TensorElement"):
        D = self.signature.degree
        out: Dict[Tuple[Word, Word], PadicScalar] = {}
        for (a1, a2), c in self.terms.items():
            la = len(a1) + len(a2)
            for (b1, b2), d in other.terms.items():
                if la + len(b1) + len(b2) > D:
                    continue
                k = (a1 + b1, a2 + b2)
                p = c * d
                out[k] = out[k] + p if k in out else p
        return TensorElement._raw(self.signature, out)

    def __eq__(self, other):
        if not isinstance(other, TensorElement):
            return NotImplemented
        return other.signature == self.signature and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        sig = self.signature
        return " + ".join(f"({c.lift()})*{sig.word_text(a)}⊗{sig.word_text(b)}"
                          for (a, b), c in self.items()) or "0"


def tensor(a: AlgebraElement, b: AlgebraElement) -> TensorElement:
    a._check(b)
    D = a.signature.degree
    out = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            if len(w1) + len(w2) <= D:
                out[(w1, w2)] = c1 * c2
    return TensorElement._raw(a.signature, out)


@lru_cache(maxsize=None)
def _coproduct_word(D: int, word: Word) -> Dict[Tuple[Word, Word], int]:
    if not word:
        return {((), ()): 1}
    prev = _coproduct_word(D, word[:-1])
    x = word[-1:]
    out: Dict[Tuple[Word, Word], int] = {}
    for (u1, u2), n in prev.items():
        size = len(u1) + len(u2)
        if size + 1 <= D:
            for key in ((u1 + x, u2), (u1, u2 + x)):
                out[key] = out.get(key, 0) + n
        if size + 2 <= D:
            key = (u1 + x, u2 + x)
            out[key] = out.get(key, 0) + n
    return out


def coproduct(a: AlgebraElement) -> TensorElement:
    """Algebra map with Δ(X_j) = X_j⊗1 + 1⊗X_j + X_j⊗X_j."""
    sig = a.signature
    out: Dict[Tuple[Word, Word], PadicScalar] = {}
    for w, c in a.terms.items():
        for key, n in _coproduct_word(sig.degree, w).items():
            p = c * n
            out[key] = out[key] + p if key in out else p
    return TensorElement._raw(sig, out)


@lru_cache(maxsize=None)
def _antipode_word(D: int, word: Word) -> Dict[Word, int]:
    if not word:
        return {(): 1}
    rest = _antipode_word(D, word[1:])
    x = word[0]
    out: Dict[Word, int] = {}
    for u, n in rest.items():
        for i in range(1, D - len(u) + 1):
            key = u + (x,) * i
            out[key] = out.get(key, 0) + n * (-1) ** i
    return {k: n for k, n in out.items() if n}


def antipode(a: AlgebraElement) -> AlgebraElement:
    """Anti-homomorphism with S(X_j) = (1 + X_j)^{-1} - 1."""
    sig = a.signature
    out: Dict[Word, PadicScalar] = {}
    for w, c in a.terms.items():
        for key, n in _antipode_word(sig.degree, w).items():
            p = c * n
            out[key] = out[key] + p if key in out else p
    return AlgebraElement._raw(sig, out)


def counit(a: AlgebraElement) -> PadicScalar:
    return a.augment()


def _apply_to_word(sig, word, f, cache):
    x = cache.get(word)
    if x is None:
        x = AlgebraElement._raw(sig, {word: sig.scalar(1)})
        if f is not None:
            x = f(x)
        cache[word] = x
    return x


def contract(t: TensorElement, left=None, right=None) -> AlgebraElement:
    """∇∘(left ⊗ right) applied to a tensor; maps default to the identity."""
    sig = t.signature
    result = AlgebraElement.zero(sig)
    cache_l: Dict[Word, AlgebraElement] = {}
    cache_r: Dict[Word, AlgebraElement] = {}
    for (w1, w2), c in t.items():
        x = _apply_to_word(sig, w1, left, cache_l)
        y = _apply_to_word(sig, w2, right, cache_r)
        result = result + mul(x, y).scale(c)
    return result


def structure_tests(a: AlgebraElement) -> Dict[str, bool]:
    sig = a.signature
    delta = coproduct(a)
    one = AlgebraElement.one(sig)
    grouplike = a.augment() == 1 and delta == tensor(a, a)
    primitive = delta == tensor(a, one) + tensor(one, a)
    return {"grouplike": bool(grouplike), "primitive": bool(primitive)}


def is_grouplike(a: AlgebraElement) -> bool:
    return structure_tests(a)["grouplike"]


def is_primitive(a: AlgebraElement) -> bool:
    return structure_tests(a)["primitive"]


# log and exp -----------------------------------------------------------------


def _guard(x: AlgebraElement) -> AlgebraElement:
    floor = -(x.signature.precision - 1)
    if x.min_valuation() < floor:
        raise PrecisionError("series coefficient valuation fell below -(M-1)")
    return x


def log_elem(a: AlgebraElement) -> AlgebraElement:
    if a.augment() != 1:
        raise ValueError("log needs augmentation 1")
    sig = a.signature
    y = a - 1
    power = y
    result = AlgebraElement.zero(sig)
    for n in range(1, sig.degree + 1):
        result = result + power.scale(Fraction((-1) ** (n + 1), n))
        power = power * y
        if power.is_zero():
            break
    return _guard(result)


def exp_elem(a: AlgebraElement) -> AlgebraElement:
    if not a.augment().is_zero():
        raise ValueError("exp needs an element of the augmentation ideal")
    sig = a.signature
    result = AlgebraElement.one(sig)
    power = AlgebraElement.one(sig)
    fact = 1
    for n in range(1, sig.degree + 1):
        power = power * a
        if power.is_zero():
            break
        fact *= n
        result = result + power.scale(Fraction(1, fact))
    return _guard(result)


# text serialization ------------------------------------------------------------


def to_text(a: AlgebraElement, suffix: str = "") -> str:
    sig = a.signature
    lines = []
    for w, c in a.items():
        lines.append(f"{sig.word_text(w)}{suffix}\t{c.valuation}\t{c.unit}")
    return "\n".join(lines) + ("\n" if lines else "")


def from_text(sig: AlgebraSignature, text: str, suffix: str = "") -> AlgebraElement:
    terms: Dict[Word, PadicScalar] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'word<TAB>valuation<TAB>unit'")
        word_text = parts[0].strip()
        if suffix:
            if word_text == suffix.lstrip("*"):
                word_text = "1"
            elif word_text.endswith(suffix):
                word_text = word_text[: -len(suffix)]
            else:
                raise ValueError(f"line {lineno}: word must end with {suffix!r}")
        try:
            word = sig.parse_word(word_text)
            val, unit = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if unit % sig.ell == 0:
            raise ValueError(f"line {lineno}: unit must be prime to {sig.ell}")
        c = PadicScalar(sig.ell, sig.precision, val, unit)
        terms[word] = terms[word] + c if word in terms else c
    return AlgebraElement(sig, terms)
