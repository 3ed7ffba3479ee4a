"""Exact weights, affine-extended bilinear forms and sparse signed series.

Everything here is exact: coordinates are :class:`fractions.Fraction` and
series coefficients are Python integers.  Weights are used as dictionary keys
throughout the package, so they are kept in canonical form (reduced
fractions) and are never mutated after construction.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Tuple, Union

RationalLike = Union[int, Fraction, str]


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: they would silently break weight equality.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def _fmt(q: Fraction) -> str:
    return str(q)


class Weight:
    """A point ``(finite; level; grade)`` of an (affine) weight lattice.

    ``finite`` holds the classical part in the orthogonal ambient basis of the
    owning algebra.  Finite algebras simply keep level and grade at zero.
    """

    __slots__ = ("finite", "level", "grade", "_hash")

    def __init__(self, finite: Iterable[RationalLike], level: RationalLike = 0,
                 grade: RationalLike = 0):
        self.finite = tuple(as_fraction(x) for x in finite)
        self.level = as_fraction(level)
        self.grade = as_fraction(grade)
        self._hash = hash((self.finite, self.level, self.grade))

    @classmethod
    def _raw(cls, finite: Tuple[Fraction, ...], level: Fraction, grade: Fraction) -> "Weight":
        # trusted constructor for hot loops: arguments are already Fractions
        obj = object.__new__(cls)
        setter = object.__setattr__
        setter(obj, "finite", finite)
        setter(obj, "level", level)
        setter(obj, "grade", grade)
        setter(obj, "_hash", hash((finite, level, grade)))
        return obj

    @classmethod
    def zero(cls, dim: int) -> "Weight":
        return cls._raw((Fraction(0),) * dim, Fraction(0), Fraction(0))

    @classmethod
    def delta(cls, dim: int) -> "Weight":
        """The imaginary root: zero finite part, zero level, grade one."""
        return cls._raw((Fraction(0),) * dim, Fraction(0), Fraction(1))

    @property
    def dim(self) -> int:
        return len(self.finite)

    def __setattr__(self, name, value):
        if hasattr(self, "_hash"):
            raise AttributeError("Weight is immutable")
        object.__setattr__(self, name, value)

    def __eq__(self, other):
        if not isinstance(other, Weight):
            return NotImplemented
        return (self._hash == other._hash and self.finite == other.finite
                and self.level == other.level and self.grade == other.grade)

    def __hash__(self):
        return self._hash

    def _check(self, other: "Weight") -> None:
        if len(self.finite) != len(other.finite):
            raise ValueError(f"dimension mismatch: {len(self.finite)} vs {len(other.finite)}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight._raw(tuple(a + b for a, b in zip(self.finite, other.finite)),
                           self.level + other.level, self.grade + other.grade)

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight._raw(tuple(a - b for a, b in zip(self.finite, other.finite)),
                           self.level - other.level, self.grade - other.grade)

    def __neg__(self) -> "Weight":
        return Weight._raw(tuple(-a for a in self.finite), -self.level, -self.grade)

    def __mul__(self, c: RationalLike) -> "Weight":
        c = as_fraction(c)
        return Weight._raw(tuple(c * a for a in self.finite), c * self.level, c * self.grade)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.finite) and not self.level and not self.grade

    def with_grade(self, grade: RationalLike) -> "Weight":
        return Weight._raw(self.finite, self.level, as_fraction(grade))

    def sort_key(self):
        return (self.grade, self.level, self.finite)

    def __repr__(self):
        fin = ", ".join(_fmt(x) for x in self.finite)
        if self.level or self.grade:
            return f"Weight(({fin}); {_fmt(self.level)}; {_fmt(self.grade)})"
        return f"Weight({fin})"

    def to_json(self) -> dict:
        return {"finite": [_fmt(x) for x in self.finite],
                "level": _fmt(self.level), "grade": _fmt(self.grade)}

    @classmethod
    def from_json(cls, data: Mapping) -> "Weight":
        try:
            return cls(data["finite"], data.get("level", 0), data.get("grade", 0))
        except KeyError as exc:
            raise ValueError(f"weight JSON lacks {exc}") from None


class GramForm:
    """Symmetric form on the ambient basis, extended to affine weights by

    ``(a|b) = a.finite . G . b.finite + a.level * b.grade + a.grade * b.level``.
    """

    __slots__ = ("matrix", "_diagonal")

    def __init__(self, matrix: Sequence[Sequence[RationalLike]]):
        m = tuple(tuple(as_fraction(x) for x in row) for row in matrix)
        n = len(m)
        if any(len(row) != n for row in m):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if m[i][j] != m[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "matrix", m)
        diagonal = all(m[i][j] == 0 for i in range(n) for j in range(n) if i != j)
        object.__setattr__(self, "_diagonal", tuple(m[i][i] for i in range(n)) if diagonal else None)

    @classmethod
    def identity(cls, dim: int, scale: RationalLike = 1) -> "GramForm":
        s = as_fraction(scale)
        return cls([[s if i == j else 0 for j in range(dim)] for i in range(dim)])

    def __setattr__(self, name, value):
        raise AttributeError("GramForm is immutable")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def __eq__(self, other):
        return isinstance(other, GramForm) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def __repr__(self):
        return f"GramForm({[[str(x) for x in row] for row in self.matrix]})"

    def classical(self, a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
        if len(a) != self.dim or len(b) != self.dim:
            raise ValueError(f"dimension mismatch: form is {self.dim}-dimensional")
        if self._diagonal is not None:
            return sum((g * x * y for g, x, y in zip(self._diagonal, a, b)), Fraction(0))
        m = self.matrix
        return sum((a[i] * m[i][j] * b[j] for i in range(self.dim) for j in range(self.dim)
                    if a[i] and b[j]), Fraction(0))

    def __call__(self, a: Weight, b: Weight) -> Fraction:
        return self.classical(a.finite, b.finite) + a.level * b.grade + a.grade * b.level

    def norm2(self, a: Weight) -> Fraction:
        return self(a, a)


def inner(form: GramForm, a: Weight, b: Weight) -> Fraction:
    """Affine-extended bilinear value ``(a|b)``."""
    return form(a, b)


class SignedSeries:
    """Finitely supported integer-valued function on weights.

    Stands for the formal sum ``sum c_w e^w``.  Zero coefficients are never
    stored.  ``floor`` optionally records that the series is the truncation
    of an infinite one and is only complete for grades ``>= floor``.
    """

    __slots__ = ("_terms", "floor")

    def __init__(self, terms: Union[Mapping[Weight, int], Iterable[Tuple[Weight, int]], None] = None,
                 floor: RationalLike | None = None):
        acc: dict = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for w, c in items:
                if not isinstance(w, Weight):
                    raise TypeError(f"series keys must be Weights, got {type(w).__name__}")
                if isinstance(c, bool) or not isinstance(c, int):
                    raise TypeError(f"series coefficients must be ints, got {c!r}")
                acc[w] = acc.get(w, 0) + c
        object.__setattr__(self, "_terms", {w: c for w, c in acc.items() if c})
        object.__setattr__(self, "floor", None if floor is None else as_fraction(floor))

    @classmethod
    def _wrap(cls, terms: dict, floor: Fraction | None = None) -> "SignedSeries":
        # trusted: terms already canonical (no zeros)
        obj = object.__new__(cls)
        object.__setattr__(obj, "_terms", terms)
        object.__setattr__(obj, "floor", floor)
        return obj

    @classmethod
    def monomial(cls, w: Weight, c: int = 1) -> "SignedSeries":
        return cls._wrap({w: c} if c else {})

    def __setattr__(self, name, value):
        raise AttributeError("SignedSeries is immutable")

    def __len__(self):
        return len(self._terms)

    def __iter__(self) -> Iterator[Weight]:
        return iter(self._terms)

    def __contains__(self, w) -> bool:
        return w in self._terms

    def __getitem__(self, w: Weight) -> int:
        return self._terms.get(w, 0)

    def get(self, w: Weight, default: int = 0) -> int:
        return self._terms.get(w, default)

    def items(self):
        return self._terms.items()

    def as_dict(self) -> dict:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, SignedSeries):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __repr__(self):
        body = ", ".join(f"{w!r}: {c:+d}" for w, c in self.sorted_items())
        return f"SignedSeries({{{body}}})"

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key(), reverse=True)

    def grades(self):
        return {w.grade for w in self._terms}

    def max_grade(self) -> Fraction | None:
        return max((w.grade for w in self._terms), default=None)

    def min_grade(self) -> Fraction | None:
        return min((w.grade for w in self._terms), default=None)

    def __add__(self, other: "SignedSeries") -> "SignedSeries":
        return series_add(self, other)

    def __neg__(self) -> "SignedSeries":
        return SignedSeries._wrap({w: -c for w, c in self._terms.items()}, self.floor)

    def __sub__(self, other: "SignedSeries") -> "SignedSeries":
        return series_add(self, -other)

    def scaled(self, c: int) -> "SignedSeries":
        if not c:
            return SignedSeries()
        return SignedSeries._wrap({w: c * v for w, v in self._terms.items()}, self.floor)

    def shifted(self, by: Weight) -> "SignedSeries":
        """Multiply by ``e^by``."""
        floor = None if self.floor is None else self.floor + by.grade
        return SignedSeries._wrap({w + by: c for w, c in self._terms.items()}, floor)

    def mapped(self, fn) -> "SignedSeries":
        """Push the series forward along a map on weights, merging collisions."""
        return SignedSeries((fn(w), c) for w, c in self._terms.items())

    def truncated(self, min_grade: RationalLike) -> "SignedSeries":
        g = as_fraction(min_grade)
        floor = g if self.floor is None else max(g, self.floor)
        return SignedSeries._wrap({w: c for w, c in self._terms.items() if w.grade >= g}, floor)

    def restricted(self, predicate) -> "SignedSeries":
        return SignedSeries._wrap({w: c for w, c in self._terms.items() if predicate(w)}, self.floor)


def series_add(a: SignedSeries, b: SignedSeries) -> SignedSeries:
    """Coefficientwise sum with cancelled terms dropped."""
    acc = dict(a._terms)
    for w, c in b._terms.items():
        v = acc.get(w, 0) + c
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)
    floors = [f for f in (a.floor, b.floor) if f is not None]
    return SignedSeries._wrap(acc, max(floors) if floors else None)


def series_mul_truncated(a: SignedSeries, b: SignedSeries,
                         min_grade: RationalLike) -> SignedSeries:
    """Distributive product ``e^x e^y = e^(x+y)`` keeping grades ``>= min_grade``.

    Raises ``ValueError`` when an operand is itself a truncation whose floor
    is too shallow for the requested window.
    """
    g = as_fraction(min_grade)
    for x, y in ((a, b), (b, a)):
        if x.floor is not None and y:
            if g < x.floor + y.max_grade():
                raise ValueError(
                    f"cannot truncate soundly at grade {g}: operand is only known down to "
                    f"grade {x.floor} and the other operand reaches grade {y.max_grade()}")
    acc: dict = {}
    for wa, ca in a._terms.items():
        ga = wa.grade
        fa, la = wa.finite, wa.level
        for wb, cb in b._terms.items():
            gr = ga + wb.grade
            if gr < g:
                continue
            w = Weight._raw(tuple(p + q for p, q in zip(fa, wb.finite)), la + wb.level, gr)
            acc[w] = acc.get(w, 0) + ca * cb
    return SignedSeries._wrap({w: c for w, c in acc.items() if c}, g)


def one_minus_exp(w: Weight) -> SignedSeries:
    """The binomial ``1 - e^w``."""
    if w.is_zero():
        return SignedSeries()
    return SignedSeries._wrap({Weight.zero(w.dim): 1, w: -1})


def product_of_binomials(exponents: Iterable[Tuple[Weight, int]], dim: int,
                         min_grade: RationalLike) -> SignedSeries:
    """``prod (1 - e^x)^m`` truncated at ``min_grade``.

    Every exponent must have grade <= 0, which is what makes pruning after
    each factor exact.
    """
    g = as_fraction(min_grade)
    acc = {Weight.zero(dim): 1}
    for x, m in sorted(exponents, key=lambda e: (-e[0].grade, e[0].finite)):
        if x.grade > 0:
            raise ValueError("binomial exponents must have non-positive grade")
        if x.is_zero():
            raise ValueError("factor (1 - e^0) vanishes identically")
        if m < 0:
            raise ValueError("negative exponents are not supported")
        for _ in range(m):
            nxt = dict(acc)
            for w, c in acc.items():
                gr = w.grade + x.grade
                if gr < g:
                    continue
                y = Weight._raw(tuple(p + q for p, q in zip(w.finite, x.finite)),
                                w.level + x.level, gr)
                v = nxt.get(y, 0) - c
                if v:
                    nxt[y] = v
                else:
                    nxt.pop(y, None)
            acc = nxt
    return SignedSeries._wrap(acc, g)


def series_to_json(s: SignedSeries) -> list:
    return [{"weight": w.to_json(), "coefficient": c} for w, c in s.sorted_items()]


def series_from_json(data: Iterable[Mapping]) -> SignedSeries:
    return SignedSeries((Weight.from_json(t["weight"]), int(t["coefficient"])) for t in data)
