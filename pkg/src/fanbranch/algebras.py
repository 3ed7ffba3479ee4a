"""Root data for finite and affine algebras, Weyl orbits and singular weights.

Affine weights are written ``(finite; level; grade)``.  The affine simple root
``alpha_0`` has grade one, so ``delta`` is the weight ``(0; 0; 1)``.  Simple
roots of an affine spec are listed as ``(alpha_0, alpha_1, ..., alpha_r)`` to
match fundamental-weight input ``fw:c0,c1,...,cr``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from ._exact import inverse
from .lattice import (GramForm, RationalLike, SignedSeries, Weight, as_fraction,
                      product_of_binomials)

FINITE_SERIES = ("A", "B", "C", "D", "G")


class UnsupportedAlgebra(ValueError):
    """Requested series, rank or twist is not available."""


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    name: str
    series: str
    rank: int
    twist: int
    gram: GramForm
    classical_roots: Tuple[Weight, ...]
    affine_root: Optional[Weight] = None
    # affine only: (classical root, modulus, residue) -- the root occurs at
    # every grade n with n % modulus == residue
    real_patterns: Tuple[Tuple[Weight, int, int], ...] = ()
    imaginary_multiplicity: int = 0
    translation_basis: Tuple[Weight, ...] = ()
    root_symbol: str = "α"

    def __post_init__(self):
        for a in self.simple_roots:
            if a.dim != self.gram.dim:
                raise ValueError(f"simple root {a!r} does not live in the ambient space")
        a = self.cartan_matrix
        for i, row in enumerate(a):
            for j, x in enumerate(row):
                if x.denominator != 1 or (i != j and x > 0):
                    raise ValueError(f"simple roots of {self.name} do not form a Cartan matrix")

    def __repr__(self):
        return f"AlgebraSpec({self.name})"

    # -- basic data ---------------------------------------------------------

    @property
    def ambient_dim(self) -> int:
        return self.gram.dim

    @property
    def is_affine(self) -> bool:
        return self.affine_root is not None

    @property
    def classical_rank(self) -> int:
        return len(self.classical_roots)

    @property
    def simple_roots(self) -> Tuple[Weight, ...]:
        if self.affine_root is None:
            return self.classical_roots
        return (self.affine_root,) + self.classical_roots

    def zero(self) -> Weight:
        return Weight.zero(self.ambient_dim)

    def delta(self) -> Weight:
        return Weight.delta(self.ambient_dim)

    def weight(self, finite: Sequence[RationalLike], level: RationalLike = 0,
               grade: RationalLike = 0) -> Weight:
        w = Weight(finite, level, grade)
        if w.dim != self.ambient_dim:
            raise ValueError(f"{self.name} weights have {self.ambient_dim} coordinates, got {w.dim}")
        return w

    def inner(self, a: Weight, b: Weight) -> Fraction:
        return self.gram(a, b)

    def coroot_pairing(self, w: Weight, root: Weight) -> Fraction:
        """``(w | root^vee) = 2 (w|root) / (root|root)``."""
        return 2 * self.gram(w, root) / self.gram(root, root)

    def coroot(self, root: Weight) -> Weight:
        return root * (Fraction(2) / self.gram(root, root))

    def reflect(self, w: Weight, root: Weight) -> Weight:
        return w - root * self.coroot_pairing(w, root)

    def shifted_reflect(self, w: Weight, root: Weight) -> Weight:
        """``s o w = s(w + rho) - rho``."""
        return self.reflect(w + self.rho, root) - self.rho

    @cached_property
    def cartan_matrix(self) -> Tuple[Tuple[Fraction, ...], ...]:
        s = self.simple_roots
        return tuple(tuple(self.coroot_pairing(a, b) for b in s) for a in s)

    def dynkin_labels(self, w: Weight) -> Tuple[Fraction, ...]:
        return tuple(self.coroot_pairing(w, a) for a in self.simple_roots)

    def is_dominant(self, w: Weight) -> bool:
        return all(x >= 0 for x in self.dynkin_labels(w))

    def is_integral(self, w: Weight) -> bool:
        return all(x.denominator == 1 for x in self.dynkin_labels(w))

    # -- classical root system ---------------------------------------------

    @cached_property
    def _classical_gram_inverse(self):
        s = self.classical_roots
        return inverse([[self.gram.classical(a.finite, b.finite) for b in s] for a in s])

    def simple_root_coords(self, w: Weight) -> Tuple[Fraction, ...]:
        """Coefficients of the classical part of ``w`` over the classical simple roots.

        Raises ``ValueError`` if the classical part leaves their span.
        """
        s = self.classical_roots
        rhs = [self.gram.classical(w.finite, a.finite) for a in s]
        inv = self._classical_gram_inverse
        c = tuple(sum((inv[i][j] * rhs[j] for j in range(len(s))), Fraction(0))
                  for i in range(len(s)))
        back = [sum((c[i] * s[i].finite[k] for i in range(len(s))), Fraction(0))
                for k in range(self.ambient_dim)]
        if tuple(back) != w.finite:
            raise ValueError(f"{w!r} is not in the span of the simple roots of {self.name}")
        return c

    @cached_property
    def classical_root_system(self) -> Tuple[Weight, ...]:
        seen = set(self.classical_roots)
        frontier = list(self.classical_roots)
        while frontier:
            nxt = []
            for x in frontier:
                for a in self.classical_roots:
                    y = self.reflect(x, a)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen, key=lambda r: (self._height(r), r.finite)))

    def _height(self, w: Weight) -> Fraction:
        return sum(self.simple_root_coords(w), Fraction(0))

    @cached_property
    def classical_positive_roots(self) -> Tuple[Weight, ...]:
        return tuple(r for r in self.classical_root_system if self._height(r) > 0)

    @cached_property
    def highest_root(self) -> Weight:
        return max(self.classical_positive_roots, key=self._height)

    @cached_property
    def classical_fundamental_weights(self) -> Tuple[Weight, ...]:
        s = self.classical_roots
        inv = self._classical_gram_inverse
        out = []
        for i, ai in enumerate(s):
            half = self.gram(ai, ai) / 2
            c = [inv[k][i] * half for k in range(len(s))]
            out.append(sum((a * x for a, x in zip(s, c)), self.zero()))
        return tuple(out)

    @cached_property
    def fundamental_weights(self) -> Tuple[Weight, ...]:
        """Dual basis to the simple coroots, in the order of ``simple_roots``."""
        if not self.is_affine:
            return self.classical_fundamental_weights
        a0 = self.affine_root
        a0_classical = Weight._raw(a0.finite, Fraction(0), Fraction(0))
        out = [Weight._raw(self.zero().finite, self.gram(a0, a0) / 2 / a0.grade, Fraction(0))]
        for w in self.classical_fundamental_weights:
            level = -self.gram(w, a0_classical) / a0.grade
            out.append(Weight._raw(w.finite, level, Fraction(0)))
        return tuple(out)

    @cached_property
    def rho(self) -> Weight:
        return sum(self.fundamental_weights, self.zero())

    @property
    def dual_coxeter_number(self) -> Fraction:
        return self.rho.level

    def from_fw(self, coeffs: Sequence[RationalLike], grade: RationalLike = 0) -> Weight:
        fw = self.fundamental_weights
        if len(coeffs) != len(fw):
            raise ValueError(f"{self.name} takes {len(fw)} fundamental-weight coordinates, "
                             f"got {len(coeffs)}")
        w = sum((f * as_fraction(c) for f, c in zip(fw, coeffs)), self.zero())
        return w.with_grade(as_fraction(grade) + w.grade)

    @cached_property
    def _classical_reflection_data(self):
        # (root coordinates, G.coroot) so a pairing is a plain dot product
        out = []
        m = self.gram.matrix
        for a in self.classical_roots:
            scale = Fraction(2) / self.gram(a, a)
            dual = tuple(scale * sum((m[i][j] * a.finite[j] for j in range(self.ambient_dim)),
                                     Fraction(0)) for i in range(self.ambient_dim))
            out.append((a.finite, tuple((i, x) for i, x in enumerate(dual) if x)))
        return tuple(out)

    def to_dominant(self, w: Weight) -> Tuple[Weight, int]:
        """Classical dominant representative of ``w`` and the sign of the element used."""
        sign = 1
        x = list(w.finite)
        data = self._classical_reflection_data
        changed = True
        while changed:
            changed = False
            for root, dual in data:
                p = sum(x[i] * d for i, d in dual)
                if p < 0:
                    for i, r in enumerate(root):
                        if r:
                            x[i] -= p * r
                    sign = -sign
                    changed = True
        if sign == 1 and tuple(x) == w.finite:
            return w, 1
        return Weight._raw(tuple(x), w.level, w.grade), sign

    @cached_property
    def classical_weyl_order(self) -> int:
        return len(classical_weyl_orbit(self, self.rho))

    # -- affine root system -------------------------------------------------

    def positive_roots(self, cutoff: RationalLike = 0) -> List[Tuple[Weight, int]]:
        """Positive roots with multiplicities, up to grade ``cutoff`` for affine specs."""
        if not self.is_affine:
            return [(r, 1) for r in self.classical_positive_roots]
        cutoff = as_fraction(cutoff)
        positive = set(self.classical_positive_roots)
        out = [(r, 1) for r, m, res in self.real_patterns if res % m == 0 and r in positive]
        n = 1
        while n <= cutoff:
            for r, m, res in self.real_patterns:
                if n % m == res % m:
                    out.append((r.with_grade(n), 1))
            out.append((self.delta() * n, self.imaginary_multiplicity))
            n += 1
        return out

    def root_multiplicity(self, root: Weight) -> int:
        if not self.is_affine:
            return int(root in set(self.classical_root_system))
        if root.level != 0 or root.grade.denominator != 1:
            return 0
        n = int(root.grade)
        if not any(root.finite):
            return self.imaginary_multiplicity if n else 0
        classical = root.with_grade(0)
        return int(any(r == classical and n % m == res % m for r, m, res in self.real_patterns))


def classical_weyl_orbit(spec: AlgebraSpec, w: Weight) -> SignedSeries:
    """Signed orbit ``sum_s eps(s) e^{s(w)}`` over the classical Weyl group.

    A weight fixed by some reflection gives the empty series.
    """
    dom, parity = spec.to_dominant(w)
    if any(spec.coroot_pairing(dom, a) == 0 for a in spec.classical_roots):
        return SignedSeries()
    signs = {dom: parity}
    frontier = [dom]
    while frontier:
        nxt = []
        for x in frontier:
            for a in spec.classical_roots:
                y = spec.reflect(x, a)
                if y not in signs:
                    signs[y] = -signs[x]
                    nxt.append(y)
        frontier = nxt
    return SignedSeries(signs)


@dataclass(frozen=True)
class SingularElement:
    series: SignedSeries
    highest_weight: Weight
    grade_cutoff: Fraction

    def __len__(self):
        return len(self.series)


def _check_highest_weight(spec: AlgebraSpec, mu: Weight) -> None:
    if mu.dim != spec.ambient_dim:
        raise ValueError(f"{spec.name} weights have {spec.ambient_dim} coordinates, got {mu.dim}")
    if not spec.is_affine and (mu.level or mu.grade):
        raise ValueError("weights of a finite algebra carry no level or grade")
    if not spec.is_integral(mu):
        raise ValueError(f"{mu!r} is not integral for {spec.name}")
    if not spec.is_dominant(mu):
        raise ValueError(f"{mu!r} is not dominant for {spec.name}")


def _lattice_ball(basis: Sequence[Weight], gram: GramForm, radius: float) -> List[Weight]:
    """All points of the lattice spanned by ``basis`` with norm at most ``radius`` (plus slack)."""
    if not basis:
        return [Weight.zero(gram.dim)]
    g = [[gram(a, b) for b in basis] for a in basis]
    ginv = inverse(g)
    bounds = [int(math.floor(radius * math.sqrt(float(ginv[i][i])) + 1e-9)) + 1
              for i in range(len(basis))]
    r2 = Fraction(radius * radius + 1e-6)
    out = []
    for coeffs in product(*(range(-b, b + 1) for b in bounds)):
        norm = sum((g[i][j] * coeffs[i] * coeffs[j] for i in range(len(basis))
                    for j in range(len(basis))), Fraction(0))
        if norm <= r2:
            out.append(sum((v * c for v, c in zip(basis, coeffs)), Weight.zero(gram.dim)))
    return out


def singular_weights(spec: AlgebraSpec, mu: Weight, cutoff: RationalLike) -> SingularElement:
    """The element ``Psi^mu = sum_w eps(w) e^{w(mu+rho) - rho}`` down to grade ``-cutoff``.

    For affine specs the Weyl group is walked as the classical group times the
    translations ``t_a``, ``a`` in the lattice ``M``, acting on level-``K``
    weights by ``t_a(x) = x + K a - ((x|a) + K|a|^2/2) delta``.
    """
    cutoff = as_fraction(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    _check_highest_weight(spec, mu)
    lam = mu + spec.rho
    orbit = classical_weyl_orbit(spec, lam)
    floor = -cutoff
    terms: Dict[Weight, int] = {}
    if not spec.is_affine:
        if mu.grade >= floor:
            for x, sign in orbit.items():
                terms[x - spec.rho] = sign
        return SingularElement(SignedSeries(terms), mu, cutoff)

    k = lam.level
    budget = lam.grade - floor  # allowed grade drop
    if budget >= 0:
        norm = math.sqrt(float(spec.gram(lam.with_grade(0), lam.with_grade(0))))
        radius = (norm + math.sqrt(norm * norm + 2 * float(k) * float(budget))) / float(k)
        ball = _lattice_ball(spec.translation_basis, spec.gram, radius)
        for x, sign in orbit.items():
            for a in ball:
                drop = spec.gram(x, a) + k * spec.gram(a, a) / 2
                if drop > budget:
                    continue
                y = Weight._raw(tuple(p + k * q for p, q in zip(x.finite, a.finite)),
                                x.level, x.grade - drop)
                z = y - spec.rho
                terms[z] = terms.get(z, 0) + sign
    return SingularElement(SignedSeries(terms, floor=floor), mu, cutoff)


def expand_denominator(spec: AlgebraSpec, cutoff: RationalLike) -> SignedSeries:
    """``prod_{a > 0} (1 - e^{-a})^{mult a}`` down to grade ``-cutoff``."""
    cutoff = as_fraction(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    factors = [(-r, m) for r, m in spec.positive_roots(cutoff)]
    return product_of_binomials(factors, spec.ambient_dim, -cutoff)


# -- constructors -------------------------------------------------------------

def _unit(dim: int, i: int, c: int = 1) -> List[int]:
    v = [0] * dim
    v[i] = c
    return v


def _finite_data(series: str, rank: int) -> Tuple[GramForm, List[Weight]]:
    if series == "A":
        if rank < 1:
            raise UnsupportedAlgebra("A_r needs r >= 1")
        dim = rank + 1
        gram = GramForm.identity(dim)
        roots = [Weight([1 if k == i else -1 if k == i + 1 else 0 for k in range(dim)])
                 for i in range(rank)]
    elif series == "B":
        if rank < 1:
            raise UnsupportedAlgebra("B_r needs r >= 1")
        gram = GramForm.identity(rank)
        roots = [Weight([1 if k == i else -1 if k == i + 1 else 0 for k in range(rank)])
                 for i in range(rank - 1)] + [Weight(_unit(rank, rank - 1))]
    elif series == "C":
        if rank < 2:
            raise UnsupportedAlgebra("C_r needs r >= 2")
        # long roots 2e_i normalised to squared length 2
        gram = GramForm.identity(rank, Fraction(1, 2))
        roots = [Weight([1 if k == i else -1 if k == i + 1 else 0 for k in range(rank)])
                 for i in range(rank - 1)] + [Weight(_unit(rank, rank - 1, 2))]
    elif series == "D":
        if rank < 3:
            raise UnsupportedAlgebra("D_r needs r >= 3")
        gram = GramForm.identity(rank)
        roots = [Weight([1 if k == i else -1 if k == i + 1 else 0 for k in range(rank)])
                 for i in range(rank - 1)]
        last = [0] * rank
        last[-2] = last[-1] = 1
        roots.append(Weight(last))
    elif series == "G":
        if rank != 2:
            raise UnsupportedAlgebra("G2 has rank 2")
        # alpha_1 long, alpha_2 short, angle 5 pi / 6
        gram = GramForm.identity(3, Fraction(1, 3))
        roots = [Weight([-2, 1, 1]), Weight([1, -1, 0])]
    else:
        raise UnsupportedAlgebra(f"unsupported series {series!r}")
    return gram, roots


def finite_from_roots(name: str, gram: GramForm, simple_roots: Sequence[Weight],
                      root_symbol: str = "α") -> AlgebraSpec:
    """A finite algebra given directly by simple roots in some ambient space."""
    m = re.fullmatch(r"([A-Z])_?(\d+)", name)
    series, rank = (m.group(1), int(m.group(2))) if m else (name, len(simple_roots))
    return AlgebraSpec(name=name, series=series, rank=rank, twist=0, gram=gram,
                       classical_roots=tuple(simple_roots), root_symbol=root_symbol)


def build_finite(series: str, rank: int, root_symbol: str = "α") -> AlgebraSpec:
    series = series.upper()
    if series == "G2":
        series = "G"
    gram, roots = _finite_data(series, rank)
    return AlgebraSpec(name=f"{series}{rank}", series=series, rank=rank, twist=0, gram=gram,
                       classical_roots=tuple(roots), root_symbol=root_symbol)


def build_affine(series: str, rank: int, twist: int = 1, root_symbol: str = "α") -> AlgebraSpec:
    series = series.upper()
    if series == "G2":
        series = "G"
    if twist == 1:
        if series == "B" and rank < 2:
            raise UnsupportedAlgebra("affine B_r needs r >= 2")
        gram, roots = _finite_data(series, rank)
        classical = AlgebraSpec(name=f"{series}{rank}", series=series, rank=rank, twist=0,
                                gram=gram, classical_roots=tuple(roots))
        theta = classical.highest_root
        if gram(theta, theta) != 2:
            raise AssertionError("long roots must have squared length 2")
        a0 = Weight._raw((-theta).finite, Fraction(0), Fraction(1))
        patterns = tuple((r, 1, 0) for r in classical.classical_root_system)
        m_basis = tuple(classical.coroot(a) for a in roots)
        return AlgebraSpec(name=f"{series}{rank}^(1)", series=series, rank=rank, twist=1,
                           gram=gram, classical_roots=tuple(roots), affine_root=a0,
                           real_patterns=patterns, imaginary_multiplicity=rank,
                           translation_basis=m_basis, root_symbol=root_symbol)
    if twist == 2:
        if series != "A" or rank < 2 or rank % 2:
            raise UnsupportedAlgebra("twist 2 is only available for A_{2r}")
        r = rank // 2
        gram = GramForm.identity(r)
        roots = [Weight([1 if k == i else -1 if k == i + 1 else 0 for k in range(r)])
                 for i in range(r - 1)] + [Weight(_unit(r, r - 1))]
        short_and_middle = AlgebraSpec(name=f"B{r}", series="B", rank=r, twist=0, gram=gram,
                                       classical_roots=tuple(roots)).classical_root_system
        long_roots = [Weight(_unit(r, i, s)) for i in range(r) for s in (2, -2)]
        patterns = tuple((x, 1, 0) for x in short_and_middle) + tuple((x, 2, 1) for x in long_roots)
        a0 = Weight(_unit(r, 0, -2), 0, 1)
        # t_{e_1} = s_{alpha_0} s_{e_1}: the translation lattice is Z^r here
        m_basis = tuple(Weight(_unit(r, i)) for i in range(r))
        return AlgebraSpec(name=f"A{rank}^(2)", series="A", rank=rank, twist=2, gram=gram,
                           classical_roots=tuple(roots), affine_root=a0,
                           real_patterns=patterns, imaginary_multiplicity=r,
                           translation_basis=m_basis, root_symbol=root_symbol)
    raise UnsupportedAlgebra(f"unsupported twist {twist}")


_NAME = re.compile(r"\s*([A-Ga-g])_?(\d+)\s*(?:\^\s*\(?\s*(\d)\s*\)?)?\s*")


def parse_algebra(text: str) -> AlgebraSpec:
    """``"A2"``, ``"G2"``, ``"A2^(1)"``, ``"A_2^(2)"``."""
    m = _NAME.fullmatch(text)
    if not m:
        raise UnsupportedAlgebra(f"cannot parse algebra name {text!r}")
    series, rank, twist = m.group(1).upper(), int(m.group(2)), int(m.group(3) or 0)
    return algebra_from_descriptor({"series": series, "rank": rank, "twist": twist})


def algebra_from_descriptor(desc: Mapping) -> AlgebraSpec:
    """``{"series": "A", "rank": 2, "twist": 1}``; twist omitted or 0 means finite.

    A finite algebra may also be given by ``{"name", "gram", "simple_roots"}``.
    """
    if isinstance(desc, Mapping) and "simple_roots" in desc:
        try:
            gram = GramForm(desc["gram"])
            roots = [Weight(r) for r in desc["simple_roots"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"bad algebra descriptor: {exc}") from None
        return finite_from_roots(str(desc.get("name", f"X{len(roots)}")), gram, roots,
                                 str(desc.get("root_symbol", "α")))
    try:
        series = str(desc["series"]).upper()
        rank = int(desc["rank"])
    except (KeyError, TypeError, ValueError):
        raise ValueError(f"bad algebra descriptor {desc!r}") from None
    twist = int(desc.get("twist") or 0)
    if twist == 0:
        return build_finite(series, rank)
    return build_affine(series, rank, twist)


def algebra_descriptor(spec: AlgebraSpec) -> dict:
    try:
        same = algebra_from_descriptor({"series": spec.series, "rank": spec.rank,
                                        "twist": spec.twist})
    except ValueError:
        same = None
    if same is not None and same.gram == spec.gram and same.simple_roots == spec.simple_roots:
        return {"series": spec.series, "rank": spec.rank, "twist": spec.twist}
    return {"name": spec.name, "gram": [[str(x) for x in r] for r in spec.gram.matrix],
            "simple_roots": [[str(x) for x in r.finite] for r in spec.classical_roots],
            "root_symbol": spec.root_symbol}
