"""Embeddings a ⊂ g, the projected denominator carrier Φ and the fan Γ."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple

from ._exact import mat_vec
from .algebras import (AlgebraSpec, algebra_descriptor, algebra_from_descriptor,
                       build_affine, build_finite, finite_from_roots)
from .lattice import RationalLike, SignedSeries, Weight, as_fraction, product_of_binomials


class InjectionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class InjectionSpec:
    ambient: AlgebraSpec
    sub: AlgebraSpec
    # full matrix on (finite..., level, grade), shape (dim_a + 2) x (dim_g + 2);
    # always a coordinate change into the sub's ambient basis
    projection: Tuple[Tuple[Fraction, ...], ...]
    level_scale: Fraction = Fraction(1)
    name: str = "custom"
    height_vector: Optional[Tuple[Fraction, ...]] = None

    def __post_init__(self):
        rows, cols = self.sub.ambient_dim + 2, self.ambient.ambient_dim + 2
        if len(self.projection) != rows or any(len(r) != cols for r in self.projection):
            raise InjectionError(f"projection must be {rows} x {cols}")
        delta = mat_vec(self.projection, [0] * (cols - 1) + [1])
        if any(delta[:-1]) or delta[-1] < 0:
            raise InjectionError("projection must send delta to a non-negative multiple of delta")
        if self.height_vector is not None and len(self.height_vector) != self.sub.ambient_dim:
            raise InjectionError("height vector has the wrong dimension")

    @classmethod
    def from_block(cls, ambient: AlgebraSpec, sub: AlgebraSpec,
                   block: Sequence[Sequence[RationalLike]], level_scale: RationalLike = 1,
                   name: str = "custom", height_vector=None) -> "InjectionSpec":
        """Build from the classical block; level is scaled, grade kept."""
        da, dg = sub.ambient_dim, ambient.ambient_dim
        if len(block) != da or any(len(r) != dg for r in block):
            raise InjectionError(f"classical block must be {da} x {dg}")
        ls = as_fraction(level_scale)
        rows = [tuple(as_fraction(x) for x in r) + (Fraction(0), Fraction(0)) for r in block]
        rows.append((Fraction(0),) * dg + (ls, Fraction(0)))
        rows.append((Fraction(0),) * dg + (Fraction(0), Fraction(1)))
        hv = None if height_vector is None else tuple(as_fraction(x) for x in height_vector)
        return cls(ambient, sub, tuple(rows), ls, name, hv)

    def project(self, w: Weight) -> Weight:
        return project(self, w)

    @property
    def classical_block(self) -> Tuple[Tuple[Fraction, ...], ...]:
        dg = self.ambient.ambient_dim
        return tuple(r[:dg] for r in self.projection[:self.sub.ambient_dim])

    @property
    def is_identity(self) -> bool:
        n = len(self.projection)
        return (len(self.projection[0]) == n and
                all(self.projection[i][j] == (i == j) for i in range(n) for j in range(n)))

    def height(self, w: Weight) -> Fraction:
        return self.sub.gram.classical(w.finite, self.resolved_height_vector)

    @property
    def resolved_height_vector(self) -> Tuple[Fraction, ...]:
        """Strictly a-dominant vector defining the order inside one grade.

        Defaults to the projected Weyl vector of g when that is strictly
        a-dominant, otherwise the Weyl vector of a.
        """
        if self.height_vector is not None:
            v = Weight._raw(self.height_vector, Fraction(0), Fraction(0))
        else:
            r = project(self, self.ambient.rho)
            v = Weight._raw(r.finite, Fraction(0), Fraction(0))
            if not _strictly_dominant(self.sub, v):
                v = Weight._raw(self.sub.rho.finite, Fraction(0), Fraction(0))
        if not _strictly_dominant(self.sub, v):
            raise InjectionError("height vector must be strictly dominant for the subalgebra")
        return v.finite

    def to_json(self) -> dict:
        return {"name": self.name,
                "ambient": algebra_descriptor(self.ambient),
                "sub": algebra_descriptor(self.sub),
                "projection": [[str(x) for x in r] for r in self.projection],
                "level_scale": str(self.level_scale)}


def _strictly_dominant(spec: AlgebraSpec, v: Weight) -> bool:
    return all(spec.coroot_pairing(v, a) > 0 for a in spec.classical_roots)


def project(inj: InjectionSpec, w: Weight) -> Weight:
    if w.dim != inj.ambient.ambient_dim:
        raise InjectionError(f"weight has {w.dim} coordinates, ambient needs {inj.ambient.ambient_dim}")
    out = mat_vec(inj.projection, list(w.finite) + [w.level, w.grade])
    return Weight._raw(tuple(out[:-2]), out[-2], out[-1])


def project_series(inj: InjectionSpec, s: SignedSeries) -> SignedSeries:
    out = s.mapped(lambda w: project(inj, w))
    return out if s.floor is None else out.truncated(s.floor)


# -- presets ------------------------------------------------------------------

def _b1_in_a2() -> InjectionSpec:
    # orthogonal projection onto span(alpha_1) with beta = alpha_1 / 2
    return InjectionSpec.from_block(build_finite("A", 2), build_finite("B", 1, root_symbol="β"),
                                    [[1, -1, 0]], 1, name="B1-in-A2")


def _a2_2_in_a2_1() -> InjectionSpec:
    return InjectionSpec.from_block(build_affine("A", 2, 1), build_affine("A", 2, 2, root_symbol="β"),
                                    [[1, -1, 0]], 2, name="A2_2-in-A2_1")


def _a2_in_g2() -> InjectionSpec:
    g2 = build_finite("G", 2)
    a1, a2 = g2.classical_roots
    sub = finite_from_roots("A2", g2.gram, [a1, a1 + a2 * 3])
    return InjectionSpec.from_block(g2, sub, [[int(i == j) for j in range(3)] for i in range(3)],
                                    1, name="A2-in-G2")


PRESETS = {"B1-in-A2": _b1_in_a2, "A2_2-in-A2_1": _a2_2_in_a2_1, "A2-in-G2": _a2_in_g2}


def preset(name: str) -> InjectionSpec:
    try:
        return PRESETS[name]()
    except KeyError:
        raise InjectionError(f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None


def injection_from_json(data: Mapping) -> InjectionSpec:
    if "preset" in data and data["preset"] is not None:
        return preset(str(data["preset"]))
    try:
        ambient = algebra_from_descriptor(data["ambient"])
        sub = algebra_from_descriptor(data["sub"])
        matrix = data["projection"]
    except KeyError as exc:
        raise InjectionError(f"injection JSON lacks {exc}") from None
    ls = as_fraction(data.get("level_scale", 1))
    hv = data.get("height_vector")
    if len(matrix) == sub.ambient_dim + 2:
        hv_t = None if hv is None else tuple(as_fraction(x) for x in hv)
        rows = tuple(tuple(as_fraction(x) for x in r) for r in matrix)
        return InjectionSpec(ambient, sub, rows, ls, str(data.get("name", "custom")), hv_t)
    return InjectionSpec.from_block(ambient, sub, matrix, ls, str(data.get("name", "custom")), hv)


def identity_injection(spec: AlgebraSpec) -> InjectionSpec:
    n = spec.ambient_dim
    return InjectionSpec.from_block(spec, spec, [[int(i == j) for j in range(n)] for i in range(n)],
                                    1, name=f"{spec.name}-in-{spec.name}")


# -- carrier and fan ------------------------------------------------------------

def net_exponents(inj: InjectionSpec, cutoff: RationalLike) -> Dict[Weight, int]:
    """``mult(a) - mult_a(a)`` over projected positive roots up to grade ``cutoff``."""
    cutoff = as_fraction(cutoff)
    net: Dict[Weight, int] = {}
    for r, m in inj.ambient.positive_roots(cutoff):
        p = project(inj, r)
        if p.is_zero():
            raise InjectionError(f"positive root {r!r} projects to zero")
        net[p] = net.get(p, 0) + m
    for r, m in inj.sub.positive_roots(cutoff):
        if r.grade > cutoff:
            continue
        have = net.get(r, 0)
        if have < m:
            raise InjectionError(
                f"subalgebra root {r!r} (multiplicity {m}) is not covered by projected roots "
                f"(found {have}); unsupported injection")
        net[r] = have - m
    return {p: m for p, m in net.items() if m}


def compute_phi(inj: InjectionSpec, cutoff: RationalLike) -> SignedSeries:
    """The sign function ``s`` on the carrier Φ, as a series ``{γ: s(γ)}``.

    Defined by ``prod (1 - e^{-a})^{mult(a) - mult_a(a)} = -sum s(γ) e^{-γ}``,
    the product running over projected positive roots of g; entries have
    grade ``<= cutoff``.
    """
    cutoff = as_fraction(cutoff)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    net = net_exponents(inj, cutoff)
    prod = product_of_binomials([(-p, m) for p, m in net.items()], inj.sub.ambient_dim, -cutoff)
    return SignedSeries(((-w, -c) for w, c in prod.items()), floor=None)


@dataclass(frozen=True)
class Fan:
    gamma0: Weight
    s0: int
    entries: Tuple[Tuple[Weight, int], ...]
    cutoff: Fraction
    height_vector: Tuple[Fraction, ...] = field(repr=False, default=())

    def __len__(self):
        return len(self.entries)

    def as_series(self) -> SignedSeries:
        return SignedSeries(self.entries)

    def carrier(self) -> SignedSeries:
        """Φ recovered from the fan: ``{γ0: s0} ∪ {γ + γ0: s}``."""
        terms = [(self.gamma0, self.s0)] + [(g + self.gamma0, s) for g, s in self.entries]
        return SignedSeries(terms)


def build_fan(phi: SignedSeries, inj: InjectionSpec, cutoff: RationalLike | None = None) -> Fan:
    """Lowest carrier vector γ0 and the shifted carrier ``Γ = Φ - γ0``.

    Order is lexicographic in (grade, height).  ``cutoff`` records the grade
    depth to which ``phi`` is complete (defaults to its largest grade).
    """
    if not phi:
        raise InjectionError("empty carrier")
    hv = inj.resolved_height_vector
    gram = inj.sub.gram

    def key(w):
        return (w.grade, gram.classical(w.finite, hv))

    items = sorted(phi.items(), key=lambda kv: key(kv[0]))
    if len(items) > 1 and key(items[0][0]) == key(items[1][0]):
        raise InjectionError(f"tie for the lowest carrier vector: {items[0][0]!r}, {items[1][0]!r}")
    gamma0, s0 = items[0]
    entries = []
    for w, s in items[1:]:
        g = w - gamma0
        if not (g.grade > 0 or (g.grade == 0 and key(g)[1] > 0)):
            raise InjectionError(f"fan vector {g!r} is not positive")
        entries.append((g, s))
    entries.sort(key=lambda e: (e[0].grade, key(e[0])[1], e[0].finite))
    c = phi.max_grade() if cutoff is None else as_fraction(cutoff)
    return Fan(gamma0, s0, tuple(entries), c, hv)


def fan_for(inj: InjectionSpec, cutoff: RationalLike = 0) -> Fan:
    return build_fan(compute_phi(inj, cutoff), inj, cutoff)
