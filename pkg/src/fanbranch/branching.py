"""Recursion for anomalous branching coefficients and weight multiplicities.

All recursions here have the shape

    pivot * k[x] + sum_j c_j * k[x + g_j] + source[x] = 0,

with every shift ``g_j`` either of positive grade or of grade zero and
positive height.  :func:`solve_triangular` walks grades downwards and, inside
each grade, heights downwards.  The region visited at each grade is bounded
using the classical Weyl symmetry of the unknown table: a nonzero value at the
top of a Weyl orbit can only sit at a point the relation is forced from, so
the orbit tops are bounded by the largest forced height.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .algebras import AlgebraSpec, singular_weights
from .injections import Fan, InjectionSpec, build_fan, compute_phi, project_series
from .lattice import (RationalLike, SignedSeries, Weight, as_fraction,
                      series_mul_truncated)


class WindowError(ValueError):
    """The requested window cannot be computed soundly."""


@dataclass(frozen=True, eq=False)
class Window:
    """Region in which a table is complete.

    Every grade ``>= floor`` is complete: values not stored are exactly zero.
    ``bounds[n]`` is the orbit-top height bound used at grade ``n``.
    """
    floor: Fraction
    top: Optional[Fraction]
    bounds: Dict[Fraction, Fraction]
    symmetry: AlgebraSpec
    center: Tuple[Fraction, ...]
    height_vector: Tuple[Fraction, ...]

    def height(self, w: Weight) -> Fraction:
        return self.symmetry.gram.classical(w.finite, self.height_vector)

    def orbit_top_height(self, w: Weight) -> Fraction:
        x = Weight._raw(tuple(a + b for a, b in zip(w.finite, self.center)), Fraction(0), Fraction(0))
        d, _ = self.symmetry.to_dominant(x)
        c = Weight._raw(self.center, Fraction(0), Fraction(0))
        return self.height(d) - self.height(c)

    def contains(self, w: Weight) -> bool:
        """Inside the searched region (a point outside is provably zero)."""
        if w.grade < self.floor:
            return False
        t = self.bounds.get(w.grade)
        return t is not None and self.orbit_top_height(w) <= t


@dataclass(frozen=True, eq=False)
class AnomalousTable:
    coefficients: SignedSeries
    window: Window

    def __getitem__(self, w: Weight) -> int:
        if w.grade < self.window.floor:
            raise WindowError(f"{w!r} lies below the computed floor {self.window.floor}")
        return self.coefficients[w]

    def items(self):
        return self.coefficients.items()

    def __len__(self):
        return len(self.coefficients)


def solve_triangular(source: SignedSeries, steps: Sequence[Tuple[Weight, int]], pivot: int,
                     floor: RationalLike, symmetry: AlgebraSpec, center: Sequence[Fraction],
                     height_vector: Sequence[Fraction], step_depth: RationalLike) -> AnomalousTable:
    """Solve ``pivot*k[x] + sum c*k[x+g] + source[x] = 0`` for all grades ``>= floor``.

    ``step_depth`` is the largest grade up to which ``steps`` is complete.
    ``symmetry``/``center`` describe the classical Weyl action under which the
    solution is (anti-)invariant: ``w(x + center) - center``.
    """
    floor = as_fraction(floor)
    center = tuple(as_fraction(x) for x in center)
    hv = tuple(as_fraction(x) for x in height_vector)
    gram = symmetry.gram
    if pivot == 0:
        raise WindowError("pivot is zero (malformed fan)")
    if source.floor is not None and source.floor > floor:
        raise WindowError(f"source is only known down to grade {source.floor}, window needs {floor}")

    def h(w: Weight) -> Fraction:
        return gram.classical(w.finite, hv)

    for g, _ in steps:
        if g.grade < 0 or (g.grade == 0 and h(g) <= 0):
            raise WindowError(f"step {g!r} is not positive")

    top = source.max_grade()
    window = Window(floor, top, {}, symmetry, center, hv)
    if top is None or top < floor:
        return AnomalousTable(SignedSeries(floor=floor), window)
    if as_fraction(step_depth) < top - floor:
        raise WindowError(f"fan/steps known to grade {step_depth}, window depth is {top - floor}")

    flat = [s for s in steps if s[0].grade == 0]
    deep = [s for s in steps if 0 < s[0].grade <= top - floor]
    src = source.as_dict()
    k: Dict[Weight, int] = {}
    forced: Dict[Fraction, set] = {}
    for w in src:
        if w.grade >= floor:
            forced.setdefault(w.grade, set()).add(w)
    heap = [-g for g in forced]
    heapq.heapify(heap)
    c_w = Weight._raw(center, Fraction(0), Fraction(0))
    hc = h(c_w)
    tops: Dict[Weight, Fraction] = {}

    def orbit_top(w):
        t = tops.get(w)
        if t is None:
            x = Weight._raw(tuple(a + b for a, b in zip(w.finite, center)), Fraction(0), Fraction(0))
            d, _ = symmetry.to_dominant(x)
            t = tops[w] = h(d) - hc
        return t

    done = set()
    while heap:
        n = -heapq.heappop(heap)
        if n in done:
            continue
        done.add(n)
        points = forced.pop(n)
        bound = max(h(p) for p in points)
        window.bounds[n] = bound
        region = set()
        queue = [p for p in points if orbit_top(p) <= bound]
        region.update(queue)
        while queue:
            x = queue.pop()
            for g, _ in flat:
                y = x - g
                if y not in region and orbit_top(y) <= bound:
                    region.add(y)
                    queue.append(y)
        row = []
        for x in sorted(region, key=h, reverse=True):
            total = src.get(x, 0)
            for g, c in steps:
                v = k.get(x + g)
                if v:
                    total += c * v
            if total:
                q, r = divmod(-total, pivot)
                if r:
                    raise ArithmeticError(f"non-integral coefficient at {x!r}")
                k[x] = q
                row.append(x)
        for x in row:
            for g, _ in deep:
                y = x - g
                if y.grade < floor:
                    continue
                bucket = forced.get(y.grade)
                if bucket is None:
                    forced[y.grade] = bucket = set()
                    heapq.heappush(heap, -y.grade)
                bucket.add(y)
    return AnomalousTable(SignedSeries(k, floor=floor), window)


def residual(table: AnomalousTable, source: SignedSeries, steps: Sequence[Tuple[Weight, int]],
             pivot: int) -> SignedSeries:
    """Left side of the solved relation at every point where it can be nonzero."""
    floor = table.window.floor
    k = table.coefficients
    candidates = {w for w in source if w.grade >= floor}
    for w in k:
        candidates.add(w)
        for g, _ in steps:
            y = w - g
            if y.grade >= floor:
                candidates.add(y)
    out = {}
    for x in candidates:
        v = source[x] + pivot * k[x] + sum(c * k[x + g] for g, c in steps)
        if v:
            out[x] = v
    return SignedSeries(out, floor=floor)


# -- fan recursion ----------------------------------------------------------------

def anomalous_coefficients(psi_projected: SignedSeries, fan: Fan, window_floor: RationalLike,
                           inj: InjectionSpec) -> AnomalousTable:
    """``k[x] = -(1/s0) (Psi~[x - γ0] + sum_Γ s(γ+γ0) k[x+γ])`` down to ``window_floor``."""
    source = psi_projected.shifted(fan.gamma0)
    return solve_triangular(source, fan.entries, fan.s0, window_floor, inj.sub,
                            inj.sub.rho.finite, fan.height_vector, fan.cutoff)


def fan_source(psi_projected: SignedSeries, fan: Fan) -> SignedSeries:
    return psi_projected.shifted(fan.gamma0)


# -- star recursion (oracle) -----------------------------------------------------

def star_relation(psi_projected: SignedSeries, ambient_psi0: SignedSeries, sub: AlgebraSpec,
                  floor: RationalLike, height_vector: Sequence[Fraction]):
    """Steps, pivot and source of ``pi(Psi^0) * K = pi(Psi^mu) * Psi_a^0``.

    The pivot sits at the top term ``η*`` of ``pi(Psi^0)`` (grade, then height).
    """
    floor = as_fraction(floor)
    if not ambient_psi0:
        raise WindowError("empty projected denominator")
    hv = tuple(height_vector)

    def key(w):
        return (w.grade, sub.gram.classical(w.finite, hv))

    ordered = sorted(ambient_psi0.items(), key=lambda kv: key(kv[0]), reverse=True)
    if len(ordered) > 1 and key(ordered[0][0]) == key(ordered[1][0]):
        raise WindowError("projected denominator has no unique top term")
    eta, d_top = ordered[0]
    top = psi_projected.max_grade()
    depth = Fraction(0) if top is None else top - floor
    psi_a0 = singular_weights(sub, sub.zero(), max(Fraction(0), depth - eta.grade)).series
    rhs = series_mul_truncated(psi_projected, psi_a0, floor + eta.grade)
    source = SignedSeries({w - eta: -c for w, c in rhs.items()}, floor=floor)
    steps = tuple((eta - w, c) for w, c in ordered[1:])
    step_depth = (eta.grade - ambient_psi0.floor) if ambient_psi0.floor is not None else depth
    return source, steps, d_top, step_depth


def anomalous_coefficients_star(psi_projected: SignedSeries, ambient_psi0: SignedSeries,
                                sub: AlgebraSpec, window_floor: RationalLike,
                                height_vector: Optional[Sequence[Fraction]] = None) -> AnomalousTable:
    hv = tuple(height_vector) if height_vector is not None else sub.rho.finite
    source, steps, pivot, depth = star_relation(psi_projected, ambient_psi0, sub, window_floor, hv)
    return solve_triangular(source, steps, pivot, window_floor, sub, sub.rho.finite, hv, depth)


# -- extraction ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BranchingResult:
    coefficients: Dict[Weight, int]
    sub: AlgebraSpec
    top_grade: Fraction
    floor: Fraction

    @property
    def by_class(self) -> List[Tuple[Weight, List[Tuple[int, int]]]]:
        return branching_functions(self)

    def to_json(self) -> dict:
        if self.sub.is_affine:
            classes = [{"highest_weight": nu.to_json(),
                        "series": [[n, c] for n, c in series]}
                       for nu, series in branching_functions(self)]
        else:
            classes = [{"highest_weight": nu.to_json(), "series": [[0, c]]}
                       for nu, c in sorted(self.coefficients.items(),
                                           key=lambda kv: kv[0].sort_key(), reverse=True)]
        return {"classes": classes}


def extract_branching(table: AnomalousTable, sub: AlgebraSpec,
                      top_grade: RationalLike | None = None) -> BranchingResult:
    """Branching coefficients: the table restricted to dominant a-weights."""
    coeffs = {w: c for w, c in table.items() if sub.is_dominant(w) and sub.is_integral(w)}
    top = table.window.top if top_grade is None else as_fraction(top_grade)
    return BranchingResult(coeffs, sub, Fraction(0) if top is None else top, table.window.floor)


def branching_functions(result: BranchingResult) -> List[Tuple[Weight, List[Tuple[int, int]]]]:
    """Per δ-class ``ν0`` (taken at the top grade) the pairs ``(n, b[ν0 - nδ])``."""
    if not result.sub.is_affine:
        raise ValueError("branching functions need an affine subalgebra")
    classes: Dict[Weight, Dict[int, int]] = {}
    for w, c in result.coefficients.items():
        nu0 = w.with_grade(result.top_grade)
        n = result.top_grade - w.grade
        if n.denominator != 1:
            raise ValueError(f"non-integral grade offset at {w!r}")
        classes.setdefault(nu0, {})[int(n)] = c
    out = [(nu, sorted(series.items())) for nu, series in classes.items()]
    out.sort(key=lambda e: (e[1][0][0], tuple(-x for x in e[0].finite)))
    return out


def qseries_text(series: Sequence[Tuple[int, int]]) -> str:
    parts = []
    for n, c in series:
        mono = "" if n == 0 else ("q" if n == 1 else f"q^{n}")
        if not mono:
            body = str(abs(c))
        else:
            body = mono if abs(c) == 1 else f"{abs(c)}{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts) if parts else "0"


# -- end-to-end helpers ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BranchRun:
    injection: InjectionSpec
    highest_weight: Weight
    cutoff: Fraction
    fan: Fan
    psi_projected: SignedSeries
    table: AnomalousTable
    result: BranchingResult

    def residual(self) -> SignedSeries:
        return residual(self.table, fan_source(self.psi_projected, self.fan),
                        self.fan.entries, self.fan.s0)


def branch(inj: InjectionSpec, mu: Weight, cutoff: RationalLike = 0) -> BranchRun:
    """Decompose ``L^mu`` of g into a-modules down to grade ``mu.grade - cutoff``."""
    cutoff = as_fraction(cutoff)
    g = inj.ambient
    if not g.is_affine:
        cutoff = Fraction(0)
    floor = mu.grade - cutoff
    psi = singular_weights(g, mu, -floor).series
    psi_p = project_series(inj, psi)
    fan = build_fan(compute_phi(inj, cutoff), inj, cutoff)
    table = anomalous_coefficients(psi_p, fan, floor, inj)
    return BranchRun(inj, mu, cutoff, fan, psi_p, table,
                     extract_branching(table, inj.sub, mu.grade))


def branch_star(inj: InjectionSpec, mu: Weight, cutoff: RationalLike = 0) -> AnomalousTable:
    cutoff = as_fraction(cutoff)
    g = inj.ambient
    if not g.is_affine:
        cutoff = Fraction(0)
    floor = mu.grade - cutoff
    psi_p = project_series(inj, singular_weights(g, mu, -floor).series)
    d = project_series(inj, singular_weights(g, g.zero(), cutoff).series)
    return anomalous_coefficients_star(psi_p, d, inj.sub, floor, inj.resolved_height_vector)


# -- Cartan subalgebra mode --------------------------------------------------------------

def weight_steps(spec: AlgebraSpec, cutoff: RationalLike = 0) -> Tuple[Tuple[Weight, int], ...]:
    """Shifts ``-(w∘0)`` with coefficients ``-eps(w)``, ``w != e``."""
    psi0 = singular_weights(spec, spec.zero(), cutoff).series
    return tuple((-w, -c) for w, c in psi0.sorted_items() if not w.is_zero())


def weight_multiplicities(spec: AlgebraSpec, mu: Weight, cutoff: RationalLike = 0) -> AnomalousTable:
    """Weight diagram of ``L^mu`` from
    ``m[x] = sum_w eps(w) [x = w∘mu] - sum_{w != e} eps(w) m[x - w∘0]``.
    """
    cutoff = as_fraction(cutoff) if spec.is_affine else Fraction(0)
    floor = mu.grade - cutoff
    source = singular_weights(spec, mu, -floor).series
    steps = weight_steps(spec, cutoff)
    return solve_triangular(source, steps, -1, floor, spec, spec.zero().finite,
                            spec.rho.finite, cutoff)


def weight_residual(spec: AlgebraSpec, mu: Weight, table: AnomalousTable,
                    cutoff: RationalLike = 0) -> SignedSeries:
    cutoff = as_fraction(cutoff) if spec.is_affine else Fraction(0)
    source = singular_weights(spec, mu, -(mu.grade - cutoff)).series
    return residual(table, source, weight_steps(spec, cutoff), -1)


# -- symmetry checks ---------------------------------------------------------------------

def weyl_antisymmetry_violations(table: AnomalousTable, sub: AlgebraSpec,
                                 invariant: bool = False) -> List[Tuple[Weight, Weight]]:
    """Pairs ``(x, s∘x)`` breaking ``k[s∘x] = -k[x]`` (or ``= k[x]`` if ``invariant``).

    Checks every simple reflection, including the affine one, wherever both
    points are at or above the floor.
    """
    floor = table.window.floor
    sign = 1 if invariant else -1
    bad = []
    k = table.coefficients
    for x in list(k):
        for a in sub.simple_roots:
            y = sub.reflect(x, a) if invariant else sub.shifted_reflect(x, a)
            if y.grade < floor:
                continue
            if k[y] != sign * k[x]:
                bad.append((x, y))
    return bad
