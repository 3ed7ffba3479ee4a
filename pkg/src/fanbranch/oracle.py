"""Independent checks for finite algebras: Freudenthal's formula and Weyl's dimension formula.

Used by the tests only; the engine never imports this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

from .algebras import AlgebraSpec
from .lattice import Weight


@dataclass(frozen=True)
class FiniteModuleDiagram:
    multiplicities: Dict[Weight, int]
    highest_weight: Weight
    dimension: int


def _check(spec: AlgebraSpec, mu: Weight) -> None:
    if spec.is_affine:
        raise ValueError("the oracle handles finite algebras only")
    if not (spec.is_dominant(mu) and spec.is_integral(mu)):
        raise ValueError(f"{mu!r} is not dominant integral for {spec.name}")


def weyl_dimension(spec: AlgebraSpec, mu: Weight) -> int:
    _check(spec, mu)
    num = den = Fraction(1)
    for a in spec.classical_positive_roots:
        num *= spec.inner(mu + spec.rho, a)
        den *= spec.inner(spec.rho, a)
    d = num / den
    if d.denominator != 1:
        raise ArithmeticError(f"Weyl dimension {d} is not an integer")
    return int(d)


def freudenthal(spec: AlgebraSpec, mu: Weight) -> FiniteModuleDiagram:
    _check(spec, mu)
    rho = spec.rho
    pos = spec.classical_positive_roots
    simple = spec.classical_roots
    top = spec.inner(mu + rho, mu + rho)

    # dominant weights below mu, by depth
    dominant = [mu]
    seen = {mu}
    frontier = [mu]
    while frontier:
        nxt = []
        for x in frontier:
            for a in simple:
                y = x - a
                if y in seen:
                    continue
                seen.add(y)
                d, _ = spec.to_dominant(y)
                if _below(spec, mu, d):
                    nxt.append(y)
                    if spec.is_dominant(y):
                        dominant.append(y)
        frontier = nxt

    mult: Dict[Weight, int] = {mu: 1}

    def m(x: Weight) -> int:
        d, _ = spec.to_dominant(x)
        return mult.get(d, 0)

    for lam in dominant[1:]:
        acc = Fraction(0)
        for a in pos:
            j = 1
            while True:
                y = lam + a * j
                my = m(y)
                if not my and not _below(spec, mu, spec.to_dominant(y)[0]):
                    break
                acc += my * spec.inner(y, a)
                j += 1
        val = 2 * acc / (top - spec.inner(lam + rho, lam + rho))
        if val.denominator != 1:
            raise ArithmeticError(f"non-integral multiplicity at {lam!r}")
        if val:
            mult[lam] = int(val)

    full: Dict[Weight, int] = {}
    for d, c in mult.items():
        frontier = [d]
        full[d] = c
        while frontier:
            nxt = []
            for x in frontier:
                for a in simple:
                    y = spec.reflect(x, a)
                    if y not in full:
                        full[y] = c
                        nxt.append(y)
            frontier = nxt
    return FiniteModuleDiagram(full, mu, sum(full.values()))


def _below(spec: AlgebraSpec, mu: Weight, lam: Weight) -> bool:
    """``mu - lam`` is a non-negative integer combination of simple roots."""
    try:
        c = spec.simple_root_coords(mu - lam)
    except ValueError:
        return False
    return all(x >= 0 and x.denominator == 1 for x in c)
