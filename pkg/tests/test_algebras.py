from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanbranch.algebras import (UnsupportedAlgebra, algebra_descriptor, algebra_from_descriptor,
                                build_affine, build_finite, classical_weyl_orbit,
                                expand_denominator, parse_algebra, singular_weights)
from fanbranch.lattice import Weight


@pytest.mark.parametrize("name,order,nroots", [
    ("A1", 2, 2), ("A2", 6, 6), ("A3", 24, 12), ("B1", 2, 2), ("B2", 8, 8), ("C3", 48, 18),
    ("D4", 192, 24), ("G2", 12, 12)])
def test_weyl_group_and_root_counts(name, order, nroots):
    spec = parse_algebra(name)
    assert spec.classical_weyl_order == order
    assert len(spec.classical_root_system) == nroots


def test_g2_labelling_has_long_first_root():
    g2 = build_finite("G", 2)
    a1, a2 = g2.classical_roots
    assert g2.inner(a1, a1) == 2 and g2.inner(a2, a2) == Fraction(2, 3)
    # entries (a_i | a_j^vee)
    assert g2.cartan_matrix == ((2, -3), (-1, 2))
    assert g2.highest_root == a1 * 2 + a2 * 3


def test_b1_root_is_short():
    b1 = build_finite("B", 1)
    (beta,) = b1.classical_roots
    assert b1.inner(beta, beta) == 1 and b1.rho == beta * Fraction(1, 2)


def test_twisted_a2_data():
    a = build_affine("A", 2, 2)
    b0, b = a.simple_roots
    assert b0 == Weight([-2], 0, 1) and b == Weight([1])
    assert a.rho == Weight(["1/2"], 3, 0)
    assert a.fundamental_weights == (Weight([0], 2, 0), Weight(["1/2"], 1, 0))
    assert a.cartan_matrix == ((2, -4), (-1, 2))


def test_untwisted_affine_data():
    a = parse_algebra("A2^(1)")
    assert a.dual_coxeter_number == 3
    assert a.simple_roots[0] == Weight([-1, 0, 1], 0, 1)
    assert [w.level for w in a.fundamental_weights] == [1, 1, 1]
    assert parse_algebra("G2^(1)").dual_coxeter_number == 4


@pytest.mark.parametrize("text", ["E8", "A0", "C1", "D2", "G3", "B1^(1)", "A3^(2)", "A2^(3)"])
def test_unsupported(text):
    with pytest.raises(UnsupportedAlgebra):
        parse_algebra(text)


def test_descriptor_roundtrip():
    for name in ("A2", "G2", "A2^(1)", "A4^(2)"):
        spec = parse_algebra(name)
        again = algebra_from_descriptor(algebra_descriptor(spec))
        assert again.simple_roots == spec.simple_roots and again.gram == spec.gram


def test_orbit_of_singular_weight_is_empty():
    a2 = build_finite("A", 2)
    assert not classical_weyl_orbit(a2, a2.zero())


def test_orbit_of_rho_g2():
    g2 = build_finite("G", 2)
    orb = classical_weyl_orbit(g2, g2.rho)
    assert len(orb) == 12 and sum(c for _, c in orb.items()) == 0
    assert orb[g2.rho] == 1


def test_a2_adjoint_singular_weights():
    a2 = build_finite("A", 2)
    a1, a2r = a2.classical_roots
    mu = a1 + a2r
    got = singular_weights(a2, mu, 0).series.as_dict()
    # the bottom term is -3a1-3a2
    want = {mu: 1, a2r - a1: -1, a1 - a2r: -1,
            -a1 * 3 - a2r: 1, -a1 - a2r * 3: 1, -a1 * 3 - a2r * 3: -1}
    assert got == want


def test_g2_adjoint_singular_weights():
    g2 = build_finite("G", 2)
    a1, a2 = g2.classical_roots
    s = singular_weights(g2, a1 * 2 + a2 * 3, 0).series
    assert len(s) == 12
    assert s[a1 * 2 + a2 * 3] == 1
    assert s[a1 * 2 + a2 * 2] == -1


def test_singular_weights_validate_input():
    a2 = build_finite("A", 2)
    with pytest.raises(ValueError):
        singular_weights(a2, a2.from_fw([-1, 0]), 0)
    with pytest.raises(ValueError):
        singular_weights(a2, a2.from_fw(["1/2", 0]), 0)
    aff = parse_algebra("A2^(1)")
    with pytest.raises(ValueError):
        singular_weights(aff, aff.from_fw([1, 0, 0]), -1)


@pytest.mark.parametrize("name,cutoff", [
    ("A1", 0), ("A2", 0), ("B2", 0), ("C3", 0), ("G2", 0), ("D4", 0),
    ("A1^(1)", 8), ("A2^(1)", 6), ("B2^(1)", 4), ("C2^(1)", 4), ("G2^(1)", 3),
    ("A2^(2)", 8), ("A4^(2)", 4)])
def test_denominator_identity(name, cutoff):
    spec = parse_algebra(name)
    assert singular_weights(spec, spec.zero(), cutoff).series == expand_denominator(spec, cutoff)


def test_a2_2_positive_roots_pattern():
    a = build_affine("A", 2, 2)
    roots = {(r.finite, r.grade): m for r, m in a.positive_roots(3)}
    assert roots[((Fraction(1),), 0)] == 1
    assert ((Fraction(2),), 0) not in roots
    assert roots[((Fraction(2),), 1)] == 1 and ((Fraction(2),), 2) not in roots
    assert roots[((Fraction(0),), 2)] == 1


def test_affine_singular_weights_are_w_images():
    # every term lies on the orbit: |lam|^2 is W-invariant
    g = parse_algebra("A2^(1)")
    mu = g.from_fw([1, 0, 0])
    lam = mu + g.rho
    for w, _ in singular_weights(g, mu, 9).series.items():
        x = w + g.rho
        assert g.inner(x, x) == g.inner(lam, lam)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "A3"]), st.data())
def test_finite_singular_set_is_signed_orbit(name, data):
    spec = parse_algebra(name)
    c = data.draw(st.lists(st.integers(0, 3), min_size=spec.classical_rank,
                           max_size=spec.classical_rank))
    mu = spec.from_fw(c)
    s = singular_weights(spec, mu, 0).series
    assert len(s) == spec.classical_weyl_order
    assert sum(v for _, v in s.items()) == 0
    assert s[mu] == 1


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["A1^(1)", "A2^(1)", "A2^(2)", "B2^(1)"]), st.integers(0, 5), st.data())
def test_affine_cutoff_is_restriction(name, n, data):
    spec = parse_algebra(name)
    c = data.draw(st.lists(st.integers(0, 2), min_size=len(spec.simple_roots),
                           max_size=len(spec.simple_roots)))
    mu = spec.from_fw(c)
    small = singular_weights(spec, mu, n).series
    big = singular_weights(spec, mu, n + 3).series
    assert big.restricted(lambda w: w.grade >= -n) == small
