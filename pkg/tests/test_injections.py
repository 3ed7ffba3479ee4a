import json

import pytest

from fanbranch.algebras import build_finite, parse_algebra
from fanbranch.injections import (InjectionError, InjectionSpec, build_fan, compute_phi,
                                  fan_for, identity_injection, injection_from_json,
                                  net_exponents, preset, project)
from fanbranch.lattice import SignedSeries, Weight


def test_identity_projection():
    inj = identity_injection(parse_algebra("A2^(1)"))
    w = Weight([1, "2/3", -5], 2, -3)
    assert project(inj, w) == w


def test_b1_in_a2_projection():
    inj = preset("B1-in-A2")
    a1, a2 = inj.ambient.classical_roots
    beta = inj.sub.classical_roots[0]
    assert project(inj, a1) == beta * 2
    assert project(inj, a2) == -beta
    assert project(inj, a1 + a2) == beta


def test_affine_projection_doubles_level():
    inj = preset("A2_2-in-A2_1")
    g, a = inj.ambient, inj.sub
    assert project(inj, g.from_fw([1, 0, 0])) == a.from_fw([1, 0])
    assert project(inj, g.rho).level == 2 * g.rho.level
    assert project(inj, g.delta()) == a.delta()


def test_projection_dimension_mismatch():
    with pytest.raises(InjectionError):
        project(preset("B1-in-A2"), Weight([1, 0]))


def test_identity_carrier():
    inj = identity_injection(build_finite("A", 2))
    phi = compute_phi(inj, 0)
    assert phi.as_dict() == {Weight([0, 0, 0]): -1}
    fan = build_fan(phi, inj)
    assert fan.entries == () and fan.s0 == -1


def test_a2_in_g2_carrier():
    inj = preset("A2-in-G2")
    a1, a2 = inj.ambient.classical_roots
    phi = compute_phi(inj, 0)
    assert phi.as_dict() == {a1 * 0: -1, a2: 1, a1 + a2: 1, a1 + a2 * 3: -1,
                             a1 * 2 + a2 * 3: -1, a1 * 2 + a2 * 4: 1}
    fan = build_fan(phi, inj)
    assert fan.gamma0.is_zero() and fan.s0 == -1
    assert dict(fan.entries) == {a2: 1, a1 + a2: 1, a1 + a2 * 3: -1,
                                 a1 * 2 + a2 * 3: -1, a1 * 2 + a2 * 4: 1}


def test_b1_in_a2_carrier_and_fan():
    inj = preset("B1-in-A2")
    beta = inj.sub.classical_roots[0]
    phi = compute_phi(inj, 0)
    assert phi.as_dict() == {beta * 0: -1, beta * 2: 1, -beta: 1, beta: -1}
    fan = build_fan(phi, inj)
    assert fan.gamma0 == -beta and fan.s0 == 1
    assert fan.entries == ((beta, -1), (beta * 2, -1), (beta * 3, 1))
    assert fan.carrier() == phi


def test_affine_fan_grade_zero_part_matches_finite_fan():
    fin = fan_for(preset("B1-in-A2"))
    aff = fan_for(preset("A2_2-in-A2_1"), 4)
    flat = [(g.finite, s) for g, s in aff.entries if g.grade == 0]
    assert flat == [(g.finite, s) for g, s in fin.entries]
    assert all(g.grade >= 0 for g, _ in aff.entries)
    # grade-zero carrier of this non-equal-rank injection has four points
    assert len([w for w in aff.carrier() if w.grade == 0]) == 4


def test_phi_cutoff_is_a_restriction():
    inj = preset("A2_2-in-A2_1")
    small, big = compute_phi(inj, 3), compute_phi(inj, 6)
    assert big.restricted(lambda w: w.grade <= 3) == small


def test_net_exponents_of_twisted_injection():
    inj = preset("A2_2-in-A2_1")
    net = net_exponents(inj, 2)
    a = inj.sub
    # imaginary roots: multiplicity 2 upstairs, 1 downstairs
    assert net[a.delta()] == 1 and net[a.delta() * 2] == 1
    assert all(m > 0 for m in net.values())


def test_fan_vectors_are_positive():
    for name, cutoff in (("A2-in-G2", 0), ("B1-in-A2", 0), ("A2_2-in-A2_1", 5)):
        inj = preset(name)
        fan = fan_for(inj, cutoff)
        for g, _ in fan.entries:
            assert g.grade > 0 or (g.grade == 0 and inj.height(g) > 0)


def test_zero_projection_is_rejected():
    a2 = build_finite("A", 2)
    a1 = build_finite("A", 1)
    inj = InjectionSpec.from_block(a2, a1, [[0, 0, 0], [0, 0, 0]])
    with pytest.raises(InjectionError):
        compute_phi(inj, 0)


def test_uncovered_sub_root_is_rejected():
    # B1 with beta = 3 * (1/3 beta): projected roots never reach the sub root
    a2 = build_finite("A", 2)
    b1 = build_finite("B", 1)
    inj = InjectionSpec.from_block(a2, b1, [[3, -3, 0]])
    with pytest.raises(InjectionError):
        compute_phi(inj, 0)


def test_unknown_preset():
    with pytest.raises(InjectionError):
        preset("E8-in-E8")


def test_json_roundtrip(tmp_path):
    for name in ("B1-in-A2", "A2_2-in-A2_1", "A2-in-G2"):
        inj = preset(name)
        data = json.loads(json.dumps(inj.to_json()))
        again = injection_from_json(data)
        assert again.projection == inj.projection
        assert again.sub.simple_roots == inj.sub.simple_roots
    assert injection_from_json({"preset": "B1-in-A2"}).name == "B1-in-A2"


def test_tie_in_lowest_vector_is_an_error():
    inj = preset("B1-in-A2")
    beta = inj.sub.classical_roots[0]
    with pytest.raises(InjectionError):
        build_fan(SignedSeries({Weight([0], 0, 0): 1, Weight([0], 1, 0): 1}), inj)
    with pytest.raises(InjectionError):
        build_fan(SignedSeries(), inj)
    assert build_fan(SignedSeries({beta: 1}), inj).entries == ()
