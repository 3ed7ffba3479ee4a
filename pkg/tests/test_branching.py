
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fanbranch.algebras import build_finite, parse_algebra, singular_weights
from fanbranch.branching import (WindowError, anomalous_coefficients,
                                 anomalous_coefficients_star, branch, branch_star,
                                 branching_functions, extract_branching, qseries_text,
                                 solve_triangular, weight_multiplicities, weight_residual,
                                 weyl_antisymmetry_violations)
from fanbranch.injections import build_fan, compute_phi, identity_injection, preset, project_series
from fanbranch.lattice import SignedSeries, Weight
from fanbranch.oracle import freudenthal, weyl_dimension


def test_identity_injection_reproduces_psi():
    g = build_finite("A", 2)
    inj = identity_injection(g)
    mu = g.from_fw([2, 1])
    run = branch(inj, mu)
    assert run.table.coefficients == singular_weights(g, mu, 0).series
    assert run.result.coefficients == {mu: 1}


def test_b1_in_a2_full_table():
    inj = preset("B1-in-A2")
    a1, a2 = inj.ambient.classical_roots
    beta = inj.sub.classical_roots[0]
    run = branch(inj, a1 + a2)
    assert run.table.coefficients.as_dict() == {beta * 2: 1, beta: 1, -beta * 2: -1, -beta * 3: -1}


def test_a2_in_g2_dimension_conservation():
    inj = preset("A2-in-G2")
    mu = inj.ambient.from_fw([1, 0])
    run = branch(inj, mu)
    total = sum(b * weyl_dimension(inj.sub, nu) for nu, b in run.result.coefficients.items())
    assert total == weyl_dimension(inj.ambient, mu) == 14


@pytest.mark.parametrize("fw", [(0, 1), (2, 0), (1, 1), (0, 3)])
def test_g2_to_a2_dimension_conservation(fw):
    inj = preset("A2-in-G2")
    mu = inj.ambient.from_fw(fw)
    run = branch(inj, mu)
    assert not run.residual()
    assert all(b > 0 for b in run.result.coefficients.values())
    total = sum(b * weyl_dimension(inj.sub, nu) for nu, b in run.result.coefficients.items())
    assert total == weyl_dimension(inj.ambient, mu)


@pytest.mark.parametrize("fw", [(1, 0), (2, 0), (0, 2), (2, 2), (3, 1)])
def test_a2_to_b1_dimension_conservation(fw):
    inj = preset("B1-in-A2")
    mu = inj.ambient.from_fw(fw)
    run = branch(inj, mu)
    total = sum(b * weyl_dimension(inj.sub, nu) for nu, b in run.result.coefficients.items())
    assert total == weyl_dimension(inj.ambient, mu)
    assert branch_star(inj, mu).coefficients == run.table.coefficients


def test_example3_multiplicities_by_grade():
    inj = preset("A2_2-in-A2_1")
    run = branch(inj, inj.ambient.from_fw([1, 0, 0]), 10)
    by_grade = [sum(b for w, b in run.result.coefficients.items() if w.grade == -n)
                for n in range(10)]
    assert by_grade == [1, 1, 0, 2, 1, 2, 2, 4, 3, 5]
    fns = branching_functions(run.result)
    assert [qseries_text(s) for _, s in fns] == ["1 + q^4 + 2q^6 + 3q^8 + 4q^10",
                                                 "q + 2q^3 + 2q^5 + 4q^7 + 5q^9"]


def test_example3_json_classes():
    inj = preset("A2_2-in-A2_1")
    run = branch(inj, inj.ambient.from_fw([1, 0, 0]), 6)
    data = run.result.to_json()
    assert [c["series"] for c in data["classes"]] == [[[0, 1], [4, 1], [6, 2]],
                                                      [[1, 1], [3, 2], [5, 2]]]


@pytest.mark.parametrize("fw", [(0, 1, 0), (2, 0, 0), (1, 1, 0), (0, 1, 1)])
def test_affine_fan_and_star_agree(fw):
    inj = preset("A2_2-in-A2_1")
    mu = inj.ambient.from_fw(fw)
    run = branch(inj, mu, 6)
    assert not run.residual()
    assert not weyl_antisymmetry_violations(run.table, inj.sub)
    assert all(b > 0 for b in run.result.coefficients.values())
    assert branch_star(inj, mu, 6).coefficients == run.table.coefficients


def test_cutoff_stability():
    inj = preset("A2_2-in-A2_1")
    mu = inj.ambient.from_fw([0, 1, 1])
    a = branch(inj, mu, 4).table.coefficients
    b = branch(inj, mu, 9).table.coefficients
    assert b.restricted(lambda w: w.grade >= -4) == a


def test_shallow_fan_is_rejected():
    inj = preset("A2_2-in-A2_1")
    g = inj.ambient
    mu = g.from_fw([1, 0, 0])
    psi = project_series(inj, singular_weights(g, mu, 6).series)
    fan = build_fan(compute_phi(inj, 3), inj, 3)
    with pytest.raises(WindowError):
        anomalous_coefficients(psi, fan, -6, inj)


def test_source_must_cover_window():
    inj = preset("A2_2-in-A2_1")
    g = inj.ambient
    psi = project_series(inj, singular_weights(g, g.from_fw([1, 0, 0]), 3).series)
    fan = build_fan(compute_phi(inj, 6), inj, 6)
    with pytest.raises(WindowError):
        anomalous_coefficients(psi, fan, -6, inj)


def test_non_positive_step_is_rejected():
    spec = build_finite("A", 1)
    src = SignedSeries({Weight([0, 0]): 1})
    with pytest.raises(WindowError):
        solve_triangular(src, [(Weight([-1, 1]), 1)], 1, 0, spec, (0, 0), spec.rho.finite, 0)
    with pytest.raises(WindowError):
        solve_triangular(src, [], 0, 0, spec, (0, 0), spec.rho.finite, 0)


def test_star_recursion_identity():
    g = build_finite("A", 2)
    d = singular_weights(g, g.zero(), 0).series
    table = anomalous_coefficients_star(d, d, g, 0)
    # the table is Psi^0 itself, so only k_0 = 1 survives on the dominant chamber
    assert table.coefficients == d
    assert extract_branching(table, g).coefficients == {g.zero(): 1}


def test_extract_ignores_non_dominant():
    inj = preset("B1-in-A2")
    a1, a2 = inj.ambient.classical_roots
    run = branch(inj, a1 + a2)
    res = extract_branching(run.table, inj.sub)
    assert all(inj.sub.is_dominant(w) for w in res.coefficients)


def test_branching_functions_need_affine_sub():
    inj = preset("B1-in-A2")
    run = branch(inj, inj.ambient.from_fw([1, 1]))
    with pytest.raises(ValueError):
        branching_functions(run.result)


def test_qseries_text():
    assert qseries_text([(0, 1), (4, 1), (6, 2)]) == "1 + q^4 + 2q^6"
    assert qseries_text([(1, -1), (2, 3)]) == "-q + 3q^2"
    assert qseries_text([]) == "0"


def test_trivial_module_branching_function():
    g = parse_algebra("A2^(2)")
    inj = identity_injection(g)
    run = branch(inj, g.from_fw([1, 0]), 5)
    assert [s for _, s in branching_functions(run.result)] == [[(0, 1)]]


# -- weight diagrams --------------------------------------------------------------------

def test_a2_adjoint_weights():
    g = build_finite("A", 2)
    a1, a2 = g.classical_roots
    m = weight_multiplicities(g, a1 + a2).coefficients
    assert m[g.zero()] == 2 and m[a1] == m[a2] == m[a1 + a2] == 1
    assert sum(v for _, v in m.items()) == 8


def test_g2_adjoint_weights():
    g = build_finite("G", 2)
    m = weight_multiplicities(g, g.from_fw([1, 0])).coefficients
    assert m[g.zero()] == 2 and sum(v for _, v in m.items()) == 14


def test_b1_string():
    b = build_finite("B", 1)
    beta = b.classical_roots[0]
    m = weight_multiplicities(b, beta * 2).coefficients
    assert m.as_dict() == {beta * k: 1 for k in (-2, -1, 0, 1, 2)}


def test_affine_level_one_weights():
    # basic A1^(1) module: m(omega0 - n delta) = partitions p(n)
    g = parse_algebra("A1^(1)")
    mu = g.from_fw([1, 0])
    table = weight_multiplicities(g, mu, 8)
    assert not weight_residual(g, mu, table, 8)
    got = [table.coefficients[mu.with_grade(-n)] for n in range(9)]
    assert got == [1, 1, 2, 3, 5, 7, 11, 15, 22]
    assert not weyl_antisymmetry_violations(table, g, invariant=True)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["A2", "B2", "G2", "A3", "C3"]), st.data())
def test_weights_match_freudenthal(name, data):
    spec = parse_algebra(name)
    c = data.draw(st.lists(st.integers(0, 2), min_size=spec.classical_rank,
                           max_size=spec.classical_rank))
    mu = spec.from_fw(c)
    table = weight_multiplicities(spec, mu)
    assert table.coefficients.as_dict() == freudenthal(spec, mu).multiplicities
    assert not weight_residual(spec, mu, table)
    assert not weyl_antisymmetry_violations(table, spec, invariant=True)


@settings(max_examples=15, deadline=None)
@given(st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_g2_a2_fan_equals_star(fw):
    inj = preset("A2-in-G2")
    mu = inj.ambient.from_fw(fw)
    run = branch(inj, mu)
    assert branch_star(inj, mu).coefficients == run.table.coefficients
    assert not weyl_antisymmetry_violations(run.table, inj.sub)
    assert all(b >= 0 for b in run.result.coefficients.values())
