import json
import math
from itertools import product

import pytest

from cosetfusion.commutant import (
    BranchingTable,
    HypothesisError,
    build_table,
    check_product_structure,
    derive_commutant_ring,
    derived_qdim,
    fp_dimensions,
    run_checks,
    validate,
)
from cosetfusion.fusion import FusionRing, check_axioms, minimal_model_fusion
from cosetfusion.kac import MinimalModel
from cosetfusion.modular import relabel, s_matrix



def string_ring(m):
    return minimal_model_fusion(MinimalModel(m)).relabel(str)


def string_data(m):
    return relabel(s_matrix(MinimalModel(m)), str)


def product_table(big, sub):
    """Branching of the plain tensor product of two theories."""
    return build_table(big.labels, sub.labels, {(i, a): f"{i}|{a}" for i in big.labels for a in sub.labels})


@pytest.fixture
def ising_squared():
    big, sub = string_ring(1), string_ring(1)
    return product_table(big, sub), big, sub


def test_trivial_big_ring():
    big = FusionRing(["V"], "V", {("V", "V", "V"): 1})
    sub = string_ring(1)
    table = product_table(big, sub)
    derived = derive_commutant_ring(table, big, sub)
    assert derived == sub.relabel(lambda a: f"V|{a}")


def test_trivial_subalgebra():
    big = string_ring(2)
    sub = FusionRing(["1"], "1", {("1", "1", "1"): 1})
    derived = derive_commutant_ring(product_table(big, sub), big, sub)
    assert derived == big.relabel(lambda i: f"{i}|1")


def test_product_of_rings(ising_squared):
    table, big, sub = ising_squared
    derived = derive_commutant_ring(table, big, sub)
    assert len(derived) == 9
    assert check_axioms(derived).ok
    for (i, j, k), (a, b, c) in product(product(big.labels, repeat=3), product(sub.labels, repeat=3)):
        assert derived.N(f"{i}|{a}", f"{j}|{b}", f"{k}|{c}") == big.N(i, j, k) * sub.N(a, b, c)
    assert check_product_structure(table, derived).ok


def test_quantum_dimensions_multiply(ising_squared):
    table, big, sub = ising_squared
    qd = derived_qdim(table, string_data(1).qdim, string_data(1).qdim)
    fp = fp_dimensions(derive_commutant_ring(table, big, sub))
    for lab, d in qd.items():
        assert fp[lab] == pytest.approx(d, abs=1e-9)
    assert max(qd.values()) == pytest.approx(2.0)


def test_fp_dimensions_of_minimal_models():
    for m in (1, 2, 3):
        fp = fp_dimensions(string_ring(m))
        qd = string_data(m).qdim
        assert all(fp[a] == pytest.approx(qd[a], abs=1e-9) for a in qd)
    assert fp_dimensions(string_ring(2))["2:1.2"] == pytest.approx((1 + math.sqrt(5)) / 2)


def test_run_checks_all_pass(ising_squared):
    table, big, sub = ising_squared
    checks, derived = run_checks(table, big, sub, string_data(1))
    assert derived is not None
    assert all(c.ok for c in checks), [c.line() for c in checks if not c.ok]


def test_missing_branch_is_flagged(ising_squared):
    table, big, sub = ising_squared
    rows = {i: list(r) for i, r in table.rows.items()}
    rows[big.labels[1]] = rows[big.labels[1]][:-1]
    bad = BranchingTable(table.I, table.J, rows)
    report = validate(bad, big, string_data(1))
    assert not report.rows_complete
    assert big.labels[1] in report.missing
    assert not report.equality_holds
    assert not report.ok
    with pytest.raises(HypothesisError):
        derive_commutant_ring(bad, big, sub)


def test_vacuum_row_incomplete():
    big, sub = string_ring(1), string_ring(1)
    table = product_table(big, sub)
    rows = {i: list(r) for i, r in table.rows.items()}
    rows[big.unit] = rows[big.unit][:1]
    bad = BranchingTable(table.I, table.J, rows)
    report = validate(bad, big, string_data(1))
    assert not report.j1_equals_j
    with pytest.raises(HypothesisError, match="J_1"):
        derive_commutant_ring(bad, big, sub)
    checks, derived = run_checks(bad, big, sub, string_data(1))
    assert derived is None
    assert not all(c.ok for c in checks)


def test_duplicate_labels():
    big, sub = string_ring(1), string_ring(1)
    table = build_table(big.labels, sub.labels, {(i, a): a for i in big.labels for a in sub.labels})
    assert validate(table, big, string_data(1)).duplicates
    with pytest.raises(HypothesisError, match="distinct"):
        derive_commutant_ring(table, big, sub)


def test_broken_input_ring(ising_squared):
    table, big, sub = ising_squared
    consts = dict(big.constants)
    one, sigma, eps = big.labels
    consts[eps, eps, sigma] = 1
    with pytest.raises(HypothesisError, match="axioms"):
        derive_commutant_ring(table, FusionRing(big.labels, big.unit, consts), sub)


def test_mismatched_labels(ising_squared):
    table, big, sub = ising_squared
    with pytest.raises(HypothesisError):
        derive_commutant_ring(table, string_ring(2), sub)
    report = validate(table, string_ring(2), string_data(1))
    assert report.ring_mismatch


def test_unknown_branch_label_rejected():
    with pytest.raises(ValueError):
        BranchingTable(["V"], ["a"], {"V": [("b", "x")]})
    with pytest.raises(ValueError):
        BranchingTable(["V", "W"], ["a"], {"V": [("a", "x")]})


def test_json_round_trip(ising_squared, tmp_path):
    table = ising_squared[0]
    data = table.to_json()
    assert BranchingTable.from_json(data) == table
    path = tmp_path / "t.json"
    path.write_text(json.dumps(data))
    assert BranchingTable.from_json(path) == table
    assert BranchingTable.from_json(path.read_text()) == table


def test_tricritical_over_ising():
    # a product table with different theories on each side
    big, sub = string_ring(2), string_ring(1)
    table = product_table(big, sub)
    checks, derived = run_checks(table, big, sub, string_data(1))
    assert all(c.ok for c in checks)
    assert len(derived) == 18
