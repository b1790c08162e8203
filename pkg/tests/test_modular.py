import math

import numpy as np
import pytest

from cosetfusion.fusion import check_axioms, minimal_model_fusion
from cosetfusion.kac import MinimalModel
from cosetfusion.modular import (
    INTEGRALITY_TOL,
    ModularData,
    ModularDataError,
    field_qdim,
    ising,
    max_integrality_deviation,
    qdim_homomorphism_error,
    s_matrix,
    total_dim_squared,
    verlinde_fusion,
)


def test_ising_quantum_dimensions():
    qd = ising().qdim
    one, sigma, eps = ising().labels
    assert qd[one] == pytest.approx(1.0, abs=1e-12)
    assert qd[sigma] == pytest.approx(math.sqrt(2), abs=1e-12)
    assert qd[eps] == pytest.approx(1.0, abs=1e-12)


def test_ising_s_matrix_closed_form():
    r2 = math.sqrt(2)
    expected = 0.5 * np.array([[1, r2, 1], [r2, 0, -r2], [1, -r2, 1]])
    assert np.allclose(ising().S, expected, atol=1e-12)


@pytest.mark.parametrize("m", range(1, 10))
def test_structure(m):
    data = s_matrix(MinimalModel(m))
    n = len(data.labels)
    assert np.allclose(data.S, data.S.T, atol=1e-9)
    assert np.allclose(data.S @ data.S, np.eye(n), atol=1e-9)
    assert np.all(data.vacuum_row > 0)
    assert min(data.qdim.values()) >= 1 - 1e-9


@pytest.mark.parametrize("m", range(1, 10))
def test_verlinde_matches_admissible(m):
    model = MinimalModel(m)
    data = s_matrix(model)
    assert max_integrality_deviation(data) < INTEGRALITY_TOL
    assert verlinde_fusion(data) == minimal_model_fusion(model)


@pytest.mark.parametrize("m", range(1, 10))
def test_qdim_homomorphism(m):
    model = MinimalModel(m)
    assert qdim_homomorphism_error(minimal_model_fusion(model), s_matrix(model).qdim) < 1e-9


def test_total_dimension():
    data = ising()
    one, sigma, eps = data.labels
    assert total_dim_squared(data, data.labels) == pytest.approx(4.0)
    assert total_dim_squared(data, []) == 0.0
    assert total_dim_squared(data, [one]) == pytest.approx(1.0)
    with pytest.raises(KeyError):
        total_dim_squared(data, ["nope"])


def test_field_qdim_tricritical():
    # m=2: d(1,2) is the golden ratio
    model = MinimalModel(2)
    assert field_qdim(model.field(1, 2)) == pytest.approx((1 + math.sqrt(5)) / 2, abs=1e-12)


def test_wrong_sign_convention_detected():
    data = ising()
    flipped = data.S.copy()
    flipped[1, 1:] *= -1
    bad = ModularData(data.labels, data.unit, flipped)
    assert bad.check()


def test_negative_vacuum_row_detected():
    data = ising()
    bad = ModularData(data.labels, data.unit, -data.S.copy())
    assert any("positive" in p for p in bad.check())


def test_verlinde_rejects_non_integral():
    data = ising()
    S = data.S.copy()
    c, s = math.cos(0.1), math.sin(0.1)
    rot = np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    bad = ModularData(data.labels, data.unit, rot @ S @ rot.T)
    with pytest.raises(ModularDataError):
        verlinde_fusion(bad)


def test_s_matrix_is_read_only():
    with pytest.raises(ValueError):
        ising().S[0, 0] = 0.0


def test_verlinde_fusion_axioms():
    assert check_axioms(verlinde_fusion(s_matrix(MinimalModel(4)))).ok
