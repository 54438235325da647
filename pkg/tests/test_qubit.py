import json
import math

import numpy as np
import pytest
from hypothesis import given

from conftest import bloch_vectors
from nomaq.qubit import (
    GROUND, MAXIMALLY_MIXED, PLUS, X, Y, Z, BlochVector, DensityMatrix, InvalidStateError,
    from_bloch, to_bloch, validate,
)


def test_from_bloch_examples():
    assert from_bloch(BlochVector(0, 0, 1)) == GROUND
    plus = from_bloch(BlochVector(1, 0, 0))
    assert plus.r12 == 0.5 and plus.r11 == plus.r22 == 0.5
    assert from_bloch(BlochVector(0, 0, 0)) == MAXIMALLY_MIXED


def test_to_bloch_examples():
    assert to_bloch(GROUND) == BlochVector(0, 0, 1)
    assert to_bloch(MAXIMALLY_MIXED) == BlochVector(0, 0, 0)
    # rho = (I + sx X + sy Y + sz Z)/2 has rho_12 = (sx - i sy)/2
    b = to_bloch(DensityMatrix(0.5, 0.5, 0.3 - 0.1j))
    assert b.sx == pytest.approx(0.6, abs=1e-15)
    assert b.sy == pytest.approx(0.2, abs=1e-15)


def test_rejects_unphysical_bloch():
    with pytest.raises(InvalidStateError):
        from_bloch(BlochVector(1.0, 1e-3, 0.0))
    with pytest.raises(InvalidStateError):
        BlochVector(math.nan, 0, 0)


def test_validate_examples():
    assert validate(np.eye(2) / 2).ok
    rep = validate(np.diag([0.6, 0.6]))
    assert not rep.trace_ok and rep.trace == pytest.approx(0.2)
    assert rep.hermitian_ok and rep.psd_ok
    rep = validate(np.array([[0.5, 0.6], [0.6, 0.5]]))
    assert not rep.psd_ok and rep.psd == pytest.approx(0.11)
    assert rep.trace_ok
    rep = validate(np.array([[0.5, 0.1], [0.3, 0.5]]))
    assert not rep.hermitian_ok and rep.hermiticity == pytest.approx(0.2)


def test_validate_reports_every_invariant():
    text = str(validate(np.diag([0.6, 0.6])))
    assert "hermitian: pass" in text and "unit trace: FAIL" in text and "positive semidefinite" in text


def test_from_matrix_averages_tiny_hermiticity_defect_only():
    m = np.array([[0.5, 0.5], [0.5 + 1e-14, 0.5]])
    assert DensityMatrix.from_matrix(m).r12 == pytest.approx(0.5 + 5e-15, abs=1e-16)
    with pytest.raises(InvalidStateError):
        DensityMatrix.from_matrix(np.array([[0.5, 0.4], [0.3, 0.5]]))


def test_constructor_rejects_unphysical():
    with pytest.raises(InvalidStateError):
        DensityMatrix(0.6, 0.6, 0)
    with pytest.raises(InvalidStateError):
        DensityMatrix(0.5, 0.5, 0.6)


@given(bloch_vectors())
def test_bloch_round_trip(b):
    back = to_bloch(from_bloch(b))
    np.testing.assert_allclose(back.as_array(), b.as_array(), atol=1e-12, rtol=0)


@given(bloch_vectors())
def test_from_bloch_matches_pauli_expansion(b):
    rho = from_bloch(b)
    expected = 0.5 * (np.eye(2) + b.sx * X + b.sy * Y + b.sz * Z)
    np.testing.assert_allclose(rho.matrix, expected, atol=1e-15)
    assert validate(rho).ok


@given(bloch_vectors())
def test_purity(b):
    rho = from_bloch(b)
    assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx((1 + b.norm**2) / 2, abs=1e-12)
    assert rho.purity == pytest.approx((1 + b.norm**2) / 2, abs=1e-12)


@given(bloch_vectors())
def test_json_round_trip_is_exact(b):
    rho = from_bloch(b)
    back = DensityMatrix.from_json(rho.to_json())
    assert back == rho
    assert set(json.loads(rho.to_json())) == {"r11", "r22", "r12_re", "r12_im"}


def test_plus_state_json():
    assert json.loads(PLUS.to_json()) == {"r11": 0.5, "r22": 0.5, "r12_re": 0.5, "r12_im": 0.0}
