import math

import numpy as np
import pytest
from scipy.linalg import expm

from sunmesh import (
    FormatError,
    ValidationError,
    as_complex_matrix,
    expm_skew_hermitian,
    is_unitary,
    matrix_from_json,
    matrix_to_json,
    project_to_su,
    random_unitary_qr,
)


def test_as_complex_matrix_coerces_lists():
    a = as_complex_matrix([[1, 2], [3, 4]])
    assert a.dtype == np.complex128
    assert a.shape == (2, 2)
    assert a[1, 0] == 3.0 + 0.0j


@pytest.mark.parametrize(
    "bad",
    [
        [[1, 2, 3], [4, 5, 6]],
        [1, 2, 3],
        np.zeros((2, 2, 2)),
        np.zeros((0, 0)),
    ],
)
def test_as_complex_matrix_rejects_bad_shapes(bad):
    with pytest.raises(ValidationError):
        as_complex_matrix(bad)


def test_is_unitary_accepts_rotation_and_rejects_scaling():
    c, s = math.cos(0.3), math.sin(0.3)
    assert is_unitary([[c, -s], [s, c]])
    assert not is_unitary([[1.0, 0.0], [0.0, 1.0 + 1e-6]])
    assert is_unitary([[1.0, 0.0], [0.0, 1.0 + 1e-6]], tol=1e-3)


def test_project_to_su_strips_global_phase():
    u = np.exp(0.7j) * np.eye(3)
    phi, msu = project_to_su(u)
    assert abs(np.linalg.det(msu) - 1.0) < 1e-12
    # exp(i*phi) per mode recovers the original matrix
    assert np.allclose(np.exp(1j * phi) * msu, u, atol=1e-12)
    assert abs(phi - 0.7) < 1e-12


def test_project_to_su_random_input():
    u = random_unitary_qr(5, seed=4)
    phi, msu = project_to_su(u)
    assert abs(np.linalg.det(msu) - 1.0) < 1e-10
    assert np.allclose(np.exp(1j * phi) * msu, u, atol=1e-12)


def test_project_to_su_rejects_nonunitary():
    with pytest.raises(ValidationError):
        project_to_su(np.diag([1.0, 2.0]))


def test_expm_skew_hermitian_matches_scipy():
    rng = np.random.default_rng(8)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a - a.conj().T
    got = expm_skew_hermitian(h)
    assert np.allclose(got, expm(h), atol=1e-12)
    assert is_unitary(got, tol=1e-12)


def test_expm_skew_hermitian_rejects_symmetric_part():
    with pytest.raises(ValidationError):
        expm_skew_hermitian(np.eye(2))


def test_random_unitary_qr_is_unitary_and_seeded():
    u = random_unitary_qr(6, seed=3)
    assert is_unitary(u, tol=1e-12)
    assert np.array_equal(u, random_unitary_qr(6, seed=3))
    assert not np.array_equal(u, random_unitary_qr(6, seed=4))


def test_random_unitary_qr_first_entry_law():
    # P(|U_11|^2 > s) = (1-s)^(n-1) implies E|U_11|^2 = 1/n.
    n, count = 4, 4000
    vals = [abs(random_unitary_qr(n, seed=s)[0, 0]) ** 2 for s in range(count)]
    mean = np.mean(vals)
    stderr = np.std(vals, ddof=1) / math.sqrt(count)
    assert abs(mean - 1.0 / n) < 4 * stderr


def test_matrix_json_roundtrip():
    u = random_unitary_qr(3, seed=11)
    doc = matrix_to_json(u)
    assert doc["n"] == 3
    assert np.array_equal(matrix_from_json(doc), u)


def test_matrix_json_roundtrip_is_exact_through_text():
    import json

    u = random_unitary_qr(4, seed=12)
    text = json.dumps(matrix_to_json(u))
    assert np.array_equal(matrix_from_json(json.loads(text)), u)


def test_matrix_from_json_ignores_extra_keys():
    doc = matrix_to_json(np.eye(2))
    doc["provenance"] = {"command": "test"}
    assert np.array_equal(matrix_from_json(doc), np.eye(2))


@pytest.mark.parametrize(
    "doc",
    [
        "not a dict",
        {"entries": [[[1, 0]]]},
        {"n": 1},
        {"n": 0, "entries": []},
        {"n": True, "entries": [[[1, 0]]]},
        {"n": 2, "entries": [[[1, 0], [0, 0]]]},
        {"n": 1, "entries": [[[1, 0], [0, 0]]]},
        {"n": 1, "entries": [[[1]]]},
        {"n": 1, "entries": [[["1", 0]]]},
        {"n": 1, "entries": [[[float("nan"), 0]]]},
        {"n": 1, "entries": [[[float("inf"), 0]]]},
    ],
)
def test_matrix_from_json_rejects_malformed(doc):
    with pytest.raises(FormatError):
        matrix_from_json(doc)
