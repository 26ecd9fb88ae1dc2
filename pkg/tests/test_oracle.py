import math

import numpy as np
import pytest

from conftest import random_antisymmetric
from gaussbasis import oracle
from gaussbasis.exceptions import SizeLimit
from gaussbasis.state import GaussianState
from gaussbasis.tfi import TFIModel, tfi_R


def test_configuration_order():
    cfgs = oracle.configurations(3)
    assert cfgs[1].tolist() == [0, 0, 1]
    assert cfgs[4].tolist() == [1, 0, 0]
    assert oracle.config_index([1, 0, 1]) == 5


def test_annihilators_anticommute():
    c = oracle.annihilators(3)
    for i in range(3):
        for j in range(3):
            anti = (c[i] @ c[j].T + c[j].T @ c[i]).toarray()
            assert np.allclose(anti, np.eye(8) * (i == j))
            assert np.allclose((c[i] @ c[j] + c[j] @ c[i]).toarray(), 0)


def test_rotation_is_unitary():
    rng = np.random.default_rng(1)
    v = rng.normal(size=2**5) + 1j * rng.normal(size=2**5)
    w = oracle.rotate(v, 0.8, 0.3)
    assert np.linalg.norm(w) == pytest.approx(np.linalg.norm(v))


def test_rotation_round_trip_l10():
    rng = np.random.default_rng(2)
    v = rng.normal(size=2**10) + 1j * rng.normal(size=2**10)
    back = oracle.rotate(oracle.rotate(v, 1.1, 0.4), 1.1, 0.4, inverse=True)
    assert np.abs(back - v).max() < 1e-12


def test_rotation_of_vacuum_has_uniform_modulus():
    v = np.zeros(2**3)
    v[0] = 1
    w = oracle.rotate(v, 0.5)
    assert np.allclose(np.abs(w), 2**-1.5)


def test_size_limits():
    with pytest.raises(SizeLimit):
        oracle.dense_from_gaussian(GaussianState(np.zeros((16, 16))))
    with pytest.raises(SizeLimit):
        oracle.tfi_exact_ground_state(TFIModel(14))


def test_fock_and_pfaffian_methods_agree(rng):
    s = GaussianState(random_antisymmetric(rng, 5), "01001")
    a = oracle.dense_from_gaussian(s, method="fock")
    b = oracle.dense_from_gaussian(s, method="pfaffian")
    assert a.overlap(b) == pytest.approx(1.0, abs=1e-12)


def test_two_site_ground_state_energy():
    # the two-site ring carries its bond twice
    H = oracle.tfi_hamiltonian(2, "periodic").toarray()
    assert np.allclose(H, H.T)
    assert np.linalg.eigvalsh(H)[0] == pytest.approx(-math.sqrt(2))


def test_ground_state_is_normalized():
    v = oracle.tfi_exact_ground_state(TFIModel(10, "open"))
    assert np.linalg.norm(v.amplitudes) == pytest.approx(1.0)
    k = np.argmax(np.abs(v.amplitudes))
    assert v.amplitudes[k].real > 0 and abs(v.amplitudes[k].imag) < 1e-14


@pytest.mark.parametrize("boundary", ["periodic", "open"])
def test_two_site_ground_state_matches_closed_form(boundary):
    model = TFIModel(2, boundary)
    ours = oracle.dense_from_gaussian(tfi_R(model))
    assert ours.overlap(oracle.tfi_exact_ground_state(model)) == pytest.approx(1.0, abs=1e-12)
