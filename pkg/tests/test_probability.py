import itertools
import math

import numpy as np
import pytest

from conftest import random_antisymmetric, random_bits, random_signs
from gaussbasis import oracle
from gaussbasis.basis import dual_matrix, phi_twist
from gaussbasis.correlators import correlations
from gaussbasis.exceptions import NotRealMatrix, StructureError
from gaussbasis.probability import (
    nlp_x,
    nlp_y,
    nlp_z,
    prob_phi,
    prob_x,
    prob_y,
    prob_z,
    prob_z_real,
    rtilde_phi_cot,
)
from gaussbasis.state import GaussianState


def dense_probs(state, phi=None):
    v = oracle.dense_from_gaussian(state).amplitudes
    if phi is not None:
        v = oracle.rotate(v, phi)
    return np.abs(v) ** 2


@pytest.mark.parametrize("L", [3, 4, 6])
def test_occupation_probabilities(rng, L):
    s = GaussianState(random_antisymmetric(rng, L), random_bits(rng, L))
    ref = dense_probs(s)
    ours = np.array([prob_z(s, bits) for bits in oracle.configurations(L)])
    assert np.abs(ours - ref).max() < 1e-12


@pytest.mark.parametrize("L", [3, 4, 6])
def test_real_determinant_paths(rng, L):
    s = GaussianState(random_antisymmetric(rng, L, complex_=False))
    pz, px, py = dense_probs(s), dense_probs(s, 0.0), dense_probs(s, math.pi / 2)
    for i, bits in enumerate(oracle.configurations(L)):
        signs = 1 - 2 * bits
        assert prob_z_real(s, bits) == pytest.approx(pz[i], abs=1e-12)
        assert prob_x(s, signs) == pytest.approx(px[i], abs=1e-12)
        assert prob_y(s, signs) == pytest.approx(py[i], abs=1e-12)


@pytest.mark.parametrize("phi", [0.0, 0.4, 1.3, math.pi / 2])
def test_general_phi_probabilities(rng, phi):
    L = 5
    s = GaussianState(random_antisymmetric(rng, L), random_bits(rng, L))
    ref = dense_probs(s, phi)
    for i, bits in enumerate(oracle.configurations(L)):
        assert prob_phi(s, 1 - 2 * bits, phi) == pytest.approx(ref[i], abs=1e-12)


def test_real_paths_reject_complex(rng):
    s = GaussianState(random_antisymmetric(rng, 4))
    for f, cfg in ((prob_z_real, "0000"), (prob_x, "++++"), (prob_y, "++++")):
        with pytest.raises(NotRealMatrix):
            f(s, cfg)


def test_real_paths_need_empty_base(rng):
    s = GaussianState(random_antisymmetric(rng, 4, complex_=False), "0100")
    with pytest.raises(StructureError):
        prob_x(s, "++++")


def test_determinant_paths_do_not_invert(rng, monkeypatch):
    L = 8
    G = correlations(random_antisymmetric(rng, L, complex_=False)).G.real
    expected = (nlp_z(G, random_bits(rng, L)), nlp_x(G, "+" * L), nlp_y(G, "+-" * 4))

    def forbidden(*args, **kwargs):
        raise AssertionError("matrix inversion in a per-configuration evaluation")

    for name in ("inv", "solve", "pinv", "lstsq"):
        monkeypatch.setattr(np.linalg, name, forbidden)
    bits = random_bits(np.random.default_rng(20240601), L)
    nlp_z(G, bits)
    nlp_x(G, "+" * L)
    assert nlp_y(G, "+-" * 4) == expected[2]


def test_log_paths_survive_underflow():
    L = 400
    R = np.zeros((L, L))
    R[np.arange(0, L, 2), np.arange(1, L, 2)] = 30.0
    R = R - R.T
    G = correlations(R).G.real
    value = nlp_z(G, "0" * L)
    # each decoupled pair has weight 1/(1 + r^2) on the empty configuration
    assert value == pytest.approx(L / 2 * math.log1p(900.0), rel=1e-10)


@pytest.mark.parametrize("phi", [0.4, 1.0, 2.5])
def test_cot_form_agrees_with_direct_dual(rng, phi):
    R = random_antisymmetric(rng, 6)
    direct = dual_matrix(phi_twist(R, "000000", phi)).Rtilde
    assert np.abs(rtilde_phi_cot(R, phi) - direct).max() < 1e-10


def test_cot_form_undefined_at_zero(rng):
    with pytest.raises(ValueError):
        rtilde_phi_cot(random_antisymmetric(rng, 4), 0.0)


def test_probability_sums(rng):
    L = 6
    s = GaussianState(random_antisymmetric(rng, L, complex_=False))
    total = sum(prob_x(s, S) for S in itertools.product([1, -1], repeat=L))
    assert total == pytest.approx(1.0, abs=1e-12)
    S = random_signs(rng, L)
    assert prob_phi(s, S, 0.0) == pytest.approx(prob_x(s, S), abs=1e-12)
