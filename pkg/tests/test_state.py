import itertools

import numpy as np
import pytest

from conftest import random_antisymmetric, random_bits
from gaussbasis import oracle
from gaussbasis.exceptions import SingularBlock, StructureError, ZeroAmplitudeBase
from gaussbasis.pfaffian import pfaffinho
from gaussbasis.state import (
    GaussianState,
    GenericGaussianExponent,
    amplitude_z,
    format_bits,
    from_generic,
    parse_bits,
    rebase,
    sign_cfg,
)


def test_parse_and_format_bits():
    assert parse_bits("0110").tolist() == [0, 1, 1, 0]
    assert format_bits([1, 0, 1]) == "101"
    with pytest.raises(ValueError):
        parse_bits("012")
    with pytest.raises(ValueError):
        parse_bits("01", L=3)


def test_sign_cfg_examples():
    assert sign_cfg("10", "01") == -1
    assert sign_cfg("00", "11") == 1
    assert sign_cfg("101000", "011000") == -1


def test_state_rejects_non_antisymmetric():
    with pytest.raises(StructureError):
        GaussianState(np.ones((3, 3)))


def test_state_is_read_only(rng):
    s = GaussianState(random_antisymmetric(rng, 4))
    with pytest.raises(ValueError):
        s.R[0, 1] = 5.0
    with pytest.raises(AttributeError):
        s.R = np.zeros((4, 4))


def test_zero_matrix_is_base_configuration():
    s = GaussianState(np.zeros((3, 3)), "101")
    v = oracle.dense_from_gaussian(s, method="pfaffian").amplitudes
    expected = np.zeros(8)
    expected[0b101] = 1.0
    assert np.allclose(v, expected)


def test_l4_expansion_entries(rng):
    R = random_antisymmetric(rng, 4)
    s = GaussianState(R)
    N = s.norm
    r = lambda i, j: R[i - 1, j - 1]
    pf = R[0, 1] * R[2, 3] - R[0, 2] * R[1, 3] + R[0, 3] * R[1, 2]
    table = {
        "0000": 1,
        "1100": r(1, 2),
        "1010": r(1, 3),
        "1001": r(1, 4),
        "0110": r(2, 3),
        "0101": r(2, 4),
        "0011": r(3, 4),
        "1111": pf,
    }
    for cfg, value in table.items():
        assert amplitude_z(s, cfg) == pytest.approx(value / N, abs=1e-14)
    assert amplitude_z(s, "1000") == 0


@pytest.mark.parametrize("L", [3, 5, 6])
def test_amplitudes_match_fock_oracle(rng, L):
    s = GaussianState(random_antisymmetric(rng, L), random_bits(rng, L))
    dense = oracle.dense_from_gaussian(s).amplitudes
    ours = oracle.dense_from_gaussian(s, method="pfaffian").amplitudes
    k = np.argmax(np.abs(dense))
    assert np.abs(ours - dense * ours[k] / dense[k]).max() < 1e-12
    assert np.linalg.norm(ours) == pytest.approx(1.0, abs=1e-12)


def test_large_chain_norm_is_finite(rng):
    s = GaussianState(random_antisymmetric(rng, 300, scale=3.0))
    assert np.isfinite(s.log_norm)


def test_json_round_trip(rng):
    s = GaussianState(random_antisymmetric(rng, 4), "0110")
    t = GaussianState.from_json(s.to_json())
    assert np.array_equal(t.R, s.R)
    assert np.array_equal(t.base, s.base)


@pytest.mark.parametrize(
    "payload",
    [
        {"L": 2},
        {"L": 3, "R": [[[0, 0], [1, 0]], [[-1, 0], [0, 0]]]},
        {"L": 2, "R": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]},
        {"L": 2, "R": "x"},
    ],
)
def test_from_dict_malformed(payload):
    with pytest.raises(StructureError):
        GaussianState.from_dict(payload)


def test_rebase_two_site_example(rng):
    R = random_antisymmetric(rng, 6)
    s = GaussianState(R, "101000")
    t = rebase(s, "011101")
    # r'_12 = -r_46 / pf R_1246 (1-based labels)
    expected = -R[3, 5] / pfaffinho(R, [0, 1, 3, 5])
    assert t.R[0, 1] == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("L", [4, 5, 6])
def test_rebase_preserves_state(rng, L):
    s = GaussianState(random_antisymmetric(rng, L), random_bits(rng, L))
    target = None
    for bits in itertools.product([0, 1], repeat=L):
        if abs(amplitude_z(s, bits)) > 0.05 and any(b != c for b, c in zip(bits, s.base)):
            target = bits
            break
    t = rebase(s, target)
    a = oracle.dense_from_gaussian(s, method="pfaffian").amplitudes
    b = oracle.dense_from_gaussian(t, method="pfaffian").amplitudes
    assert abs(abs(np.vdot(a, b)) - 1) < 1e-10


def test_rebase_to_zero_amplitude_raises():
    s = GaussianState(np.zeros((4, 4)))
    with pytest.raises(ZeroAmplitudeBase):
        rebase(s, "1100")


def J(L):
    Z, I = np.zeros((L, L)), np.eye(L)
    return np.block([[Z, I], [I, Z]])


def test_generic_exponent_validation(rng):
    with pytest.raises(StructureError):
        GenericGaussianExponent(rng.normal(size=(4, 4)))
    with pytest.raises(StructureError):
        GenericGaussianExponent(np.zeros((3, 3)))


@pytest.mark.parametrize("L", [2, 3, 4])
def test_from_generic_matches_dense_exponential(rng, L):
    M = J(L) @ random_antisymmetric(rng, 2 * L, scale=0.5)
    base = random_bits(rng, L)
    state = from_generic(GenericGaussianExponent(M, base))
    ours = oracle.dense_from_gaussian(state)
    ref = oracle.dense_from_generic(M, base)
    assert ours.overlap(ref) > 1 - 1e-10


def test_from_generic_without_quadratic_term():
    L = 2
    g = GenericGaussianExponent(np.zeros((2 * L, 2 * L)), "10")
    s = from_generic(g)
    assert np.allclose(s.R, 0)
    assert s.base.tolist() == [1, 0]


def test_from_generic_singular_block():
    # exp of the number-conserving hopping c_1^† c_2 - c_2^† c_1 at angle π/2
    # moves the particle away from site 1 completely
    L = 2
    h = np.array([[0, 1.0], [-1.0, 0]]) * np.pi / 2
    M = np.block([[h, np.zeros((L, L))], [np.zeros((L, L)), -h.T]])
    with pytest.raises(SingularBlock):
        from_generic(GenericGaussianExponent(M, "10"))
