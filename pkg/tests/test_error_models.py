# tests/test_error_models.py
from __future__ import annotations

import math

import numpy as np
import pytest

from cccp.core.constants import SX, SY, SZ
from cccp.core.errors import InvalidParameterError
from cccp.services.error_models import (
    ZERO_ERROR,
    ErrorAxis,
    ErrorStrengths,
    analytic_first_order_errors,
    first_order_errors,
    first_order_model,
    is_robust,
    max_norm,
    pulse_with_errors,
    sequence_with_errors,
    sequence_with_errors_batch,
)
from cccp.services.pulse_library import (
    bb1,
    corpse,
    elementary,
    full_rotation,
    sk1,
    trivial_pair,
    trivial_triple,
)
from cccp.services.su2_core import PulseSequence, RotationParams, fidelity, rotation


def _expm_hermitian(h: np.ndarray, scale: float) -> np.ndarray:
    """exp(-i·scale·h) for Hermitian h, via its eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * scale * w)) @ v.conj().T


def _random_sequence(rng: np.random.Generator, n: int) -> PulseSequence:
    pulses = tuple(
        RotationParams(float(t), float(p))
        for t, p in zip(
            rng.uniform(0, math.pi, n), rng.uniform(0, 2 * math.pi, n), strict=True
        )
    )
    return PulseSequence(pulses, RotationParams(0.0, 0.0), label="random")


def test_zero_error_propagator_is_the_ideal_rotation():
    p = RotationParams(1.3, 0.4)
    assert pulse_with_errors(p, ZERO_ERROR).allclose(rotation(p))


@pytest.mark.parametrize("eps, f", [(0.1, 0.0), (0.0, 0.2), (-0.15, 0.3), (0.05, -0.07)])
def test_closed_form_matches_matrix_exponential(eps, f):
    p = RotationParams(2.1, 0.8)
    generator = math.cos(p.phi) * SX + math.sin(p.phi) * SY + f * SZ
    expected = _expm_hermitian(generator, (1 + eps) * p.theta / 2)
    got = pulse_with_errors(p, ErrorStrengths(eps, f)).matrix
    np.testing.assert_allclose(got, expected, atol=1e-14)


def test_pulse_length_error_scales_the_angle():
    p = RotationParams(math.pi / 2, 0.3)
    got = pulse_with_errors(p, ErrorStrengths(0.2, 0.0))
    assert got.allclose(rotation(RotationParams(1.2 * p.theta, p.phi)))


def test_erroneous_pulses_stay_unitary(rng):
    for eps, f in rng.uniform(-0.5, 0.5, size=(20, 2)):
        p = RotationParams(float(rng.uniform(0, 4 * math.pi)), float(rng.uniform(0, 6)))
        assert pulse_with_errors(p, ErrorStrengths(eps, f)).unitarity_error() < 1e-13


def test_batch_propagation_matches_scalar(rng):
    seq = _random_sequence(rng, 5)
    eps = rng.uniform(-0.2, 0.2, 6)
    f = rng.uniform(-0.2, 0.2, 6)
    batch = sequence_with_errors_batch(seq, eps, f)
    for i in range(6):
        scalar = sequence_with_errors(seq, ErrorStrengths(float(eps[i]), float(f[i])))
        np.testing.assert_allclose(batch[i], scalar.matrix, atol=1e-13)


def test_corpse_beats_the_elementary_pulse_off_resonance(pi_target):
    e = ErrorStrengths(0.0, 0.1)
    want = rotation(pi_target)
    robust = fidelity(sequence_with_errors(corpse(pi_target), e), want)
    plain = fidelity(sequence_with_errors(elementary(pi_target), e), want)
    assert robust > plain


def test_error_strengths_must_be_finite():
    with pytest.raises(InvalidParameterError):
        ErrorStrengths(float("nan"), 0.0)


def test_elementary_first_order_operators():
    theta, phi = 1.7, 0.6
    target = RotationParams(theta, phi)
    errs = first_order_errors(elementary(target))
    r = rotation(target).matrix
    n_sigma = math.cos(phi) * SX + math.sin(phi) * SY
    np.testing.assert_allclose(errs.e_eps, -0.5j * theta * n_sigma @ r, atol=1e-9)
    np.testing.assert_allclose(errs.e_f, -1j * math.sin(theta / 2) * SZ, atol=1e-9)


@pytest.mark.parametrize("n", [1, 2, 3, 6])
def test_numerical_and_analytic_operators_agree(rng, n):
    seq = _random_sequence(rng, n)
    num = first_order_errors(seq)
    exact = analytic_first_order_errors(seq)
    np.testing.assert_allclose(num.e_eps, exact.e_eps, atol=1e-8)
    np.testing.assert_allclose(num.e_f, exact.e_f, atol=1e-8)


def test_first_order_operators_are_hermitian_generators(rng):
    for _ in range(20):
        seq = _random_sequence(rng, 5)
        u0 = seq.product().matrix
        errs = first_order_errors(seq)
        for e in (errs.e_eps, errs.e_f):
            h = 1j * u0.conj().T @ e
            np.testing.assert_allclose(h, h.conj().T, atol=1e-8)


def test_derivative_step_must_be_positive(pi_target):
    with pytest.raises(InvalidParameterError):
        first_order_errors(elementary(pi_target), step=0.0)


def test_full_rotation_is_robust_against_ore_only():
    errs = first_order_errors(full_rotation(0.3))
    assert errs.f_norm <= 1e-9
    assert errs.eps_norm == pytest.approx(math.pi, abs=1e-8)


def test_trivial_pair_operators():
    theta, phi = 1.1, 0.4
    errs = first_order_errors(trivial_pair(theta, phi))
    assert errs.eps_norm <= 1e-9
    expected = -2j * math.sin(theta / 2) * rotation(RotationParams(theta, phi)).matrix @ SZ
    np.testing.assert_allclose(errs.e_f, expected, atol=1e-9)


def test_trivial_triple_on_one_axis_keeps_a_pulse_length_residual():
    errs = first_order_errors(trivial_triple(0.5, 0.5))
    assert errs.f_norm <= 1e-9
    assert errs.eps_norm == pytest.approx(2 * math.pi, abs=1e-8)


def test_trivial_triple_is_ore_robust_for_any_phases():
    assert is_robust(trivial_triple(0.2, 1.9), ErrorAxis.ORE)


@pytest.mark.parametrize("builder, robust, fragile", [
    (bb1, ErrorAxis.PLE, ErrorAxis.ORE),
    (sk1, ErrorAxis.PLE, ErrorAxis.ORE),
    (corpse, ErrorAxis.ORE, ErrorAxis.PLE),
])
def test_single_error_pulses_are_robust_on_one_axis(builder, robust, fragile, half_pi_target):
    seq = builder(half_pi_target)
    assert is_robust(seq, robust)
    assert not is_robust(seq, fragile)


def test_first_order_model_tracks_the_elementary_pulse():
    target = RotationParams(math.pi / 2, 0.7)
    e = ErrorStrengths(1e-4, -2e-4)
    model = first_order_model(
        target, target.theta, math.sin(target.theta / 2), e
    )
    actual = pulse_with_errors(target, e).matrix
    assert max_norm(model - actual) < 1e-7


def test_first_order_model_accepts_matrix_coefficients():
    target = RotationParams(1.0, 0.0)
    e = ErrorStrengths(0.01, 0.02)
    scalar = first_order_model(target, 1.0, 0.5, e)
    matrix = first_order_model(target, np.eye(2), 0.5 * np.eye(2), e)
    np.testing.assert_allclose(scalar, matrix, atol=1e-15)
