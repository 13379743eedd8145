# tests/test_pulse_library.py
from __future__ import annotations

import math

import pytest

from cccp.core.errors import DegenerateTargetError, DomainError
from cccp.services.pulse_library import (
    CorpseWindings,
    arcsinc,
    bb1,
    bb1_phase,
    corpse,
    corpse_k,
    elementary,
    full_rotation,
    scrofulous,
    short_corpse,
    sk1,
    trivial_pair,
    trivial_triple,
)
from cccp.services.su2_core import RotationParams, fidelity, is_trivial

STANDARD_THETAS = (math.pi / 6, math.pi / 2, math.pi, 3 * math.pi / 2)
STANDARD_PHIS = (0.0, math.pi / 4)
ALL_ANGLE_BUILDERS = (elementary, bb1, sk1, corpse, short_corpse)


def _angles(seq):
    return [p.theta for p in seq.pulses]


def _phis(seq):
    return [p.phi for p in seq.pulses]


# ---------------------------------------------------------------------------
# arcsinc
# ---------------------------------------------------------------------------


def test_arcsinc_endpoints():
    assert arcsinc(1.0) == 0.0
    assert arcsinc(0.0) == math.pi


@pytest.mark.parametrize("y", [0.05, 0.3, 2 / math.pi, 0.9, 0.999])
def test_arcsinc_inverts_sinc(y):
    x = arcsinc(y)
    assert 0.0 < x < math.pi
    assert math.sin(x) / x == pytest.approx(y, abs=1e-11)


@pytest.mark.parametrize("y", [-0.01, 1.01, float("nan")])
def test_arcsinc_outside_branch_raises(y):
    with pytest.raises(DomainError):
        arcsinc(y)


# ---------------------------------------------------------------------------
# Every builder hits its target
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("builder", ALL_ANGLE_BUILDERS)
@pytest.mark.parametrize("theta", STANDARD_THETAS)
@pytest.mark.parametrize("phi", STANDARD_PHIS)
def test_builders_reach_their_target(builder, theta, phi):
    seq = builder(RotationParams(theta, phi))
    assert fidelity(seq.product(), seq.target_unitary()) >= 1 - 1e-10
    assert seq.product().unitarity_error() <= 1e-12
    assert seq.parameters["theta"] == theta
    assert seq.parameters["phi"] == phi


@pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 2, 2 * math.pi / 3, math.pi])
def test_scrofulous_reaches_its_target(theta):
    seq = scrofulous(RotationParams(theta, 0.3))
    assert len(seq) == 3
    assert fidelity(seq.product(), seq.target_unitary()) >= 1 - 1e-10


def test_first_pulse_of_the_list_is_applied_first():
    seq = sk1(RotationParams(math.pi / 2, 0.0))
    assert seq.pulses[0] == RotationParams(math.pi / 2, 0.0)


# ---------------------------------------------------------------------------
# Closed-form values
# ---------------------------------------------------------------------------


def test_bb1_phases_at_pi():
    seq = bb1(RotationParams(math.pi, 0.0))
    phi1 = math.acos(-0.25)
    assert _angles(seq) == pytest.approx([math.pi, 2 * math.pi, math.pi, math.pi])
    assert _phis(seq) == pytest.approx([phi1, 3 * phi1, phi1, 0.0])


def test_sk1_phases_are_symmetric_about_the_target_axis():
    phi = 0.4
    seq = sk1(RotationParams(math.pi / 2, phi))
    s = math.acos(-1 / 8)
    assert _phis(seq) == pytest.approx([phi, phi - s, phi + s])
    assert sum(_angles(seq)) / math.pi == pytest.approx(4.5)


def test_bb1_outside_four_pi_raises():
    with pytest.raises(DomainError, match="arccos"):
        bb1(RotationParams(4.5 * math.pi, 0.0))
    assert bb1_phase(4 * math.pi) == pytest.approx(math.pi)


def test_scrofulous_at_pi():
    seq = scrofulous(RotationParams(math.pi, 0.0))
    assert _angles(seq) == pytest.approx([math.pi] * 3)
    assert _phis(seq) == pytest.approx([math.pi / 3, -math.pi / 3, math.pi / 3])


def test_scrofulous_at_half_pi():
    seq = scrofulous(RotationParams(math.pi / 2, 0.0))
    theta1 = seq.pulses[0].theta
    assert math.sin(theta1) / theta1 == pytest.approx(
        2 * math.cos(math.pi / 4) / math.pi, abs=1e-12
    )
    assert theta1 == pytest.approx(2.0103, abs=1e-4)
    assert seq.pulses[1].theta == math.pi
    assert seq.pulses[2] == seq.pulses[0]
    assert sum(_angles(seq)) / math.pi == pytest.approx(2.28, abs=0.01)


def test_scrofulous_beyond_pi_is_outside_its_domain():
    with pytest.raises(DomainError, match="arcsinc"):
        scrofulous(RotationParams(1.5 * math.pi, 0.0))


def test_scrofulous_zero_angle_is_degenerate():
    with pytest.raises(DegenerateTargetError):
        scrofulous(RotationParams(0.0, 0.0))


def test_corpse_angles_at_pi():
    k = corpse_k(math.pi)
    assert k == pytest.approx(math.pi / 6)
    seq = corpse(RotationParams(math.pi, 0.0))
    assert _angles(seq) == pytest.approx([7 * math.pi / 3, 5 * math.pi / 3, math.pi / 3])
    assert _phis(seq) == pytest.approx([0.0, math.pi, 0.0])
    assert seq.label == "CORPSE"
    assert seq.parameters["n1"] == 1


def test_short_corpse_angles_at_pi():
    seq = short_corpse(RotationParams(math.pi, 0.0))
    assert _angles(seq) == pytest.approx([math.pi / 3, 5 * math.pi / 3, math.pi / 3])
    assert seq.label == "short CORPSE"
    assert seq.builder == "short-corpse"


def test_custom_windings_are_recorded():
    seq = corpse(RotationParams(math.pi / 2, 0.0), CorpseWindings(2, 1, 1))
    assert seq.parameters["n1"] == 2
    assert seq.parameters["n3"] == 1
    assert fidelity(seq.product(), seq.target_unitary()) >= 1 - 1e-10


def test_negative_windings_raise():
    with pytest.raises(DomainError, match="windings"):
        corpse(RotationParams(math.pi, 0.0), CorpseWindings(0, 0, 0))


# ---------------------------------------------------------------------------
# Trivial sequences
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "seq",
    [
        trivial_pair(1.3, 0.2),
        trivial_pair(math.pi, 2.0),
        full_rotation(0.7),
        trivial_triple(0.1, 2.5),
        trivial_triple(1.0, 1.0),
    ],
    ids=lambda s: s.label,
)
def test_trivial_sequences_are_identity(seq):
    assert is_trivial(seq.product())
    assert seq.target.theta == 0.0


def test_trivial_pair_order():
    seq = trivial_pair(1.0, 0.5)
    assert _phis(seq) == pytest.approx([0.5 + math.pi, 0.5])
