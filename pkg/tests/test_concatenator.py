# tests/test_concatenator.py
from __future__ import annotations

import math

import pytest

from cccp.core.errors import DomainError, InvalidParameterError, RecipeInvalidError
from cccp.services.concatenator import (
    CCCP_NAMES,
    REDUCED_NAMES,
    concatenate,
    make_recipe,
    merge_same_axis,
    modified_short_corpse,
    named_cccp,
    reduced_cinbb,
    reduced_cinsk,
    reduced_skinsc,
    reduced_via_concatenation,
    skip_full_rotations,
    skip_nothing,
    skip_trivial_pairs,
    skip_trivial_triples,
)
from cccp.services.error_models import (
    ErrorAxis,
    ErrorStrengths,
    first_order_errors,
    is_robust,
    sequence_with_errors,
)
from cccp.services.pulse_library import (
    bb1,
    corpse,
    elementary,
    scrofulous,
    short_corpse,
    sk1,
)
from cccp.services.su2_core import PulseSequence, RotationParams, fidelity

PULSE_COUNTS = {"CinS": 9, "CinSK": 9, "CinBB": 12, "SKinsC": 9, "BBinsC": 12}
REDUCED_COUNTS = {"reduced CinSK": 5, "reduced CinBB": 6, "reduced SKinsC": 6}
REDUCED_BUILDERS = {
    "reduced CinSK": reduced_cinsk,
    "reduced CinBB": reduced_cinbb,
    "reduced SKinsC": reduced_skinsc,
}


def _flat(seq: PulseSequence) -> list[float]:
    return [x for p in seq.pulses for x in (p.theta, math.remainder(p.phi, 2 * math.pi))]


def _targets(name: str) -> list[RotationParams]:
    # SCROFULOUS, the outer pulse of CinS, is only defined up to θ = π.
    thetas = [math.pi / 4, math.pi / 2, math.pi]
    if name != "CinS":
        thetas.append(3 * math.pi / 2)
    return [RotationParams(t, phi) for t in thetas for phi in (0.0, 1.1)]


# ---------------------------------------------------------------------------
# Named CCCPs
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", CCCP_NAMES)
def test_named_cccps_are_robust_against_both_errors(name):
    for target in _targets(name):
        seq = named_cccp(name, target)
        assert len(seq) == PULSE_COUNTS[name]
        assert fidelity(seq.product(), seq.target_unitary()) >= 1 - 1e-10
        errs = first_order_errors(seq)
        assert errs.eps_norm <= 1e-6, (name, target)
        assert errs.f_norm <= 1e-6, (name, target)


def test_cins_inherits_the_scrofulous_domain():
    with pytest.raises(DomainError):
        named_cccp("CinS", RotationParams(1.5 * math.pi, 0.0))


def test_unknown_cccp_name():
    with pytest.raises(InvalidParameterError, match="Unknown CCCP"):
        named_cccp("CinX", RotationParams(1.0, 0.0))


def test_cinsk_replaces_every_sk1_pulse_with_corpse():
    seq = named_cccp("CinSK", RotationParams(math.pi, 0.0))
    head = corpse(RotationParams(math.pi, 0.0))
    assert seq.pulses[:3] == head.pulses
    # CORPSE of a full turn: k = 0, so the angles are 3π, 2π, π.
    for block in (seq.pulses[3:6], seq.pulses[6:9]):
        assert [p.theta / math.pi for p in block] == pytest.approx([3.0, 2.0, 1.0])
    assert seq.label == "CinSK"


def test_make_recipe_matches_the_named_recipe():
    target = RotationParams(math.pi / 2, 0.2)
    recipe = make_recipe(bb1, corpse)
    assert recipe.name == "corpse in bb1"
    assert concatenate(recipe, target).pulses == named_cccp("CinBB", target).pulses


def test_inner_pulse_must_be_rep_on_the_outer_axis():
    # SK1 cancels PLE, so its inner pulse must leave an elementary-like PLE
    # residual; SK1 leaves an ORE residual instead.
    with pytest.raises(RecipeInvalidError) as info:
        concatenate(make_recipe(sk1, sk1), RotationParams(math.pi / 2, 0.0))
    assert info.value.axis == "PLE"
    assert info.value.exit_code == 2


def test_non_rep_inner_pulse_is_rejected():
    with pytest.raises(RecipeInvalidError):
        concatenate(make_recipe(bb1, short_corpse), RotationParams(math.pi / 2, 0.0))
    with pytest.raises(RecipeInvalidError):
        concatenate(make_recipe(corpse, scrofulous), RotationParams(math.pi / 2, 0.0))


def test_outer_pulse_must_be_robust_against_exactly_one_error():
    with pytest.raises(RecipeInvalidError) as info:
        concatenate(make_recipe(elementary, corpse), RotationParams(math.pi / 2, 0.0))
    assert info.value.axis == "outer"


# ---------------------------------------------------------------------------
# Skip rules
# ---------------------------------------------------------------------------


def test_skip_rules_find_the_trivial_subsequences():
    target = RotationParams(math.pi / 2, 0.3)
    assert skip_nothing(sk1(target).pulses) == frozenset()
    assert skip_full_rotations(sk1(target).pulses) == {1, 2}
    assert skip_trivial_triples(bb1(target).pulses) == {0, 1, 2}
    assert skip_trivial_pairs(modified_short_corpse(target).pulses) == {0, 1, 3, 4}


def test_skip_trivial_pairs_does_not_overlap():
    pulses = [RotationParams(1.0, 0.0), RotationParams(1.0, math.pi)] * 2
    assert skip_trivial_pairs(pulses) == {0, 1, 2, 3}
    assert skip_trivial_pairs(pulses[:3]) == {0, 1}


# ---------------------------------------------------------------------------
# Reduced CCCPs
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", REDUCED_NAMES)
@pytest.mark.parametrize("theta", [math.pi / 4, math.pi / 2, math.pi, 1.5 * math.pi])
def test_reduced_cccps_are_robust_and_short(name, theta):
    target = RotationParams(theta, 0.4)
    seq = REDUCED_BUILDERS[name](target)
    assert len(seq) == REDUCED_COUNTS[name]
    assert seq.label == name
    assert fidelity(seq.product(), seq.target_unitary()) >= 1 - 1e-10
    assert is_robust(seq, ErrorAxis.PLE)
    assert is_robust(seq, ErrorAxis.ORE)


@pytest.mark.parametrize("name", REDUCED_NAMES)
@pytest.mark.parametrize("theta", [math.pi / 3, math.pi / 2, math.pi])
def test_closed_forms_match_concatenation_with_skip_rules(name, theta):
    target = RotationParams(theta, 0.9)
    closed = REDUCED_BUILDERS[name](target)
    rebuilt = reduced_via_concatenation(name, target)
    assert len(rebuilt) == len(closed)
    assert _flat(rebuilt) == pytest.approx(_flat(closed), abs=1e-12)


def test_unknown_reduced_name():
    with pytest.raises(InvalidParameterError):
        reduced_via_concatenation("reduced CinS", RotationParams(1.0, 0.0))


def test_reduced_skinsc_uses_the_corrected_correction_phases():
    theta, phi = math.pi / 2, 0.0
    seq = reduced_skinsc(RotationParams(theta, phi))
    s = math.acos(-(2 * math.pi - theta) / (4 * math.pi))
    bar = phi + math.pi
    assert seq.pulses[2].phi == pytest.approx(bar - s)
    assert seq.pulses[3].phi == pytest.approx(bar + s)


def test_modified_short_corpse_matches_short_corpse_under_errors(rng):
    target = RotationParams(2.0, 0.5)
    split = modified_short_corpse(target)
    plain = short_corpse(target)
    assert len(split) == 5
    for eps, f in rng.uniform(-0.3, 0.3, size=(5, 2)):
        e = ErrorStrengths(float(eps), float(f))
        assert sequence_with_errors(split, e).allclose(
            sequence_with_errors(plain, e), atol=1e-12
        )


# ---------------------------------------------------------------------------
# Same-axis merging
# ---------------------------------------------------------------------------


def test_merge_same_axis_adds_angles_modulo_two_pi():
    seq = PulseSequence(
        (
            RotationParams(0.3, 0.1),
            RotationParams(0.5, 0.1 + 2 * math.pi),
            RotationParams(0.2, 1.0),
            RotationParams(0.4, 1.0),
            RotationParams(0.7, 2.0),
        ),
        RotationParams(0.0, 0.0),
        label="demo",
    )
    merged = merge_same_axis(seq)
    assert [p.theta for p in merged.pulses] == pytest.approx([0.8, 0.6, 0.7])
    assert merged.label == "demo"


def test_merge_same_axis_is_exact_under_errors(rng):
    seq = PulseSequence(
        (
            RotationParams(1.0, 0.3),
            RotationParams(2.5, 0.3),
            RotationParams(0.7, 1.9),
            RotationParams(0.4, 1.9 - 2 * math.pi),
        ),
        RotationParams(0.0, 0.0),
    )
    merged = merge_same_axis(seq)
    assert len(merged) == 2
    for eps, f in rng.uniform(-0.5, 0.5, size=(10, 2)):
        e = ErrorStrengths(float(eps), float(f))
        assert sequence_with_errors(merged, e).allclose(
            sequence_with_errors(seq, e), atol=1e-12
        )


def test_merge_leaves_distinct_axes_alone():
    seq = named_cccp("BBinsC", RotationParams(math.pi / 2, 0.0))
    merged = merge_same_axis(seq)
    assert len(merged) <= len(seq)
    assert fidelity(merged.product(), seq.product()) >= 1 - 1e-12
