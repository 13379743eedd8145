# cccp/services/concatenator.py
# SPDX-License-Identifier: Apache-2.0
"""
Concatenated composite pulses (CCCPs) and their reduced forms.

A CCCP replaces every elementary pulse (θ_i, φ_i) of an *outer* composite
pulse by an *inner* composite pulse built for (θ_i, φ_i). The outer pulse
cancels one error type; the inner pulse cancels the other and leaves a
residual of the same form as an elementary pulse (REP), which the outer
structure then cancels. The pairing is checked when the recipe is used.

Reduced CCCPs keep some outer pulses elementary. Those are trivial
subsequences that already cancel the error the inner pulse would have
handled. They are emitted from closed forms (`reduced_cinsk`, `reduced_cinbb`,
`reduced_skinsc`) and can be rebuilt through `concatenate` with a skip rule
(`reduced_via_concatenation`); both routes yield the same pulse list.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Final

import structlog

from cccp.core.constants import MERGE_PHI_TOL, ROBUST_TOL, TWO_PI
from cccp.core.errors import InvalidParameterError, RecipeInvalidError

from .analysis import Rep, classify_rep
from .error_models import ErrorAxis, first_order_errors
from .pulse_library import (
    bb1,
    bb1_phase,
    corpse,
    corpse_k,
    scrofulous,
    short_corpse,
    sk1,
)
from .su2_core import PulseSequence, RotationParams, angles_equal

__all__ = [
    "CCCP_NAMES",
    "REDUCED_NAMES",
    "Builder",
    "CccpRecipe",
    "SkipRule",
    "concatenate",
    "make_recipe",
    "merge_same_axis",
    "modified_short_corpse",
    "named_cccp",
    "reduced_cinbb",
    "reduced_cinsk",
    "reduced_skinsc",
    "reduced_via_concatenation",
    "skip_full_rotations",
    "skip_nothing",
    "skip_trivial_pairs",
    "skip_trivial_triples",
]

log = structlog.get_logger(__name__)

Builder = Callable[[RotationParams], PulseSequence]
#: Maps the outer pulse list to the indices kept elementary.
SkipRule = Callable[[Sequence[RotationParams]], frozenset[int]]

#: Angle equality used by the structural skip rules.
PATTERN_TOL: Final[float] = 1e-12


# =============================================================================
# Skip rules (structural matches on the trivial forms)
# =============================================================================


def skip_nothing(pulses: Sequence[RotationParams]) -> frozenset[int]:
    return frozenset()


def skip_full_rotations(pulses: Sequence[RotationParams]) -> frozenset[int]:
    """Every R(2π, φ): already robust against ORE."""
    return frozenset(
        i for i, p in enumerate(pulses) if abs(p.theta - TWO_PI) <= PATTERN_TOL
    )


def skip_trivial_triples(pulses: Sequence[RotationParams]) -> frozenset[int]:
    """Non-overlapping runs R(π, φ') R(2π, φ) R(π, φ'): robust against ORE."""
    out: set[int] = set()
    i = 0
    while i + 2 < len(pulses):
        a, b, c = pulses[i], pulses[i + 1], pulses[i + 2]
        if (
            abs(a.theta - math.pi) <= PATTERN_TOL
            and abs(b.theta - TWO_PI) <= PATTERN_TOL
            and abs(c.theta - math.pi) <= PATTERN_TOL
            and angles_equal(a.phi, c.phi, PATTERN_TOL)
        ):
            out.update((i, i + 1, i + 2))
            i += 3
        else:
            i += 1
    return frozenset(out)


def skip_trivial_pairs(pulses: Sequence[RotationParams]) -> frozenset[int]:
    """Non-overlapping runs R(θ, φ+π) R(θ, φ): robust against PLE."""
    out: set[int] = set()
    i = 0
    while i + 1 < len(pulses):
        a, b = pulses[i], pulses[i + 1]
        if abs(a.theta - b.theta) <= PATTERN_TOL and angles_equal(
            a.phi, b.phi + math.pi, PATTERN_TOL
        ):
            out.update((i, i + 1))
            i += 2
        else:
            i += 1
    return frozenset(out)


# =============================================================================
# Recipes
# =============================================================================


@dataclass(frozen=True)
class CccpRecipe:
    """Outer builder, inner builder and the outer pulses left elementary."""

    name: str
    outer: Builder
    inner: Builder
    skip_rule: SkipRule = skip_nothing


def make_recipe(
    outer: Builder,
    inner: Builder,
    skip_rule: SkipRule = skip_nothing,
    *,
    name: str = "",
) -> CccpRecipe:
    """Recipe over any builder pair; the name defaults to "<inner> in <outer>"."""
    if not name:
        inner_name = getattr(inner, "__name__", "inner")
        outer_name = getattr(outer, "__name__", "outer")
        name = f"{inner_name} in {outer_name}"
    return CccpRecipe(name, outer, inner, skip_rule)


def _outer_axis(outer: PulseSequence, tol: float) -> ErrorAxis:
    errs = first_order_errors(outer)
    ple, ore = errs.eps_norm <= tol, errs.f_norm <= tol
    if ple and not ore:
        return ErrorAxis.PLE
    if ore and not ple:
        return ErrorAxis.ORE
    raise RecipeInvalidError(
        "outer",
        f"{outer.label or 'outer pulse'} must be robust against exactly one error "
        f"(eps norm {errs.eps_norm:.3g}, f norm {errs.f_norm:.3g})",
    )


def _check_inner(
    recipe: CccpRecipe, target: RotationParams, axis: ErrorAxis, tol: float
) -> None:
    inner = recipe.inner(target)
    need = Rep.PLE if axis is ErrorAxis.PLE else Rep.ORE
    got = classify_rep(inner, tol=tol)
    if got.rep is not need:
        raise RecipeInvalidError(
            axis.value.upper(),
            f"{recipe.name}: outer is robust against {axis.value.upper()} so the "
            f"inner pulse must be REP with respect to {need.value.upper()}; "
            f"{inner.label or 'inner'} is {got.rep.value.upper()}",
        )


def concatenate(
    recipe: CccpRecipe, target: RotationParams, *, tol: float = ROBUST_TOL
) -> PulseSequence:
    """
    Replace each non-skipped outer pulse (θ_i, φ_i) by inner(θ_i, φ_i).

    Raises:
        RecipeInvalidError: the inner pulse is not REP on the axis the outer
            pulse is robust against.
        DomainError: a builder formula is out of range for some pulse.
    """
    outer = recipe.outer(target)
    axis = _outer_axis(outer, tol)
    _check_inner(recipe, target, axis, tol)

    skipped = recipe.skip_rule(outer.pulses)
    pulses: list[RotationParams] = []
    for i, p in enumerate(outer.pulses):
        if i in skipped:
            pulses.append(p)
        else:
            pulses.extend(recipe.inner(p).pulses)

    seq = PulseSequence(
        tuple(pulses),
        target,
        label=recipe.name,
        builder=recipe.name,
        parameters={"theta": target.theta, "phi": target.phi},
    )
    log.debug(
        "cccp.concatenated",
        name=recipe.name,
        outer=len(outer),
        skipped=len(skipped),
        pulses=len(seq),
    )
    return seq


# Outer pulse first, inner second, matching the "inner in outer" names.
_RECIPES: Final[dict[str, CccpRecipe]] = {
    "CinS": CccpRecipe("CinS", scrofulous, corpse),
    "CinSK": CccpRecipe("CinSK", sk1, corpse),
    "CinBB": CccpRecipe("CinBB", bb1, corpse),
    "SKinsC": CccpRecipe("SKinsC", short_corpse, sk1),
    "BBinsC": CccpRecipe("BBinsC", short_corpse, bb1),
}

CCCP_NAMES: Final[tuple[str, ...]] = tuple(_RECIPES)


def named_cccp(name: str, target: RotationParams) -> PulseSequence:
    """
    Build one of CinS, CinSK, CinBB, SKinsC, BBinsC.

    Raises:
        InvalidParameterError: unknown name.
    """
    try:
        recipe = _RECIPES[name]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown CCCP {name!r}; expected one of {', '.join(CCCP_NAMES)}"
        ) from None
    return concatenate(recipe, target)


# =============================================================================
# Reduced CCCPs (closed forms)
# =============================================================================


def _seq(
    pulses: list[tuple[float, float]], target: RotationParams, label: str, builder: str
) -> PulseSequence:
    return PulseSequence(
        tuple(RotationParams(t, p) for t, p in pulses),
        target,
        label=label,
        builder=builder,
        parameters={"theta": target.theta, "phi": target.phi},
    )


def reduced_cinsk(target: RotationParams) -> PulseSequence:
    """
    CORPSE(θ, φ) followed by 2π(φ - s) 2π(φ + s), s = arccos[-θ/(4π)].

    SK1's two full rotations stay elementary; N = 5.
    """
    theta, phi = target.theta, target.phi
    s = bb1_phase(theta)
    head = [(p.theta, p.phi) for p in corpse(target).pulses]
    return _seq(
        head + [(TWO_PI, phi - s), (TWO_PI, phi + s)],
        target,
        "reduced CinSK",
        "reduced-cinsk",
    )


def reduced_cinbb(target: RotationParams) -> PulseSequence:
    """
    BB1's trivial triple π(φ1) 2π(φ2) π(φ1) kept elementary, then CORPSE(θ, φ).

    φ1 = φ + arccos[-θ/(4π)], φ2 = 3φ1 - 2φ; N = 6.
    """
    phi = target.phi
    phi1 = phi + bb1_phase(target.theta)
    phi2 = 3.0 * phi1 - 2.0 * phi
    tail = [(p.theta, p.phi) for p in corpse(target).pulses]
    return _seq(
        [(math.pi, phi1), (TWO_PI, phi2), (math.pi, phi1)] + tail,
        target,
        "reduced CinBB",
        "reduced-cinbb",
    )


def modified_short_corpse(target: RotationParams) -> PulseSequence:
    """
    Short CORPSE with its outer pulses split off into two trivial pairs:

        θ1(φ) θ1(φ̄) (2π-θ)(φ̄) θ1(φ̄) θ1(φ),  θ1 = θ/2 - k,  φ̄ = φ + π.

    Same-axis neighbours compose exactly, so the product (with or without
    errors) equals the short CORPSE product.
    """
    theta, phi = target.theta, target.phi
    bar = phi + math.pi
    t1 = theta / 2.0 - corpse_k(theta)
    return _seq(
        [(t1, phi), (t1, bar), (TWO_PI - theta, bar), (t1, bar), (t1, phi)],
        target,
        "modified short CORPSE",
        "modified-short-corpse",
    )


def reduced_skinsc(target: RotationParams) -> PulseSequence:
    """
    SK1 applied only to the middle pulse R(2π-θ, φ̄) of the modified short
    CORPSE, then same-axis neighbours merged; N = 6:

        θ1(φ) (2π-θ/2-k)(φ̄) 2π(φ̄-s') 2π(φ̄+s') θ1(φ̄) θ1(φ)

    with θ1 = θ/2 - k and s' = arccos[-(2π-θ)/(4π)]. The SK1 correction pair
    is phased about φ̄ for the rotation it corrects; phasing it about φ with
    arccos[-θ/(4π)] leaves a first-order PLE residual of -π n(φ)·σ.
    """
    theta, phi = target.theta, target.phi
    bar = phi + math.pi
    k = corpse_k(theta)
    t1 = theta / 2.0 - k
    s = bb1_phase(TWO_PI - theta)
    return _seq(
        [
            (t1, phi),
            (TWO_PI - theta / 2.0 - k, bar),
            (TWO_PI, bar - s),
            (TWO_PI, bar + s),
            (t1, bar),
            (t1, phi),
        ],
        target,
        "reduced SKinsC",
        "reduced-skinsc",
    )


def merge_same_axis(seq: PulseSequence, *, tol: float = MERGE_PHI_TOL) -> PulseSequence:
    """
    Merge adjacent pulses whose φ agree modulo 2π (within `tol`) by adding
    their angles. Pulses about one axis share one generator under both
    errors, so the erroneous propagator is unchanged exactly.
    """
    merged: list[RotationParams] = []
    for p in seq.pulses:
        if merged and angles_equal(merged[-1].phi, p.phi, tol):
            last = merged.pop()
            merged.append(RotationParams(last.theta + p.theta, last.phi))
        else:
            merged.append(p)
    return seq.with_pulses(merged)


# =============================================================================
# Cross-check path
# =============================================================================

_REDUCED_RECIPES: Final[dict[str, CccpRecipe]] = {
    "reduced CinSK": CccpRecipe("reduced CinSK", sk1, corpse, skip_full_rotations),
    "reduced CinBB": CccpRecipe("reduced CinBB", bb1, corpse, skip_trivial_triples),
    "reduced SKinsC": CccpRecipe(
        "reduced SKinsC", modified_short_corpse, sk1, skip_trivial_pairs
    ),
}

REDUCED_NAMES: Final[tuple[str, ...]] = tuple(_REDUCED_RECIPES)


def reduced_via_concatenation(name: str, target: RotationParams) -> PulseSequence:
    """
    Rebuild a reduced CCCP with `concatenate` and its skip rule.

    Only reduced SKinsC is merged afterwards; the other two have no
    same-axis neighbours.
    """
    try:
        recipe = _REDUCED_RECIPES[name]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown reduced CCCP {name!r}; expected one of {', '.join(REDUCED_NAMES)}"
        ) from None
    seq = concatenate(recipe, target)
    if recipe.skip_rule is skip_trivial_pairs:
        seq = merge_same_axis(seq)
    return seq
