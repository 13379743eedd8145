# cccp/services/catalog.py
# SPDX-License-Identifier: Apache-2.0
"""
Name → builder registry shared by the CLI and the acceptance suite.

CLI names are lower-case and hyphenated (``reduced-skinsc``); each entry also
carries the display label used in tables (``reduced SKinsC``).
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Final

from cccp.core.errors import InvalidParameterError

from . import concatenator as cc
from . import pulse_library as pl
from .su2_core import PulseSequence, RotationParams


@dataclass(frozen=True)
class BuildOptions:
    """Extra knobs a few builders accept; ignored by the rest."""

    windings: pl.CorpseWindings = pl.CORPSE_WINDINGS
    phi_prime: float | None = None


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    label: str
    build: Callable[[RotationParams, BuildOptions], PulseSequence]


def _cccp(name: str) -> Callable[[RotationParams, BuildOptions], PulseSequence]:
    return lambda t, _o: cc.named_cccp(name, t)


def _trivial_triple(t: RotationParams, o: BuildOptions) -> PulseSequence:
    return pl.trivial_triple(t.phi if o.phi_prime is None else o.phi_prime, t.phi)


_ENTRIES: Final[tuple[CatalogEntry, ...]] = (
    CatalogEntry("elementary", "elementary", lambda t, _o: pl.elementary(t)),
    CatalogEntry("scrofulous", "SCROFULOUS", lambda t, _o: pl.scrofulous(t)),
    CatalogEntry("sk1", "SK1", lambda t, _o: pl.sk1(t)),
    CatalogEntry("bb1", "BB1", lambda t, _o: pl.bb1(t)),
    CatalogEntry("short-corpse", "short CORPSE", lambda t, _o: pl.short_corpse(t)),
    CatalogEntry("corpse", "CORPSE", lambda t, o: pl.corpse(t, o.windings)),
    CatalogEntry("cins", "CinS", _cccp("CinS")),
    CatalogEntry("cinsk", "CinSK", _cccp("CinSK")),
    CatalogEntry("cinbb", "CinBB", _cccp("CinBB")),
    CatalogEntry("skinsc", "SKinsC", _cccp("SKinsC")),
    CatalogEntry("bbinsc", "BBinsC", _cccp("BBinsC")),
    CatalogEntry("reduced-cinsk", "reduced CinSK", lambda t, _o: cc.reduced_cinsk(t)),
    CatalogEntry("reduced-cinbb", "reduced CinBB", lambda t, _o: cc.reduced_cinbb(t)),
    CatalogEntry(
        "reduced-skinsc", "reduced SKinsC", lambda t, _o: cc.reduced_skinsc(t)
    ),
    CatalogEntry(
        "trivial-pair", "trivial pair", lambda t, _o: pl.trivial_pair(t.theta, t.phi)
    ),
    CatalogEntry(
        "full-rotation", "full rotation", lambda t, _o: pl.full_rotation(t.phi)
    ),
    CatalogEntry("trivial-triple", "trivial triple", _trivial_triple),
)

CATALOG: Final[dict[str, CatalogEntry]] = {e.name: e for e in _ENTRIES}
NAMES: Final[tuple[str, ...]] = tuple(CATALOG)

#: Rows of the time-cost table, in table order.
TIMECOST_NAMES: Final[tuple[str, ...]] = (
    "elementary",
    "scrofulous",
    "sk1",
    "bb1",
    "short-corpse",
    "corpse",
    "cins",
    "cinsk",
    "cinbb",
    "skinsc",
    "bbinsc",
    "reduced-cinsk",
    "reduced-cinbb",
    "reduced-skinsc",
)

#: CCCPs and reduced CCCPs, robust against both errors.
DOUBLY_ROBUST_NAMES: Final[tuple[str, ...]] = TIMECOST_NAMES[6:]

#: Parent CCCP of each reduced CCCP.
REDUCED_PARENTS: Final[dict[str, str]] = {
    "reduced-cinsk": "cinsk",
    "reduced-cinbb": "cinbb",
    "reduced-skinsc": "skinsc",
}


def entry(name: str) -> CatalogEntry:
    try:
        return CATALOG[name.strip().lower()]
    except KeyError:
        raise InvalidParameterError(
            f"Unknown pulse {name!r}; expected one of {', '.join(NAMES)}"
        ) from None


def build(
    name: str,
    target: RotationParams,
    options: BuildOptions | None = None,
) -> PulseSequence:
    """Build the named sequence for `target`."""
    return entry(name).build(target, options or BuildOptions())


def label(name: str) -> str:
    return entry(name).label

