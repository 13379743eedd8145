# cccp/core/constants.py
# SPDX-License-Identifier: Apache-2.0
"""
Numerical constants and default tolerances.

This module centralizes:
  1) **Pauli matrices** as read-only complex128 arrays.
  2) **Default tolerances** used as keyword defaults by the services. The
     `Settings` dataclass starts from the same values, so a CLI run with no
     configuration behaves exactly like a library call with no arguments.

Constants are typed `Final` to communicate immutability and to help static
analyzers catch accidental reassignment.
"""

from __future__ import annotations

import math
from typing import Final

import numpy as np
from numpy.typing import NDArray


def _frozen(rows: list[list[complex]]) -> NDArray[np.complex128]:
    arr = np.array(rows, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


# ---------------------------------------------------------------------------
# Pauli algebra
# ---------------------------------------------------------------------------

I2: Final = _frozen([[1, 0], [0, 1]])
SX: Final = _frozen([[0, 1], [1, 0]])
SY: Final = _frozen([[0, -1j], [1j, 0]])
SZ: Final = _frozen([[1, 0], [0, -1]])

TWO_PI: Final[float] = 2.0 * math.pi

# ---------------------------------------------------------------------------
# Tolerances
# ---------------------------------------------------------------------------

#: Max entry deviation of U†U from I accepted after a composition chain.
UNITARITY_TOL: Final[float] = 1e-12

#: Max-entry norm of a first-order error operator that still counts as zero.
ROBUST_TOL: Final[float] = 1e-6

#: 1 - |tr U|/2 under which U is the identity up to global phase.
TRIVIAL_TOL: Final[float] = 1e-6

#: Zero-error fidelity floor for every library-built sequence.
FIDELITY_TOL: Final[float] = 1e-10

#: Base step h of the central differences; Richardson combines h and h/2.
DERIVATIVE_STEP: Final[float] = 1e-4

#: arcsinc bisection stops once the bracket is narrower than this.
ARCSINC_TOL: Final[float] = 1e-12

#: Two azimuthal angles are merged when equal modulo 2π within this.
MERGE_PHI_TOL: Final[float] = 1e-12

#: Infidelities at or below this are indistinguishable from rounding noise.
INFIDELITY_FLOOR: Final[float] = 1e-13

#: Rotation angles closer than this to zero are skipped by the no-go scan.
DEGENERATE_ANGLE: Final[float] = 1e-9

# ---------------------------------------------------------------------------
# Grid defaults
# ---------------------------------------------------------------------------

FIDMAP_WINDOW: Final[float] = 0.2
FIDMAP_RESOLUTION: Final[int] = 101
NOGO_RESOLUTION: Final[int] = 32
FIT_LOW: Final[float] = 1e-3
FIT_HIGH: Final[float] = 1e-1
FIT_SAMPLES: Final[int] = 20
