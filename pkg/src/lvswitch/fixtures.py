"""Reference environment pairs used by the golden checks and the test suite."""
from __future__ import annotations

import math

from .envmodel import Environment, EnvironmentPair


def reference_pair(rho: float) -> EnvironmentPair:
    """Two x-favorable environments; ``rho`` shifts ``d1`` and so controls J."""
    return EnvironmentPair(Environment(1, 1, 2, 2, 1, 5), Environment(3, 3, 4, 4 + rho, 5, 1))


def intro_pair() -> EnvironmentPair:
    """A pair where fast switching reverses the outcome of either environment alone."""
    return EnvironmentPair(Environment(1, 1, 2, 2, 10, 1), Environment(0.5, 0.5, 0.65, 0.65, 1, 10))


def weight_to_s(u: float) -> float:
    """Mixing weight of the reference pair's x-equation mapped to time share ``s``."""
    return u / (5.0 * (1.0 - u) + u)


# Closed-form interval endpoints of the reference pairs.
I_ENDPOINTS = (weight_to_s(0.75 - 1 / (2 * math.sqrt(6))), weight_to_s(0.75 + 1 / (2 * math.sqrt(6))))
J_ENDPOINTS_RHO1 = (weight_to_s((71 - math.sqrt(241)) / 96), weight_to_s((71 + math.sqrt(241)) / 96))

# (rho, x-equation weight, t, expected outcome): one point per sign regime, two for persistence.
REGIME_POINTS = (
    (3.0, 0.4, 100.0, "ExtinctionY"),
    (3.0, 0.75, 12.0, "Persistence"),
    (1.0, 0.75, 10.0, "Persistence"),
    (1.0, 0.75, 100.0, "ExtinctionX"),
    (0.0, 0.75, 1 / 0.15, "ExtinctionEither"),
)
