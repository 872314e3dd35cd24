"""Chebyshev chaotic chip generation.

The degree-xi Chebyshev map x -> cos(xi * arccos(x)) on [-1, 1] is the chip
source for both transmit waveforms.  Long orbits distribute per the arcsine
law 1 / (pi * sqrt(1 - x^2)); that stationary law can also be sampled
directly, which is what the fast Monte-Carlo path does for per-symbol
reference chips.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChaosGenerator",
    "chebyshev_next",
    "chebyshev_step",
    "sample_invariant",
    "generate_chips",
]


@dataclass
class ChaosGenerator:
    """Mutable map state: polynomial degree and the current chip value."""

    degree: int = 2
    state: float = 0.0

    def __post_init__(self) -> None:
        if isinstance(self.degree, bool) or not isinstance(self.degree, (int, np.integer)):
            raise ValueError(f"Chebyshev degree must be an integer >= 2, got {self.degree!r}")
        if self.degree < 2:
            raise ValueError(f"Chebyshev degree must be >= 2, got {self.degree!r}")
        if not (isinstance(self.state, (int, float, np.floating)) and math.isfinite(self.state)):
            raise ValueError(f"map state must be a finite real in [-1, 1], got {self.state!r}")
        if abs(self.state) > 1.0:
            raise ValueError(f"map state must lie in [-1, 1], got {self.state!r}")

    @classmethod
    def from_invariant(cls, rng: np.random.Generator, degree: int = 2) -> "ChaosGenerator":
        """Start from a stationary draw, so orbit statistics hold from chip one."""
        return cls(degree=degree, state=float(sample_invariant(rng)))

    def burn(self, iterations: int = 64) -> "ChaosGenerator":
        """Discard iterates, e.g. to decorrelate a hand-picked start value."""
        for _ in range(iterations):
            chebyshev_next(self)
        return self


def chebyshev_next(gen: ChaosGenerator) -> float:
    """Advance the map once: returns cos(degree * arccos(state)), in [-1, 1]."""
    x = gen.state
    if not (math.isfinite(x) and abs(x) <= 1.0):
        raise ValueError(f"map state must lie in [-1, 1], got {x!r}")
    nxt = math.cos(gen.degree * math.acos(x))
    gen.state = nxt
    return nxt


def chebyshev_step(x: np.ndarray, degree: int = 2) -> np.ndarray:
    """Vectorized single map step; callers guarantee |x| <= 1 elementwise."""
    return np.cos(degree * np.arccos(x))


def sample_invariant(rng: np.random.Generator, size=None):
    """Draw from the stationary arcsine chip law as cos(pi * U), U uniform."""
    return np.cos(np.pi * rng.random(size))


def generate_chips(gen: ChaosGenerator, count: int) -> np.ndarray:
    """Emit ``count`` successive map iterates, advancing the generator state.

    A degenerate start pinned at a fixed point of the map (e.g. x = 1 for
    degree 2) still produces the constant sequence, but raises a
    RuntimeWarning because the orbit carries no chaotic spreading.
    """
    if isinstance(count, bool) or not isinstance(count, (int, np.integer)) or count < 1:
        raise ValueError(f"chip count must be a positive integer, got {count!r}")
    start = gen.state
    chips = np.empty(count, dtype=float)
    for i in range(count):
        chips[i] = chebyshev_next(gen)
    if chips[0] == start or (count >= 2 and np.all(chips == chips[0])):
        warnings.warn(
            "chaotic orbit is pinned at a fixed point of the map; emitted chips are constant",
            RuntimeWarning,
            stacklevel=2,
        )
    return chips
