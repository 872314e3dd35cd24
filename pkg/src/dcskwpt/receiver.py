"""Windowed chip-sum correlator and the truncated-Taylor harvester model.

The rectifier output is quadratic plus quartic in its input, so the average
harvested power is a function of the second and fourth moments of the
correlator chip sum only.  Moments, not per-trial powers, are therefore the
interface between the estimators (closed-form or Monte-Carlo) and the power
functional here.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

__all__ = [
    "CorrelatorOutput",
    "PowerEstimate",
    "correlate",
    "harvested_power",
    "rectenna_instantaneous",
]

# m4 >= m2^2 (Jensen) is checked with this much relative slack, enough for a
# deterministic chip sum whose floating m4 can round a hair under m2^2.
_JENSEN_RTOL = 1e-12


@dataclass(frozen=True)
class CorrelatorOutput:
    """Sum of the received chips over one correlator window."""

    chip_sum: float


def correlate(received, psi: int, saturation_threshold: float | None = None) -> CorrelatorOutput:
    """Sum the first ``psi`` received chips.

    ``psi = 1`` is the correlator-less baseline.  An optional threshold on
    |chip sum| flags inputs large enough to push a real rectifier diode into
    saturation, where the quartic model stops being valid; the check is off
    by default because no universal numeric bound exists.
    """
    arr = np.asarray(received, dtype=float)
    if isinstance(psi, bool) or not isinstance(psi, (int, np.integer)) or psi < 1:
        raise ValueError(f"correlator length psi must be a positive integer, got {psi!r}")
    if arr.ndim != 1:
        raise ValueError("received chips must be a flat sequence")
    if arr.size < psi:
        raise ValueError(f"correlator window psi={psi} exceeds the {arr.size}-chip sequence")
    s = float(arr[:psi].sum())
    if saturation_threshold is not None and abs(s) > saturation_threshold:
        warnings.warn(
            f"correlator output {s:.6g} exceeds the saturation threshold "
            f"{saturation_threshold:.6g}; the quartic harvester model is not valid there",
            RuntimeWarning,
            stacklevel=2,
        )
    return CorrelatorOutput(chip_sum=s)


@dataclass(frozen=True)
class PowerEstimate:
    """Harvested power in watts with its quadratic/quartic decomposition.

    For closed-form values the standard errors are 0 and ``trials`` is 0;
    Monte-Carlo estimates carry the moment standard errors and trial count.
    """

    total: float
    linear_term: float
    nonlinear_term: float
    m2: float
    m4: float
    stderr2: float = 0.0
    stderr4: float = 0.0
    trials: int = 0

    def __post_init__(self) -> None:
        for name in ("total", "linear_term", "nonlinear_term", "m2", "m4", "stderr2", "stderr4"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite real, got {value!r}")
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value!r}")
        if self.trials < 0:
            raise ValueError(f"trials must be non-negative, got {self.trials!r}")


def harvested_power(m2: float, m4: float, eps1: float, eps2: float,
                    stderr2: float = 0.0, stderr4: float = 0.0,
                    trials: int = 0) -> PowerEstimate:
    """Assemble the power estimate eps1 * m2 + eps2 * m4 from chip-sum moments.

    Raises if m4 < m2^2: no random chip sum can violate Jensen, so such
    inputs signal a broken estimator upstream.
    """
    for name, value in (("m2", m2), ("m4", m4), ("eps1", eps1), ("eps2", eps2)):
        if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value)):
            raise ValueError(f"{name} must be a finite real, got {value!r}")
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value!r}")
    if m4 < m2 * m2 * (1.0 - _JENSEN_RTOL):
        raise ValueError(f"m4={m4!r} < m2^2={m2 * m2!r}: moment pair violates Jensen")
    linear = eps1 * m2
    nonlinear = eps2 * m4
    return PowerEstimate(total=linear + nonlinear, linear_term=linear,
                         nonlinear_term=nonlinear, m2=float(m2), m4=float(m4),
                         stderr2=float(stderr2), stderr4=float(stderr4),
                         trials=int(trials))


def rectenna_instantaneous(y_rms2: float, y_rms4: float, k2: float, k4: float,
                           r_ant: float) -> float:
    """Correlator-free rectifier model: k2 * R * E|y|^2 + k4 * R^2 * E|y|^4.

    ``k4 = 0`` degenerates to the conventional linear harvester model.
    Provided for completeness and psi = 1 cross-checks; the windowed power
    path goes through ``harvested_power``.
    """
    for name, value in (("y_rms2", y_rms2), ("y_rms4", y_rms4), ("k2", k2), ("k4", k4)):
        if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value)):
            raise ValueError(f"{name} must be a finite real, got {value!r}")
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value!r}")
    if not (isinstance(r_ant, (int, float, np.floating)) and math.isfinite(r_ant) and r_ant > 0):
        raise ValueError(f"antenna resistance must be positive, got {r_ant!r}")
    return k2 * r_ant * y_rms2 + k4 * r_ant ** 2 * y_rms4
