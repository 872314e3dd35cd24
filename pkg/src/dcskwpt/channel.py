"""Two-ray Nakagami-m block-fading channel with large-scale pathloss.

The received chip stream is ``alpha1 * s[k] + alpha2 * s[k - tau]``: a direct
ray plus a chip-delayed ray, with independent Nakagami amplitudes whose mean
power gains split the normalized channel energy (omega1 + omega2 = 1).  The
fade pair is held constant across one correlator window and redrawn between
windows.

Deterministic link-budget scaling never touches the chip domain; it is folded
into the two scale factors returned by ``pathloss_scales`` so that chip-level
simulation stays unit-amplitude and nothing is double counted.
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import NakagamiSpec, sample_nakagami
from .waveform import ChipFrame, delayed_view

__all__ = [
    "SystemConfig",
    "ChannelParams",
    "FadeRealization",
    "pathloss_scales",
    "draw_fade",
    "apply_two_ray",
]

_OMEGA_SUM_TOL = 1e-12


def _positive(name: str, value) -> None:
    if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a finite positive real, got {value!r}")


@dataclass(frozen=True)
class SystemConfig:
    """Link budget and rectifier constants.

    Defaults: 1 W transmit power (30 dBm), 20 m range, pathloss exponent 4,
    and the quadratic/quartic rectifier coefficients k2 = 0.0034,
    k4 = 0.3829 with a 50 ohm antenna.
    """

    pt_w: float = 1.0
    distance_m: float = 20.0
    pathloss_exp: float = 4.0
    k2: float = 0.0034
    k4: float = 0.3829
    r_ant_ohm: float = 50.0

    def __post_init__(self) -> None:
        _positive("transmit power pt_w", self.pt_w)
        _positive("distance_m", self.distance_m)
        _positive("pathloss_exp", self.pathloss_exp)
        _positive("rectifier coefficient k2", self.k2)
        _positive("rectifier coefficient k4", self.k4)
        _positive("antenna resistance r_ant_ohm", self.r_ant_ohm)

    @classmethod
    def from_dbm(cls, pt_dbm: float = 30.0, **kwargs) -> "SystemConfig":
        return cls(pt_w=10.0 ** (pt_dbm / 10.0) / 1000.0, **kwargs)


def pathloss_scales(config: SystemConfig) -> tuple[float, float]:
    """The two deterministic scale factors applied to the chip-sum moments.

    eps1 = r^-a  * k2 * R_ant   * Pt    multiplies the second moment,
    eps2 = r^-2a * k4 * R_ant^2 * Pt^2  multiplies the fourth moment.
    """
    r = config.distance_m
    a = config.pathloss_exp
    eps1 = r ** -a * config.k2 * config.r_ant_ohm * config.pt_w
    eps2 = r ** (-2.0 * a) * config.k4 * config.r_ant_ohm ** 2 * config.pt_w ** 2
    return eps1, eps2


@dataclass(frozen=True)
class ChannelParams:
    """Two-ray power-delay profile: fading figure, power split, chip delay.

    The practical regime keeps the direct ray at least as strong as the
    delayed one (omega1 >= omega2 >= 0) and the gains normalized to
    omega1 + omega2 = 1.
    """

    m: float
    omega1: float
    omega2: float
    tau: int = 0

    def __post_init__(self) -> None:
        if not (isinstance(self.m, (int, float, np.floating)) and math.isfinite(self.m)):
            raise ValueError(f"fading figure m must be a finite real, got {self.m!r}")
        if self.m < 0.5:
            raise ValueError(f"fading figure m must be >= 0.5, got {self.m!r}")
        for name, value in (("omega1", self.omega1), ("omega2", self.omega2)):
            if not (isinstance(value, (int, float, np.floating)) and math.isfinite(value)):
                raise ValueError(f"{name} must be a finite real, got {value!r}")
        if self.omega2 < 0.0 or self.omega1 < self.omega2:
            raise ValueError(
                f"power gains must satisfy omega1 >= omega2 >= 0, got "
                f"({self.omega1!r}, {self.omega2!r})")
        if abs(self.omega1 + self.omega2 - 1.0) > _OMEGA_SUM_TOL:
            raise ValueError(
                f"power gains must sum to 1 within {_OMEGA_SUM_TOL}, got "
                f"{self.omega1!r} + {self.omega2!r} = {self.omega1 + self.omega2!r}")
        if isinstance(self.tau, bool) or not isinstance(self.tau, (int, np.integer)):
            raise ValueError(f"chip delay tau must be an integer, got {self.tau!r}")
        if self.tau < 0:
            raise ValueError(f"chip delay tau must be >= 0, got {self.tau!r}")


@dataclass(frozen=True)
class FadeRealization:
    """One block-fading draw: non-negative amplitudes of the two rays."""

    alpha1: object  # float or ndarray
    alpha2: object

    def __post_init__(self) -> None:
        if np.any(np.asarray(self.alpha1) < 0) or np.any(np.asarray(self.alpha2) < 0):
            raise ValueError("fade amplitudes must be non-negative")


def draw_fade(params: ChannelParams, rng: np.random.Generator, size=None) -> FadeRealization:
    """Draw independent ray amplitudes; a zero-power ray is exactly zero.

    With ``size=None`` the fields are floats; otherwise arrays, which is the
    fast path for vectorized estimators.
    """
    alpha1 = sample_nakagami(NakagamiSpec(params.m, params.omega1), rng, size)
    if params.omega2 > 0.0:
        alpha2 = sample_nakagami(NakagamiSpec(params.m, params.omega2), rng, size)
    else:
        alpha2 = 0.0 if size is None else np.zeros(size)
    return FadeRealization(alpha1=alpha1, alpha2=alpha2)


def apply_two_ray(frame: ChipFrame, fade: FadeRealization, params: ChannelParams,
                  symbol_index: int) -> np.ndarray:
    """Received chips over one symbol window: alpha1 * own + alpha2 * delayed.

    The fade is held constant across the window and the predecessor tail the
    delayed ray reads (block fading).  Needs symbol_index >= 2 so the delayed
    ray has history.
    """
    own = frame.symbol(symbol_index)
    delayed = delayed_view(frame, params.tau, symbol_index)
    return fade.alpha1 * own + fade.alpha2 * delayed
