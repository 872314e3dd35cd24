"""Monte-Carlo estimation of the correlator chip-sum moments.

Two estimators share one accumulation scheme:

chip mode     Builds two consecutive symbols through the actual chaotic map,
              applies the two-ray channel chip by chip (the first symbol is
              warm-up history for the delayed ray) and sums the second
              symbol's window.  Works for both waveform kinds and any
              correlator length up to the symbol length.

moment mode   Draws the window-sum decomposition directly: independent
              stationary reference chips for the two symbols plus the two
              coefficient variables.  Only defined for the wpt-optimal
              waveform with a full-symbol correlator, where that
              decomposition holds.

Per trial: fresh fade pair, fresh bits (uniform +-1), fresh reference chips.
Trials are split into fixed-size chunks; chunk i consumes the counter-based
stream Philox(seed) jumped i blocks ahead, and partial sums are reduced in
chunk order.  Results are therefore a pure function of (seed, trials, chunk,
parameters), independent of worker count and scheduling.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .analytics import negligible_delay_power, two_ray_power
from .channel import ChannelParams, SystemConfig, apply_two_ray, draw_fade, pathloss_scales
from .chaos import ChaosGenerator, chebyshev_step, sample_invariant
from .receiver import PowerEstimate, correlate, harvested_power
from .specfun import NakagamiSpec, sample_nakagami
from .waveform import CLASSIC_DCSK, WPT_OPTIMAL, WaveformSpec, build_frame

__all__ = [
    "CHIP_MODE",
    "MOMENT_MODE",
    "SWEEP_AXES",
    "McConfig",
    "McResult",
    "SweepRow",
    "run_mc",
    "sweep",
    "trial_sum",
    "with_axis_value",
]

CHIP_MODE = "chip"
MOMENT_MODE = "moment"
SWEEP_AXES = ("beta", "tau", "omega_ratio", "m")


@dataclass(frozen=True)
class McConfig:
    """Estimator settings: trial count, mode, base seed, chunking, workers."""

    trials: int
    mode: str = CHIP_MODE
    seed: int = 0
    chunk: int = 100_000
    workers: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)) \
                or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        if self.mode not in (CHIP_MODE, MOMENT_MODE):
            raise ValueError(f"mode must be '{CHIP_MODE}' or '{MOMENT_MODE}', got {self.mode!r}")
        if not isinstance(self.seed, (int, np.integer)) or not 0 <= self.seed < 2 ** 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if isinstance(self.chunk, bool) or not isinstance(self.chunk, (int, np.integer)) \
                or self.chunk < 1:
            raise ValueError(f"chunk must be a positive integer, got {self.chunk!r}")
        if isinstance(self.workers, bool) or not isinstance(self.workers, (int, np.integer)) \
                or self.workers < 1:
            raise ValueError(f"workers must be a positive integer, got {self.workers!r}")


@dataclass(frozen=True)
class McResult:
    """Sample moments of the window chip sum with their standard errors.

    ``power`` carries the harvested-power assembly of the moment estimates;
    ``se_power`` is its standard error including the covariance between the
    second- and fourth-moment estimators.
    """

    m2_hat: float
    m4_hat: float
    se2: float
    se4: float
    power: PowerEstimate
    se_power: float
    trials: int


def _chunk_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-based substream for one chunk; scheduling-independent."""
    return np.random.Generator(np.random.Philox(key=seed).jumped(index))


def _validate_compat(params: ChannelParams, spec: WaveformSpec, mode: str) -> None:
    if params.tau > spec.symbol_len - 1:
        raise ValueError(
            f"chip delay tau={params.tau} exceeds symbol_len - 1 = {spec.symbol_len - 1}")
    if spec.psi > spec.symbol_len:
        raise ValueError(
            f"correlator window psi={spec.psi} exceeds the symbol length {spec.symbol_len}")
    if mode == MOMENT_MODE:
        if spec.kind != WPT_OPTIMAL:
            raise ValueError("moment mode requires the wpt-optimal waveform")
        if spec.psi != spec.symbol_len:
            raise ValueError(
                f"moment mode requires a full-symbol correlator (psi = {spec.symbol_len})")


def _chip_window_sums(d_prev, d_cur, x0, alpha1, alpha2,
                      spec: WaveformSpec, tau: int) -> np.ndarray:
    """Vectorized two-symbol chip pipeline: one window chip sum per trial.

    Builds the full two-symbol chip matrix through the map, forms the
    tau-shifted stream by slicing the same matrix, weights the rays and sums
    the first psi chips of the second symbol's window.
    """
    n = d_prev.shape[0]
    L = spec.symbol_len
    chips = np.empty((n, 2 * L))
    if spec.kind == WPT_OPTIMAL:
        x1 = chebyshev_step(x0, spec.degree)
        x2 = chebyshev_step(x1, spec.degree)
        chips[:, 0] = x1
        chips[:, 1:L] = (d_prev * x1)[:, None]
        chips[:, L] = x2
        chips[:, L + 1:] = (d_cur * x2)[:, None]
    else:
        x = x0
        for j in range(spec.beta):
            x = chebyshev_step(x, spec.degree)
            chips[:, j] = x
        chips[:, spec.beta:L] = d_prev[:, None] * chips[:, :spec.beta]
        for j in range(spec.beta):
            x = chebyshev_step(x, spec.degree)
            chips[:, L + j] = x
        chips[:, L + spec.beta:] = d_cur[:, None] * chips[:, L:L + spec.beta]
    window = chips[:, L:]
    delayed = chips[:, L - tau:2 * L - tau]
    received = alpha1[:, None] * window + alpha2[:, None] * delayed
    return received[:, :spec.psi].sum(axis=1)


def _moment_window_sums(d_prev, d_cur, x_prev, x_cur, alpha1, alpha2,
                        beta: int, tau: int) -> np.ndarray:
    """Direct draw of the window-sum decomposition (wpt-optimal only)."""
    c_prev = tau * alpha2 * d_prev
    c_cur = alpha1 * (1.0 + beta * d_cur) + alpha2 * (1.0 + (beta - tau) * d_cur)
    return c_prev * x_prev + c_cur * x_cur


def _chunk_sums(params: ChannelParams, spec: WaveformSpec, mode: str,
                seed: int, index: int, n: int) -> tuple[float, float, float, float]:
    """Partial sums of S^2, S^4, S^6, S^8 for one chunk of n trials.

    Fixed per-chunk draw order: previous bit, current bit, reference chip
    state(s), then the two ray amplitudes.
    """
    rng = _chunk_stream(seed, index)
    d_prev = rng.integers(0, 2, n) * 2.0 - 1.0
    d_cur = rng.integers(0, 2, n) * 2.0 - 1.0
    if mode == CHIP_MODE:
        x0 = sample_invariant(rng, n)
    else:
        x_prev = sample_invariant(rng, n)
        x_cur = sample_invariant(rng, n)
    alpha1 = sample_nakagami(NakagamiSpec(params.m, params.omega1), rng, n)
    if params.omega2 > 0.0:
        alpha2 = sample_nakagami(NakagamiSpec(params.m, params.omega2), rng, n)
    else:
        alpha2 = np.zeros(n)
    if mode == CHIP_MODE:
        s = _chip_window_sums(d_prev, d_cur, x0, alpha1, alpha2, spec, params.tau)
    else:
        s = _moment_window_sums(d_prev, d_cur, x_prev, x_cur, alpha1, alpha2,
                                spec.beta, params.tau)
    q = s * s
    q2 = q * q
    return (float(q.sum()), float(q2.sum()), float((q2 * q).sum()), float((q2 * q2).sum()))


def run_mc(system: SystemConfig, params: ChannelParams, spec: WaveformSpec,
           mc: McConfig) -> McResult:
    """Estimate the chip-sum moments and harvested power over mc.trials trials."""
    _validate_compat(params, spec, mc.mode)
    eps1, eps2 = pathloss_scales(system)

    sizes = [mc.chunk] * (mc.trials // mc.chunk)
    if mc.trials % mc.chunk:
        sizes.append(mc.trials % mc.chunk)
    jobs = list(enumerate(sizes))

    def work(job):
        index, n = job
        return _chunk_sums(params, spec, mc.mode, mc.seed, index, n)

    if mc.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=mc.workers) as pool:
            partials = list(pool.map(work, jobs))
    else:
        partials = [work(job) for job in jobs]

    # Reduce in chunk order: bit-identical results for any worker count.
    s2 = s4 = s6 = s8 = 0.0
    for p2, p4, p6, p8 in partials:
        s2 += p2
        s4 += p4
        s6 += p6
        s8 += p8

    n = mc.trials
    m2 = s2 / n
    m4 = s4 / n
    m6 = s6 / n
    m8 = s8 / n
    var2 = max(m4 - m2 * m2, 0.0)
    var4 = max(m8 - m4 * m4, 0.0)
    cov24 = m6 - m2 * m4
    se2 = math.sqrt(var2 / n)
    se4 = math.sqrt(var4 / n)
    var_power = max(eps1 ** 2 * var2 + 2.0 * eps1 * eps2 * cov24 + eps2 ** 2 * var4, 0.0)
    power = harvested_power(m2=m2, m4=m4, eps1=eps1, eps2=eps2,
                            stderr2=se2, stderr4=se4, trials=n)
    return McResult(m2_hat=m2, m4_hat=m4, se2=se2, se4=se4, power=power,
                    se_power=math.sqrt(var_power / n), trials=n)


def trial_sum(params: ChannelParams, spec: WaveformSpec, rng: np.random.Generator) -> float:
    """One trial through the object-level pipeline (slow reference path).

    Draws in the same order as the vectorized chip kernel (previous bit,
    current bit, map state, ray amplitudes), so a single-trial run_mc in chip
    mode reproduces this value exactly from the same stream.
    """
    d_prev = int(rng.integers(0, 2)) * 2 - 1
    d_cur = int(rng.integers(0, 2)) * 2 - 1
    gen = ChaosGenerator.from_invariant(rng, spec.degree)
    frame = build_frame(spec, [d_prev, d_cur], gen)
    fade = draw_fade(params, rng)
    received = apply_two_ray(frame, fade, params, symbol_index=2)
    return correlate(received, spec.psi).chip_sum


@dataclass(frozen=True)
class SweepRow:
    """One sweep point: parameters, closed forms and estimate, or an error."""

    axis: str
    value: float
    params: ChannelParams | None = None
    spec: WaveformSpec | None = None
    closed_form: PowerEstimate | None = None
    small_delay: PowerEstimate | None = None
    mc: McResult | None = None
    error: str | None = None


def with_axis_value(axis: str, value, params: ChannelParams,
                    spec: WaveformSpec) -> tuple[ChannelParams, WaveformSpec]:
    """Rebuild (params, spec) with one sweep axis set to ``value``.

    ``omega_ratio`` r maps to the normalized split omega2 = r / (1 + r),
    omega1 = 1 - omega2.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")
    if axis == "beta":
        return params, replace(spec, beta=int(value))
    if axis == "tau":
        return replace(params, tau=int(value)), spec
    if axis == "m":
        return replace(params, m=float(value)), spec
    ratio = float(value)
    if not (math.isfinite(ratio) and ratio >= 0.0):
        raise ValueError(f"omega_ratio must be finite and >= 0, got {value!r}")
    omega2 = ratio / (1.0 + ratio)
    return replace(params, omega1=1.0 - omega2, omega2=omega2), spec


def _closed_forms(system, params, spec):
    """Closed-form totals where they apply: wpt-optimal with a full-symbol window."""
    if spec.kind != WPT_OPTIMAL or spec.psi != spec.symbol_len:
        return None, None
    return (two_ray_power(system, params, spec.beta),
            negligible_delay_power(system, params, spec.beta))


def sweep(axis: str, values, system: SystemConfig, params: ChannelParams,
          spec: WaveformSpec, mc: McConfig) -> list[SweepRow]:
    """Run closed form and Monte-Carlo side by side along one parameter axis.

    A value that violates a parameter invariant produces an error row and
    the sweep continues.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}, expected one of {SWEEP_AXES}")
    rows = []
    for value in values:
        try:
            p, s = with_axis_value(axis, value, params, spec)
            closed, small = _closed_forms(system, p, s)
            result = run_mc(system, p, s, mc)
            rows.append(SweepRow(axis=axis, value=float(value), params=p, spec=s,
                                 closed_form=closed, small_delay=small, mc=result))
        except (ValueError, TypeError) as exc:
            rows.append(SweepRow(axis=axis, value=float(value), error=str(exc)))
    return rows
