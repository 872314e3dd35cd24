"""Harvested DC power of a chaos-shift-keying wireless power link.

Closed-form evaluation over a two-ray Nakagami-m block-fading channel
(exact expression, its zero-delay-spread limit, and the flat-fading
baseline), cross-validated against chip-level Monte-Carlo simulation.
"""

from ._version import __version__
from .analytics import (CoeffMoments, coeff_cross_sq, coeff_moments, cur_coeff_4th,
                        cur_coeff_sq, flat_fading_power, negligible_delay_power,
                        prev_coeff_4th, prev_coeff_sq, two_ray_power,
                        two_ray_power_exact, two_ray_power_from_moments)
from .channel import (ChannelParams, FadeRealization, SystemConfig, apply_two_ray,
                      draw_fade, pathloss_scales)
from .chaos import (ChaosGenerator, chebyshev_next, chebyshev_step, generate_chips,
                    sample_invariant)
from .montecarlo import (CHIP_MODE, MOMENT_MODE, SWEEP_AXES, McConfig, McResult,
                         SweepRow, run_mc, sweep, trial_sum, with_axis_value)
from .receiver import (CorrelatorOutput, PowerEstimate, correlate, harvested_power,
                       rectenna_instantaneous)
from .specfun import NakagamiSpec, gamma_ratio, log_gamma, nakagami_moment, sample_nakagami
from .waveform import (CLASSIC_DCSK, WPT_OPTIMAL, ChipFrame, WaveformSpec,
                       build_classic_frame, build_frame, build_wpt_optimal_frame,
                       delayed_view, dump_frame)

__all__ = [
    "__version__",
    # specfun
    "NakagamiSpec", "log_gamma", "gamma_ratio", "nakagami_moment", "sample_nakagami",
    # chaos
    "ChaosGenerator", "chebyshev_next", "chebyshev_step", "sample_invariant",
    "generate_chips",
    # waveform
    "CLASSIC_DCSK", "WPT_OPTIMAL", "WaveformSpec", "ChipFrame",
    "build_classic_frame", "build_wpt_optimal_frame", "build_frame",
    "delayed_view", "dump_frame",
    # channel
    "SystemConfig", "ChannelParams", "FadeRealization", "pathloss_scales",
    "draw_fade", "apply_two_ray",
    # receiver
    "CorrelatorOutput", "PowerEstimate", "correlate", "harvested_power",
    "rectenna_instantaneous",
    # analytics
    "CoeffMoments", "prev_coeff_sq", "cur_coeff_sq", "prev_coeff_4th",
    "cur_coeff_4th", "coeff_cross_sq", "coeff_moments", "two_ray_power",
    "two_ray_power_from_moments", "two_ray_power_exact",
    "negligible_delay_power", "flat_fading_power",
    # montecarlo
    "CHIP_MODE", "MOMENT_MODE", "SWEEP_AXES", "McConfig", "McResult", "SweepRow",
    "run_mc", "sweep", "trial_sum", "with_axis_value",
]
