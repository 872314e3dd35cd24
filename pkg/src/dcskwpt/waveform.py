"""Chip-frame construction for the two transmit waveforms.

classic-dcsk   Each symbol is beta fresh chaotic reference chips followed by
               the information bit times those same chips (2 * beta chips per
               symbol).  The receiver can decode by correlating the halves;
               here only the energy content matters.

wpt-optimal    Each symbol is one fresh reference chip followed by beta
               copies of the bit times that chip (beta + 1 chips per symbol).
               Concentrating a symbol on a single chaotic value maximizes the
               peakiness of the windowed chip sum, which the quartic term of
               the harvester rewards.

Frames are immutable after construction.  ``delayed_view`` exposes the
chip-delayed ray's version of one symbol window, reading the tail of the
previous symbol, which is why multi-symbol context exists in the first place.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .chaos import ChaosGenerator, generate_chips

__all__ = [
    "CLASSIC_DCSK",
    "WPT_OPTIMAL",
    "WAVEFORM_KINDS",
    "WaveformSpec",
    "ChipFrame",
    "build_classic_frame",
    "build_wpt_optimal_frame",
    "build_frame",
    "delayed_view",
    "dump_frame",
]

CLASSIC_DCSK = "classic-dcsk"
WPT_OPTIMAL = "wpt-optimal"
WAVEFORM_KINDS = (CLASSIC_DCSK, WPT_OPTIMAL)


@dataclass(frozen=True)
class WaveformSpec:
    """Transmit-side parameters: spreading factor, kind, map degree, correlator length.

    ``correlator_len`` (the receive window, in chips) defaults to the full
    symbol length: 2 * beta for classic frames, beta + 1 for wpt-optimal.
    """

    beta: int
    kind: str = WPT_OPTIMAL
    degree: int = 2
    correlator_len: int | None = None

    def __post_init__(self) -> None:
        if isinstance(self.beta, bool) or not isinstance(self.beta, (int, np.integer)):
            raise ValueError(f"spreading factor beta must be an integer >= 1, got {self.beta!r}")
        if self.beta < 1:
            raise ValueError(f"spreading factor beta must be >= 1, got {self.beta!r}")
        if self.kind not in WAVEFORM_KINDS:
            raise ValueError(f"waveform kind must be one of {WAVEFORM_KINDS}, got {self.kind!r}")
        if isinstance(self.degree, bool) or not isinstance(self.degree, (int, np.integer)) or self.degree < 2:
            raise ValueError(f"Chebyshev degree must be an integer >= 2, got {self.degree!r}")
        if self.correlator_len is not None:
            if (isinstance(self.correlator_len, bool)
                    or not isinstance(self.correlator_len, (int, np.integer))
                    or self.correlator_len < 1):
                raise ValueError(
                    f"correlator length must be a positive integer, got {self.correlator_len!r}")

    @property
    def symbol_len(self) -> int:
        return 2 * self.beta if self.kind == CLASSIC_DCSK else self.beta + 1

    @property
    def psi(self) -> int:
        """Effective correlator window length in chips."""
        return self.symbol_len if self.correlator_len is None else int(self.correlator_len)


@dataclass
class ChipFrame:
    """A contiguous block of transmitted chips covering whole symbols.

    chips       flat amplitude sequence, |chip| <= 1
    bits        one information bit (+1 / -1) per symbol
    symbol_len  chips per symbol
    kind        which waveform built the frame
    """

    chips: np.ndarray
    bits: np.ndarray
    symbol_len: int
    kind: str

    def __post_init__(self) -> None:
        chips = np.array(self.chips, dtype=float)
        bits = np.array(self.bits, dtype=int)
        if chips.ndim != 1 or bits.ndim != 1:
            raise ValueError("chips and bits must be one-dimensional")
        if bits.size == 0:
            raise ValueError("a frame needs at least one symbol")
        if not np.all(np.isin(bits, (-1, 1))):
            raise ValueError("information bits must be +1 or -1")
        if chips.size != bits.size * self.symbol_len:
            raise ValueError(
                f"chip count {chips.size} != {bits.size} symbols x {self.symbol_len} chips")
        if np.any(np.abs(chips) > 1.0):
            raise ValueError("chip amplitudes must lie in [-1, 1]")
        chips.setflags(write=False)
        bits.setflags(write=False)
        object.__setattr__(self, "chips", chips)
        object.__setattr__(self, "bits", bits)

    @property
    def n_symbols(self) -> int:
        return self.bits.size

    def symbol(self, symbol_index: int) -> np.ndarray:
        """Chips of the 1-based ``symbol_index``-th symbol (read-only view)."""
        if not 1 <= symbol_index <= self.n_symbols:
            raise ValueError(
                f"symbol index must be in 1..{self.n_symbols}, got {symbol_index!r}")
        start = (symbol_index - 1) * self.symbol_len
        return self.chips[start:start + self.symbol_len]


def _check_bits(bits) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.size == 0:
        raise ValueError("bit sequence must be non-empty")
    if arr.ndim != 1 or not np.all(np.isin(arr, (-1, 1))):
        raise ValueError("bits must be a flat sequence of +1 / -1 values")
    return arr.astype(int)


def build_classic_frame(spec: WaveformSpec, bits, gen: ChaosGenerator) -> ChipFrame:
    """Classic frame: per symbol, beta fresh reference chips then bit * those chips."""
    if spec.kind != CLASSIC_DCSK:
        raise ValueError(f"spec kind is {spec.kind!r}, expected {CLASSIC_DCSK!r}")
    bits = _check_bits(bits)
    rows = np.empty((bits.size, 2 * spec.beta), dtype=float)
    for l, d in enumerate(bits):
        refs = generate_chips(gen, spec.beta)
        rows[l, :spec.beta] = refs
        rows[l, spec.beta:] = d * refs
    return ChipFrame(chips=rows.ravel(), bits=bits, symbol_len=2 * spec.beta, kind=spec.kind)


def build_wpt_optimal_frame(spec: WaveformSpec, bits, gen: ChaosGenerator) -> ChipFrame:
    """Peaky frame: per symbol, one fresh reference chip then beta copies of bit * chip."""
    if spec.kind != WPT_OPTIMAL:
        raise ValueError(f"spec kind is {spec.kind!r}, expected {WPT_OPTIMAL!r}")
    bits = _check_bits(bits)
    rows = np.empty((bits.size, spec.beta + 1), dtype=float)
    for l, d in enumerate(bits):
        x = generate_chips(gen, 1)[0]
        rows[l, 0] = x
        rows[l, 1:] = d * x
    return ChipFrame(chips=rows.ravel(), bits=bits, symbol_len=spec.beta + 1, kind=spec.kind)


def build_frame(spec: WaveformSpec, bits, gen: ChaosGenerator) -> ChipFrame:
    """Dispatch to the builder matching ``spec.kind``."""
    if spec.kind == CLASSIC_DCSK:
        return build_classic_frame(spec, bits, gen)
    return build_wpt_optimal_frame(spec, bits, gen)


def delayed_view(frame: ChipFrame, tau: int, symbol_index: int) -> np.ndarray:
    """The chip-delayed stream s[k - tau] over one symbol's window.

    The first ``tau`` entries come from the tail of symbol ``symbol_index - 1``
    and the rest from the head of symbol ``symbol_index``, exactly a global
    shift of the concatenated chip stream.  Needs 0 <= tau <= symbol_len - 1
    and a predecessor symbol (symbol_index >= 2).
    """
    if isinstance(tau, bool) or not isinstance(tau, (int, np.integer)):
        raise ValueError(f"chip delay tau must be an integer, got {tau!r}")
    if not 0 <= tau <= frame.symbol_len - 1:
        raise ValueError(
            f"chip delay tau must satisfy 0 <= tau <= {frame.symbol_len - 1}, got {tau}")
    if symbol_index < 2:
        raise ValueError("delayed view needs the previous symbol's tail; symbol_index must be >= 2")
    if symbol_index > frame.n_symbols:
        raise ValueError(
            f"symbol index must be in 2..{frame.n_symbols}, got {symbol_index!r}")
    start = (symbol_index - 1) * frame.symbol_len - tau
    return frame.chips[start:start + frame.symbol_len]


def dump_frame(frame: ChipFrame, path, fmt: str = "csv") -> None:
    """Debug dump of a frame as (chip index, value, symbol index, bit) records.

    ``fmt`` is "csv" for a text table or "npy" for a structured binary array.
    """
    sym_idx = np.repeat(np.arange(1, frame.n_symbols + 1), frame.symbol_len)
    bit = np.repeat(frame.bits, frame.symbol_len)
    if fmt == "csv":
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["chip_index", "value", "symbol_index", "bit"])
            for k, (v, s, d) in enumerate(zip(frame.chips, sym_idx, bit), start=1):
                writer.writerow([k, repr(float(v)), int(s), int(d)])
    elif fmt == "npy":
        rec = np.zeros(frame.chips.size,
                       dtype=[("chip_index", "i8"), ("value", "f8"),
                              ("symbol_index", "i8"), ("bit", "i8")])
        rec["chip_index"] = np.arange(1, frame.chips.size + 1)
        rec["value"] = frame.chips
        rec["symbol_index"] = sym_idx
        rec["bit"] = bit
        np.save(path, rec)
    else:
        raise ValueError(f"unknown dump format {fmt!r}, expected 'csv' or 'npy'")
