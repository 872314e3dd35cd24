"""Frame construction, the delayed-stream view, and chip dumps."""

import csv
import math

import numpy as np
import pytest

from dcskwpt.chaos import ChaosGenerator
from dcskwpt.waveform import (CLASSIC_DCSK, WPT_OPTIMAL, ChipFrame, WaveformSpec,
                              build_classic_frame, build_frame,
                              build_wpt_optimal_frame, delayed_view, dump_frame)

# T2(x0) = 0.3 for this start value, so the first two map pulls are 0.3, -0.82
X0 = math.sqrt(0.65)


def _gen():
    return ChaosGenerator(degree=2, state=X0)


def test_spec_validation_and_defaults():
    spec = WaveformSpec(beta=4)
    assert spec.kind == WPT_OPTIMAL and spec.symbol_len == 5 and spec.psi == 5
    classic = WaveformSpec(beta=4, kind=CLASSIC_DCSK)
    assert classic.symbol_len == 8 and classic.psi == 8
    assert WaveformSpec(beta=4, correlator_len=1).psi == 1
    for kwargs in ({"beta": 0}, {"beta": 2.5}, {"beta": 2, "kind": "other"},
                   {"beta": 2, "degree": 1}, {"beta": 2, "correlator_len": 0}):
        with pytest.raises(ValueError):
            WaveformSpec(**kwargs)


def test_classic_frame_positive_bit_duplicates_reference():
    spec = WaveformSpec(beta=2, kind=CLASSIC_DCSK)
    frame = build_classic_frame(spec, [+1], _gen())
    assert np.allclose(frame.chips, [0.3, -0.82, 0.3, -0.82], atol=1e-12)


def test_classic_frame_negative_bit_inverts_data_half():
    spec = WaveformSpec(beta=2, kind=CLASSIC_DCSK)
    frame = build_classic_frame(spec, [-1], _gen())
    assert np.allclose(frame.chips, [0.3, -0.82, -0.3, 0.82], atol=1e-12)


def test_classic_frame_two_symbols_structure():
    spec = WaveformSpec(beta=3, kind=CLASSIC_DCSK)
    frame = build_classic_frame(spec, [+1, -1], _gen())
    assert frame.chips.size == 12
    second = frame.symbol(2)
    assert np.array_equal(second[3:], -second[:3])


def test_wpt_frame_structure():
    spec = WaveformSpec(beta=3)
    frame = build_wpt_optimal_frame(spec, [+1], _gen())
    assert np.allclose(frame.chips, [0.3, 0.3, 0.3, 0.3], atol=1e-12)
    frame = build_wpt_optimal_frame(spec, [-1], _gen())
    assert np.allclose(frame.chips, [0.3, -0.3, -0.3, -0.3], atol=1e-12)


def test_wpt_frame_fresh_reference_per_symbol():
    spec = WaveformSpec(beta=2)
    frame = build_wpt_optimal_frame(spec, [+1, -1], _gen())
    assert np.allclose(frame.chips, [0.3, 0.3, 0.3, -0.82, 0.82, 0.82], atol=1e-12)


def test_builders_reject_wrong_kind_and_bits():
    with pytest.raises(ValueError):
        build_classic_frame(WaveformSpec(beta=2), [1], _gen())
    with pytest.raises(ValueError):
        build_wpt_optimal_frame(WaveformSpec(beta=2, kind=CLASSIC_DCSK), [1], _gen())
    for bad_bits in ([], [0], [2, 1], [[1, -1]]):
        with pytest.raises(ValueError):
            build_wpt_optimal_frame(WaveformSpec(beta=2), bad_bits, _gen())


def test_frame_invariants_and_immutability():
    frame = build_frame(WaveformSpec(beta=3), [1, -1, 1], _gen())
    assert frame.n_symbols == 3
    assert np.all(np.abs(frame.chips) <= 1.0)
    with pytest.raises(ValueError):
        frame.chips[0] = 0.0
    with pytest.raises(ValueError):
        ChipFrame(chips=np.zeros(5), bits=np.array([1]), symbol_len=4, kind=WPT_OPTIMAL)
    with pytest.raises(ValueError):
        ChipFrame(chips=np.full(4, 1.5), bits=np.array([1]), symbol_len=4, kind=WPT_OPTIMAL)


def test_wpt_symbol_chips_share_magnitude():
    frame = build_frame(WaveformSpec(beta=4), [1, -1, -1, 1], _gen())
    for l in range(1, 5):
        sym = frame.symbol(l)
        assert np.allclose(np.abs(sym), abs(sym[0]), atol=0.0)


def test_classic_data_half_correlates_to_bit_energy():
    spec = WaveformSpec(beta=16, kind=CLASSIC_DCSK)
    rng = np.random.default_rng(3)
    bits = [int(b) for b in rng.integers(0, 2, 5) * 2 - 1]
    frame = build_classic_frame(spec, bits, ChaosGenerator.from_invariant(rng))
    for l, d in enumerate(bits, start=1):
        sym = frame.symbol(l)
        ref, data = sym[:16], sym[16:]
        assert math.isclose(float(ref @ data), d * float(ref @ ref), rel_tol=1e-12)


def _hand_frame(beta, bits, refs):
    """wpt-optimal frame from explicit per-symbol reference chips."""
    rows = [[x] + [d * x] * beta for d, x in zip(bits, refs)]
    return ChipFrame(chips=np.concatenate(rows), bits=np.array(bits),
                     symbol_len=beta + 1, kind=WPT_OPTIMAL)


def test_delayed_view_zero_delay_is_own_symbol():
    frame = _hand_frame(3, [1, -1], [0.5, -0.25])
    assert np.array_equal(delayed_view(frame, 0, 2), frame.symbol(2))


def test_delayed_view_three_case_structure():
    d1, d2 = -1, +1
    x1, x2 = 0.5, -0.25
    frame = _hand_frame(3, [d1, d2], [x1, x2])
    window = delayed_view(frame, 2, 2)
    assert np.array_equal(window, [d1 * x1, d1 * x1, x2, d2 * x2])


def test_delayed_view_argument_errors():
    frame = _hand_frame(3, [1, -1], [0.5, -0.25])
    with pytest.raises(ValueError):
        delayed_view(frame, -1, 2)
    with pytest.raises(ValueError):
        delayed_view(frame, 4, 2)  # symbol_len - 1 == 3
    with pytest.raises(ValueError):
        delayed_view(frame, 1, 1)  # no predecessor
    with pytest.raises(ValueError):
        delayed_view(frame, 1, 3)  # past the frame


@pytest.mark.parametrize("kind", [CLASSIC_DCSK, WPT_OPTIMAL])
def test_delayed_view_equals_global_stream_shift(kind):
    rng = np.random.default_rng(11)
    for beta in range(1, 5):
        spec = WaveformSpec(beta=beta, kind=kind)
        bits = [int(b) for b in rng.integers(0, 2, 3) * 2 - 1]
        frame = build_frame(spec, bits, ChaosGenerator.from_invariant(rng))
        stream = frame.chips
        for tau in range(0, spec.symbol_len):
            for l in (2, 3):
                start = (l - 1) * spec.symbol_len
                naive = stream[start - tau:start - tau + spec.symbol_len]
                assert np.array_equal(delayed_view(frame, tau, l), naive)


def test_dump_frame_csv_and_npy(tmp_path):
    frame = _hand_frame(2, [1, -1], [0.5, -0.25])
    csv_path = tmp_path / "frame.csv"
    dump_frame(frame, csv_path, fmt="csv")
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["chip_index", "value", "symbol_index", "bit"]
    assert len(rows) == 1 + frame.chips.size
    assert rows[1] == ["1", "0.5", "1", "1"]
    assert rows[4] == ["4", "-0.25", "2", "-1"]

    npy_path = tmp_path / "frame.npy"
    dump_frame(frame, npy_path, fmt="npy")
    rec = np.load(npy_path)
    assert np.array_equal(rec["value"], frame.chips)
    assert np.array_equal(rec["symbol_index"], [1, 1, 1, 2, 2, 2])

    with pytest.raises(ValueError):
        dump_frame(frame, tmp_path / "x.bin", fmt="bin")
