"""Accumulators over M parallel product bitstreams.

Four schemes share the same input shape (M streams of length L = 2**N):

  EMBA  sums all M product bits every cycle into a binary register; the
        final total is the exact ones count, read out as total / L.
  DTSA  threshold unit: each cycle adds the cycle sum to a residual
        register and, whenever the running value reaches M, subtracts M
        and emits a 1: floor division by M, in-stream.  The final
        residual (< M) is reinserted at binary readout, so the readout
        equals EMBA's exactly: M * ones(Y) + remainder == total.
  MUX   the baseline scaled adder: one LFSR-selected input bit per
        cycle; unbiased but high-variance.

Register width budgets (asserted here, property-tested in the suite):
cycle sum fits ceil(log2(M+1)) bits, the EMBA accumulator
ceil(log2(M*L+1)), the DTSA residual ceil(log2(M)), and the DTSA output
counter ceil(log2(L+1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .encodings import Bitstream, Polarity, StreamFormat
from .generators import LfsrState, lfsr_take


def cycle_sum(product_bits: Sequence[int]) -> int:
    """Per-cycle sum of M product bits; in [0, M]."""
    if len(product_bits) < 1:
        raise ValueError("need at least one product bit")
    total = 0
    for b in product_bits:
        if b not in (0, 1):
            raise ValueError(f"product bit must be 0/1, got {b}")
        total += b
    return total


def _stack(streams: Sequence[Bitstream]) -> np.ndarray:
    """Validate a stream bundle and stack bits into an (M, L) array."""
    if not streams:
        raise ValueError("empty stream bundle")
    first = streams[0]
    for s in streams[1:]:
        if len(s) != len(first) or s.polarity != first.polarity:
            raise ValueError("stream bundle mismatch: lengths/polarities differ")
    return np.stack([s.bits for s in streams])


def emba_accumulate(streams: Sequence[Bitstream]) -> int:
    """Total ones over all streams (the exact binary accumulator value)."""
    bits = _stack(streams)
    total = int(bits.sum())
    assert total <= bits.shape[0] * bits.shape[1]
    return total


def emba_mac_out(total: int, length: int, fan_in: int, polarity: Polarity) -> float:
    """Binary readout of the accumulator: total/L, sign-mapped for bipolar."""
    if not 0 <= total <= fan_in * length:
        raise ValueError(f"total {total} outside [0, {fan_in * length}]")
    if polarity is Polarity.UNIPOLAR:
        return total / length
    return 2 * total / length - fan_in


@dataclass(frozen=True)
class DtsaState:
    """Threshold-adder state: residual register and emitted-ones counter."""

    fan_in: int
    length: int
    q_reg: int = 0
    y_count: int = 0

    def __post_init__(self):
        assert 0 <= self.q_reg < self.fan_in, "residual register overflow"
        assert 0 <= self.y_count <= self.length, "output counter overflow"


def dtsa_step(state: DtsaState, product_bits: Sequence[int]) -> tuple[int, DtsaState]:
    """One cycle: add the cycle sum to the residual, emit 1 when it reaches M."""
    if len(product_bits) != state.fan_in:
        raise ValueError(f"expected {state.fan_in} product bits, got {len(product_bits)}")
    a = state.q_reg + cycle_sum(product_bits)
    if a >= state.fan_in:
        return 1, replace(state, q_reg=a - state.fan_in, y_count=state.y_count + 1)
    return 0, replace(state, q_reg=a)


def dtsa_run(streams: Sequence[Bitstream]) -> tuple[Bitstream, int]:
    """Run the threshold adder over all L cycles.

    Returns the emitted Y stream (GB) and the final residual; conserves
    M * ones(Y) + residual == total input ones.
    """
    bits = _stack(streams)
    fan_in, length = bits.shape
    sums = bits.sum(axis=0, dtype=np.int64).tolist()
    q = 0
    y = bytearray(length)
    for c, s in enumerate(sums):
        a = q + s
        if a >= fan_in:
            y[c] = 1
            q = a - fan_in
        else:
            q = a
        assert q < fan_in, "residual register overflow"
    y_stream = Bitstream(
        np.frombuffer(bytes(y), dtype=np.uint8),
        StreamFormat.GB,
        streams[0].polarity,
        streams[0].width_bits,
    )
    assert fan_in * int(np.count_nonzero(y_stream.bits)) + q == int(bits.sum())
    return y_stream, q


def dtsa_mac_out(
    y_ones: int, remainder: int, length: int, fan_in: int, polarity: Polarity
) -> float:
    """Binary readout: scale the emitted count back by M and reinsert the residual."""
    if not 0 <= remainder < fan_in:
        raise ValueError(f"remainder {remainder} outside [0, {fan_in})")
    final_ones = fan_in * y_ones + remainder
    return emba_mac_out(final_ones, length, fan_in, polarity)


def mux_select_width(fan_in: int) -> int:
    return math.ceil(math.log2(fan_in))


def mux_add_stream(
    streams: Sequence[Bitstream], lfsr: LfsrState
) -> tuple[Bitstream, LfsrState]:
    """Scaled addition: select one input bit per cycle with LFSR randomness.

    Draws ceil(log2(M)) bits per cycle, oldest bit as MSB of the select
    value; a select >= M (non-power-of-two fan-in) is reduced modulo M,
    which is slightly biased toward low indices.
    """
    if len(streams) < 2:
        raise ValueError("mux adder needs fan-in >= 2")
    bits = _stack(streams)
    fan_in, length = bits.shape
    width = mux_select_width(fan_in)
    raw, new_state = lfsr_take(lfsr, length * width)
    weights = 1 << np.arange(width - 1, -1, -1, dtype=np.int64)
    selects = raw.reshape(length, width).astype(np.int64) @ weights
    selects %= fan_in
    out = bits[selects, np.arange(length)]
    return (
        Bitstream(out, StreamFormat.GB, streams[0].polarity, streams[0].width_bits),
        new_state,
    )
