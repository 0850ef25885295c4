"""M-input MAC units: four multipliers feeding one accumulator variant.

Unipolar CBSC, EMBA and DTSA produce bit-identical MAC values on every
input: the counting multiplier's ones equal the gated stream's ones
product by product, EMBA reads out the exact total, and DTSA's readout
reinserts its residual.  The MUX variant is the stochastic baseline and
the only consumer of the seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Sequence

from .adders import dtsa_mac_out, dtsa_run, emba_accumulate, emba_mac_out, mux_add_stream
from .encodings import BinaryWord, Polarity, decode_stream, dequantize, ones_count
from .generators import LFSR_DEFAULT_SEED, gb_to_tb, lfsr_from_seed, rb_generate
from .multipliers import (
    cbsc_mul_bipolar,
    cbsc_mul_unipolar,
    htc_mul_stream,
    htc_mul_streams,
)


class MacVariant(enum.Enum):
    CBSC = "cbsc"
    MUX_HTC = "mux"
    EMBA = "emba"
    DTSA = "dtsa"


@dataclass(frozen=True)
class MacConfig:
    variant: MacVariant
    polarity: Polarity
    width_bits: int = 8
    fan_in: int = 4
    seed: int = LFSR_DEFAULT_SEED  # consumed by the MUX variant only

    def __post_init__(self):
        if not 2 <= self.width_bits <= 16:
            raise ValueError(f"width_bits must be in [2, 16], got {self.width_bits}")
        if self.fan_in < 2:
            raise ValueError(f"fan_in must be >= 2, got {self.fan_in}")

    @property
    def length(self) -> int:
        return 1 << self.width_bits


@dataclass(frozen=True)
class MacResult:
    value: float
    exact: float
    aux: dict[str, Any] = field(default_factory=dict)

    @property
    def error(self) -> float:
        return self.value - self.exact


def _check_operands(cfg: MacConfig, x: Sequence[BinaryWord], w: Sequence[BinaryWord], fan_in: int):
    if len(x) != fan_in or len(w) != fan_in:
        raise ValueError(f"expected {fan_in} operand pairs, got {len(x)}/{len(w)}")
    for word in (*x, *w):
        if word.width_bits != cfg.width_bits or word.polarity != cfg.polarity:
            raise ValueError(
                f"operand ({word.width_bits},{word.polarity.value}) does not match "
                f"config ({cfg.width_bits},{cfg.polarity.value})"
            )


def exact_dot_words(x: Sequence[BinaryWord], w: Sequence[BinaryWord]) -> float:
    return sum(dequantize(a) * dequantize(b) for a, b in zip(x, w))


def mac_value(cfg, x, w, lfsr=None):
    """MAC value with an explicitly threaded LFSR state.

    Returns (value, aux, new_lfsr).  Row-sequential consumers (the DSP
    apps) pass their row's LFSR through so successive MUX MACs draw from
    one continuous select sequence; other variants ignore it.
    """
    if cfg.variant is MacVariant.CBSC:
        mul = cbsc_mul_unipolar if cfg.polarity is Polarity.UNIPOLAR else cbsc_mul_bipolar
        products = [mul(a, b) for a, b in zip(x, w)]
        value = sum(p.value for p in products)
        aux = {
            "ones": [p.ones for p in products],
            "cycles": [p.cycles_used for p in products],
        }
        return value, aux, lfsr

    streams = [htc_mul_stream(a, b) for a, b in zip(x, w)]

    if cfg.variant is MacVariant.EMBA:
        total = emba_accumulate(streams)
        value = emba_mac_out(total, cfg.length, len(streams), cfg.polarity)
        return value, {"total_ones": total}, lfsr

    if cfg.variant is MacVariant.DTSA:
        y, remainder = dtsa_run(streams)
        y_ones = ones_count(y)
        value = dtsa_mac_out(y_ones, remainder, cfg.length, len(streams), cfg.polarity)
        return value, {"y_ones": y_ones, "remainder": remainder}, lfsr

    if lfsr is None:
        lfsr = lfsr_from_seed(cfg.seed)
    out, lfsr = mux_add_stream(streams, lfsr)
    value = len(streams) * decode_stream(out)
    return value, {"selected_ones": ones_count(out)}, lfsr


def mac_run(cfg: MacConfig, x: Sequence[BinaryWord], w: Sequence[BinaryWord]) -> MacResult:
    """Dot product of two word vectors through the configured MAC."""
    _check_operands(cfg, x, w, cfg.fan_in)
    exact = exact_dot_words(x, w)
    value, aux, _ = mac_value(cfg, x, w)
    return MacResult(value, exact, aux)


def mac_tiled(cfg: MacConfig, x: Sequence[BinaryWord], w: Sequence[BinaryWord]) -> MacResult:
    """Wider dot product tiled over fan_in-sized blocks, combined exactly.

    MUX blocks draw from independent streams (seed offset by block index)
    so tiling does not correlate their selections.
    """
    if len(x) != len(w) or len(x) % cfg.fan_in != 0:
        raise ValueError(f"input length {len(x)}/{len(w)} not a multiple of fan_in {cfg.fan_in}")
    value = 0.0
    exact = 0.0
    blocks = []
    for k in range(len(x) // cfg.fan_in):
        sl = slice(k * cfg.fan_in, (k + 1) * cfg.fan_in)
        block = mac_run(replace(cfg, seed=cfg.seed + k), x[sl], w[sl])
        value += block.value
        exact += block.exact
        blocks.append(block.aux)
    return MacResult(value, exact, {"blocks": blocks})


def mac_chain_dtsa(
    cfg: MacConfig,
    stage1: Sequence[tuple[Sequence[BinaryWord], Sequence[BinaryWord]]],
    stage2_weights: Sequence[BinaryWord],
) -> MacResult:
    """Two-stage MAC chained in-stream through the DTSA output.

    Each stage-1 block's Y stream is repacked to TB (its residual is
    dropped, the documented in-stream accuracy cost) and multiplied by
    the matching stage-2 weight; a stage-2 threshold adder accumulates
    those products with its own residual reinserted at readout.  The Y
    stream carries the block value scaled by 1/fan_in, so the result
    approximates sum_i w2_i * (block_i dot product) / fan_in.
    """
    if cfg.variant is not MacVariant.DTSA:
        raise ValueError("chaining is defined for the DTSA variant only")
    if len(stage1) != len(stage2_weights) or not stage1:
        raise ValueError("need one stage-2 weight per stage-1 block")
    exact = 0.0
    chained = []
    dropped = []
    for (x, w), w2 in zip(stage1, stage2_weights):
        _check_operands(cfg, x, w, cfg.fan_in)
        if w2.width_bits != cfg.width_bits or w2.polarity != cfg.polarity:
            raise ValueError("stage-2 weight does not match config")
        streams = [htc_mul_stream(a, b) for a, b in zip(x, w)]
        y, remainder = dtsa_run(streams)
        dropped.append(remainder)
        chained.append(htc_mul_streams(rb_generate(w2), gb_to_tb(y)))
        exact += dequantize(w2) * exact_dot_words(x, w) / cfg.fan_in
    y2, remainder2 = dtsa_run(chained)
    y2_ones = ones_count(y2)
    value = dtsa_mac_out(y2_ones, remainder2, cfg.length, len(chained), cfg.polarity)
    return MacResult(
        value,
        exact,
        {"stage1_dropped": dropped, "y_ones": y2_ones, "remainder": remainder2},
    )
