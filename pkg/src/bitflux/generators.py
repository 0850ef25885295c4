"""Deterministic bitstream generators and the LFSR select source.

The RB (regulated) layout places each bit of the ones budget u by binary
weight: scanning cycles c = 0 .. 2**N - 1, the emitted bit is bit
(N-1-k) of u where k is the number of trailing one-bits of c, and the
final cycle (k == N) is a forced zero.  Bit u[N-1] therefore lands in
2**(N-1) slots, u[N-2] in 2**(N-2), ... down to u[0] once, so the stream
carries exactly u ones, spread low-discrepancy.

The TB (temporal) layout packs all u ones at the front.

The LFSR is a 16-bit maximal Fibonacci register, taps {16, 14, 13, 11}:
output is the pre-shift LSB, feedback enters at the MSB.  Only the
MUX-based scaled adder consumes it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .encodings import BinaryWord, Bitstream, Polarity, StreamFormat

LFSR_DEFAULT_SEED = 0xACE1
_LFSR_MASK = 0xFFFF
_LFSR_PERIOD = (1 << 16) - 1


def ones_budget(word: BinaryWord) -> int:
    """Number of ones the word's streams carry (p * 2**N)."""
    if word.polarity is Polarity.UNIPOLAR:
        return word.raw
    return word.raw + (1 << (word.width_bits - 1))


@lru_cache(maxsize=None)
def _select_index(width_bits: int) -> np.ndarray:
    """Per-cycle budget-bit index: N-1-k (trailing ones), -1 for the forced zero."""
    cycles = np.arange(1 << width_bits, dtype=np.int64)
    trailing = np.zeros(len(cycles), dtype=np.int64)
    rest = cycles.copy()
    for _ in range(width_bits):
        odd = (rest & 1) == 1
        trailing[odd] += 1
        rest >>= 1
        rest[~odd] = 0  # stop counting once a zero bit is seen
    idx = width_bits - 1 - trailing
    idx.flags.writeable = False
    return idx


@lru_cache(maxsize=None)
def _rb_bits(budget: int, width_bits: int) -> np.ndarray:
    idx = _select_index(width_bits)
    bits = np.where(idx >= 0, (budget >> np.maximum(idx, 0)) & 1, 0)
    bits = bits.astype(np.uint8)
    bits.flags.writeable = False
    return bits


def rb_bit(budget_word: int, width_bits: int, cycle: int) -> int:
    """RB bit for one cycle of the canonical weight-stratified layout."""
    if not 0 <= budget_word <= (1 << width_bits) - 1:
        raise ValueError(f"budget {budget_word} out of range for width {width_bits}")
    if not 0 <= cycle < (1 << width_bits):
        raise ValueError(f"cycle {cycle} out of range for width {width_bits}")
    return int(_rb_bits(budget_word, width_bits)[cycle])


@lru_cache(maxsize=4096)
def rb_generate(word: BinaryWord) -> Bitstream:
    bits = _rb_bits(ones_budget(word), word.width_bits)
    return Bitstream(bits, StreamFormat.RB, word.polarity, word.width_bits)


@lru_cache(maxsize=None)
def _tb_bits(budget: int, width_bits: int) -> np.ndarray:
    bits = (np.arange(1 << width_bits) < budget).astype(np.uint8)
    bits.flags.writeable = False
    return bits


@lru_cache(maxsize=4096)
def tb_generate(word: BinaryWord) -> Bitstream:
    bits = _tb_bits(ones_budget(word), word.width_bits)
    return Bitstream(bits, StreamFormat.TB, word.polarity, word.width_bits)


def gb_to_tb(stream: Bitstream) -> Bitstream:
    """Repack any stream into TB form, preserving the ones count."""
    ones = int(np.count_nonzero(stream.bits))
    bits = _tb_bits(ones, stream.width_bits)
    return Bitstream(bits, StreamFormat.TB, stream.polarity, stream.width_bits)


# ---------------------------------------------------------------------------
# LFSR
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LfsrState:
    """16-bit Fibonacci LFSR register (never zero)."""

    register: int = LFSR_DEFAULT_SEED

    def __post_init__(self):
        if not 1 <= self.register <= _LFSR_MASK:
            raise ValueError(f"LFSR register must be a nonzero 16-bit value, got {self.register}")


def _lfsr_step(reg: int) -> tuple[int, int]:
    # taps x^16 + x^14 + x^13 + x^11 -> register bits 0, 2, 3, 5
    out = reg & 1
    fb = (reg ^ (reg >> 2) ^ (reg >> 3) ^ (reg >> 5)) & 1
    return out, (reg >> 1) | (fb << 15)


def lfsr_next(state: LfsrState, nbits: int) -> tuple[list[int], LfsrState]:
    """Advance nbits steps; returns the output bits oldest-first and the new state."""
    if not 1 <= nbits <= 16:
        raise ValueError(f"nbits must be in [1, 16], got {nbits}")
    reg = state.register
    bits = []
    for _ in range(nbits):
        out, reg = _lfsr_step(reg)
        bits.append(out)
    return bits, LfsrState(reg)


@lru_cache(maxsize=1)
def _lfsr_tables() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Full-period (65535-step) output bits, state sequence, and state->phase map."""
    bits = np.empty(_LFSR_PERIOD, dtype=np.uint8)
    states = np.empty(_LFSR_PERIOD, dtype=np.uint32)
    phase = np.zeros(_LFSR_MASK + 1, dtype=np.uint32)
    reg = 1
    for t in range(_LFSR_PERIOD):
        states[t] = reg
        phase[reg] = t
        out, reg = _lfsr_step(reg)
        bits[t] = out
    assert reg == 1, "LFSR is not maximal-period"
    for arr in (bits, states, phase):
        arr.flags.writeable = False
    return bits, states, phase


def lfsr_take(state: LfsrState, count: int) -> tuple[np.ndarray, LfsrState]:
    """Bulk draw: `count` output bits oldest-first, via the cached period table.

    Bit-identical to repeated lfsr_next calls.
    """
    bits, states, phase = _lfsr_tables()
    start = int(phase[state.register])
    idx = (start + np.arange(count, dtype=np.int64)) % _LFSR_PERIOD
    out = bits[idx]
    new_reg = int(states[(start + count) % _LFSR_PERIOD])
    return out, LfsrState(new_reg)


def lfsr_from_seed(seed: int) -> LfsrState:
    """Map an arbitrary integer seed onto a valid register.

    Keeps 16-bit seeds as-is (so the 0xACE1 default is itself); a zero
    low half falls back to the default rather than an illegal register.
    """
    reg = seed % (_LFSR_MASK + 1)
    return LfsrState(reg if reg else LFSR_DEFAULT_SEED)
