"""Core value types: fractional binary words and bitstreams.

Value conventions:
  unipolar  value = raw / 2**N,       raw in [0, 2**N - 1]
  bipolar   value = raw / 2**(N-1),   raw in [-2**(N-1), 2**(N-1) - 1]
            (two's-complement semantics; 1.0 itself is not representable)

A stream of length L = 2**N carries a value through its ones count:
  unipolar  ones / L
  bipolar   2 * ones / L - 1
so decoding is invariant under any permutation of the bits.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Polarity(enum.Enum):
    UNIPOLAR = "unipolar"
    BIPOLAR = "bipolar"


class StreamFormat(enum.Enum):
    GB = "gb"  # general bitstream, arbitrary arrangement
    RB = "rb"  # regulated: ones placed by binary weight
    TB = "tb"  # temporal: all ones packed at the front


@dataclass(frozen=True)
class BinaryWord:
    """An N-bit fractional operand (unsigned or two's-complement)."""

    width_bits: int
    raw: int
    polarity: Polarity

    def __post_init__(self):
        if self.width_bits < 2:
            raise ValueError(f"width_bits must be >= 2, got {self.width_bits}")
        lo, hi = raw_range(self.width_bits, self.polarity)
        if not lo <= self.raw <= hi:
            raise ValueError(
                f"raw {self.raw} out of range [{lo}, {hi}] for "
                f"{self.polarity.value} width {self.width_bits}"
            )

    @property
    def value(self) -> float:
        return dequantize(self)


@dataclass(frozen=True)
class Bitstream:
    """An ordered bit sequence of length 2**width_bits.

    bits is a read-only uint8 array of 0/1; index 0 is cycle 0.
    """

    bits: np.ndarray
    format: StreamFormat
    polarity: Polarity
    width_bits: int

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        bits.flags.writeable = False
        object.__setattr__(self, "bits", bits)
        if bits.ndim != 1 or len(bits) != 1 << self.width_bits:
            raise ValueError(
                f"stream length {bits.shape} != 2**{self.width_bits}"
            )
        if bits.max(initial=0) > 1:
            raise ValueError("stream bits must be 0 or 1")
        if self.format is StreamFormat.TB:
            # all ones must precede all zeros
            n = int(bits.sum())
            if bits[:n].sum() != n:
                raise ValueError("TB stream has a 1 after a 0")

    def __len__(self):
        return len(self.bits)

    def __str__(self):
        return "".join("1" if b else "0" for b in self.bits)


def raw_range(width_bits: int, polarity: Polarity) -> tuple[int, int]:
    """Inclusive (lo, hi) raw range for a word of the given shape."""
    if polarity is Polarity.UNIPOLAR:
        return 0, (1 << width_bits) - 1
    half = 1 << (width_bits - 1)
    return -half, half - 1


def _round_half_away(x: float) -> int:
    if x >= 0:
        return math.floor(x + 0.5)
    return -math.floor(-x + 0.5)


def quantize(value: float, width_bits: int, polarity: Polarity) -> BinaryWord:
    """Round a real value onto the word grid (half away from zero, clamped)."""
    if polarity is Polarity.UNIPOLAR:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"unipolar value {value} outside [0, 1]")
        scale = 1 << width_bits
    else:
        if not -1.0 <= value <= 1.0:
            raise ValueError(f"bipolar value {value} outside [-1, 1]")
        scale = 1 << (width_bits - 1)
    lo, hi = raw_range(width_bits, polarity)
    raw = min(max(_round_half_away(value * scale), lo), hi)
    return BinaryWord(width_bits, raw, polarity)


def dequantize(word: BinaryWord) -> float:
    """Exact real value of a word (dyadic rational, exact in a double)."""
    if word.polarity is Polarity.UNIPOLAR:
        return word.raw / (1 << word.width_bits)
    return word.raw / (1 << (word.width_bits - 1))


def ones_count(stream: Bitstream) -> int:
    return int(np.count_nonzero(stream.bits))


def decode_stream(stream: Bitstream) -> float:
    """Value carried by a stream: the ones fraction, sign-mapped for bipolar."""
    ones = ones_count(stream)
    length = len(stream)
    if stream.polarity is Polarity.UNIPOLAR:
        return ones / length
    return 2 * ones / length - 1


def stream_from_string(text: str, fmt: StreamFormat, polarity: Polarity) -> Bitstream:
    """Parse a '0'/'1' string (cycle 0 first) into a Bitstream."""
    if not text or set(text) - {"0", "1"}:
        raise ValueError(f"not a bit string: {text!r}")
    width = len(text).bit_length() - 1
    if 1 << width != len(text):
        raise ValueError(f"stream length {len(text)} is not a power of two")
    bits = np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")
    return Bitstream(bits, fmt, polarity, width)
