"""Per-cycle multipliers: the RB×TB gate and the counting baselines.

The hybrid multiplier gates an RB stream against a TB stream (AND for
unipolar, XNOR for bipolar), producing a GB product stream.

The counting (CBSC) unipolar multiplier never materializes the product
stream: it counts ones of the RB input over the first |w|*2**N cycles,
which is exactly the AND-with-TB ones count.  The bipolar variant works
in sign-magnitude form: an up/down counter consumes the magnitude
stream of x for |w|*2**(N-1) cycles and the product sign is the XOR of
the operand signs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encodings import BinaryWord, Bitstream, Polarity, StreamFormat
from .generators import ones_budget, rb_generate, tb_generate, _rb_bits


@dataclass(frozen=True)
class CbscProduct:
    value: float
    ones: int
    cycles_used: int


def _check_pair(x: BinaryWord, w: BinaryWord):
    if x.width_bits != w.width_bits or x.polarity != w.polarity:
        raise ValueError(
            f"operand mismatch: ({x.width_bits},{x.polarity.value}) vs "
            f"({w.width_bits},{w.polarity.value})"
        )


def htc_mul_streams(rb: Bitstream, tb: Bitstream) -> Bitstream:
    """Gate a stream pair: AND (unipolar) or XNOR (bipolar)."""
    if rb.width_bits != tb.width_bits or rb.polarity != tb.polarity:
        raise ValueError("stream mismatch: width/polarity differ")
    if rb.polarity is Polarity.UNIPOLAR:
        bits = rb.bits & tb.bits
    else:
        bits = np.uint8(1) - (rb.bits ^ tb.bits)
    return Bitstream(bits, StreamFormat.GB, rb.polarity, rb.width_bits)


def htc_mul_stream(x: BinaryWord, w: BinaryWord) -> Bitstream:
    """Product stream of x (rendered RB) and w (rendered TB)."""
    _check_pair(x, w)
    return htc_mul_streams(rb_generate(x), tb_generate(w))


def cbsc_mul_unipolar(x: BinaryWord, w: BinaryWord) -> CbscProduct:
    """Count ones of rb(x) over the first raw(w) cycles."""
    _check_pair(x, w)
    if x.polarity is not Polarity.UNIPOLAR:
        raise ValueError("cbsc_mul_unipolar requires unipolar operands")
    cycles = ones_budget(w)
    rb = _rb_bits(ones_budget(x), x.width_bits)
    ones = int(rb[:cycles].sum())
    return CbscProduct(ones / (1 << x.width_bits), ones, cycles)


def _magnitude_bits(magnitude: int, width_bits: int) -> np.ndarray:
    """Magnitude stream of length 2**(N-1); magnitude 2**(N-1) is all ones."""
    half_width = width_bits - 1
    if magnitude == 1 << half_width:
        return np.ones(1 << half_width, dtype=np.uint8)
    return _rb_bits(magnitude, half_width)


def cbsc_mul_bipolar(x: BinaryWord, w: BinaryWord) -> CbscProduct:
    """Sign-magnitude counting multiply.

    Runs the up/down counter for m_w cycles over the magnitude stream of
    x (+1 per one, -1 per zero, final count C); the surviving ones count
    is (C + m_w) / 2 and the decoded value is sign * ones / 2**(N-1),
    which is exact whenever the magnitude stream prefix is all ones.
    """
    _check_pair(x, w)
    if x.polarity is not Polarity.BIPOLAR:
        raise ValueError("cbsc_mul_bipolar requires bipolar operands")
    sign = -1 if (x.raw < 0) != (w.raw < 0) else 1
    m_x, m_w = abs(x.raw), abs(w.raw)
    stream = _magnitude_bits(m_x, x.width_bits)
    ones = int(stream[:m_w].sum())
    return CbscProduct(sign * ones / (1 << (x.width_bits - 1)), ones, m_w)
