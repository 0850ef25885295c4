import numpy as np
import pytest

from bitflux.encodings import Bitstream, Polarity, StreamFormat, stream_from_string

# Reference 4x8 product-bit matrix for the threshold-adder worked example:
# per-cycle sums 4,1,3,2,4,4,2,4 (total 24), emitted Y = 10101111, final
# residual 0.  Strings are cycle-0-first.
TRACE_STREAMS = ("10111111", "10001101", "11101111", "10111101")
TRACE_CYCLE_SUMS = (4, 1, 3, 2, 4, 4, 2, 4)
TRACE_Y = "10101111"


@pytest.fixture
def trace_streams():
    return [stream_from_string(s, StreamFormat.GB, Polarity.UNIPOLAR) for s in TRACE_STREAMS]


def random_streams(rng, fan_in, length, polarity=Polarity.UNIPOLAR):
    width = length.bit_length() - 1
    bits = rng.integers(0, 2, size=(fan_in, length), dtype=np.uint8)
    return [Bitstream(bits[i], StreamFormat.GB, polarity, width) for i in range(fan_in)]
