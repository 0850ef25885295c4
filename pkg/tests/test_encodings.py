import numpy as np
import pytest
from hypothesis import given, strategies as st

from bitflux.encodings import (
    BinaryWord,
    Bitstream,
    Polarity,
    StreamFormat,
    decode_stream,
    dequantize,
    ones_count,
    quantize,
    raw_range,
    stream_from_string,
)

UNI = Polarity.UNIPOLAR
BIP = Polarity.BIPOLAR


class TestQuantize:
    @pytest.mark.parametrize(
        "value,bits,pol,raw",
        [
            (0.75, 3, UNI, 6),
            (-0.5, 3, BIP, -2),
            (1.0, 3, UNI, 7),  # saturates at the top code
            (1.0, 3, BIP, 3),
            (-1.0, 3, BIP, -4),
            (0.0, 8, UNI, 0),
        ],
    )
    def test_golden(self, value, bits, pol, raw):
        assert quantize(value, bits, pol).raw == raw

    def test_half_away_from_zero(self):
        assert quantize(9 / 16, 3, UNI).raw == 5  # 4.5 rounds up
        assert quantize(-5 / 8, 4, BIP).raw == -5  # -5.0 exact
        assert quantize(-7 / 16, 3, BIP).raw == -2  # -1.75 -> -2

    @pytest.mark.parametrize("value,pol", [(1.5, UNI), (-0.1, UNI), (1.2, BIP), (-2.0, BIP)])
    def test_domain_errors(self, value, pol):
        with pytest.raises(ValueError):
            quantize(value, 8, pol)

    @pytest.mark.parametrize("bits", [3, 4, 6])
    @pytest.mark.parametrize("pol", [UNI, BIP])
    def test_round_trip_all_codes(self, bits, pol):
        lo, hi = raw_range(bits, pol)
        for raw in range(lo, hi + 1):
            word = BinaryWord(bits, raw, pol)
            assert quantize(dequantize(word), bits, pol) == word


class TestDequantize:
    def test_golden(self):
        assert dequantize(BinaryWord(3, 6, UNI)) == 0.75
        assert dequantize(BinaryWord(3, -2, BIP)) == -0.5
        assert dequantize(BinaryWord(8, 0, UNI)) == 0.0
        assert dequantize(BinaryWord(8, 0, BIP)) == 0.0

    def test_raw_validation(self):
        with pytest.raises(ValueError):
            BinaryWord(3, 8, UNI)
        with pytest.raises(ValueError):
            BinaryWord(3, -5, BIP)
        with pytest.raises(ValueError):
            BinaryWord(1, 0, UNI)


class TestDecodeStream:
    def test_golden(self):
        assert decode_stream(stream_from_string("11111100", StreamFormat.TB, UNI)) == 0.75
        assert decode_stream(stream_from_string("11000000", StreamFormat.TB, BIP)) == -0.5
        assert decode_stream(stream_from_string("00000000", StreamFormat.GB, BIP)) == -1.0

    def test_ones_count(self):
        assert ones_count(stream_from_string("11101110", StreamFormat.GB, UNI)) == 6
        assert ones_count(stream_from_string("00000000", StreamFormat.GB, UNI)) == 0
        assert ones_count(stream_from_string("11111111", StreamFormat.GB, UNI)) == 8

    @given(st.lists(st.integers(0, 1), min_size=8, max_size=8), st.randoms())
    def test_decode_is_permutation_invariant(self, bits, rnd):
        stream = Bitstream(np.array(bits, dtype=np.uint8), StreamFormat.GB, BIP, 3)
        shuffled = list(bits)
        rnd.shuffle(shuffled)
        other = Bitstream(np.array(shuffled, dtype=np.uint8), StreamFormat.GB, BIP, 3)
        assert decode_stream(stream) == decode_stream(other)


class TestBitstreamInvariants:
    def test_length_must_be_power_of_two(self):
        with pytest.raises(ValueError):
            Bitstream(np.zeros(6, dtype=np.uint8), StreamFormat.GB, UNI, 3)

    def test_tb_ordering_enforced(self):
        with pytest.raises(ValueError):
            stream_from_string("10100000", StreamFormat.TB, UNI)
        stream_from_string("11100000", StreamFormat.TB, UNI)  # fine

    def test_bits_are_read_only(self):
        s = stream_from_string("11110000", StreamFormat.TB, UNI)
        with pytest.raises(ValueError):
            s.bits[0] = 0

    def test_non_binary_rejected(self):
        with pytest.raises(ValueError):
            Bitstream(np.full(8, 2, dtype=np.uint8), StreamFormat.GB, UNI, 3)
