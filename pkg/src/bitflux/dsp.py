"""Image applications on top of the MAC variants.

Two pipelines:
  * a 6-tap Gaussian-windowed blur, run as a horizontal unipolar MAC per
    pixel with edge-replicated borders;
  * an 8-point DCT / inverse-DCT round trip in bipolar encoding, each
    8-wide dot product assembled from two 4-input MACs summed at binary
    readout.  Transform coefficients are requantized with saturation
    only: scaling them down would amplify the inverse-stage MAC error
    by the same factor on the way back.  The DC term of an image whose
    mean is far from mid-gray can clip, the same behavior as a
    saturating hardware register.

The MUX variant seeds each scanned row's LFSR as seed XOR row index (a
pass over columns applies the same rule to column indices), so rows can
be processed in parallel without changing results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .encodings import BinaryWord, Polarity, dequantize, quantize
from .generators import lfsr_from_seed
from .mac import MacConfig, MacVariant, mac_value
from .metrics import ImageMetrics, image_metrics


class PgmError(ValueError):
    """Malformed PGM input; .offset is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


@dataclass(frozen=True)
class ImageBuffer:
    """Grayscale image, pixels in [0, 1], row-major (height, width)."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        px = np.ascontiguousarray(self.pixels, dtype=np.float64)
        px.flags.writeable = False
        object.__setattr__(self, "pixels", px)
        if px.shape != (self.height, self.width):
            raise ValueError(f"pixel shape {px.shape} != ({self.height}, {self.width})")
        if px.size and (px.min() < 0.0 or px.max() > 1.0):
            raise ValueError("pixels outside [0, 1]")

    @classmethod
    def from_array(cls, pixels) -> "ImageBuffer":
        px = np.asarray(pixels, dtype=np.float64)
        return cls(px.shape[1], px.shape[0], px)


# ---------------------------------------------------------------------------
# PGM (P5, maxval 255) I/O
# ---------------------------------------------------------------------------

def _read_pgm_tokens(data: bytes, count: int, start: int) -> tuple[list[bytes], int]:
    """Read whitespace-separated header tokens, skipping '#' comments."""
    tokens = []
    pos = start
    while len(tokens) < count:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        if pos >= len(data):
            raise PgmError("truncated header", pos)
        tok_start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace() and data[pos : pos + 1] != b"#":
            pos += 1
        tokens.append(data[tok_start:pos])
    return tokens, pos


def pgm_read(path) -> ImageBuffer:
    """Read a binary (P5) PGM with maxval 255; pixels scaled by 1/255."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:2] != b"P5":
        raise PgmError(f"unsupported magic {data[:2]!r} (binary P5 only)", 0)
    tokens, pos = _read_pgm_tokens(data, 3, 2)
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise PgmError(f"non-numeric header field {tokens!r}", pos) from None
    if width <= 0 or height <= 0:
        raise PgmError(f"bad dimensions {width}x{height}", pos)
    if maxval != 255:
        raise PgmError(f"unsupported maxval {maxval} (must be 255)", pos)
    pos += 1  # the single whitespace byte after maxval
    end = pos + width * height
    if len(data) < end:
        raise PgmError(f"raster truncated: need {width * height} bytes", len(data))
    raster = np.frombuffer(data[pos:end], dtype=np.uint8)
    return ImageBuffer(width, height, raster.reshape(height, width) / 255.0)


def pgm_write(img: ImageBuffer, path) -> None:
    """Write binary PGM, rounding half up so read->write->read is identity."""
    raster = np.clip(np.floor(img.pixels * 255.0 + 0.5), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (img.width, img.height))
        fh.write(raster.tobytes())


# ---------------------------------------------------------------------------
# FIR blur
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FirKernel:
    taps: tuple[BinaryWord, ...]

    def __post_init__(self):
        total = sum(dequantize(t) for t in self.taps)
        limit = 1.0 + len(self.taps) / (1 << self.taps[0].width_bits)
        if total > limit:
            raise ValueError(f"tap sum {total} exceeds normalized limit {limit}")


def gaussian_taps(sigma: float, n_taps: int = 6, width_bits: int = 8) -> FirKernel:
    """Gaussian window, normalized to unit sum, quantized unipolar."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    center = (n_taps - 1) / 2
    window = [math.exp(-0.5 * ((k - center) / sigma) ** 2) for k in range(n_taps)]
    total = sum(window)
    return FirKernel(tuple(quantize(v / total, width_bits, Polarity.UNIPOLAR) for v in window))


@lru_cache(maxsize=65536)
def _word(width_bits: int, raw: int, polarity: Polarity) -> BinaryWord:
    return BinaryWord(width_bits, raw, polarity)


def _quantize_pixels(pixels: np.ndarray, width_bits: int) -> np.ndarray:
    """Pixel array -> unipolar raw codes (round half up, saturated)."""
    scale = 1 << width_bits
    return np.clip(np.floor(pixels * scale + 0.5), 0, scale - 1).astype(np.int64)


def fir_filter(img: ImageBuffer, kernel: FirKernel, cfg: MacConfig) -> ImageBuffer:
    """Horizontal convolution of each row against the kernel, MAC per pixel."""
    if cfg.polarity is not Polarity.UNIPOLAR:
        raise ValueError("FIR pipeline is unipolar")
    if cfg.fan_in != len(kernel.taps):
        raise ValueError(f"config fan_in {cfg.fan_in} != {len(kernel.taps)} taps")
    n = len(kernel.taps)
    left = (n - 1) // 2  # window spans [c-left, c-left+n)
    raws = _quantize_pixels(img.pixels, cfg.width_bits)
    taps = list(kernel.taps)
    out = np.empty_like(img.pixels)
    cols = np.arange(img.width)
    window_idx = np.clip(cols[:, None] + np.arange(n)[None, :] - left, 0, img.width - 1)
    for r in range(img.height):
        lfsr = lfsr_from_seed(cfg.seed ^ r) if cfg.variant is MacVariant.MUX_HTC else None
        row_raws = raws[r]
        for c in range(img.width):
            x = [_word(cfg.width_bits, int(row_raws[j]), Polarity.UNIPOLAR) for j in window_idx[c]]
            value, _, lfsr = mac_value(cfg, x, taps, lfsr)
            out[r, c] = min(max(value, 0.0), 1.0)
    return ImageBuffer(img.width, img.height, out)


# ---------------------------------------------------------------------------
# 8-point DCT / iDCT
# ---------------------------------------------------------------------------

DCT_POINTS = 8


@dataclass(frozen=True)
class DctMatrix:
    """8x8 DCT-II coefficients as bipolar words; rows are frequency index k."""

    rows: tuple[tuple[BinaryWord, ...], ...]

    def transpose(self) -> "DctMatrix":
        return DctMatrix(tuple(zip(*self.rows)))


def dct8_float() -> np.ndarray:
    """Unquantized orthonormal DCT-II matrix: c[k][n] = a(k) cos(pi (2n+1) k / 16)."""
    k = np.arange(DCT_POINTS)[:, None]
    n = np.arange(DCT_POINTS)[None, :]
    c = np.cos(np.pi * (2 * n + 1) * k / (2 * DCT_POINTS))
    c[0, :] *= math.sqrt(1 / 2)
    return c * math.sqrt(2 / DCT_POINTS)


def dct8_matrix(width_bits: int = 8) -> DctMatrix:
    c = dct8_float()
    return DctMatrix(
        tuple(
            tuple(quantize(float(v), width_bits, Polarity.BIPOLAR) for v in row)
            for row in c
        )
    )


def _quantize_bipolar(values: np.ndarray, width_bits: int) -> np.ndarray:
    """Real values in [-1, 1] -> bipolar raw codes (half away from zero, saturated)."""
    half = 1 << (width_bits - 1)
    scaled = values * half
    raw = np.where(scaled >= 0, np.floor(scaled + 0.5), -np.floor(-scaled + 0.5))
    return np.clip(raw, -half, half - 1).astype(np.int64)


def _pad_to_segments(raws: np.ndarray) -> np.ndarray:
    pad = (-raws.shape[1]) % DCT_POINTS
    if pad:
        raws = np.concatenate([raws, np.repeat(raws[:, -1:], pad, axis=1)], axis=1)
    return raws


def _transform_pass(
    raws: np.ndarray, matrix: DctMatrix, cfg: MacConfig, pass_seed: int
) -> np.ndarray:
    """One 1-D pass: every 8-wide segment of every row through the 8 basis MACs.

    Each output is two 4-input MACs combined at binary readout.  Returns
    the raw MAC values (callers scale and requantize).
    """
    height, width = raws.shape
    out = np.empty(raws.shape, dtype=np.float64)
    for r in range(height):
        lfsr = lfsr_from_seed(pass_seed ^ r) if cfg.variant is MacVariant.MUX_HTC else None
        row = raws[r]
        for s in range(0, width, DCT_POINTS):
            x = [_word(cfg.width_bits, int(v), Polarity.BIPOLAR) for v in row[s : s + DCT_POINTS]]
            for k, basis in enumerate(matrix.rows):
                lo, _, lfsr = mac_value(cfg, x[:4], basis[:4], lfsr)
                hi, _, lfsr = mac_value(cfg, x[4:], basis[4:], lfsr)
                out[r, s + k] = lo + hi
    return out


def dct_pipeline(
    img: ImageBuffer, cfg: MacConfig, mode: str = "1d"
) -> tuple[ImageBuffer, ImageMetrics]:
    """DCT then inverse-DCT of an image; metrics are against the original.

    mode '1d' transforms rows only (the default); '2d' adds the column
    passes of the separable transform.  Successive passes offset the
    MUX seed so no two passes replay one select sequence.
    """
    if cfg.polarity is not Polarity.BIPOLAR:
        raise ValueError("DCT pipeline is bipolar")
    if cfg.fan_in != 4:
        raise ValueError("8-point DCT is built from two 4-input MACs; fan_in must be 4")
    if mode not in ("1d", "2d"):
        raise ValueError(f"mode must be '1d' or '2d', got {mode!r}")
    matrix = dct8_matrix(cfg.width_bits)
    inverse = matrix.transpose()
    raws = _quantize_bipolar(2.0 * img.pixels - 1.0, cfg.width_bits)
    raws = _pad_to_segments(raws)

    if mode == "2d":
        # cascaded passes overflow without headroom: scale each stage by
        # 1/4 going forward and undo it coming back
        raws = _pad_to_segments(raws.T).T  # column passes need 8-aligned height
        passes = [(matrix, False, 0.25), (matrix, True, 0.25),
                  (inverse, True, 4.0), (inverse, False, 4.0)]
    else:
        passes = [(matrix, False, 1.0), (inverse, False, 1.0)]

    data = raws
    for i, (mat, transposed, scale) in enumerate(passes):
        if transposed:
            data = data.T
        values = scale * _transform_pass(data, mat, cfg, cfg.seed + (i << 16))
        if i == len(passes) - 1:
            data = values
        else:
            data = _quantize_bipolar(np.clip(values, -1.0, 1.0), cfg.width_bits)
        if transposed:
            data = data.T

    recon = np.clip((data + 1.0) / 2.0, 0.0, 1.0)
    recon = recon[: img.height, : img.width]
    out = ImageBuffer(img.width, img.height, recon)
    return out, image_metrics(out, img)
