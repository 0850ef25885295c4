#!/usr/bin/env python3
"""Regenerate the synthetic grayscale test images under images/.

The recipe targets the two applications at once: mid-toned with bounded
8-pixel local means (the DCT segment DC term must stay inside the
bipolar range), plus enough near-Nyquist texture that the 6-tap blur
itself costs roughly 0.07-0.10 RMSE, like natural photographs do.
Deterministic: fixed seeds, numpy only.

Usage: python scripts/make_test_images.py [outdir]
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from bitflux.dsp import ImageBuffer, pgm_write  # noqa: E402


def _separable_blur(field, sigma):
    radius = max(int(3 * sigma), 1)
    t = np.arange(-radius, radius + 1)
    kern = np.exp(-0.5 * (t / sigma) ** 2)
    kern /= kern.sum()
    padded = np.pad(field, radius, mode="reflect")
    rows = np.apply_along_axis(lambda r: np.convolve(r, kern, "valid"), 1, padded)
    return np.apply_along_axis(lambda c: np.convolve(c, kern, "valid"), 0, rows)


def synth(seed, size, base_amp, hf_amp, hf_sigma, mf_amp, mf_freq):
    rng = np.random.default_rng(seed)
    x, y = np.meshgrid(np.linspace(0, 1, size), np.linspace(0, 1, size))
    base = 0.5 + base_amp * np.sin(2.2 * np.pi * x + 1.3) + 0.75 * base_amp * np.cos(1.7 * np.pi * y + 0.4)
    mid = mf_amp * np.sin(2 * np.pi * mf_freq * x + 3 * y)
    high = _separable_blur(rng.standard_normal((size, size)), hf_sigma)
    high = hf_amp * high / high.std()
    return ImageBuffer.from_array(np.clip(base + mid + high, 0.02, 0.98))


RECIPES = {
    "waves128.pgm": dict(seed=101, size=128, base_amp=0.07, hf_amp=0.13, hf_sigma=0.55, mf_amp=0.05, mf_freq=9),
    "grain128.pgm": dict(seed=202, size=128, base_amp=0.06, hf_amp=0.11, hf_sigma=0.45, mf_amp=0.06, mf_freq=14),
    "ridges128.pgm": dict(seed=303, size=128, base_amp=0.08, hf_amp=0.15, hf_sigma=0.65, mf_amp=0.04, mf_freq=6),
    "field512.pgm": dict(seed=404, size=512, base_amp=0.07, hf_amp=0.12, hf_sigma=0.55, mf_amp=0.05, mf_freq=23),
}


def main():
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "images"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, recipe in RECIPES.items():
        img = synth(**recipe)
        pgm_write(img, outdir / name)
        print(f"wrote {outdir / name} ({img.width}x{img.height}, mean {img.pixels.mean():.3f})")


if __name__ == "__main__":
    main()
