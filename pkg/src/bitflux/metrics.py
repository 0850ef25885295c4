"""Exact oracle, error statistics, and the MAC accuracy benchmark.

Error normalization: rmse_pct and sde_pct are 100x the raw dot-product
error in natural units (operands in [0,1] or [-1,1], dot products up to
fan_in), not divided by full scale.  Operands are drawn uniformly over
the representable raw codes; both conventions are echoed in run
manifests so reported numbers are self-describing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .encodings import BinaryWord, Polarity, raw_range
from .mac import MacConfig, MacResult, MacVariant, mac_run

REPORT_FIELDS = ("variant", "polarity", "bits", "fan_in", "samples", "seed", "rmse_pct", "sde_pct")


@dataclass(frozen=True)
class ErrorReport:
    variant: MacVariant
    polarity: Polarity
    width_bits: int
    fan_in: int
    samples: int
    seed: int
    rmse_pct: float
    sde_pct: float

    def as_row(self) -> dict:
        return {
            "variant": self.variant.value,
            "polarity": self.polarity.value,
            "bits": self.width_bits,
            "fan_in": self.fan_in,
            "samples": self.samples,
            "seed": self.seed,
            "rmse_pct": self.rmse_pct,
            "sde_pct": self.sde_pct,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_row())

    def to_csv(self) -> str:
        row = self.as_row()
        head = ",".join(REPORT_FIELDS)
        body = ",".join(repr(row[f]) if isinstance(row[f], float) else str(row[f]) for f in REPORT_FIELDS)
        return f"{head}\n{body}\n"


@dataclass(frozen=True)
class ImageMetrics:
    rmse: float
    psnr_db: float

    def as_dict(self) -> dict:
        return {"rmse": self.rmse, "psnr_db": self.psnr_db}


def exact_dot(x: Sequence[float], w: Sequence[float]) -> float:
    """Double-precision reference dot product."""
    if len(x) != len(w):
        raise ValueError(f"length mismatch: {len(x)} vs {len(w)}")
    return math.fsum(a * b for a, b in zip(x, w))


def error_stats(errors: Sequence[float]) -> tuple[float, float]:
    """(rmse, population stddev) with compensated accumulation."""
    n = len(errors)
    mean_sq = math.fsum(e * e for e in errors) / n
    mean = math.fsum(errors) / n
    rmse = math.sqrt(mean_sq)
    sde = math.sqrt(max(mean_sq - mean * mean, 0.0))
    return rmse, sde


def draw_operands(
    cfg: MacConfig, samples: int, seed: int
) -> tuple[np.ndarray, np.ndarray]:
    """Uniform raw codes for (x, w) operand sets, shape (samples, fan_in) each."""
    lo, hi = raw_range(cfg.width_bits, cfg.polarity)
    rng = np.random.default_rng(seed)
    xs = rng.integers(lo, hi + 1, size=(samples, cfg.fan_in), dtype=np.int64)
    ws = rng.integers(lo, hi + 1, size=(samples, cfg.fan_in), dtype=np.int64)
    return xs, ws


def mac_benchmark(cfg: MacConfig, samples: int, seed: int) -> ErrorReport:
    """RMSE/SDE of the configured MAC over uniformly drawn operand sets.

    Fully deterministic given (cfg, samples, seed); the MUX variant is
    reseeded per sample as seed + sample index.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    xs, ws = draw_operands(cfg, samples, seed)
    errors = []
    for i in range(samples):
        x = [BinaryWord(cfg.width_bits, int(r), cfg.polarity) for r in xs[i]]
        w = [BinaryWord(cfg.width_bits, int(r), cfg.polarity) for r in ws[i]]
        run_cfg = cfg
        if cfg.variant is MacVariant.MUX_HTC:
            run_cfg = MacConfig(cfg.variant, cfg.polarity, cfg.width_bits, cfg.fan_in, seed + i)
        result: MacResult = mac_run(run_cfg, x, w)
        errors.append(result.error)
    rmse, sde = error_stats(errors)
    return ErrorReport(
        cfg.variant, cfg.polarity, cfg.width_bits, cfg.fan_in,
        samples, seed, 100.0 * rmse, 100.0 * sde,
    )


def image_metrics(a, b) -> ImageMetrics:
    """Pixel RMSE on the [0,1] scale and PSNR = 20*log10(1/rmse).

    Accepts ImageBuffer-likes (anything with .pixels) or bare 2-D arrays;
    identical images report infinite PSNR.
    """
    pa = np.asarray(getattr(a, "pixels", a), dtype=np.float64)
    pb = np.asarray(getattr(b, "pixels", b), dtype=np.float64)
    if pa.shape != pb.shape:
        raise ValueError(f"image dimensions differ: {pa.shape} vs {pb.shape}")
    rmse = float(np.sqrt(np.mean((pa - pb) ** 2)))
    psnr = math.inf if rmse == 0.0 else 20.0 * math.log10(1.0 / rmse)
    return ImageMetrics(rmse, psnr)
