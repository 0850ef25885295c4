"""Command-line surface: benchmarks, the two image apps, encoders, traces.

Exit codes: 0 success, 1 runtime/data error (unreadable or malformed
inputs), 2 usage error.  BITFLUX_SEED provides a default seed; an
explicit --seed wins.  Every output file gets a sibling manifest
recording the command, config (including the conventions the numbers
depend on), version, timestamp, paths, and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__
from .adders import cycle_sum, dtsa_mac_out, dtsa_step, DtsaState
from .encodings import (
    BinaryWord,
    Polarity,
    StreamFormat,
    decode_stream,
    raw_range,
    stream_from_string,
)
from .generators import LFSR_DEFAULT_SEED, rb_generate, tb_generate
from .mac import MacConfig, MacVariant
from .metrics import image_metrics, mac_benchmark
from .dsp import PgmError, dct_pipeline, fir_filter, gaussian_taps, pgm_read, pgm_write
from .multipliers import htc_mul_stream

VARIANTS = {v.value: v for v in MacVariant}
POLARITIES = {p.value: p for p in Polarity}

NORMALIZATION_NOTE = "percent = 100 * raw dot-product error (natural units, not divided by fan_in)"
DISTRIBUTION_NOTE = "operands uniform over representable raw codes"


def _default_seed() -> int:
    env = os.environ.get("BITFLUX_SEED")
    return int(env) if env else LFSR_DEFAULT_SEED


def _write_manifest(path, command, config, inputs, outputs, seed):
    manifest = {
        "command": command,
        "config": config,
        "version": __version__,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "inputs": list(inputs),
        "outputs": list(outputs),
        "seed": seed,
    }
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def cmd_mac_bench(args) -> int:
    try:
        cfg = MacConfig(
            VARIANTS[args.variant], POLARITIES[args.polarity], args.bits, args.fanin, args.seed
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = mac_benchmark(cfg, args.samples, args.seed)
    text = report.to_csv() if args.format == "csv" else report.to_json() + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        _write_manifest(
            args.out + ".manifest.json",
            "mac-bench",
            {
                "variant": args.variant,
                "polarity": args.polarity,
                "bits": args.bits,
                "fanin": args.fanin,
                "samples": args.samples,
                "format": args.format,
                "normalization": NORMALIZATION_NOTE,
                "distribution": DISTRIBUTION_NOTE,
            },
            [],
            [args.out],
            args.seed,
        )
    else:
        sys.stdout.write(text)
    print(
        f"{args.variant} {args.polarity} N={args.bits} M={args.fanin}: "
        f"rmse={report.rmse_pct:.4f}% sde={report.sde_pct:.4f}%",
        file=sys.stderr,
    )
    return 0


def _run_image_app(args, app: str) -> int:
    try:
        img = pgm_read(args.infile)
    except (OSError, PgmError) as exc:
        print(f"error reading {args.infile}: {exc}", file=sys.stderr)
        return 1
    try:
        if app == "fir":
            cfg = MacConfig(VARIANTS[args.variant], Polarity.UNIPOLAR, args.bits, 6, args.seed)
            kernel = gaussian_taps(args.sigma, 6, args.bits)
            out = fir_filter(img, kernel, cfg)
            metrics = image_metrics(out, img)
            decisions = {"sigma": args.sigma, "taps": [t.raw for t in kernel.taps]}
        else:
            cfg = MacConfig(VARIANTS[args.variant], Polarity.BIPOLAR, args.bits, 4, args.seed)
            out, metrics = dct_pipeline(img, cfg, args.mode)
            decisions = {"mode": args.mode, "intermediate_scaling": "saturate-only (1d); 1/4 per stage (2d)"}
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out_img = args.out_prefix + ".pgm"
    out_metrics = args.out_prefix + ".metrics.json"
    pgm_write(out, out_img)
    payload = {
        "command": app,
        "variant": args.variant,
        "bits": args.bits,
        "seed": args.seed,
        **decisions,
        "reference": "original image",
        "rmse": metrics.rmse,
        "psnr_db": None if metrics.psnr_db == float("inf") else metrics.psnr_db,
    }
    with open(out_metrics, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    _write_manifest(
        args.out_prefix + ".manifest.json",
        app,
        {"variant": args.variant, "bits": args.bits, **decisions},
        [args.infile],
        [out_img, out_metrics],
        args.seed,
    )
    print(f"{app} {args.variant}: psnr={metrics.psnr_db:.2f} dB rmse={metrics.rmse:.4f} -> {out_img}")
    return 0


def cmd_encode(args) -> int:
    polarity = POLARITIES[args.polarity]
    lo, hi = raw_range(args.bits, polarity)
    if not lo <= args.value <= hi:
        print(f"error: raw {args.value} out of range [{lo}, {hi}]", file=sys.stderr)
        return 2
    word = BinaryWord(args.bits, args.value, polarity)
    stream = rb_generate(word) if args.format == "rb" else tb_generate(word)
    print(stream)
    print(f"decoded: {decode_stream(stream)}")
    return 0


def _parse_trace_streams(args) -> list:
    if args.streams:
        streams = [
            stream_from_string(s, StreamFormat.GB, POLARITIES[args.polarity])
            for s in args.streams
        ]
        if len({len(s) for s in streams}) != 1:
            raise ValueError("streams have unequal lengths")
        return streams
    if not (args.x and args.w):
        raise ValueError("need --streams or both --x and --w")
    polarity = POLARITIES[args.polarity]
    xs = [BinaryWord(args.bits, int(v), polarity) for v in args.x.split(",")]
    ws = [BinaryWord(args.bits, int(v), polarity) for v in args.w.split(",")]
    if len(xs) != len(ws):
        raise ValueError("--x and --w must have the same number of operands")
    return [htc_mul_stream(a, b) for a, b in zip(xs, ws)]


def cmd_trace(args) -> int:
    try:
        streams = _parse_trace_streams(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    fan_in = len(streams)
    length = len(streams[0])
    header = ["Cycle"] + [f"M{i+1}" for i in range(fan_in)] + ["CycleSum", "Q_reg", "A", "Y", "Q_next"]
    print("  ".join(f"{h:>8s}" for h in header))
    state = DtsaState(fan_in, length)
    total = 0
    for c in range(length):
        bits = [int(s.bits[c]) for s in streams]
        csum = cycle_sum(bits)
        total += csum
        a = state.q_reg + csum
        q_before = state.q_reg
        y, state = dtsa_step(state, bits)
        row = [c + 1, *bits, csum, q_before, a, y, state.q_reg]
        print("  ".join(f"{v:>8d}" for v in row))
    final = fan_in * state.y_count + state.q_reg
    print(
        f"total_ones={total}  #Y={state.y_count}  remainder={state.q_reg}  "
        f"check: {fan_in}*{state.y_count}+{state.q_reg} == {final}"
    )
    polarity = POLARITIES[args.polarity]
    print(f"MAC_out = {dtsa_mac_out(state.y_count, state.q_reg, length, fan_in, polarity)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bitflux",
        description="Bit-true temporal-computing MAC emulator and benchmark harness",
    )
    parser.add_argument("--version", action="version", version=f"bitflux {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    seed = _default_seed()

    bench = sub.add_parser("mac-bench", help="RMSE/SDE accuracy benchmark of one MAC variant")
    bench.add_argument("--variant", choices=sorted(VARIANTS), required=True)
    bench.add_argument("--polarity", choices=sorted(POLARITIES), default="unipolar")
    bench.add_argument("--bits", type=int, default=8)
    bench.add_argument("--fanin", type=int, default=4)
    bench.add_argument("--samples", type=int, default=10000)
    bench.add_argument("--seed", type=int, default=seed)
    bench.add_argument("--format", choices=["csv", "json"], default="json")
    bench.add_argument("--out", help="report path (stdout if omitted)")
    bench.set_defaults(func=cmd_mac_bench)

    fir = sub.add_parser("fir", help="6-tap Gaussian blur through the chosen MAC")
    fir.add_argument("--in", dest="infile", required=True, metavar="IMAGE.pgm")
    fir.add_argument("--variant", choices=sorted(VARIANTS), required=True)
    fir.add_argument("--sigma", type=float, default=1.0)
    fir.add_argument("--bits", type=int, default=8)
    fir.add_argument("--seed", type=int, default=seed)
    fir.add_argument("--out-prefix", required=True)
    fir.set_defaults(func=lambda a: _run_image_app(a, "fir"))

    dct = sub.add_parser("dct", help="8-point DCT/iDCT round trip through the chosen MAC")
    dct.add_argument("--in", dest="infile", required=True, metavar="IMAGE.pgm")
    dct.add_argument("--variant", choices=sorted(VARIANTS), required=True)
    dct.add_argument("--mode", choices=["1d", "2d"], default="1d")
    dct.add_argument("--bits", type=int, default=8)
    dct.add_argument("--seed", type=int, default=seed)
    dct.add_argument("--out-prefix", required=True)
    dct.set_defaults(func=lambda a: _run_image_app(a, "dct"))

    enc = sub.add_parser("encode", help="print the RB or TB stream of one operand")
    enc.add_argument("--value", type=int, required=True, help="raw integer code")
    enc.add_argument("--bits", type=int, required=True)
    enc.add_argument("--polarity", choices=sorted(POLARITIES), required=True)
    enc.add_argument("--format", choices=["rb", "tb"], required=True)
    enc.set_defaults(func=cmd_encode)

    trace = sub.add_parser("trace", help="cycle-by-cycle threshold-adder table")
    trace.add_argument("--streams", nargs="+", metavar="BITS", help="product bitstreams, cycle 0 first")
    trace.add_argument("--x", help="comma-separated raw operand list")
    trace.add_argument("--w", help="comma-separated raw weight list")
    trace.add_argument("--bits", type=int, default=8)
    trace.add_argument("--polarity", choices=sorted(POLARITIES), default="unipolar")
    trace.set_defaults(func=cmd_trace)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
