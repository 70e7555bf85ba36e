"""Command-line front end: block/stream BER-FER sweeps, benchmarks, conversion.

Examples
--------
qcldpc block  --code code-a --ebn0 3.2 3.4 --stop-errors 300 --out block.csv
qcldpc stream --code code-a --ebn0 3.1 --processors 20 --out stream.csv
qcldpc bench  --code code-a --mode block --frames 128 --out bench.jsonl
qcldpc convert mycode.alist mycode.qc
"""

from __future__ import annotations

import argparse
import sys

from .codes import (CodeFormatError, build_edge_layout, expand_qc,
                    infer_qc_structure, load_code, save_code)
from .convolutional import LdpcccCode
from .harness import (SimulationConfig, bench_throughput,
                      run_block_simulation, run_stream_simulation,
                      write_csv, write_jsonl)

BUNDLED = {"code-a": "code_a.qc"}


def _resolve_code(name: str, fmt: str | None):
    """Load ``name`` as a bundled alias or a file path; returns (h, exp, id)."""
    if name in BUNDLED:
        from importlib import resources

        path = resources.files("qcldpc.data") / BUNDLED[name]
        with resources.as_file(path) as p:
            h, exp = load_code(str(p), fmt)
        return h, exp, name
    h, exp = load_code(name, fmt)
    import os

    return h, exp, os.path.splitext(os.path.basename(name))[0]


def _add_common(sub: argparse.ArgumentParser, stream: bool) -> None:
    sub.add_argument("--code", required=True,
                     help="code file (.alist or .qc) or bundled alias: "
                          + ", ".join(sorted(BUNDLED)))
    sub.add_argument("--format", choices=["alist", "qc-exponent"],
                     help="override input format detection")
    sub.add_argument("--ebn0", type=float, nargs="+", required=True,
                     metavar="DB", help="Eb/N0 operating points in dB")
    if stream:
        sub.add_argument("--processors", type=int, default=20,
                         help="pipeline depth I (iterations seen per frame)")
        sub.add_argument("--segment-frames", type=int, default=None,
                         help="counted frames per independent stream segment")
    else:
        sub.add_argument("--iters", type=int, default=30,
                         help="decoding iterations per block")
        sub.add_argument("--early-stop", action="store_true",
                         help="freeze lanes whose syndrome clears")
    sub.add_argument("--gamma", type=int, default=32,
                     help="codewords decoded in lock-step")
    sub.add_argument("--stop-errors", type=int, default=100,
                     help="frame-error target per point")
    sub.add_argument("--max-frames", type=int, default=1_000_000,
                     help="frame cap per point")
    sub.add_argument("--seed", type=int, default=0, help="channel seed")
    sub.add_argument("--workers", type=int, default=1,
                     help="worker processes (counts are worker-invariant)")
    sub.add_argument("--out", default="-", help="output path (default stdout)")


def _config(args, stream: bool, code_id: str) -> SimulationConfig:
    return SimulationConfig(
        code_id=code_id, ebn0_db=list(args.ebn0),
        iterations=getattr(args, "iters", 30),
        processors=getattr(args, "processors", 20),
        gamma=args.gamma, stop_block_errors=args.stop_errors,
        max_frames=args.max_frames, seed=args.seed, workers=args.workers,
        early_stop=getattr(args, "early_stop", False),
        stream_segment_frames=getattr(args, "segment_frames", None),
    )


def _emit(writer, rows, out: str) -> None:
    if out == "-":
        writer(rows, sys.stdout)
    else:
        writer(rows, out)


def _require_qc(h, exp, what: str) -> LdpcccCode:
    if exp is None:
        exp = infer_qc_structure(h)
    if exp is None:
        raise CodeFormatError(f"{what} requires a quasi-cyclic code "
                              "(no circulant block structure found)")
    return LdpcccCode(exp)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="qcldpc",
        description="QC-LDPC block and LDPC convolutional code simulator")
    sp = ap.add_subparsers(dest="command", required=True)

    b = sp.add_parser("block", help="batched block-decoder BER/FER sweep")
    _add_common(b, stream=False)

    s = sp.add_parser("stream", help="pipelined stream-decoder BER/FER sweep")
    _add_common(s, stream=True)

    n = sp.add_parser("bench", help="throughput benchmark (JSON lines)")
    _add_common(n, stream=False)
    n.add_argument("--mode", choices=["block", "stream"], default="block")
    n.add_argument("--processors", type=int, default=20)
    n.add_argument("--frames", type=int, default=256,
                   help="frame budget per setting")

    c = sp.add_parser("convert", help="convert between alist and qc-exponent")
    c.add_argument("input")
    c.add_argument("output")
    c.add_argument("--format", choices=["alist", "qc-exponent"],
                   help="override input format detection")

    args = ap.parse_args(argv)
    try:
        return _run(args)
    except (CodeFormatError, OSError, ValueError) as e:
        print(f"qcldpc: error: {e}", file=sys.stderr)
        return 1


def _run(args) -> int:
    if args.command == "convert":
        h, exp = load_code(args.input, args.format)
        out_fmt = "qc-exponent" if args.output.endswith(".qc") else None
        if args.output.endswith(".qc") and exp is None:
            exp = infer_qc_structure(h)
            if exp is None:
                raise CodeFormatError(
                    f"{args.input} is not quasi-cyclic; cannot write "
                    "qc-exponent format")
        save_code(args.output, h, exp, out_fmt)
        return 0

    h, exp, code_id = _resolve_code(args.code, args.format)

    if args.command == "block":
        layout = build_edge_layout(h)
        rows = run_block_simulation(layout, _config(args, False, code_id))
        _emit(write_csv, rows, args.out)
    elif args.command == "stream":
        code = _require_qc(h, exp, "stream decoding")
        rows = run_stream_simulation(code, _config(args, True, code_id))
        _emit(write_csv, rows, args.out)
    elif args.command == "bench":
        cfg = _config(args, False, code_id)
        if args.mode == "stream":
            code = _require_qc(h, exp, "stream benchmarking")
            recs = bench_throughput(None, cfg, code=code, frames=args.frames)
        else:
            recs = bench_throughput(build_edge_layout(h), cfg,
                                    frames=args.frames)
        _emit(write_jsonl, recs, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
