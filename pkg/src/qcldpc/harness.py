"""Monte-Carlo BER/FER campaigns and throughput benchmarks.

The parallelism unit is one batch of gamma lanes: block mode decodes batches
of gamma codewords, stream mode runs independent finite stream segments of
gamma lanes each.  Every batch/segment draws from its own lane range of the
counter-based channel, and results are consumed in batch order, so counts do
not depend on the worker pool: runs with equal seeds and configs are
bit-reproducible at any worker count.

All-zero codewords are transmitted throughout, so any nonzero hard bit is an
error.  Stream mode counts only frames emitted by pushes (never tail frames
forced out by a flush), i.e. frames whose full decoding window saw real data.
"""

from __future__ import annotations

import dataclasses
import json
import multiprocessing
import time

import numpy as np

from .bp import decode_batch
from .channel import ebn0_to_sigma
from .codes import EdgeLayout
from .convolutional import LdpcccCode, StreamDecoder

__all__ = [
    "SimulationConfig",
    "PointResult",
    "CSV_COLUMNS",
    "run_block_simulation",
    "run_stream_simulation",
    "bench_throughput",
    "write_csv",
    "write_jsonl",
]

CSV_COLUMNS = [
    "code_id", "mode", "ebn0_db", "iters_or_I", "gamma", "frames",
    "bit_errors", "frame_errors", "ber", "fer", "seconds", "frames_per_sec",
    "info_bits_per_sec",
]
# timing-dependent columns, excluded from reproducibility comparisons
TIMING_COLUMNS = ("seconds", "frames_per_sec", "info_bits_per_sec")


@dataclasses.dataclass
class SimulationConfig:
    """Campaign settings shared by block and stream simulations.

    ebn0_db may be a single operating point or a list.  stop_block_errors is
    the frame-error target per point; max_frames caps the effort.  Stream
    segments (independent finite streams used as work units) default to
    2*(pipeline depth - 1) counted frames each.
    """

    code_id: str
    ebn0_db: object
    iterations: int = 30
    processors: int = 20
    gamma: int = 32
    stop_block_errors: int = 100
    max_frames: int = 1_000_000
    seed: int = 0
    workers: int = 1
    early_stop: bool = False
    stream_segment_frames: int | None = None

    def points(self) -> list:
        e = self.ebn0_db
        return [float(x) for x in (e if isinstance(e, (list, tuple, np.ndarray)) else [e])]


@dataclasses.dataclass
class PointResult:
    """One CSV row of a campaign."""

    code_id: str
    mode: str
    ebn0_db: float
    iters_or_i: int
    gamma: int
    frames: int
    bit_errors: int
    frame_errors: int
    ber: float
    fer: float
    seconds: float
    frames_per_sec: float
    info_bits_per_sec: float

    def row(self) -> list:
        return [
            self.code_id, self.mode, f"{self.ebn0_db:g}", self.iters_or_i,
            self.gamma, self.frames, self.bit_errors, self.frame_errors,
            f"{self.ber:.8g}", f"{self.fer:.8g}", f"{self.seconds:.3f}",
            f"{self.frames_per_sec:.3f}", f"{self.info_bits_per_sec:.3f}",
        ]


def write_csv(results, out) -> None:
    """Write PointResults as CSV; ``out`` is a path or a file object."""
    import csv

    def emit(fh):
        w = csv.writer(fh)
        w.writerow(CSV_COLUMNS)
        for r in results:
            w.writerow(r.row())

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w", newline="") as fh:
            emit(fh)


def write_jsonl(records, out) -> None:
    """Write dict records as JSON lines; ``out`` is a path or a file object."""
    def emit(fh):
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as fh:
            emit(fh)


# ---------------------------------------------------------------------------
# block mode
# ---------------------------------------------------------------------------

_WORK = {}


def _init_block(layout, cfg, sigma, lane_base):
    _WORK.update(layout=layout, cfg=cfg, sigma=sigma, lane_base=lane_base)


def _block_task(batch: int):
    from .channel import lane_normals

    layout, cfg, sigma = _WORK["layout"], _WORK["cfg"], _WORK["sigma"]
    lane = _WORK["lane_base"] + batch * cfg.gamma
    y = np.empty((cfg.gamma, layout.n_vars))
    for g in range(cfg.gamma):
        y[g] = 1.0 + sigma * lane_normals(cfg.seed, lane + g, 0, layout.n_vars)
    res = decode_batch(layout, y, sigma, cfg.iterations, cfg.early_stop)
    frame_err = res.hard_bits.any(axis=1)
    return cfg.gamma, int(res.hard_bits.sum()), int(frame_err.sum())


def run_block_simulation(layout: EdgeLayout, config: SimulationConfig) -> list:
    """Sweep the configured Eb/N0 points with the batched block decoder.

    Each point decodes batches until the frame-error target is met or
    max_frames is reached; counts accumulate in batch order.  Returns one
    PointResult per point.
    """
    rate = 1.0 - layout.n_checks / layout.n_vars
    info_bits = layout.n_vars - layout.n_checks
    results = []
    for pi, db in enumerate(config.points()):
        sigma = ebn0_to_sigma(db, rate)
        lane_base = pi << 32  # disjoint lane ranges per operating point
        t0 = time.perf_counter()
        frames = bit_errors = frame_errors = 0

        def done():
            return frame_errors >= config.stop_block_errors or frames >= config.max_frames

        if config.workers <= 1:
            _init_block(layout, config, sigma, lane_base)
            b = 0
            while not done():
                f, be, fe = _block_task(b)
                frames += f; bit_errors += be; frame_errors += fe
                b += 1
        else:
            import itertools
            with multiprocessing.Pool(
                config.workers, initializer=_init_block,
                initargs=(layout, config, sigma, lane_base),
            ) as pool:
                for f, be, fe in pool.imap(_block_task, itertools.count()):
                    frames += f; bit_errors += be; frame_errors += fe
                    if done():
                        break
                pool.terminate()
        dt = time.perf_counter() - t0
        results.append(PointResult(
            code_id=config.code_id, mode="block", ebn0_db=db,
            iters_or_i=config.iterations, gamma=config.gamma, frames=frames,
            bit_errors=bit_errors, frame_errors=frame_errors,
            ber=bit_errors / (frames * layout.n_vars) if frames else 0.0,
            fer=frame_errors / frames if frames else 0.0,
            seconds=dt, frames_per_sec=frames / dt if dt else 0.0,
            info_bits_per_sec=frames * info_bits / dt if dt else 0.0,
        ))
    return results


# ---------------------------------------------------------------------------
# stream mode
# ---------------------------------------------------------------------------


def _init_stream(code, cfg, sigma, pushes, lane_base):
    _WORK.update(code=code, cfg=cfg, sigma=sigma, pushes=pushes, lane_base=lane_base)


def _stream_task(segment: int):
    code, cfg, sigma = _WORK["code"], _WORK["cfg"], _WORK["sigma"]
    pushes = _WORK["pushes"]
    lane = _WORK["lane_base"] + segment * cfg.gamma
    from .channel import lane_normals

    dec = StreamDecoder(code, cfg.processors, cfg.gamma)
    frames = bit_errors = frame_errors = 0
    y = np.empty((cfg.gamma, code.c))
    for t in range(pushes):
        for g in range(cfg.gamma):
            y[g] = 1.0 + sigma * lane_normals(cfg.seed, lane + g, t * code.c, code.c)
        fr = dec.push_frame(y, sigma)
        if fr is not None:
            frames += cfg.gamma
            bit_errors += int(fr.hard_bits.sum())
            frame_errors += int(fr.hard_bits.any(axis=1).sum())
    return frames, bit_errors, frame_errors


def run_stream_simulation(code: LdpcccCode, config: SimulationConfig) -> list:
    """Sweep the configured Eb/N0 points with the pipelined stream decoder.

    Work is split into independent finite stream segments of gamma lanes.
    Only frames emitted by pushes are counted (their decoding windows saw
    real data end to end); the tail a flush would force out is neither
    decoded nor counted.
    """
    window = config.processors * (code.ms + 1)
    counted = config.stream_segment_frames or max(2 * (window - 1), 64)
    pushes = counted + window - 1
    info_bits = code.c - code.cb
    results = []
    for pi, db in enumerate(config.points()):
        sigma = ebn0_to_sigma(db, code.rate_bound)
        lane_base = pi << 32
        t0 = time.perf_counter()
        frames = bit_errors = frame_errors = 0

        def done():
            return frame_errors >= config.stop_block_errors or frames >= config.max_frames

        if config.workers <= 1:
            _init_stream(code, config, sigma, pushes, lane_base)
            seg = 0
            while not done():
                f, be, fe = _stream_task(seg)
                frames += f; bit_errors += be; frame_errors += fe
                seg += 1
        else:
            import itertools
            with multiprocessing.Pool(
                config.workers, initializer=_init_stream,
                initargs=(code, config, sigma, pushes, lane_base),
            ) as pool:
                for f, be, fe in pool.imap(_stream_task, itertools.count()):
                    frames += f; bit_errors += be; frame_errors += fe
                    if done():
                        break
                pool.terminate()
        dt = time.perf_counter() - t0
        results.append(PointResult(
            code_id=config.code_id, mode="stream", ebn0_db=db,
            iters_or_i=config.processors, gamma=config.gamma, frames=frames,
            bit_errors=bit_errors, frame_errors=frame_errors,
            ber=bit_errors / (frames * code.c) if frames else 0.0,
            fer=frame_errors / frames if frames else 0.0,
            seconds=dt, frames_per_sec=frames / dt if dt else 0.0,
            info_bits_per_sec=frames * info_bits / dt if dt else 0.0,
        ))
    return results


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def bench_throughput(layout: EdgeLayout | None, config: SimulationConfig,
                     code: LdpcccCode | None = None, frames: int = 256) -> list:
    """Measure decoded-frames/s for worker counts {1, cores} and gamma {1, default}.

    Runs a fixed frame budget per setting at the first configured Eb/N0 and
    returns JSON-ready records carrying the code identity, mode, dimensions,
    edge count, iteration count/pipeline depth, gamma and worker count.
    Error counts are ignored; the workload is identical across settings.
    """
    cores = multiprocessing.cpu_count()
    records = []
    db = config.points()[0]
    for gamma in sorted({1, config.gamma}):
        for workers in sorted({1, cores}):
            cfg = dataclasses.replace(
                config, gamma=gamma, workers=workers,
                stop_block_errors=2**62, max_frames=frames, ebn0_db=db,
            )
            if code is not None:
                res = run_stream_simulation(code, cfg)[0]
                meta = dict(mode="stream", n=code.c, m=code.cb,
                            edge_count=code.edge_count,
                            iters_or_I=config.processors)
            else:
                res = run_block_simulation(layout, cfg)[0]
                meta = dict(mode="block", n=layout.n_vars, m=layout.n_checks,
                            edge_count=layout.edge_count,
                            iters_or_I=config.iterations)
            records.append(dict(
                code_id=config.code_id, gamma=gamma, workers=workers,
                physical_cores=cores, frames=res.frames,
                seconds=round(res.seconds, 4),
                frames_per_sec=round(res.frames_per_sec, 3),
                info_bits_per_sec=round(res.info_bits_per_sec, 1),
                per_frame_ms=round(1000 * res.seconds / res.frames, 4) if res.frames else None,
                **meta,
            ))
    return records
