"""LDPC convolutional codes obtained by unwrapping QC-LDPC block codes.

Unwrapping partitions the parity-check matrix of a QC-LDPC code into a
Lambda x Lambda grid of sub-blocks, where Lambda = gcd(J, L), splits it along
the diagonal and rewinds the two halves into the first Lambda block columns
of a semi-infinite, periodically time-varying matrix.  Row group s of that
matrix ("check layer" c_s) contains the sub-blocks labelled by LUT_c[s mod T]
acting on frames s - m_s .. s; frame column f contains the sub-blocks
labelled by LUT_v[f mod T] acting on layers f .. f + m_s.  Here T = Lambda is
the period and m_s = Lambda - 1 the syndrome-former memory.

The streaming decoder runs I pipelined processors, each applying one
check-layer update and one variable-frame update per time slot, so an emitted
frame has passed through I full iterations.  Messages live in I copies of the
base code's edge space (one per processor group); channel LLRs live in a ring
of I*(m_s+1) frame slots.  A frame pushed at slot t reuses exactly the slots
freed by the frame emitted at slot t-1.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .bp import L_MAX, TANH_CLAMP, channel_llrs
from .codes import ExponentMatrix

__all__ = ["LdpcccCode", "DecodedFrame", "unwrap_qc", "StreamDecoder"]


@dataclasses.dataclass(frozen=True, eq=False)
class _Gather:
    """Padded local gather table; pads carry index -1 and a True mask bit."""

    idx: np.ndarray
    pad: np.ndarray | None


class LdpcccCode:
    """Unwrapped (convolutional) form of a QC-LDPC block code.

    Attributes
    ----------
    exp : ExponentMatrix
        The source block code's shift grid.
    lam : int
        Partition size Lambda = gcd(J, L); also the period T and m_s + 1.
    ms : int
        Syndrome-former memory, Lambda - 1.
    c, cb : int
        Symbols per frame (L/Lambda * p) and checks per layer (J/Lambda * p);
        b = c - cb information symbols enter per frame.
    label_grid : ndarray, shape (lam, lam)
        Row-major sub-block labels of the partition grid.
    lut_c : ndarray, shape (lam, lam)
        lut_c[s mod T][d] labels the sub-block coupling layer s to frame
        s - ms + d (oldest frame first).
    lut_v : ndarray, shape (lam, lam)
        lut_v[f mod T][d] labels the sub-block coupling frame f to layer
        f + d.
    lut_sub : list of ndarray
        lut_sub[label] is that sub-block's (J/Lambda, L/Lambda) shift grid.
    """

    def __init__(self, exp: ExponentMatrix):
        j, l = exp.block_rows, exp.block_cols
        lam = math.gcd(j, l)
        if lam < 2:
            raise ValueError(
                f"gcd(J, L) = {lam}: the shift grid cannot be partitioned into "
                "a square sub-block grid, so there is nothing to unwrap"
            )
        self.exp = exp
        self.lam = lam
        self.ms = lam - 1
        self.p = exp.p
        self.sub_j = j // lam
        self.sub_l = l // lam
        self.c = self.sub_l * exp.p
        self.cb = self.sub_j * exp.p
        self.label_grid = np.arange(lam * lam, dtype=np.int64).reshape(lam, lam)

        d = np.arange(lam, dtype=np.int64)
        # layer row kappa couples frames kappa-ms..kappa: labels (kappa, kappa+1+d mod lam)
        kap = np.arange(lam, dtype=np.int64)[:, None]
        self.lut_c = self.label_grid[kap, (kap + 1 + d[None, :]) % lam]
        # frame column phi couples layers phi..phi+ms: labels (phi+d mod lam, phi)
        phi = np.arange(lam, dtype=np.int64)[:, None]
        self.lut_v = self.label_grid[(phi + d[None, :]) % lam, phi]

        self.lut_sub = [
            exp.shifts[
                (lbl // lam) * self.sub_j : (lbl // lam + 1) * self.sub_j,
                (lbl % lam) * self.sub_l : (lbl % lam + 1) * self.sub_l,
            ]
            for lbl in range(lam * lam)
        ]

        # flat edge space of one full copy of the base matrix, ordered by label
        self.sub_edge_count = np.array(
            [int((g >= 0).sum()) * self.p for g in self.lut_sub], dtype=np.int64
        )
        self.sub_offset = np.zeros(lam * lam, dtype=np.int64)
        np.cumsum(self.sub_edge_count[:-1], out=self.sub_offset[1:])
        self.edge_count = int(self.sub_edge_count.sum())

        self._check_tables = [self._build_check_table(g) for g in self.lut_sub]
        self._var_tables = [self._build_var_table(g) for g in self.lut_sub]

    @property
    def period(self) -> int:
        return self.lam

    @property
    def rate_bound(self) -> float:
        return (self.c - self.cb) / self.c

    def _row_ptr(self, grid: np.ndarray):
        # local edges are row-major within a sub-block, block-col ascending
        w = (grid >= 0).sum(axis=1)
        per_row = np.repeat(w, self.p)
        ptr = np.zeros(self.cb + 1, dtype=np.int64)
        np.cumsum(per_row, out=ptr[1:])
        return ptr, per_row

    def _build_check_table(self, grid: np.ndarray) -> _Gather:
        ptr, per_row = self._row_ptr(grid)
        wmax = int(per_row.max()) if per_row.size else 0
        idx = ptr[:-1, None] + np.arange(wmax, dtype=np.int64)[None, :]
        pad = np.arange(wmax)[None, :] >= per_row[:, None]
        idx[pad] = -1
        return _Gather(idx, pad if pad.any() else None)

    def _build_var_table(self, grid: np.ndarray) -> _Gather:
        ptr, _ = self._row_ptr(grid)
        bc = np.repeat(np.arange(self.sub_l, dtype=np.int64), self.p)
        cc = np.tile(np.arange(self.p, dtype=np.int64), self.sub_l)
        idx = np.full((self.c, self.sub_j), -1, dtype=np.int64)
        pad = np.zeros((self.c, self.sub_j), dtype=bool)
        for br in range(self.sub_j):
            live = np.flatnonzero(grid[br] >= 0)
            pos_of_bc = np.full(self.sub_l, -1, dtype=np.int64)
            pos_of_bc[live] = np.arange(live.size)
            s = grid[br, bc]
            r = br * self.p + (cc - s) % self.p
            col_pad = s < 0
            idx[:, br] = np.where(col_pad, -1, ptr[r] + pos_of_bc[bc])
            pad[:, br] = col_pad
        return _Gather(idx, pad if pad.any() else None)


def unwrap_qc(exp: ExponentMatrix) -> LdpcccCode:
    """Derive the unwrapped convolutional code of a QC-LDPC block code.

    Raises
    ------
    ValueError
        When gcd(J, L) < 2, since the diagonal cut needs a square partition
        grid of at least 2 x 2 sub-blocks.
    """
    return LdpcccCode(exp)


@dataclasses.dataclass
class DecodedFrame:
    """One emitted frame: lane-major hard bits and posterior LLRs.

    tail is True for frames forced out by flush (their decoding windows were
    padded with zero-LLR virtual frames).
    """

    frame_index: int
    hard_bits: np.ndarray
    posteriors: np.ndarray
    tail: bool = False


class StreamDecoder:
    """Pipelined streaming decoder with I processors over gamma lanes.

    Each time slot accepts one frame of gamma * c received values, performs
    one check-layer update and one variable-frame update per processor, and
    (once the pipeline is full) emits the frame leaving processor I, which by
    then has received I full decoding iterations.  The emitted frame at slot
    t is frame t - I*(m_s+1) + 1; the first emission happens at slot
    I*(m_s+1) - 1.
    """

    def __init__(self, code: LdpcccCode, processors: int, gamma: int = 1):
        if processors < 1:
            raise ValueError("need at least one processor")
        if gamma < 1:
            raise ValueError("gamma must be positive")
        self.code = code
        self.processors = processors
        self.gamma = gamma
        self.period = code.ms + 1
        self.window = processors * self.period  # pipeline depth in slots
        self.t = 0  # next slot index == number of frames pushed
        self._flushed = False
        # I processor groups, each one full copy of the base edge space,
        # plus one scratch row absorbing padded reads/writes
        self._msg = np.zeros((processors * code.edge_count + 1, gamma))
        self._dummy = processors * code.edge_count
        # channel LLR ring: one slot per in-flight frame
        self._mu = np.zeros((self.window, code.c, gamma))

    @property
    def channel_memory(self) -> np.ndarray:
        """Channel LLR ring, shape (I*(m_s+1), c, gamma)."""
        return self._mu

    @property
    def message_memory(self) -> np.ndarray:
        """Edge message packages, shape (I, base edge count, gamma)."""
        return self._msg[:-1].reshape(self.processors, self.code.edge_count, self.gamma)

    def push_frame(self, y_frame: np.ndarray, sigma: float) -> DecodedFrame | None:
        """Feed one received frame (gamma, c); return an emitted frame or None."""
        if self._flushed:
            raise RuntimeError("decoder already flushed; create a new one")
        y = np.atleast_2d(np.asarray(y_frame, dtype=np.float64))
        if y.shape != (self.gamma, self.code.c):
            raise ValueError(f"expected frame shape {(self.gamma, self.code.c)}, got {y.shape}")
        mu = np.ascontiguousarray(channel_llrs(y, sigma).T)
        return self._advance(mu, tail=False)

    def flush(self) -> list:
        """Push zero-LLR virtual frames until every real frame has exited.

        Returns the remaining I*(m_s+1) - 1 in-flight real frames (fewer if
        the stream was shorter than the pipeline), flagged as tail frames.
        Virtual frames are never emitted.  The decoder cannot be pushed to
        afterwards.
        """
        if self._flushed:
            raise RuntimeError("decoder already flushed")
        out = []
        for _ in range(self.window - 1):
            frame = self._advance(None, tail=True)
            if frame is not None:
                out.append(frame)
        self._flushed = True
        return out

    # ------------------------------------------------------------------
    # schedule
    # ------------------------------------------------------------------

    def _advance(self, mu, tail: bool) -> DecodedFrame | None:
        code, t, period = self.code, self.t, self.period
        msg = self._msg

        # frame t enters: channel slot t mod window, message group
        # (t div period) mod I, sub-blocks LUT_v[t mod period]
        tau = t % self.window
        phi = t % period
        base = ((t // period) % self.processors) * code.edge_count
        self._mu[tau] = 0.0 if mu is None else mu
        mu_t = self._mu[tau]
        for d in range(period):
            gather = code._var_tables[code.lut_v[phi, d]]
            msg[self._flat(base + code.sub_offset[code.lut_v[phi, d]], gather)] = \
                mu_t[:, None, :]
        msg[self._dummy] = 0.0

        # check phase: processor i refreshes layer t - (i-1)*period; every
        # layer index s shares kappa = s mod period = phi
        for i in range(1, self.processors + 1):
            s = t - (i - 1) * period
            if s < 0:
                break
            parts, pads = [], []
            for d in range(period):
                f = s - code.ms + d
                if f < 0:
                    continue  # bootstrap: absent frames drop out of the product
                lbl = code.lut_c[phi, d]
                g = (f // period) % self.processors
                gather = code._check_tables[lbl]
                parts.append(self._flat(g * code.edge_count + code.sub_offset[lbl], gather))
                pads.append(gather.pad)
            idx = parts[0] if len(parts) == 1 else np.concatenate(parts, axis=1)
            vals = msg[idx]
            tanh = np.tanh(0.5 * vals)
            if any(p is not None for p in pads):
                mask = np.concatenate(
                    [p if p is not None else np.zeros(a.shape, bool)
                     for p, a in zip(pads, parts)], axis=1)
                tanh[mask] = 1.0
            prod = _exclusive_products(tanh)
            np.clip(prod, -1.0 + TANH_CLAMP, 1.0 - TANH_CLAMP, out=prod)
            alpha = 2.0 * np.arctanh(prod)
            np.clip(alpha, -L_MAX, L_MAX, out=alpha)
            msg[idx] = alpha
            msg[self._dummy] = 0.0

        # variable phase: processor i refreshes frame t - i*period + 1; the
        # frame leaving processor I is emitted with its posterior
        emitted = None
        for i in range(1, self.processors + 1):
            j = t - i * period + 1
            if j < 0:
                break
            phj = j % period
            gbase = ((j // period) % self.processors) * code.edge_count
            parts = [
                self._flat(gbase + code.sub_offset[code.lut_v[phj, d]],
                           code._var_tables[code.lut_v[phj, d]])
                for d in range(period)
            ]
            idx = np.concatenate(parts, axis=1)
            vals = msg[idx]  # (c, J, gamma); padded reads are 0.0
            total = self._mu[j % self.window].copy()
            for k in range(vals.shape[1]):
                total += vals[:, k]
            if i == self.processors:
                post = np.clip(total, -L_MAX, L_MAX)
                bits = (post < 0).astype(np.uint8)
                emitted = DecodedFrame(
                    frame_index=j,
                    hard_bits=np.ascontiguousarray(bits.T),
                    posteriors=np.ascontiguousarray(post.T),
                    tail=tail,
                )
                # clear the emitted frame's slots for reuse by the next push
                msg[idx] = 0.0
                self._mu[j % self.window] = 0.0
            else:
                beta = np.clip(total[:, None, :] - vals, -L_MAX, L_MAX)
                msg[idx] = beta
            msg[self._dummy] = 0.0

        self.t = t + 1
        return emitted

    def _flat(self, base: int, gather: _Gather) -> np.ndarray:
        if gather.pad is None:
            return base + gather.idx
        return np.where(gather.pad, self._dummy, base + gather.idx)


def _exclusive_products(t: np.ndarray) -> np.ndarray:
    # same sequential forward/backward order as the block decoder so a
    # scalar replay of the schedule reproduces every float bit for bit
    d = t.shape[1]
    fwd = np.empty_like(t)
    bwd = np.empty_like(t)
    fwd[:, 0] = 1.0
    for k in range(1, d):
        np.multiply(fwd[:, k - 1], t[:, k - 1], out=fwd[:, k])
    bwd[:, d - 1] = 1.0
    for k in range(d - 2, -1, -1):
        np.multiply(bwd[:, k + 1], t[:, k + 1], out=bwd[:, k])
    return fwd * bwd
