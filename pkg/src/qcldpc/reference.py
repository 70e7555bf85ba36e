"""Brute-force references the fast decoders are tested against.

Nothing here is batched or optimized.  exact_posterior_llr marginalizes by
enumerating every codeword, so it is exact for any graph; on cycle-free codes
sum-product must reproduce it to floating-point accuracy once messages have
crossed the graph diameter.  reference_window_decoder replays the streaming
decoder's slot schedule directly on the semi-infinite matrix definition
(absolute layer/frame indices, per-node loops, no processor groups, no
circulant reuse), which pins down every scheduling and indexing choice of the
pipelined implementation bit for bit.
"""

from __future__ import annotations

import numpy as np
from scipy.special import logsumexp

from .bp import L_MAX, TANH_CLAMP
from .codes import SparseParityCheck
from .convolutional import LdpcccCode

__all__ = ["exact_posterior_llr", "reference_window_decoder"]


def exact_posterior_llr(h: SparseParityCheck, mu: np.ndarray) -> np.ndarray:
    """Exact bitwise posterior LLRs by codeword enumeration.

    Parameters
    ----------
    h : SparseParityCheck
        Any parity-check matrix with at most 20 columns.
    mu : ndarray, shape (N,)
        Channel LLRs ln P(y|0)/P(y|1) per bit.

    Returns
    -------
    ndarray, shape (N,)
        ln P(c_n = 0 | y, code) / P(c_n = 1 | y, code).  A bit forced by the
        code gives +/-inf.
    """
    mu = np.asarray(mu, dtype=np.float64)
    n = mu.size
    if n > 20:
        raise ValueError("enumeration over 2^N words is limited to N <= 20")
    words = (np.arange(1 << n, dtype=np.uint32)[:, None] >> np.arange(n)) & 1
    words = words.astype(np.uint8)
    valid = np.ones(1 << n, dtype=bool)
    for cols in h.rows:
        valid &= (words[:, cols].sum(axis=1) & 1) == 0
    # weight ratios only need the mu-dependent part: log w(c) = -sum c_n mu_n
    logw = -(words[valid].astype(np.float64) @ mu)
    wbits = words[valid]
    post = np.empty(n)
    with np.errstate(divide="ignore"):
        for i in range(n):
            one = wbits[:, i] == 1
            num = logsumexp(logw[~one]) if (~one).any() else -np.inf
            den = logsumexp(logw[one]) if one.any() else -np.inf
            post[i] = num - den
    return post


def _check_update(vals: np.ndarray) -> np.ndarray:
    # same ops, same sequential order as the batched/pipelined check update
    t = np.tanh(0.5 * vals)
    d = t.size
    fwd = np.empty(d)
    bwd = np.empty(d)
    fwd[0] = 1.0
    for k in range(1, d):
        fwd[k] = fwd[k - 1] * t[k - 1]
    bwd[d - 1] = 1.0
    for k in range(d - 2, -1, -1):
        bwd[k] = bwd[k + 1] * t[k + 1]
    prod = np.clip(fwd * bwd, -1.0 + TANH_CLAMP, 1.0 - TANH_CLAMP)
    return np.clip(2.0 * np.arctanh(prod), -L_MAX, L_MAX)


def reference_window_decoder(code: LdpcccCode, processors: int, llr_frames):
    """Decode a finite stream by direct replay of the pipelined schedule.

    Parameters
    ----------
    code : LdpcccCode
    processors : int
        Pipeline depth I; each frame receives I iterations before emission.
    llr_frames : sequence of ndarray, shape (c,)
        Channel LLRs of the pushed frames (a single stream, unbatched).

    Returns
    -------
    (bits, posteriors)
        Two lists of length len(llr_frames): hard decisions (uint8) and
        posterior LLRs per frame, including the zero-LLR tail padding the
        streaming decoder's flush applies.
    """
    period = code.ms + 1
    window = processors * period
    k_frames = len(llr_frames)
    p, sub_j, sub_l, lam = code.p, code.sub_j, code.sub_l, code.lam
    shifts = code.exp.shifts

    def grid(s, f):
        return shifts[
            (s % lam) * sub_j : (s % lam + 1) * sub_j,
            (f % lam) * sub_l : (f % lam + 1) * sub_l,
        ]

    mu = {}
    msgs = {}  # (layer s, frame f) -> (cb, sub_l) message array, NaN where no edge
    bits = [None] * k_frames
    posts = [None] * k_frames
    rr = np.arange(p)

    for t in range(k_frames + window - 1):
        # frame t enters; its column couples layers t .. t+ms
        mu_t = np.asarray(llr_frames[t], dtype=np.float64) if t < k_frames \
            else np.zeros(code.c)
        mu[t] = mu_t
        for d in range(period):
            s = t + d
            g = grid(s, t)
            a = np.full((code.cb, sub_l), np.nan)
            for br in range(sub_j):
                for bc in range(sub_l):
                    if g[br, bc] >= 0:
                        a[br * p + rr, bc] = mu_t[bc * p + (rr + g[br, bc]) % p]
            msgs[(s, t)] = a

        # check phase: processor i refreshes layer t - (i-1)(ms+1)
        for i in range(1, processors + 1):
            s = t - (i - 1) * period
            if s < 0:
                break
            frames = [s - code.ms + d for d in range(period) if s - code.ms + d >= 0]
            for r in range(code.cb):
                br = r // p
                slots, vals = [], []
                for f in frames:
                    g = grid(s, f)
                    for bc in range(sub_l):
                        if g[br, bc] >= 0:
                            slots.append((f, bc))
                            vals.append(msgs[(s, f)][r, bc])
                if not slots:
                    continue
                alpha = _check_update(np.array(vals))
                for (f, bc), a in zip(slots, alpha):
                    msgs[(s, f)][r, bc] = a

        # variable phase: processor i refreshes frame t - i(ms+1) + 1; the
        # frame leaving processor I is emitted
        for i in range(1, processors + 1):
            j = t - i * period + 1
            if j < 0:
                break
            emit = i == processors
            post = np.empty(code.c) if emit else None
            for v in range(code.c):
                bc, cc = divmod(v, p)
                slots, vals = [], []
                for d in range(period):
                    s2 = j + d
                    g = grid(s2, j)
                    for br in range(sub_j):
                        if g[br, bc] >= 0:
                            r = br * p + (cc - g[br, bc]) % p
                            slots.append((s2, r))
                            vals.append(msgs[(s2, j)][r, bc])
                total = mu[j][v]
                for val in vals:
                    total = total + val
                if emit:
                    post[v] = total
                else:
                    for (s2, r), val in zip(slots, vals):
                        msgs[(s2, j)][r, bc] = np.clip(total - val, -L_MAX, L_MAX)
            if emit and j < k_frames:
                posts[j] = np.clip(post, -L_MAX, L_MAX)
                bits[j] = (posts[j] < 0).astype(np.uint8)

    return bits, posts
