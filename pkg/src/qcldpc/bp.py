"""Batched sum-product decoding of LDPC block codes.

The decoder runs gamma codewords in lock-step.  Every Tanner-graph edge k
owns a message package: gamma contiguous float64 values, one per lane, stored
as row k of a single (E, gamma) array so package k occupies flat positions
[k*gamma, (k+1)*gamma).  One check-node or variable-node update is then a set
of elementwise array operations over all edges and lanes at once; no per-lane
control flow exists anywhere.

Update equations (flooding schedule, LLR domain, all-zero-friendly signs):

    mu_n            = 2 y_n / sigma^2                    (channel LLR)
    alpha_mn        = 2 atanh( prod_{n' in N(m)\\n} tanh(beta_mn' / 2) )
    beta_mn         = mu_n + sum_{m' in M(n)\\m} alpha_m'n
    beta_n          = mu_n + sum_{m in M(n)} alpha_mn    (posterior)

Hard decision: bit = 0 iff beta_n >= 0.  All LLR-domain quantities saturate
at +/- L_MAX; tanh-domain products are clamped away from +/-1 before atanh.

The exclusive products and sums run as explicit sequential loops over the
degree axis (not cumprod/sum reductions) so each lane's arithmetic is a fixed
op sequence independent of batch shape; identical inputs give bitwise
identical outputs for any gamma.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .codes import EdgeLayout

__all__ = [
    "L_MAX",
    "TANH_CLAMP",
    "MessageBatch",
    "DecodeResult",
    "channel_llrs",
    "init_messages",
    "check_node_update",
    "variable_node_update",
    "hard_decision_and_syndrome",
    "decode_llr_batch",
    "decode_batch",
]

# saturation bound for every LLR-domain quantity (messages and posteriors)
L_MAX = 50.0
# tanh-domain clamp; caps |alpha| at 2*atanh(1 - TANH_CLAMP) ~ 28.33
TANH_CLAMP = 1e-12


def channel_llrs(y: np.ndarray, sigma: float) -> np.ndarray:
    """Channel LLRs 2 y / sigma^2 for unit-energy BPSK, saturated at L_MAX."""
    return np.clip(2.0 * y / (sigma * sigma), -L_MAX, L_MAX)


class MessageBatch:
    """Per-edge message packages for gamma codewords decoded in lock-step.

    Attributes
    ----------
    gamma : int
    mu : ndarray, shape (N, gamma)
        Channel LLRs, fixed for the life of the batch.
    packages : ndarray, shape (E, gamma)
        Row k is edge k's package; the buffer is C-contiguous, so package k
        occupies flat positions [k*gamma, (k+1)*gamma).  Holds
        variable-to-check messages after a variable update and
        check-to-variable messages after a check update.
    """

    def __init__(self, layout: EdgeLayout, mu: np.ndarray):
        self.gamma = mu.shape[1]
        self.mu = mu
        # one scratch row at index E: reads must see a neutral value and
        # writes through padded gather tables land here
        self._buf = np.zeros((layout.edge_count + 1, self.gamma), dtype=np.float64)
        self._buf[: layout.edge_count] = mu[layout.edge_var]

    @property
    def packages(self) -> np.ndarray:
        return self._buf[:-1]


@dataclasses.dataclass
class DecodeResult:
    """Outcome of a batched decode.

    hard_bits and posteriors are lane-major (gamma, N).  syndrome_ok[g] is
    True when lane g's hard decision satisfies every check.  iterations_run[g]
    is the iteration after which lane g's result was frozen (early stop) or
    the full iteration count.
    """

    hard_bits: np.ndarray
    posteriors: np.ndarray
    syndrome_ok: np.ndarray
    iterations_run: np.ndarray


def init_messages(layout: EdgeLayout, y: np.ndarray, sigma: float) -> MessageBatch:
    """Seed a message batch with channel LLRs.

    Parameters
    ----------
    layout : EdgeLayout
    y : ndarray, shape (gamma, N)
        Received values, one row per lane.
    sigma : float
        AWGN noise standard deviation.
    """
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if y.shape[1] != layout.n_vars:
        raise ValueError(f"y has {y.shape[1]} symbols, layout has {layout.n_vars}")
    return MessageBatch(layout, np.ascontiguousarray(channel_llrs(y, sigma).T))


def _exclusive_products(t: np.ndarray) -> np.ndarray:
    """Per-slot product of all other slots along axis 1, sequential order."""
    m, d, g = t.shape
    fwd = np.empty_like(t)
    bwd = np.empty_like(t)
    fwd[:, 0] = 1.0
    for k in range(1, d):
        np.multiply(fwd[:, k - 1], t[:, k - 1], out=fwd[:, k])
    bwd[:, d - 1] = 1.0
    for k in range(d - 2, -1, -1):
        np.multiply(bwd[:, k + 1], t[:, k + 1], out=bwd[:, k])
    return fwd * bwd


def check_node_update(batch: MessageBatch, layout: EdgeLayout,
                      active: np.ndarray | None = None) -> None:
    """Replace every package with its check-to-variable message, in place.

    active, when given, is a (gamma,) bool mask; lanes marked False keep
    their previous packages (used to freeze converged lanes).
    """
    if layout.edge_count == 0:
        return
    buf = batch._buf
    t = np.tanh(0.5 * buf)
    t[-1] = 1.0  # padded gathers must be neutral under multiplication
    if layout.check_regular is not None:
        g = t[:-1].reshape(layout.n_checks, layout.check_regular, batch.gamma)
    else:
        g = t[layout.check_pad]
    prod = _exclusive_products(g)
    np.clip(prod, -1.0 + TANH_CLAMP, 1.0 - TANH_CLAMP, out=prod)
    alpha = 2.0 * np.arctanh(prod)
    np.clip(alpha, -L_MAX, L_MAX, out=alpha)
    if active is not None:
        old = buf[layout.check_pad] if layout.check_regular is None else \
            buf[:-1].reshape(alpha.shape)
        alpha = np.where(active, alpha, old)
    if layout.check_regular is not None:
        buf[:-1] = alpha.reshape(layout.edge_count, batch.gamma)
    else:
        buf[layout.check_pad] = alpha
        buf[-1] = 0.0


def variable_node_update(batch: MessageBatch, layout: EdgeLayout,
                         active: np.ndarray | None = None) -> np.ndarray:
    """Replace packages with variable-to-check messages; return posteriors.

    Returns
    -------
    ndarray, shape (N, gamma)
        Saturated posterior LLRs mu_n + sum alpha_mn.  Outgoing messages are
        the same running total minus the edge's own incoming alpha, so the
        exclusive-sum identity beta_n - beta_mn = alpha_mn is exact whenever
        saturation does not bind.
    """
    buf = batch._buf
    a = buf[layout.var_pad]  # (N, dv_max, gamma); pad rows read 0.0
    total = batch.mu.copy()
    for k in range(a.shape[1]):
        total += a[:, k]
    beta = np.clip(total[:, None, :] - a, -L_MAX, L_MAX)
    post = np.clip(total, -L_MAX, L_MAX)
    if active is not None:
        beta = np.where(active, beta, buf[layout.var_pad])
    buf[layout.var_pad] = beta
    buf[-1] = 0.0
    return post


def hard_decision_and_syndrome(layout: EdgeLayout, posteriors: np.ndarray):
    """Hard bits (0 iff LLR >= 0) and per-lane syndrome satisfaction.

    Returns
    -------
    bits : ndarray of uint8, shape (N, gamma)
    ok : ndarray of bool, shape (gamma,)
        True where every check has even parity.
    """
    bits = (posteriors < 0).astype(np.uint8)
    if layout.edge_count == 0:
        return bits, np.ones(posteriors.shape[1], dtype=bool)
    ebits = bits[layout.edge_var]  # (E, gamma) edge-aligned bit values
    if layout.check_regular is not None:
        par = ebits.reshape(layout.n_checks, layout.check_regular, -1).sum(axis=1)
    else:
        padded = np.concatenate([ebits, np.zeros((1, ebits.shape[1]), np.uint8)])
        par = padded[layout.check_pad].sum(axis=1)
    ok = ~np.any(par & 1, axis=0)
    return bits, ok


def decode_llr_batch(layout: EdgeLayout, mu: np.ndarray, iterations: int,
                     early_stop: bool = False) -> DecodeResult:
    """Decode a batch given channel LLRs directly.

    Parameters
    ----------
    layout : EdgeLayout
    mu : ndarray, shape (gamma, N)
        Channel LLRs, one row per lane (saturated internally).
    iterations : int
        Flooding iterations; always run in full unless early_stop.
    early_stop : bool
        When True a lane freezes once its syndrome is satisfied: its packages
        stop updating and its result is the posterior at the freezing
        iteration.  iterations_run records where each lane stopped.
    """
    if iterations < 1:
        raise ValueError("need at least one iteration")
    mu = np.atleast_2d(np.asarray(mu, dtype=np.float64))
    mu = np.clip(mu, -L_MAX, L_MAX)
    gamma = mu.shape[0]
    batch = MessageBatch(layout, np.ascontiguousarray(mu.T))

    bits = np.zeros((layout.n_vars, gamma), dtype=np.uint8)
    post = np.zeros((layout.n_vars, gamma), dtype=np.float64)
    ok = np.zeros(gamma, dtype=bool)
    iters = np.full(gamma, iterations, dtype=np.int64)
    active = np.ones(gamma, dtype=bool)

    for it in range(1, iterations + 1):
        mask = active if early_stop else None
        check_node_update(batch, layout, mask)
        new_post = variable_node_update(batch, layout, mask)
        if early_stop:
            new_bits, new_ok = hard_decision_and_syndrome(layout, new_post)
            post[:, active] = new_post[:, active]
            bits[:, active] = new_bits[:, active]
            ok[active] = new_ok[active]
            stopped = active & new_ok
            iters[stopped] = it
            active &= ~new_ok
            if not active.any():
                break
        else:
            post = new_post
    if not early_stop:
        bits, ok = hard_decision_and_syndrome(layout, post)
    return DecodeResult(
        hard_bits=np.ascontiguousarray(bits.T),
        posteriors=np.ascontiguousarray(post.T),
        syndrome_ok=ok,
        iterations_run=iters,
    )


def decode_batch(layout: EdgeLayout, y: np.ndarray, sigma: float, iterations: int,
                 early_stop: bool = False) -> DecodeResult:
    """Decode received values y (gamma, N) over AWGN with noise sigma."""
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    if y.shape[1] != layout.n_vars:
        raise ValueError(f"y has {y.shape[1]} symbols, layout has {layout.n_vars}")
    return decode_llr_batch(layout, channel_llrs(y, sigma), iterations, early_stop)
