"""Code model for quasi-cyclic LDPC block codes.

A QC-LDPC code is specified by an exponent matrix: a J x L grid of circulant
shifts over p x p identity blocks.  Shift s >= 0 places ones at
(row r, col (r + s) mod p) inside the block; shift -1 marks an all-zero block.
This module expands exponent matrices into sparse parity-check matrices, builds
the flat edge layout used by the batched decoder, computes degree statistics,
and reads/writes the two on-disk formats (alist and qc-exponent).
"""

from __future__ import annotations

import dataclasses
import math
import os

import numpy as np

__all__ = [
    "CodeFormatError",
    "ExponentMatrix",
    "SparseParityCheck",
    "EdgeLayout",
    "CodeStats",
    "multiplicative_shifts",
    "expand_qc",
    "build_edge_layout",
    "code_stats",
    "infer_qc_structure",
    "load_code",
    "save_code",
]


class CodeFormatError(ValueError):
    """Raised for malformed code files; the message names the offending line."""


@dataclasses.dataclass(frozen=True, eq=False)
class ExponentMatrix:
    """Circulant-shift grid defining a QC-LDPC code.

    Parameters
    ----------
    shifts : ndarray of int, shape (J, L)
        Entries in {-1, 0, ..., p-1}; -1 marks an all-zero block.
    p : int
        Circulant size.
    """

    shifts: np.ndarray
    p: int

    def __post_init__(self):
        shifts = np.asarray(self.shifts, dtype=np.int64)
        if shifts.ndim != 2 or shifts.size == 0:
            raise ValueError("shifts must be a non-empty 2-D array")
        if self.p < 1:
            raise ValueError(f"circulant size must be positive, got {self.p}")
        if shifts.min() < -1 or shifts.max() >= self.p:
            raise ValueError(f"shifts must lie in [-1, {self.p - 1}]")
        object.__setattr__(self, "shifts", shifts)

    @property
    def block_rows(self) -> int:
        return self.shifts.shape[0]

    @property
    def block_cols(self) -> int:
        return self.shifts.shape[1]

    @property
    def edge_count(self) -> int:
        # one edge per row of every non-zero block
        return int((self.shifts >= 0).sum()) * self.p


def multiplicative_shifts(block_rows: int, block_cols: int, p: int) -> ExponentMatrix:
    """Exponent matrix with shifts (j*l) mod p (array-code construction).

    For p > max(j-j') * max(l-l') the expanded graph has no 4-cycles, which
    makes this a convenient source of well-behaved test and demo codes.
    """
    j = np.arange(block_rows, dtype=np.int64)[:, None]
    l = np.arange(block_cols, dtype=np.int64)[None, :]
    return ExponentMatrix((j * l) % p, p)


class SparseParityCheck:
    """Sparse binary parity-check matrix stored as per-check column lists.

    Parameters
    ----------
    n_vars : int
        Number of variable nodes (columns).
    check_cols : sequence of 1-D int arrays
        check_cols[m] lists the columns with a one in row m, strictly
        increasing.  Duplicates raise, since a repeated entry would cancel
        modulo 2 and the graph would no longer match the matrix.
    """

    def __init__(self, n_vars: int, check_cols):
        if n_vars < 1:
            raise ValueError("need at least one variable node")
        rows = []
        for m, cols in enumerate(check_cols):
            c = np.asarray(cols, dtype=np.int64)
            if c.ndim != 1:
                raise ValueError(f"check {m}: column list must be 1-D")
            if c.size:
                if c.min() < 0 or c.max() >= n_vars:
                    raise ValueError(f"check {m}: column index out of range")
                if np.any(np.diff(c) <= 0):
                    if np.unique(c).size != c.size:
                        raise ValueError(f"check {m}: duplicate column")
                    c = np.sort(c)
            rows.append(c)
        self.n = int(n_vars)
        self.rows = rows

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def edge_count(self) -> int:
        return int(sum(r.size for r in self.rows))

    def row_weights(self) -> np.ndarray:
        return np.array([r.size for r in self.rows], dtype=np.int64)

    def col_weights(self) -> np.ndarray:
        w = np.zeros(self.n, dtype=np.int64)
        for r in self.rows:
            w[r] += 1
        return w

    def to_dense(self) -> np.ndarray:
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        for m_, r in enumerate(self.rows):
            h[m_, r] = 1
        return h

    @classmethod
    def from_dense(cls, h) -> "SparseParityCheck":
        h = np.asarray(h)
        return cls(h.shape[1], [np.flatnonzero(row) for row in h])

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseParityCheck):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and all(np.array_equal(a, b) for a, b in zip(self.rows, other.rows))
        )


def expand_qc(exp: ExponentMatrix) -> SparseParityCheck:
    """Expand an exponent matrix into its sparse parity-check matrix.

    Block (j, l) with shift s contributes ones at rows j*p + r and columns
    l*p + (r + s) mod p for r = 0..p-1.
    """
    p = exp.p
    r = np.arange(p, dtype=np.int64)
    rows = []
    for j in range(exp.block_rows):
        live = np.flatnonzero(exp.shifts[j] >= 0)
        if live.size == 0:
            cols = np.zeros((p, 0), dtype=np.int64)
        else:
            s = exp.shifts[j, live]
            # (p, n_live): column of each edge in block-row j, per circulant row
            cols = live[None, :] * p + (r[:, None] + s[None, :]) % p
            cols = np.sort(cols, axis=1)
        rows.extend(cols)
    return SparseParityCheck(exp.block_cols * p, rows)


@dataclasses.dataclass(frozen=True, eq=False)
class EdgeLayout:
    """Flat edge indexing for a parity-check matrix.

    Edges are numbered row-major: check by check, left to right within a
    check.  All per-edge decoder state lives in flat arrays indexed by these
    IDs, so check m's messages occupy the contiguous range
    check_ptr[m]:check_ptr[m+1].

    Attributes
    ----------
    edge_count : int
    check_ptr : ndarray, shape (M+1,)
        Contiguous per-check edge ranges (CSR-style offsets).
    edge_var : ndarray, shape (E,)
        Variable node of each edge.
    var_edges : list of ndarray
        var_edges[n] lists the edge IDs of variable n in increasing order.
    check_regular : int or None
        Common check degree when every check has the same weight, else None.
    """

    edge_count: int
    check_ptr: np.ndarray
    edge_var: np.ndarray
    var_edges: list
    check_regular: int | None
    # padded gather tables; the pad index edge_count points at a scratch slot
    check_pad: np.ndarray = dataclasses.field(repr=False, default=None)
    var_pad: np.ndarray = dataclasses.field(repr=False, default=None)

    @property
    def n_checks(self) -> int:
        return self.check_ptr.size - 1

    @property
    def n_vars(self) -> int:
        return len(self.var_edges)

    def check_edges(self, m: int) -> np.ndarray:
        return np.arange(self.check_ptr[m], self.check_ptr[m + 1], dtype=np.int64)


def build_edge_layout(h: SparseParityCheck) -> EdgeLayout:
    """Number the Tanner-graph edges of ``h`` and build gather tables."""
    weights = h.row_weights()
    check_ptr = np.zeros(h.m + 1, dtype=np.int64)
    np.cumsum(weights, out=check_ptr[1:])
    e = int(check_ptr[-1])
    edge_var = np.concatenate([r for r in h.rows]) if e else np.zeros(0, dtype=np.int64)

    # per-variable edge lists: stable sort by variable keeps edge IDs increasing
    order = np.argsort(edge_var, kind="stable")
    col_w = h.col_weights()
    var_edges = list(np.split(order, np.cumsum(col_w)[:-1]))

    regular = int(weights[0]) if h.m and np.all(weights == weights[0]) else None

    dc_max = int(weights.max()) if h.m else 0
    check_pad = np.full((h.m, dc_max), e, dtype=np.int64)
    for m, (a, b) in enumerate(zip(check_ptr[:-1], check_ptr[1:])):
        check_pad[m, : b - a] = np.arange(a, b)

    dv_max = int(col_w.max()) if col_w.size else 0
    var_pad = np.full((h.n, dv_max), e, dtype=np.int64)
    for n, ids in enumerate(var_edges):
        var_pad[n, : ids.size] = ids

    return EdgeLayout(
        edge_count=e,
        check_ptr=check_ptr,
        edge_var=edge_var,
        var_edges=var_edges,
        check_regular=regular,
        check_pad=check_pad,
        var_pad=var_pad,
    )


@dataclasses.dataclass(frozen=True)
class CodeStats:
    """Degree statistics and rate bound of a parity-check matrix."""

    n: int
    m: int
    edge_count: int
    row_weight_min: int
    row_weight_max: int
    col_weight_min: int
    col_weight_max: int
    regular: bool
    rate_bound: float
    degenerate: bool


def code_stats(h: SparseParityCheck) -> CodeStats:
    """Edge count, degree ranges, regularity flag and design-rate bound.

    The rate bound 1 - M/N assumes full row rank; a zero-weight row or column
    flags the code degenerate instead of failing.
    """
    rw = h.row_weights()
    cw = h.col_weights()
    return CodeStats(
        n=h.n,
        m=h.m,
        edge_count=h.edge_count,
        row_weight_min=int(rw.min()) if rw.size else 0,
        row_weight_max=int(rw.max()) if rw.size else 0,
        col_weight_min=int(cw.min()) if cw.size else 0,
        col_weight_max=int(cw.max()) if cw.size else 0,
        regular=bool(rw.size and cw.size and np.all(rw == rw[0]) and np.all(cw == cw[0])),
        rate_bound=1.0 - h.m / h.n,
        degenerate=bool((rw.size and rw.min() == 0) or (cw.size and cw.min() == 0)),
    )


def infer_qc_structure(h: SparseParityCheck) -> ExponentMatrix | None:
    """Recover the exponent matrix of ``h`` if it is quasi-cyclic.

    Tries circulant sizes p from large to small (divisors of gcd(M, N)) and
    returns the coarsest valid block structure, or None when only the trivial
    p = 1 works or no structure fits.
    """
    g = math.gcd(h.m, h.n)
    dense = h.to_dense()
    for p in sorted((d for d in range(2, g + 1) if g % d == 0), reverse=True):
        exp = _try_block_structure(dense, p)
        if exp is not None:
            return exp
    return None


def _try_block_structure(dense: np.ndarray, p: int) -> ExponentMatrix | None:
    m, n = dense.shape
    shifts = np.empty((m // p, n // p), dtype=np.int64)
    r = np.arange(p)
    for j in range(m // p):
        for l in range(n // p):
            block = dense[j * p : (j + 1) * p, l * p : (l + 1) * p]
            ones = np.flatnonzero(block[0])
            if ones.size == 0:
                if block.any():
                    return None
                shifts[j, l] = -1
                continue
            if ones.size != 1:
                return None
            s = int(ones[0])
            if not np.array_equal(np.flatnonzero(block)[:], r * p + (r + s) % p):
                return None
            shifts[j, l] = s
    return ExponentMatrix(shifts, p)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

_FORMATS = ("alist", "qc-exponent")


def _detect_format(path: str) -> str:
    ext = os.path.splitext(path)[1].lower()
    if ext == ".alist":
        return "alist"
    if ext == ".qc":
        return "qc-exponent"
    raise CodeFormatError(
        f"{path}: cannot infer format from extension {ext!r}; pass format="
    )


def load_code(path: str, format: str | None = None):
    """Load a code file.

    Parameters
    ----------
    path : str
    format : {'alist', 'qc-exponent'}, optional
        Inferred from the extension (.alist / .qc) when omitted.

    Returns
    -------
    (SparseParityCheck, ExponentMatrix or None)
        The exponent matrix is returned only for the qc-exponent format.
    """
    fmt = format or _detect_format(path)
    if fmt not in _FORMATS:
        raise CodeFormatError(f"unknown format {fmt!r}; expected one of {_FORMATS}")
    with open(path) as fh:
        lines = fh.readlines()
    if fmt == "alist":
        return _parse_alist(path, lines), None
    exp = _parse_qc(path, lines)
    return expand_qc(exp), exp


def save_code(path: str, h: SparseParityCheck, exp: ExponentMatrix | None = None,
              format: str | None = None) -> None:
    """Write a code file; qc-exponent format requires the exponent matrix."""
    fmt = format or _detect_format(path)
    if fmt == "alist":
        text = _render_alist(h)
    elif fmt == "qc-exponent":
        if exp is None:
            raise ValueError("qc-exponent format needs an ExponentMatrix")
        text = _render_qc(exp)
    else:
        raise CodeFormatError(f"unknown format {fmt!r}; expected one of {_FORMATS}")
    with open(path, "w") as fh:
        fh.write(text)


def _ints(path: str, lineno: int, line: str, expect: int | None = None) -> list:
    try:
        vals = [int(tok) for tok in line.split()]
    except ValueError:
        raise CodeFormatError(f"{path}:{lineno}: non-integer token in {line!r}")
    if expect is not None and len(vals) != expect:
        raise CodeFormatError(
            f"{path}:{lineno}: expected {expect} integers, got {len(vals)}"
        )
    return vals


def _parse_alist(path: str, lines: list) -> SparseParityCheck:
    # alist layout: "N M" / "max_col max_row" / col weights / row weights /
    # N variable adjacency lines / M check adjacency lines, 1-based, 0-padded.
    def line(i):
        if i >= len(lines):
            raise CodeFormatError(f"{path}:{i + 1}: unexpected end of file")
        return lines[i]

    n, m = _ints(path, 1, line(0), 2)
    if n < 1 or m < 1:
        raise CodeFormatError(f"{path}:1: matrix dimensions must be positive")
    max_cw, max_rw = _ints(path, 2, line(1), 2)
    col_w = _ints(path, 3, line(2), n)
    row_w = _ints(path, 4, line(3), m)
    if sum(col_w) != sum(row_w):
        raise CodeFormatError(
            f"{path}:4: column weights sum to {sum(col_w)} but row weights to {sum(row_w)}"
        )
    if max(col_w, default=0) > max_cw or max(row_w, default=0) > max_rw:
        raise CodeFormatError(f"{path}:2: declared maximum weight exceeded")

    def adjacency(first, count, weights, limit, kind):
        out = []
        for k in range(count):
            lineno = first + k + 1
            vals = _ints(path, lineno, line(first + k))
            live = [v for v in vals if v != 0]
            if any(v == 0 for v in vals[: len(live)]):
                raise CodeFormatError(f"{path}:{lineno}: zero padding before last entry")
            if len(live) != weights[k]:
                raise CodeFormatError(
                    f"{path}:{lineno}: {kind} {k} lists {len(live)} neighbors, "
                    f"declared weight is {weights[k]}"
                )
            idx = np.array(live, dtype=np.int64) - 1
            if idx.size and (idx.min() < 0 or idx.max() >= limit):
                raise CodeFormatError(f"{path}:{lineno}: neighbor index out of range")
            if np.unique(idx).size != idx.size:
                raise CodeFormatError(f"{path}:{lineno}: duplicate neighbor")
            out.append(np.sort(idx))
        return out

    var_adj = adjacency(4, n, col_w, m, "variable")
    check_adj = adjacency(4 + n, m, row_w, n, "check")

    h = SparseParityCheck(n, check_adj)
    # both halves must describe the same matrix
    cw = h.col_weights()
    from_checks = [[] for _ in range(n)]
    for mm, rr in enumerate(h.rows):
        for v in rr:
            from_checks[v].append(mm)
    for v in range(n):
        if not np.array_equal(np.array(from_checks[v], dtype=np.int64), var_adj[v]):
            raise CodeFormatError(
                f"{path}:{5 + v}: variable {v} adjacency disagrees with check lists"
            )
    if not np.array_equal(cw, np.array(col_w)):
        raise CodeFormatError(f"{path}:3: column weights disagree with adjacency")
    return h


def _render_alist(h: SparseParityCheck) -> str:
    col_w = h.col_weights()
    row_w = h.row_weights()
    var_adj = [[] for _ in range(h.n)]
    for m, r in enumerate(h.rows):
        for v in r:
            var_adj[v].append(m)
    max_cw = int(col_w.max()) if h.n else 0
    max_rw = int(row_w.max()) if h.m else 0

    def padded(ids, width):
        ids = [i + 1 for i in ids]
        return " ".join(str(i) for i in ids + [0] * (width - len(ids)))

    out = [
        f"{h.n} {h.m}",
        f"{max_cw} {max_rw}",
        " ".join(str(w) for w in col_w),
        " ".join(str(w) for w in row_w),
    ]
    out += [padded(var_adj[v], max_cw) for v in range(h.n)]
    out += [padded(list(h.rows[m]), max_rw) for m in range(h.m)]
    return "\n".join(out) + "\n"


def _parse_qc(path: str, lines: list) -> ExponentMatrix:
    # "J L p" header, then J rows of L shifts; '#' starts a comment
    rows = []
    numbered = []
    for i, raw in enumerate(lines):
        body = raw.split("#", 1)[0].strip()
        if body:
            numbered.append((i + 1, body))
    if not numbered:
        raise CodeFormatError(f"{path}:1: empty file")
    lineno, header = numbered[0]
    j, l, p = _ints(path, lineno, header, 3)
    if j < 1 or l < 1 or p < 1:
        raise CodeFormatError(f"{path}:{lineno}: J, L, p must be positive")
    if len(numbered) - 1 != j:
        raise CodeFormatError(
            f"{path}:{lineno}: header declares {j} shift rows, file has {len(numbered) - 1}"
        )
    for lineno, body in numbered[1:]:
        vals = _ints(path, lineno, body, l)
        if min(vals) < -1 or max(vals) >= p:
            raise CodeFormatError(f"{path}:{lineno}: shift outside [-1, {p - 1}]")
        rows.append(vals)
    return ExponentMatrix(np.array(rows, dtype=np.int64), p)


def _render_qc(exp: ExponentMatrix) -> str:
    out = [f"{exp.block_rows} {exp.block_cols} {exp.p}"]
    out += [" ".join(str(int(s)) for s in row) for row in exp.shifts]
    return "\n".join(out) + "\n"
