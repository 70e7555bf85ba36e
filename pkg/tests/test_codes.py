"""Code model: expansion, edge layout, stats, alist/qc file formats."""

import numpy as np
import pytest

from qcldpc.codes import (CodeFormatError, ExponentMatrix, SparseParityCheck,
                          build_edge_layout, code_stats, expand_qc,
                          infer_qc_structure, load_code, multiplicative_shifts,
                          save_code)

# hand-checkable 4x8 matrix; the edge tables below follow from the
# row-major numbering rule by hand and are frozen here
H_4X8_ROWS = [[1, 3, 4, 7], [0, 1, 2, 5], [2, 5, 6, 7], [0, 3, 4, 6]]
LUT_C_4X8 = [[0, 1, 2, 3], [4, 5, 6, 7], [8, 9, 10, 11], [12, 13, 14, 15]]
LUT_V_4X8 = [[4, 12], [0, 5], [6, 8], [1, 13], [2, 14], [7, 9], [10, 15], [3, 11]]

# irregular 5x10 matrix, row weights 3..7
H_5X10_ROWS = [
    [0, 1, 2, 3, 5, 7, 9],
    [0, 2, 3, 6, 7, 8, 9],
    [1, 3, 7],
    [0, 4, 6, 7, 8, 9],
    [2, 3, 4, 6, 8],
]


def small_h():
    return SparseParityCheck(8, H_4X8_ROWS)


def test_edge_layout_matches_worked_example():
    layout = build_edge_layout(small_h())
    assert layout.edge_count == 16
    for m, want in enumerate(LUT_C_4X8):
        assert layout.check_edges(m).tolist() == want
    assert [v.tolist() for v in layout.var_edges] == LUT_V_4X8
    # row-major edge ids: edge e sits under column edge_var[e]
    flat_cols = [c for row in H_4X8_ROWS for c in row]
    assert layout.edge_var.tolist() == flat_cols


def test_irregular_example_stats():
    h = SparseParityCheck(10, H_5X10_ROWS)
    st = code_stats(h)
    assert st.edge_count == 28
    assert (st.row_weight_min, st.row_weight_max) == (3, 7)
    assert not st.regular
    assert st.rate_bound == 0.5
    assert not st.degenerate


def test_irregular_layout_padding():
    h = SparseParityCheck(10, H_5X10_ROWS)
    layout = build_edge_layout(h)
    assert layout.edge_count == 28
    assert layout.check_regular is None
    e = layout.edge_count
    # short rows are padded with the scratch index
    assert layout.check_pad.shape == (5, 7)
    assert (layout.check_pad[2] == e).sum() == 4
    # every real edge appears exactly once in each table
    real = layout.check_pad[layout.check_pad < e]
    assert sorted(real.tolist()) == list(range(e))
    realv = layout.var_pad[layout.var_pad < e]
    assert sorted(realv.tolist()) == list(range(e))


def test_expand_qc_is_rolled_identity():
    exp = ExponentMatrix([[0, 1, -1], [2, -1, 4]], 5)
    h = expand_qc(exp)
    dense = h.to_dense()
    eye = np.eye(5, dtype=np.uint8)
    blocks = [[np.roll(eye, s, axis=1) if s >= 0 else np.zeros((5, 5), np.uint8)
               for s in row] for row in exp.shifts]
    assert np.array_equal(dense, np.block(blocks))


def test_expand_qc_shift_zero_is_identity_block():
    exp = ExponentMatrix([[0]], 4)
    assert np.array_equal(expand_qc(exp).to_dense(), np.eye(4, dtype=np.uint8))


def test_exponent_matrix_validation():
    with pytest.raises(ValueError):
        ExponentMatrix([[5]], 5)  # shift must be < p
    with pytest.raises(ValueError):
        ExponentMatrix([[-2]], 5)  # only -1 marks a zero block


def test_sparse_parity_check_rejects_duplicates():
    with pytest.raises(ValueError):
        SparseParityCheck(4, [[0, 0, 1]])


def test_dense_round_trip():
    h = SparseParityCheck(10, H_5X10_ROWS)
    assert SparseParityCheck.from_dense(h.to_dense()) == h


def test_multiplicative_shifts_grid():
    exp = multiplicative_shifts(3, 5, 7)
    assert exp.shifts.tolist() == [
        [0, 0, 0, 0, 0],
        [0, 1, 2, 3, 4],
        [0, 2, 4, 6, 1],
    ]
    assert exp.edge_count == 15 * 7


def test_code_a_dimensions():
    # expected structure of the shipped code: (4,24)-regular, p=422
    h, exp = load_code(_bundled_path())
    assert (exp.block_rows, exp.block_cols, exp.p) == (4, 24, 422)
    assert (h.m, h.n) == (1688, 10128)
    st = code_stats(h)
    assert st.edge_count == 40512
    assert st.regular
    assert (st.row_weight_min, st.col_weight_max) == (24, 4)


def _bundled_path():
    from importlib import resources

    return str(resources.files("qcldpc.data") / "code_a.qc")


def test_alist_round_trip(tmp_path):
    h = SparseParityCheck(10, H_5X10_ROWS)
    path = tmp_path / "code.alist"
    save_code(str(path), h)
    h2, exp = load_code(str(path))
    assert exp is None
    assert h2 == h
    # idempotent: re-serialization is byte-identical
    path2 = tmp_path / "again.alist"
    save_code(str(path2), h2)
    assert path.read_text() == path2.read_text()


def test_qc_round_trip(tmp_path):
    exp = multiplicative_shifts(2, 4, 9)
    h = expand_qc(exp)
    path = tmp_path / "code.qc"
    save_code(str(path), h, exp)
    h2, exp2 = load_code(str(path))
    assert h2 == h
    assert exp2.p == 9 and np.array_equal(exp2.shifts, exp.shifts)


def test_qc_format_requires_exponent(tmp_path):
    h = SparseParityCheck(10, H_5X10_ROWS)
    with pytest.raises(ValueError):
        save_code(str(tmp_path / "x.qc"), h)


def test_alist_error_reports_line(tmp_path):
    path = tmp_path / "bad.alist"
    path.write_text("4 2\n1 2\n1 1 1 1\n2 2\n1\nx\n1\n2\n1 3\n2 4\n")
    with pytest.raises(CodeFormatError, match=r"bad\.alist:6"):
        load_code(str(path))


def test_alist_rejects_inconsistent_adjacency(tmp_path):
    h = SparseParityCheck(8, H_4X8_ROWS)
    path = tmp_path / "c.alist"
    save_code(str(path), h)
    lines = path.read_text().splitlines()
    # swap two column entries in the first check row: halves now disagree
    idx = 4 + h.n  # first check adjacency line
    lines[idx] = "1 2 5 8"
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(CodeFormatError):
        load_code(str(path))


def test_infer_qc_structure_recovers_blocks():
    exp = multiplicative_shifts(2, 4, 8)
    got = infer_qc_structure(expand_qc(exp))
    assert got is not None
    assert got.p == 8 and np.array_equal(got.shifts, exp.shifts)


def test_infer_qc_structure_rejects_unstructured():
    h = SparseParityCheck(10, H_5X10_ROWS)
    assert infer_qc_structure(h) is None


def test_degenerate_flag():
    h = SparseParityCheck(4, [[0, 1], []])
    assert code_stats(h).degenerate
