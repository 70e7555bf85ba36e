"""Unwrapping to convolutional form and the pipelined stream decoder."""

import numpy as np
import pytest

from qcldpc.bp import channel_llrs
from qcldpc.codes import ExponentMatrix, load_code, multiplicative_shifts
from qcldpc.convolutional import LdpcccCode, StreamDecoder, unwrap_qc
from qcldpc.reference import reference_window_decoder

# period-4 sub-block label tables, hand-checkable from the diagonal cut
LUT_C_LAM4 = [[1, 2, 3, 0], [6, 7, 4, 5], [11, 8, 9, 10], [12, 13, 14, 15]]
LUT_V_LAM4 = [[0, 4, 8, 12], [5, 9, 13, 1], [10, 14, 2, 6], [15, 3, 7, 11]]


def code_a_prime(p=8):
    return unwrap_qc(multiplicative_shifts(4, 24, p))


def test_lambda4_lookup_tables():
    code = code_a_prime()
    assert code.lut_c.tolist() == LUT_C_LAM4
    assert code.lut_v.tolist() == LUT_V_LAM4
    assert np.array_equal(code.label_grid, np.arange(16).reshape(4, 4))


def test_unwrap_requires_common_factor():
    with pytest.raises(ValueError):
        unwrap_qc(multiplicative_shifts(3, 5, 7))  # gcd(3, 5) = 1


def test_code_a_prime_parameters():
    h, exp = load_code(_bundled_path())
    code = unwrap_qc(exp)
    assert code.lam == 4 and code.period == 4
    assert code.ms == 3
    assert code.c == 2532 and code.cb == 422
    assert code.c - code.cb == 2110
    assert code.edge_count == 40512
    assert code.rate_bound == pytest.approx(5 / 6)


def _bundled_path():
    from importlib import resources

    return str(resources.files("qcldpc.data") / "code_a.qc")


def test_sub_block_grids_partition_the_exponent_matrix():
    code = code_a_prime()
    s = code.exp.shifts
    for lbl in range(16):
        r, c = divmod(lbl, 4)
        want = s[r * code.sub_j:(r + 1) * code.sub_j,
                 c * code.sub_l:(c + 1) * code.sub_l]
        assert np.array_equal(code.lut_sub[lbl], want)


def test_memory_shapes():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=3, gamma=5)
    assert dec.window == 3 * 4
    assert dec.channel_memory.shape == (12, code.c, 5)
    assert dec.message_memory.shape == (3, code.edge_count, 5)


def test_first_emission_slot():
    code = code_a_prime()  # ms = 3
    dec = StreamDecoder(code, processors=2)  # window = 8
    y = np.ones((1, code.c))
    out = [dec.push_frame(y, 0.8) for _ in range(8)]
    assert all(o is None for o in out[:7])
    assert out[7] is not None and out[7].frame_index == 0
    assert not out[7].tail


def test_tail_flags_and_flush_count():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=2)
    emitted = []
    for _ in range(20):
        fr = dec.push_frame(np.ones((1, code.c)), 0.8)
        if fr is not None:
            emitted.append(fr)
    rest = dec.flush()
    assert [f.frame_index for f in emitted] == list(range(13))
    assert [f.frame_index for f in rest] == list(range(13, 20))
    assert not any(f.tail for f in emitted)
    assert all(f.tail for f in rest)


def test_short_stream_flush():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=2)
    for _ in range(3):  # shorter than the pipeline
        assert dec.push_frame(np.ones((1, code.c)), 0.8) is None
    rest = dec.flush()
    assert [f.frame_index for f in rest] == [0, 1, 2]
    assert all(f.tail for f in rest)


def test_push_after_flush_raises():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=2)
    dec.push_frame(np.ones((1, code.c)), 0.8)
    dec.flush()
    with pytest.raises(RuntimeError):
        dec.push_frame(np.ones((1, code.c)), 0.8)
    with pytest.raises(RuntimeError):
        dec.flush()


def test_frame_shape_validation():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=2, gamma=2)
    with pytest.raises(ValueError):
        dec.push_frame(np.ones((2, code.c + 1)), 0.8)
    with pytest.raises(ValueError):
        StreamDecoder(code, processors=0)


def test_noiseless_stream_decodes_to_zero():
    code = code_a_prime()
    dec = StreamDecoder(code, processors=3, gamma=2)
    frames = []
    for _ in range(15):
        fr = dec.push_frame(np.ones((2, code.c)), 0.7)
        if fr is not None:
            frames.append(fr)
    frames.extend(dec.flush())
    assert len(frames) == 15
    assert not any(f.hard_bits.any() for f in frames)


def test_matches_reference_replay():
    # one noisy stream, bits and posteriors both bit-identical
    code = code_a_prime()
    I, K = 2, 20
    rng = np.random.default_rng(17)
    sigma = 0.9
    ys = rng.normal(1.0, sigma, size=(K, code.c))
    dec = StreamDecoder(code, I)
    got = []
    for y in ys:
        fr = dec.push_frame(y[None, :], sigma)
        if fr is not None:
            got.append(fr)
    got.extend(dec.flush())
    llrs = [channel_llrs(y[None, :], sigma)[0] for y in ys]
    ref_bits, ref_posts = reference_window_decoder(code, I, llrs)
    for fr in got:
        assert np.array_equal(fr.hard_bits[0], ref_bits[fr.frame_index])
        assert np.array_equal(fr.posteriors[0], ref_posts[fr.frame_index])


def test_batched_stream_lanes_are_independent():
    code = code_a_prime()
    I, K = 2, 12
    rng = np.random.default_rng(23)
    sigma = 1.0
    ys = rng.normal(1.0, sigma, size=(K, 3, code.c))
    wide = StreamDecoder(code, I, gamma=3)
    wide_out = {}
    for t in range(K):
        fr = wide.push_frame(ys[t], sigma)
        if fr is not None:
            wide_out[fr.frame_index] = fr
    for fr in wide.flush():
        wide_out[fr.frame_index] = fr
    for lane in range(3):
        dec = StreamDecoder(code, I, gamma=1)
        single = {}
        for t in range(K):
            fr = dec.push_frame(ys[t, lane][None, :], sigma)
            if fr is not None:
                single[fr.frame_index] = fr
        for fr in dec.flush():
            single[fr.frame_index] = fr
        for j in range(K):
            assert np.array_equal(wide_out[j].posteriors[lane], single[j].posteriors[0])
