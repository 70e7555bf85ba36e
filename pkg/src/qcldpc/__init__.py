"""Batched QC-LDPC block decoding and pipelined LDPC convolutional decoding.

Quick tour:

>>> import numpy as np, qcldpc
>>> exp = qcldpc.multiplicative_shifts(2, 4, 16)      # small (2,4)-regular code
>>> layout = qcldpc.build_edge_layout(qcldpc.expand_qc(exp))
>>> y = qcldpc.simulate_block(qcldpc.ChannelConfig(3.0, 0.5, seed=1, gamma=4),
...                           layout.n_vars)
>>> res = qcldpc.decode_batch(layout, y, qcldpc.ebn0_to_sigma(3.0, 0.5), 20)
>>> res.hard_bits.shape
(4, 64)

The same exponent matrix unwraps into a convolutional code decoded on the fly:

>>> code = qcldpc.unwrap_qc(exp)
>>> dec = qcldpc.StreamDecoder(code, processors=3, gamma=4)
"""

from .codes import (CodeFormatError, CodeStats, EdgeLayout, ExponentMatrix,
                    SparseParityCheck, build_edge_layout, code_stats,
                    expand_qc, infer_qc_structure, load_code,
                    multiplicative_shifts, save_code)
from .bp import (DecodeResult, MessageBatch, channel_llrs, check_node_update,
                 decode_batch, decode_llr_batch, hard_decision_and_syndrome,
                 init_messages, variable_node_update)
from .convolutional import DecodedFrame, LdpcccCode, StreamDecoder, unwrap_qc
from .channel import ChannelConfig, ebn0_to_sigma, lane_normals, simulate_block
from .reference import exact_posterior_llr, reference_window_decoder
from .harness import (CSV_COLUMNS, PointResult, SimulationConfig,
                      bench_throughput, run_block_simulation,
                      run_stream_simulation, write_csv, write_jsonl)

__version__ = "0.1.0"

__all__ = [
    "CodeFormatError", "CodeStats", "EdgeLayout", "ExponentMatrix",
    "SparseParityCheck", "build_edge_layout", "code_stats", "expand_qc",
    "infer_qc_structure", "load_code", "multiplicative_shifts", "save_code",
    "DecodeResult", "MessageBatch", "channel_llrs", "check_node_update",
    "decode_batch", "decode_llr_batch", "hard_decision_and_syndrome",
    "init_messages", "variable_node_update",
    "DecodedFrame", "LdpcccCode", "StreamDecoder", "unwrap_qc",
    "ChannelConfig", "ebn0_to_sigma", "lane_normals", "simulate_block",
    "exact_posterior_llr", "reference_window_decoder",
    "CSV_COLUMNS", "PointResult", "SimulationConfig", "bench_throughput",
    "run_block_simulation", "run_stream_simulation", "write_csv",
    "write_jsonl",
]
