"""Small Monte-Carlo sweep comparing block and stream decoding.

Uses the simulation harness on a desk-size member of the bundled code
family so the whole sweep finishes in well under a minute.  The CLI runs
the same campaigns on the full-size code:

    qcldpc block  --code code-a --ebn0 3.2 --stop-errors 300
    qcldpc stream --code code-a --ebn0 3.1 --processors 20
"""

import sys

from qcldpc import (SimulationConfig, build_edge_layout, expand_qc,
                    multiplicative_shifts, run_block_simulation,
                    run_stream_simulation, unwrap_qc, write_csv)

exp = multiplicative_shifts(4, 24, 16)
layout = build_edge_layout(expand_qc(exp))
code = unwrap_qc(exp)
points = [2.0, 2.5, 3.0, 3.5]

block_cfg = SimulationConfig("family-p16", points, iterations=20, gamma=32,
                             stop_block_errors=50, max_frames=30_000, seed=1)
stream_cfg = SimulationConfig("family-p16", points, processors=5, gamma=32,
                              stop_block_errors=50, max_frames=30_000, seed=1)

print(f"block code: {layout.n_checks} x {layout.n_vars}; stream frames: "
      f"{code.c} symbols, window {5 * (code.ms + 1)} slots\n")

block = run_block_simulation(layout, block_cfg)
stream = run_stream_simulation(code, stream_cfg)
write_csv(block + stream, sys.stdout)

print("\nFER side by side (stream sees 5 iterations per frame, block 20):")
for b, s in zip(block, stream):
    print(f"  {b.ebn0_db:3.1f} dB   block {b.fer:8.5f}   stream {s.fer:8.5f}")
