"""How a quasi-cyclic block code unwraps into a convolutional code.

Partitions the shift grid into a Lambda x Lambda grid of sub-blocks
(Lambda = gcd(J, L)), cuts along the diagonal, and re-tiles the pieces into
a diagonally banded semi-infinite matrix.  The label lookup tables say
which sub-block couples each check layer to each frame.
"""

import numpy as np

from qcldpc import multiplicative_shifts, unwrap_qc

# The bundled rate-5/6 family has J=4, L=24: Lambda = 4, so the grid splits
# into 4x4 sub-blocks of one circulant row and six circulant columns each.
exp = multiplicative_shifts(4, 24, 8)  # desk-size member of the family
code = unwrap_qc(exp)

print(f"J={exp.block_rows} L={exp.block_cols} p={exp.p}")
print(f"Lambda = {code.lam}, syndrome-former memory m_s = {code.ms}, "
      f"period T = {code.period}")
print(f"per time slot: {code.c} symbols in, {code.cb} checks completed, "
      f"{code.c - code.cb} information symbols")
print(f"rate bound {code.rate_bound:.4f}\n")

print("sub-block labels (row-major over the partition grid):")
print(code.label_grid)

print("\ncheck-side table: layer s uses labels lut_c[s mod T], oldest frame "
      "first")
print(code.lut_c)
print("so layer 0 combines frames -3..0 through sub-blocks",
      code.lut_c[0].tolist())

print("\nvariable-side table: frame f feeds layers f..f+m_s through "
      "lut_v[f mod T]")
print(code.lut_v)

# Each label indexes a slice of the original shift grid.
print("\nsub-block 0 shift grid (1 x 6 circulants):")
print(code.lut_sub[0])

# Rebuild a stretch of the banded matrix to see the diagonal staircase:
# layer s only touches frames s-m_s..s, so row block s is zero outside them.
span = 6
occupied = np.zeros((span, span), dtype=np.uint8)
for s in range(span):
    for d in range(code.period):
        f = s - code.ms + d
        if 0 <= f < span and (code.lut_sub[code.lut_c[s % code.period][d]] >= 0).any():
            occupied[s, f] = 1
print(f"\noccupancy of the first {span} check layers (columns are frames; "
      "layer s couples frames s-m_s..s, truncated at the stream start):")
for s in range(span):
    print("layer", s, ":", "".join(".X"[b] for b in occupied[s]))
