"""Watching the pipelined stream decoder fill, emit, and flush.

I processors each run one sum-product iteration on a different window of
the stream, all in the same time slot.  A frame therefore collects I full
iterations between entering and leaving the pipeline, and one decoded frame
exits per slot once the pipe is full.
"""

import numpy as np

from qcldpc import StreamDecoder, ebn0_to_sigma, multiplicative_shifts, unwrap_qc

code = unwrap_qc(multiplicative_shifts(4, 24, 8))
I = 3
gamma = 4
dec = StreamDecoder(code, processors=I, gamma=gamma)
print(f"m_s = {code.ms}, I = {I}: pipeline depth {dec.window} slots")
print(f"channel memory {dec.channel_memory.shape} (slots x symbols x lanes)")
print(f"message memory {dec.message_memory.shape} (processors x edges x lanes)\n")

ebn0_db = 4.0
sigma = ebn0_to_sigma(ebn0_db, code.rate_bound)
rng = np.random.default_rng(11)

pushed = 30
emitted = []
for t in range(pushed):
    y = 1.0 + sigma * rng.normal(size=(gamma, code.c))
    frame = dec.push_frame(y, sigma)
    if frame is None:
        print(f"slot {t:2d}: pipeline filling")
    else:
        emitted.append(frame)
        errs = int(frame.hard_bits.sum())
        print(f"slot {t:2d}: frame {frame.frame_index:2d} exits after "
              f"{I} iterations, {errs} bit errors across {gamma} lanes")

# flush pads the pipe with zero-LLR virtual frames and drains the leftovers
rest = dec.flush()
emitted.extend(rest)
print(f"\nflush released frames {[f.frame_index for f in rest]} "
      f"(tail={rest[0].tail}: their windows were padded)")

total_bits = pushed * gamma * code.c
total_errs = sum(int(f.hard_bits.sum()) for f in emitted)
latency = dec.window - 1
print(f"\n{pushed} frames decoded, BER {total_errs / total_bits:.2e} "
      f"at {ebn0_db} dB")
print(f"decoding latency: {latency} slots = {latency * code.c} symbols")
