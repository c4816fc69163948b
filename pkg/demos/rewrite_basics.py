"""Two generations of writes on one page, no erase in between.

Cells only move from 1 (blank) to 0 (programmed).  The first generation
stores raw data directly, which programs about half the cells.  The
second generation cannot touch those, so it stores its message via a
rewriting code: the message labels a coset of a sparse linear code, and
the encoder picks, inside that coset, a vector that never asks a
programmed cell to come back.
"""

import numpy as np

from womkit import RewriteCode, build_mackay, dec, enc

rng = np.random.default_rng(42)

N = 256

# A rate ~0.39 rewriting code for the second write: 256 - 156 = 100
# message bits, paid for by the freedom to choose among coset members.
gq = build_mackay(n=N, r=156, col_weight=3, seed=7)
code = RewriteCode.from_generator(gq)
print(f"rewriting code: n={code.n} cells, k={code.k} message bits, R_WOM={code.rate:.3f}")

# Generation 1: raw data straight onto the blank page.
data1 = rng.integers(0, 2, N, dtype=np.uint8)
print(f"write 1 (raw): programmed {np.sum(data1 == 0)} of {N} cells")

# Generation 2: cells already at 0 are stuck.  The state vector marks
# them 0 = frozen, 1 = still free.
state = data1.copy()
m2 = rng.integers(0, 2, code.k, dtype=np.uint8)
out = enc(code, m2, state)
print(f"write 2 (coded): success = {out.ok}")

x2 = out.x
# No frozen cell was asked to flip back ...
assert not np.any(x2[state == 0])
# ... and the new message comes back exactly.
assert np.array_equal(dec(code, x2), m2)
print(f"write 2 (coded): programmed {np.sum((x2 == 0) & (state == 1))} more cells,",
      f"decode ok = True")

# Push the same page again at the same rate until the encoder gives up:
# each generation freezes more cells, and once the free fraction drops
# toward the code's rate there is no coset survivor left.
coded_writes = 1
while True:
    state = x2.copy()
    out = enc(code, rng.integers(0, 2, code.k, dtype=np.uint8), state)
    if not out.ok:
        break
    x2 = out.x
    coded_writes += 1
free = np.mean(state)
print(f"the page absorbed 1 raw + {coded_writes} coded generation(s) at rate",
      f"{code.rate:.3f}; it stalled with {free:.0%} of cells free")
