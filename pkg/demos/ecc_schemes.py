"""Three ways to put a rewriting code behind a noisy-read ECC.

conjugated    the rewrite states are BCH codewords themselves; no cells
              are reserved, but the rewriting rate is low.
concatenated  one long rewriting code inside a [8191,7671] BCH; the 520
              parity cells are reserved at first-write time.
chained       eight short blocks; each block's BCH parity rides inside
              the next block's message, and only the last block's 160
              parity bits occupy reserved cells.
"""

import numpy as np

from womkit import (
    SimConfig,
    analytic_pd,
    build_chain_scheme,
    build_concat_scheme,
    build_conjugate_pair,
    chain_report,
    concat_report,
    conjugated_report,
    run_scheme_trials,
)

P_RAW = 1.3e-3   # raw bit error rate of the storage medium

print("building the three page layouts ...")
reports = [
    conjugated_report(build_conjugate_pair(3, 1, 3, 2), P_RAW),
    concat_report(build_concat_scheme(), P_RAW),
    chain_report(build_chain_scheme(), P_RAW),
]

print(f"\n{'scheme':>14} {'cells':>6} {'reserved':>9} {'R_WOM':>7} {'P_D':>10}")
for rep in reports:
    print(f"{rep.scheme:>14} {rep.n_total:>6} {rep.alpha:>8.1%} "
          f"{rep.R_WOM:>7.4f} {rep.P_D:>10.3g}")

# The 1e-16 regime is purely analytic; the 511-cell conjugated layout is
# weak enough to watch failing for real.  Monte Carlo at the same raw
# error rate, decode errors counted per block:
pair = build_conjugate_pair(3, 1, 3, 2)
cfg = SimConfig(
    code={"family": "conjugate"},
    trials=2000,
    master_seed=7,
    betas=[0.6],
    p_raw=P_RAW,
)
report, counts = run_scheme_trials(cfg, pair)
lo, hi = counts["decode_ci"]
block_tail = analytic_pd(511, 3, P_RAW, weight="block")
print(f"\nconjugated, measured: {counts['decode_block_errors']}/{counts['trials']} "
      f"block decode errors, CI ({lo:.3g}, {hi:.3g})")
print(f"conjugated, analytic block tail: {block_tail:.3g}")
print(f"analytic value inside the measured CI: {lo <= block_tail <= hi}")
