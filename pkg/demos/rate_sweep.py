"""Failure-rate waterfall of the sparse rewriting ensemble.

Sweeps the fraction beta of still-writable cells at a fixed rate, then
sweeps the rate at fixed beta = 0.5.  A rewrite at rate R on a page with
a beta fraction of free cells is information-theoretically possible up
to R = beta; the peeling encoder gives up somewhat earlier, and the gap
closes as blocks get longer.
"""

from womkit import SimConfig, run_rewrite_sweep

TRIALS = 400
SEED = 2026


def show(result):
    print(f"  {'point':>7} {'beta':>6} {'rate':>6} {'fail':>10} {'95% CI':>19}")
    for p in result.points:
        ci = f"({p.ci_low:.3g}, {p.ci_high:.3g})"
        print(f"  {p.axis_value:>7g} {p.beta:>6g} {p.rate:>6.3f} "
              f"{p.failures:>5}/{p.trials:<4} {ci:>19}")


print(f"beta sweep, n=1024 at rate 0.39, {TRIALS} trials per point")
cfg = SimConfig(
    code={"family": "mackay", "n": 1024, "r": 625, "col_weight": 3, "seed": 11},
    trials=TRIALS,
    master_seed=SEED,
    betas=[0.40, 0.44, 0.48, 0.52, 0.56, 0.60],
)
show(run_rewrite_sweep(cfg))

print()
print(f"rate sweep, n=1024 at beta=0.5, {TRIALS} trials per point")
cfg = SimConfig(
    code={"family": "mackay", "n": 1024, "col_weight": 3, "seed": 11},
    trials=TRIALS,
    master_seed=SEED,
    axis="rate",
    rates=[0.30, 0.35, 0.40, 0.45],
    beta_fixed=0.5,
)
result = run_rewrite_sweep(cfg)
show(result)

with open("rate-sweep.csv", "w", newline="\n") as fh:
    result.to_csv(fh)
print()
print("wrote rate-sweep.csv")
