"""Acceptance gate: one test per release criterion.

Each test prints a one-line summary of the measured quantity next to its
stated tolerance, so a `pytest -v` run reads as a checklist.
"""

import time

import numpy as np
import pytest

from womkit.constructions import (
    build_bch,
    build_conjugate_pair,
    build_eg_ldpc,
    build_mackay,
    check_rows_in_bch,
)
from womkit.gf2 import BitMatrix
from womkit.rewriting import RewriteCode, bec_mask, check_rewritable, dec, enc, erasure_decode
from womkit.schemes import analytic_pd, build_chain_scheme, build_concat_scheme
from womkit.sim import SimConfig, run_rewrite_sweep, run_scheme_trials

MASTER_SEED = 20260813


@pytest.fixture(scope="module")
def mackay_codes():
    return {
        512: RewriteCode.from_generator(build_mackay(512, 312, 3, seed=1)),
        2048: RewriteCode.from_generator(build_mackay(2048, 1249, 3, seed=1)),
    }


@pytest.fixture(scope="module")
def pair4095():
    return build_conjugate_pair(3, 1, 4, 2)


def test_criterion_01_successful_writes_are_legal_and_decodable(mackay_codes):
    """Every successful encode writes only writable cells and decodes back."""
    t0 = time.time()
    violations = 0
    successes = 0
    for code in mackay_codes.values():
        rng = np.random.default_rng(MASTER_SEED)
        for _ in range(5000):
            s = (rng.random(code.n) < 0.5).astype(np.uint8)
            m = rng.integers(0, 2, size=code.k, dtype=np.uint8)
            out = enc(code, m, s)
            if not out.ok:
                continue
            successes += 1
            if np.any(out.x[s == 0]) or not np.array_equal(dec(code, out.x), m):
                violations += 1
    elapsed = time.time() - t0
    print(f"criterion 1: {violations} violations in {successes} successful writes "
          f"of 10000 trials, {elapsed:.1f}s (limit 60s)")
    assert violations == 0
    assert successes > 5000
    assert elapsed < 60.0


def test_criterion_02_encode_failure_equals_erasure_decode_failure(mackay_codes):
    """The write stall is exactly peeling failure on the complement pattern."""
    mismatches = 0
    branches = set()
    for code in mackay_codes.values():
        rng = np.random.default_rng(MASTER_SEED + 1)
        ones = np.ones(code.n, dtype=np.uint8)
        for _ in range(5000):
            s = (rng.random(code.n) < 0.5).astype(np.uint8)
            m = rng.integers(0, 2, size=code.k, dtype=np.uint8)
            z_prime = rng.integers(0, 2, size=code.n, dtype=np.uint8)
            enc_ok = enc(code, m, s).ok
            peel_ok = erasure_decode(code.gq, bec_mask(z_prime, s ^ ones)) is not None
            mismatches += enc_ok != peel_ok
            branches.add(enc_ok)
    print(f"criterion 2: {mismatches} flag mismatches in 10000 paired trials")
    assert mismatches == 0
    assert branches == {True, False}


def test_criterion_03_success_depends_only_on_the_state():
    """Same flag for 16 messages per state; check_rewritable predicts it."""
    code = RewriteCode.from_generator(build_mackay(512, 310, 3, seed=1))
    rng = np.random.default_rng(MASTER_SEED + 2)
    disagreements = 0
    flags = set()
    for _ in range(1000):
        s = (rng.random(code.n) < 0.5).astype(np.uint8)
        outcomes = {
            enc(code, rng.integers(0, 2, size=code.k, dtype=np.uint8), s).ok
            for _ in range(16)
        }
        if len(outcomes) != 1 or outcomes != {check_rewritable(code, s)}:
            disagreements += 1
        flags |= outcomes
    print(f"criterion 3: {disagreements} disagreements over 1000 states x 16 messages")
    assert disagreements == 0
    assert flags == {True, False}


def test_criterion_04_long_block_failure_rate():
    """n=8000 at rate 0.39, beta=0.5: failure rate below 1e-3."""
    t0 = time.time()
    cfg = SimConfig(
        code={"family": "mackay", "n": 8000, "r": 4880, "col_weight": 3, "seed": MASTER_SEED},
        trials=10_000,
        master_seed=MASTER_SEED,
        betas=[0.5],
        threads=1,
    )
    point = run_rewrite_sweep(cfg).points[0]
    elapsed = time.time() - t0
    print(f"criterion 4: {point.failures}/10000 failures "
          f"(rate {point.failure_rate:.2g}, limit 1e-3), {elapsed:.0f}s single-threaded (limit 600s)")
    assert point.failure_rate < 1e-3
    assert elapsed < 600.0


def test_criterion_05_flagship_code_dimensions(pair4095):
    """Exact dimensions and 4-decimal rewriting rates of the named codes."""
    pair255 = build_conjugate_pair(4, 1, 2, 2)
    pair511 = build_conjugate_pair(3, 1, 3, 2)
    pair63 = build_conjugate_pair(3, 1, 2, 2)

    assert (pair255.eg.n, pair255.eg.k) == (255, 21)
    assert (pair511.eg.n, pair511.eg.k) == (511, 139)
    assert (pair4095.eg.n, pair4095.eg.k) == (4095, 1377)

    assert (build_bch(255, 3).n, build_bch(255, 3).k) == (255, 247)
    assert (build_bch(511, 7).n, build_bch(511, 7).k) == (511, 484)
    assert (build_bch(8191, 81).n, build_bch(8191, 81).k) == (8191, 7671)

    rates = (round(pair255.rate, 4), round(pair511.rate, 4), round(pair4095.rate, 4))
    assert rates == (0.0510, 0.2192, 0.3158)

    # The 63-cell set, with the geometry code's true length of 63.
    assert (pair63.eg.n, pair63.eg.k) == (63, 13)
    assert (pair63.c1.n, pair63.c1.k) == (63, 57)
    assert round(pair63.rate, 4) == 0.1111

    print("criterion 5: dimensions [255,21]/[511,139]/[4095,1377], "
          f"rates {rates} + 63-cell 0.1111, all exact")


def test_criterion_06_incidence_rows_are_bch_codewords(pair4095):
    """All four parameter sets: every incidence row has zero BCH syndrome."""
    sets = []
    for m, mu, s, p in ((4, 1, 2, 2), (3, 1, 2, 2), (3, 1, 3, 2)):
        eg = build_eg_ldpc(m, mu, s, p)
        delta = p ** (mu * s) - 1
        sets.append((eg, build_bch(eg.n, delta)))
    sets.append((pair4095.eg, pair4095.c1))
    for eg, bch in sets:
        assert check_rows_in_bch(eg, bch), f"rows of the [{eg.n},{eg.k}] incidence escape the BCH code"
    print(f"criterion 6: zero syndromes for all {len(sets)} parameter sets")


def test_criterion_07_failure_rate_trend_in_beta():
    """5-point beta grids are nonincreasing; beta=0.5 failure rate <= 1e-2."""
    grids = {
        "[255,13]": ({"family": "conjugate", "m": 4, "mu": 1, "s": 2},
                     [0.08, 0.10, 0.12, 0.15, 0.20, 0.50]),
        "[63,7]": ({"family": "conjugate", "m": 3, "mu": 1, "s": 2},
                   [0.20, 0.275, 0.35, 0.425, 0.50]),
        "[511,112]": ({"family": "conjugate", "m": 3, "mu": 1, "s": 3},
                      [0.30, 0.35, 0.40, 0.45, 0.50]),
    }
    lines = []
    for name, (spec, betas) in grids.items():
        cfg = SimConfig(code=spec, trials=1000, master_seed=MASTER_SEED,
                        betas=betas, threads=4)
        fails = [p.failures for p in run_rewrite_sweep(cfg).points]
        lines.append(f"{name}: {fails}")
        assert all(a >= b for a, b in zip(fails, fails[1:])), f"{name} grid not monotone: {fails}"
        assert fails[0] > 100, f"{name} grid never stresses the code: {fails}"
        assert fails[-1] <= 10, f"{name} beta=0.5 failure rate above 1e-2: {fails}"
    print("criterion 7: " + "; ".join(lines) + " (nonincreasing, endpoint <= 10/1000)")


def test_criterion_08_page_layout_arithmetic():
    """Reserved-cell fractions, rates, and fresh-info totals, exactly."""
    concat = build_concat_scheme()
    chain = build_chain_scheme()
    assert concat.reserved == 520 and concat.inner.n == 8191
    assert float(f"{concat.alpha * 100:.2g}") == 6.3
    assert chain.rho == 160 and chain.blocks * chain.inner.n == 8184
    assert float(f"{chain.alpha * 100:.2g}") == 2.0
    assert np.floor(100 * concat.rate) / 100 == 0.35
    assert round(chain.rate, 2) == 0.19
    assert chain.info_bits == 1360
    print("criterion 8: alpha 6.3%/2.0%, R_WOM 0.35/0.19, fresh info 1360 bits")


def test_criterion_09_reliability_analytic_and_monte_carlo():
    """Analytic tail values in range; empirical CI contains the block tail."""
    deep = analytic_pd(8191, 40, 1.3e-3)
    shallow = analytic_pd(511, 3, 1.3e-3)
    assert 1e-18 <= deep <= 1e-14
    assert 1e-7 <= shallow <= 1e-3

    pair = build_conjugate_pair(3, 1, 3, 2)
    cfg = SimConfig(code={"family": "conjugate"}, trials=10_000,
                    master_seed=MASTER_SEED, betas=[0.6], p_raw=1.3e-3)
    _, counts = run_scheme_trials(cfg, pair)
    lo, hi = counts["decode_ci"]
    block_tail = analytic_pd(511, 3, 1.3e-3, weight="block")
    print(f"criterion 9: P_D {deep:.3g} in [1e-18,1e-14], {shallow:.3g} in [1e-7,1e-3]; "
          f"MC {counts['decode_block_errors']}/10000, CI ({lo:.4g},{hi:.4g}) "
          f"contains block tail {block_tail:.4g}")
    assert lo <= block_tail <= hi


def test_criterion_10_toy_code_exhaustive_oracle():
    """enc/dec/check_rewritable against brute-force coset search, exactly."""
    gq = BitMatrix(np.array([
        [0, 1, 1, 0, 1, 0],
        [1, 1, 0, 0, 0, 0],
        [0, 0, 1, 1, 0, 1],
    ], dtype=np.uint8))
    code = RewriteCode.from_generator(gq)
    assert (code.n, code.k, code.r) == (6, 3, 3)

    def bits(value, width):
        return np.array([(value >> i) & 1 for i in range(width)], dtype=np.uint8)

    # Row space of the sparse generator, enumerated from scratch.
    row_space = set()
    for pick in range(8):
        acc = np.zeros(6, dtype=np.uint8)
        for i in range(3):
            if (pick >> i) & 1:
                acc ^= gq.toarray()[i]
        row_space.add(tuple(acc))
    cosets = {
        mi: {tuple(bits(mi, 3) @ code.embedder.toarray() % 2 ^ np.array(c, dtype=np.uint8))
             for c in row_space}
        for mi in range(8)
    }

    checked = 0
    for si in range(64):
        s = bits(si, 6)
        writable = {tuple(bits(xi, 6)) for xi in range(64) if not np.any(bits(xi, 6)[s == 0])}
        # The encode flag is a property of the state alone, so the matching
        # brute-force oracle asks whether every coset reaches the writable set.
        oracle = all(bool(cosets[mi] & writable) for mi in range(8))
        flags = set()
        for mi in range(8):
            out = enc(code, bits(mi, 3), s)
            flags.add(out.ok)
            if out.ok:
                x = tuple(out.x)
                assert x in cosets[mi] and x in writable
                assert np.array_equal(dec(code, out.x), bits(mi, 3))
            checked += 1
        assert flags == {oracle}
        assert check_rewritable(code, s) == oracle
    print(f"criterion 10: {checked} message/state pairs match the brute-force oracle")


def test_criterion_11_thread_count_never_changes_output():
    """Byte-identical CSV for the same campaign at 1, 2, and 4 threads."""
    base = dict(
        code={"family": "mackay", "n": 512, "r": 310, "col_weight": 3, "seed": 9},
        trials=500,
        master_seed=MASTER_SEED,
        betas=[0.45, 0.5, 0.55],
    )
    texts = {
        t: run_rewrite_sweep(SimConfig(threads=t, **base)).csv_text()
        for t in (1, 2, 4)
    }
    assert texts[1] == texts[2] == texts[4]
    assert texts[1].count("\n") == 4
    print("criterion 11: identical CSV across thread counts "
          f"({len(texts[1])} bytes)")
