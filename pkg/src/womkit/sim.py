"""Monte Carlo harness: state sampling, noise, failure-rate sweeps.

Determinism contract: every trial draws from its own generator, seeded by
SHA-256(master_seed, axis_index, trial_index).  Results are therefore
bit-identical however trials are distributed over worker threads, and
stable across runs and machines.
"""

from __future__ import annotations

import hashlib
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .constructions import build_conjugate_pair, build_eg_ldpc, build_mackay
from .rewriting import RewriteCode, enc

_Z95 = 1.959963984540054


def trial_stream(master_seed: int, axis_index: int, trial_index: int) -> np.random.Generator:
    """The per-trial generator; the derivation is part of the output contract."""
    tag = f"{master_seed}:{axis_index}:{trial_index}".encode()
    digest = hashlib.sha256(tag).digest()
    return np.random.default_rng(int.from_bytes(digest[:16], "little"))


def sample_state(n: int, beta: float, stream: np.random.Generator) -> np.ndarray:
    """i.i.d. cell states, Pr[cell writable] = beta."""
    if not 0.0 <= beta <= 1.0:
        raise ValueError("beta must be a probability")
    return (stream.random(n) < beta).astype(np.uint8)


def bsc_apply(x: np.ndarray, p: float, stream: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must be a probability")
    return (np.asarray(x, dtype=np.uint8) ^ (stream.random(len(x)) < p)).astype(np.uint8)


def wilson_ci(failures: int, trials: int):
    """95% Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= failures <= trials:
        raise ValueError("failures out of range")
    z2 = _Z95 * _Z95
    phat = failures / trials
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (_Z95 / denom) * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    lo = 0.0 if failures == 0 else max(0.0, center - half)
    hi = 1.0 if failures == trials else min(1.0, center + half)
    return (lo, hi)


@dataclass
class SimConfig:
    """One sweep campaign.

    axis "beta" sweeps the writable-cell probability over a fixed code;
    axis "rate" rebuilds a sparse code per point (the point value is the
    target rewriting rate k/n) at a fixed beta.
    """

    code: dict
    trials: int
    master_seed: int
    axis: str = "beta"
    betas: list = field(default_factory=lambda: [0.5])
    rates: list | None = None
    beta_fixed: float = 0.5
    p_raw: float | None = None
    threads: int = 1

    _FIELDS = {
        "code", "trials", "master_seed", "axis", "betas", "rates",
        "beta_fixed", "p_raw", "threads",
    }

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.axis not in ("beta", "rate"):
            raise ValueError("axis must be 'beta' or 'rate'")
        if self.axis == "rate" and not self.rates:
            raise ValueError("rate axis needs a 'rates' list")
        if not isinstance(self.code, dict) or "family" not in self.code:
            raise ValueError("code spec must be a dict with a 'family' field")

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        unknown = set(d) - cls._FIELDS
        if unknown:
            raise ValueError(f"unknown config field: {sorted(unknown)[0]}")
        missing = {"code", "trials", "master_seed"} - set(d)
        if missing:
            raise ValueError(f"missing config field: {sorted(missing)[0]}")
        return cls(**d)


@dataclass(frozen=True)
class SweepPoint:
    axis_value: float
    beta: float
    rate: float
    n: int
    trials: int
    failures: int
    ci_low: float
    ci_high: float

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials


@dataclass(frozen=True)
class SweepResult:
    axis: str
    points: list
    master_seed: int

    def to_csv(self, fh) -> None:
        fh.write("axis,beta,rate,n,trials,failures,failure_rate,ci_low,ci_high,master_seed\n")
        for p in self.points:
            fields = [
                self.axis,
                _fmt(p.beta),
                _fmt(p.rate),
                str(p.n),
                str(p.trials),
                str(p.failures),
                _fmt(p.failure_rate),
                _fmt(p.ci_low),
                _fmt(p.ci_high),
                str(self.master_seed),
            ]
            fh.write(",".join(fields) + "\n")

    def csv_text(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def _fmt(v: float) -> str:
    return format(v, ".6g")


def build_code_from_spec(spec: dict, rate: float | None = None) -> RewriteCode:
    """Resolve a code-spec dict to a rewriting codec.

    Families: mackay {n, col_weight, seed, r?}, eg-ldpc {m, mu, s, p},
    conjugate {m, mu, s, p}.  For a rate sweep, `rate` overrides the
    sparse matrix's row count via r = round(n * (1 - rate)).
    """
    fam = spec["family"]
    if fam == "mackay":
        n = int(spec["n"])
        if rate is not None:
            r = int(round(n * (1.0 - rate)))
        else:
            r = int(spec["r"])
        gq = build_mackay(n, r, int(spec.get("col_weight", 3)), int(spec.get("seed", 0)))
        return RewriteCode.from_generator(gq)
    if fam == "eg-ldpc":
        eg = build_eg_ldpc(int(spec["m"]), int(spec["mu"]), int(spec["s"]), int(spec.get("p", 2)))
        return RewriteCode.from_generator(eg.h)
    if fam == "conjugate":
        pair = build_conjugate_pair(
            int(spec["m"]), int(spec["mu"]), int(spec["s"]), int(spec.get("p", 2))
        )
        return pair.code
    raise ValueError(f"unknown code family {fam!r}")


def _encode_trial(code: RewriteCode, beta: float, master_seed: int, axis_idx: int, t: int) -> bool:
    """Run one encode attempt; True means the rewrite failed."""
    stream = trial_stream(master_seed, axis_idx, t)
    s = sample_state(code.n, beta, stream)
    m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
    return not enc(code, m, s).ok


def _count_failures(code, beta, master_seed, axis_idx, trials, threads) -> int:
    if threads <= 1:
        return sum(_encode_trial(code, beta, master_seed, axis_idx, t) for t in range(trials))
    chunk = max(1, trials // (threads * 8))
    spans = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]

    def run(span):
        lo, hi = span
        return sum(_encode_trial(code, beta, master_seed, axis_idx, t) for t in range(lo, hi))

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return sum(pool.map(run, spans))


def run_rewrite_sweep(cfg: SimConfig) -> SweepResult:
    """Encode-failure-rate sweep over beta or over rewriting rate."""
    points = []
    if cfg.axis == "beta":
        code = build_code_from_spec(cfg.code)
        axis_values = [(b, code) for b in cfg.betas]
    else:
        axis_values = [
            (rate, build_code_from_spec(cfg.code, rate=rate)) for rate in cfg.rates
        ]
    for idx, (val, code) in enumerate(axis_values):
        beta = val if cfg.axis == "beta" else cfg.beta_fixed
        fails = _count_failures(code, beta, cfg.master_seed, idx, cfg.trials, cfg.threads)
        lo, hi = wilson_ci(fails, cfg.trials)
        points.append(
            SweepPoint(
                axis_value=val,
                beta=beta,
                rate=code.rate,
                n=code.n,
                trials=cfg.trials,
                failures=fails,
                ci_low=lo,
                ci_high=hi,
            )
        )
    return SweepResult(axis=cfg.axis, points=points, master_seed=cfg.master_seed)


def run_scheme_trials(cfg: SimConfig, scheme):
    """Scheme-level campaign: encode failures at beta, then noisy-read
    decode errors at p_raw, alongside the analytic prediction.

    Returns (SchemeReport, counts dict).  Decode trials re-draw the cell
    state until it is writable so the channel statistics are conditioned
    on a successful write, matching the analytic bound's setting.
    """
    from . import schemes as _schemes

    beta = cfg.betas[0]
    p_raw = cfg.p_raw if cfg.p_raw is not None else 1.3e-3

    if isinstance(scheme, _schemes.ConcatScheme):
        report = _schemes.concat_report(scheme, p_raw)
        encode_one = _make_concat_trial(scheme, beta)
    elif isinstance(scheme, _schemes.ChainScheme):
        report = _schemes.chain_report(scheme, p_raw)
        encode_one = _make_chain_trial(scheme, beta)
    else:
        report = _schemes.conjugated_report(scheme, p_raw)
        encode_one = _make_conjugated_trial(scheme, beta)

    encode_failures = 0
    unit_failures = 0
    units_per_trial = 0
    decode_errors = 0
    decode_trials = 0
    for t in range(cfg.trials):
        stream = trial_stream(cfg.master_seed, 0, t)
        failed_units, units_per_trial, decoded_ok = encode_one(stream, p_raw)
        unit_failures += failed_units
        encode_failures += failed_units > 0
        if decoded_ok is not None:
            decode_trials += 1
            decode_errors += not decoded_ok
    units = cfg.trials * units_per_trial
    counts = {
        "trials": cfg.trials,
        "beta": beta,
        "p_raw": p_raw,
        "encode_failures": encode_failures,
        "encode_failure_rate": encode_failures / cfg.trials,
        # Per rewriting-code granularity: one unit per trial except for the
        # chained scheme, where each of the B blocks is its own short code.
        "unit_encode_failures": unit_failures,
        "units_per_trial": units_per_trial,
        "unit_encode_failure_rate": unit_failures / units,
        "decode_trials": decode_trials,
        "decode_block_errors": decode_errors,
        "decode_block_error_rate": decode_errors / decode_trials if decode_trials else 0.0,
        "decode_ci": wilson_ci(decode_errors, decode_trials) if decode_trials else (0.0, 1.0),
    }
    return report, counts


def _writable_state(code, beta, stream, tries=100):
    """Sample states until one is writable.

    Returns (first_try_failed, state): the flag records whether the very
    first draw was unwritable, which is what the encode-failure statistic
    counts; the returned state is always writable.
    """
    from .rewriting import check_rewritable

    first_failed = False
    for _ in range(tries):
        s = sample_state(code.n, beta, stream)
        if check_rewritable(code, s):
            return first_failed, s
        first_failed = True
    raise RuntimeError("no writable state found; beta far below capacity")


def _make_conjugated_trial(pair, beta):
    from . import schemes as _schemes
    from .constructions import DecodeFailure

    code = pair.code

    def run(stream, p_raw):
        enc_failed, s = _writable_state(code, beta, stream)
        m = stream.integers(0, 2, size=code.k, dtype=np.uint8)
        out = _schemes.conjugated_encode(pair, m, s)
        y = bsc_apply(out.x, p_raw, stream)
        got = _schemes.conjugated_decode(pair, y)
        ok = (not isinstance(got, DecodeFailure)) and bool(np.array_equal(got, m))
        return int(enc_failed), 1, ok

    return run


def _make_concat_trial(scheme, beta):
    from . import schemes as _schemes
    from .constructions import DecodeFailure

    def run(stream, p_raw):
        enc_failed, s = _writable_state(scheme.outer, beta, stream)
        m = stream.integers(0, 2, size=scheme.outer.k, dtype=np.uint8)
        x, reserved = _schemes.concat_encode(scheme, m, s)
        y = bsc_apply(x, p_raw, stream)
        rn = bsc_apply(reserved, p_raw, stream)
        got = _schemes.concat_decode(scheme, y, rn)
        ok = (not isinstance(got, DecodeFailure)) and bool(np.array_equal(got, m))
        return int(enc_failed), 1, ok

    return run


def _make_chain_trial(scheme, beta):
    from . import schemes as _schemes
    from .constructions import DecodeFailure

    def run(stream, p_raw):
        states = []
        failed_blocks = 0
        for _ in range(scheme.blocks):
            failed, s = _writable_state(scheme.block_code, beta, stream)
            failed_blocks += failed
            states.append(s)
        info = stream.integers(0, 2, size=scheme.info_bits, dtype=np.uint8)
        blocks, reserved = _schemes.chain_encode(scheme, info, states)
        noisy = [bsc_apply(b, p_raw, stream) for b in blocks]
        rn = bsc_apply(reserved, p_raw, stream)
        got = _schemes.chain_decode(scheme, noisy, rn)
        ok = (not isinstance(got, DecodeFailure)) and bool(np.array_equal(got, info))
        return failed_blocks, scheme.blocks, ok

    return run
