"""Command-line front end.

Commands: gen-code, encode, decode, sim, verify, pd.  Matrices travel as
alist files, code descriptors as JSON, bit vectors as one character per
line (0/1), sweep results as CSV.

Exit codes: 0 success; 2 usage or parse problems; 3 domain failures
(an unrewritable state, an undecodable word); 4 internal invariant
violations.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .alist import AlistFormatError, read_alist, write_alist
from .constructions import (
    bch_parity_check,
    build_bch,
    build_conjugate_pair,
    build_eg_ldpc,
    build_mackay,
)
from .rewriting import RewriteCode, dec, enc
from .schemes import analytic_pd, build_chain_scheme, build_concat_scheme
from .sim import SimConfig, build_code_from_spec, run_rewrite_sweep, run_scheme_trials
from .verify import run_verify

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_INTERNAL = 4


# ---------------------------------------------------------------------------
# Vector files: one 0/1 character per line.


def read_bitvector(path, expect: int | None = None) -> np.ndarray:
    vals = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            tok = line.strip()
            if not tok:
                continue
            if tok == "0" or tok == "1":
                vals.append(int(tok))
            else:
                raise ValueError(f"{path}: line {lineno}: expected 0 or 1, got {tok!r}")
    v = np.array(vals, dtype=np.uint8)
    if expect is not None and v.size != expect:
        raise ValueError(f"{path}: expected {expect} bits, found {v.size}")
    return v


def write_bitvector(path, v) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.writelines(f"{int(b)}\n" for b in v)


# ---------------------------------------------------------------------------
# gen-code


def _descriptor(family, params, n, k, rank, delta=None, seed=None) -> dict:
    out = {"family": family, "params": params, "n": n, "k": k, "rank": rank}
    if delta is not None:
        out["delta"] = delta
    if seed is not None:
        out["seed"] = seed
    return out


def cmd_gen_code(args) -> int:
    family = args.family
    if family == "mackay":
        seed = args.code_seed if args.code_seed is not None else 0
        mat = build_mackay(args.n, args.r, args.col_weight, seed)
        code = RewriteCode.from_generator(mat)
        desc = _descriptor(
            "mackay",
            {"n": args.n, "r": args.r, "col_weight": args.col_weight, "seed": seed},
            code.n,
            code.k,
            code.r,
            seed=seed,
        )
        prefix = args.out or f"mackay-n{args.n}-r{args.r}-s{seed}"
    elif family == "eg-ldpc":
        eg = build_eg_ldpc(args.m, args.mu, args.s, args.p)
        mat = eg.h
        desc = _descriptor(
            "eg-ldpc",
            {"m": args.m, "mu": args.mu, "s": args.s, "p": args.p},
            eg.n,
            eg.k,
            eg.rank,
        )
        prefix = args.out or f"eg-ldpc-{args.m}-{args.mu}-{args.s}-{args.p}"
    elif family == "conjugate":
        pair = build_conjugate_pair(args.m, args.mu, args.s, args.p)
        mat = pair.code.gq
        desc = _descriptor(
            "conjugate",
            {"m": args.m, "mu": args.mu, "s": args.s, "p": args.p},
            pair.code.n,
            pair.code.k,
            pair.code.r,
            delta=pair.c1.delta,
        )
        prefix = args.out or f"conjugate-{args.m}-{args.mu}-{args.s}-{args.p}"
    else:  # bch
        bch = build_bch(args.n, args.delta)
        mat = bch_parity_check(bch)
        desc = _descriptor(
            "bch", {"n": args.n, "delta": args.delta}, bch.n, bch.k, bch.parity,
            delta=bch.delta,
        )
        prefix = args.out or f"bch-{args.n}-{args.delta}"

    write_alist(prefix + ".alist", mat)
    with open(prefix + ".json", "w", newline="\n") as fh:
        json.dump(desc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    rate = desc["k"] / desc["n"]
    print(f"n={desc['n']} k={desc['k']} rank={desc['rank']} R_WOM={rate:.4f}")
    print(f"wrote {prefix}.alist and {prefix}.json")
    return EXIT_OK


# ---------------------------------------------------------------------------
# encode / decode


def _load_rewrite_code(descriptor_path) -> RewriteCode:
    with open(descriptor_path) as fh:
        desc = json.load(fh)
    family = desc.get("family")
    if family == "bch":
        raise ValueError("a bch descriptor is an ECC, not a rewriting code")
    if family not in ("mackay", "eg-ldpc", "conjugate"):
        raise ValueError(f"unknown code family {family!r}")
    # The sibling alist holds the sparse generator itself; the descriptor
    # only cross-checks that it is the matrix gen-code wrote.
    alist_path = os.path.splitext(str(descriptor_path))[0] + ".alist"
    code = RewriteCode.from_generator(read_alist(alist_path))
    if code.n != desc.get("n") or code.k != desc.get("k"):
        raise ValueError(
            f"alist disagrees with descriptor: built [{code.n},{code.k}], "
            f"descriptor says [{desc.get('n')},{desc.get('k')}]"
        )
    return code


def cmd_encode(args) -> int:
    code = _load_rewrite_code(args.code)
    m = read_bitvector(args.message, code.k)
    s = read_bitvector(args.state, code.n)
    out_path = args.out or "written-state.txt"
    outcome = enc(code, m, s)
    if not outcome.ok:
        with open(out_path, "w", newline="\n") as fh:
            fh.write("FAILURE\n")
        print("FAILURE: no writable vector in this message's coset", file=sys.stderr)
        return EXIT_DOMAIN
    write_bitvector(out_path, outcome.x)
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_decode(args) -> int:
    code = _load_rewrite_code(args.code)
    x = read_bitvector(args.state, code.n)
    out_path = args.out or "message.txt"
    write_bitvector(out_path, dec(code, x))
    print(f"wrote {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sim


def _build_scheme(spec: dict):
    kind = spec.get("kind")
    if kind == "conjugated":
        return build_conjugate_pair(
            int(spec.get("m", 3)), int(spec.get("mu", 1)),
            int(spec.get("s", 3)), int(spec.get("p", 2)),
        )
    if kind == "concatenated":
        keys = ("n_inner", "delta", "outer_k", "col_weight", "seed")
        return build_concat_scheme(**{k: int(spec[k]) for k in keys if k in spec})
    if kind == "chained":
        keys = ("n_inner", "delta", "block_k", "blocks", "seed")
        return build_chain_scheme(**{k: int(spec[k]) for k in keys if k in spec})
    raise ValueError(f"unknown scheme kind {kind!r}")


def cmd_sim(args) -> int:
    with open(args.config) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ValueError("config must be a JSON object")
    scheme_spec = raw.pop("scheme", None)
    if scheme_spec is not None:
        raw.setdefault("code", {"family": scheme_spec.get("kind", "scheme")})
    if args.threads is not None:
        raw["threads"] = args.threads
    if args.seed is not None:
        raw["master_seed"] = args.seed
    cfg = SimConfig.from_dict(raw)

    if scheme_spec is not None:
        report, counts = run_scheme_trials(cfg, _build_scheme(scheme_spec))
        print(f"scheme={report.scheme} alpha={report.alpha:.4f} R_WOM={report.R_WOM:.4f}")
        print(
            f"encode failures {counts['encode_failures']}/{counts['trials']}"
            f" (per code: {counts['unit_encode_failures']}"
            f"/{counts['trials'] * counts['units_per_trial']})"
        )
        print(
            f"decode errors {counts['decode_block_errors']}/{counts['decode_trials']}"
            f" at p={counts['p_raw']:g}; analytic P_D={report.P_D:.4g}"
        )
        if args.out:
            payload = {"report": json.loads(report.to_json()), "counts": counts}
            with open(args.out, "w", newline="\n") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True, default=float)
                fh.write("\n")
            print(f"wrote {args.out}")
        return EXIT_OK

    result = run_rewrite_sweep(cfg)
    out_path = args.out or "sweep.csv"
    with open(out_path, "w", newline="\n") as fh:
        result.to_csv(fh)
    for p in result.points:
        print(
            f"{cfg.axis}={p.axis_value:g} n={p.n} failures={p.failures}/{p.trials}"
            f" rate={p.failure_rate:.3g} ci=({p.ci_low:.3g},{p.ci_high:.3g})"
        )
    print(f"wrote {out_path}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify / pd


def cmd_verify(args) -> int:
    rows = run_verify()
    width = max(len(name) for name, _, _ in rows)
    failed = 0
    for name, ok, detail in rows:
        mark = "ok  " if ok else "FAIL"
        print(f"{mark} {name:<{width}}  {detail}")
        failed += not ok
    print(f"{len(rows) - failed}/{len(rows)} checks passed")
    return EXIT_INTERNAL if failed else EXIT_OK


def cmd_pd(args) -> int:
    val = analytic_pd(args.n, args.t, args.p, weight=args.weight)
    print(f"{val:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser plumbing


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument(
        "--threads", type=int, default=None,
        help="worker threads (falls back to WOMKIT_THREADS)",
    )
    shared.add_argument("--out", default=None, help="output file or prefix")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=None, help="override RNG seed")

    parser = argparse.ArgumentParser(
        prog="womkit", description="write-once-memory rewriting codes"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen-code", help="build a code, write alist + JSON")
    fam = gen.add_subparsers(dest="family", required=True)
    mk = fam.add_parser("mackay", parents=[shared])
    mk.add_argument("--n", type=int, required=True)
    mk.add_argument("--r", type=int, required=True)
    mk.add_argument("--col-weight", type=int, default=3)
    mk.add_argument("--seed", dest="code_seed", type=int, default=None)
    for name in ("eg-ldpc", "conjugate"):
        sp = fam.add_parser(name, parents=[shared, seeded])
        sp.add_argument("m", type=int)
        sp.add_argument("mu", type=int)
        sp.add_argument("s", type=int)
        sp.add_argument("p", type=int, nargs="?", default=2)
    bch = fam.add_parser("bch", parents=[shared, seeded])
    bch.add_argument("n", type=int)
    bch.add_argument("delta", type=int)
    gen.set_defaults(func=cmd_gen_code)

    enc_p = sub.add_parser("encode", parents=[shared], help="rewrite a message onto a state")
    enc_p.add_argument("--code", required=True, help="JSON descriptor from gen-code")
    enc_p.add_argument("--message", required=True, help="k-bit vector file")
    enc_p.add_argument("--state", required=True, help="n-bit cell-state file")
    enc_p.set_defaults(func=cmd_encode)

    dec_p = sub.add_parser("decode", parents=[shared], help="read a message back")
    dec_p.add_argument("--code", required=True, help="JSON descriptor from gen-code")
    dec_p.add_argument("--state", required=True, help="n-bit written-state file")
    dec_p.set_defaults(func=cmd_decode)

    sim_p = sub.add_parser("sim", parents=[shared, seeded], help="run a Monte Carlo campaign")
    sim_p.add_argument("--config", required=True, help="JSON campaign description")
    sim_p.set_defaults(func=cmd_sim)

    ver_p = sub.add_parser("verify", parents=[shared], help="run the self-check suites")
    ver_p.set_defaults(func=cmd_verify)

    pd_p = sub.add_parser("pd", parents=[shared], help="analytic block-failure bound")
    pd_p.add_argument("--n", type=int, required=True)
    pd_p.add_argument("--t", type=int, required=True)
    pd_p.add_argument("--p", type=float, required=True)
    pd_p.add_argument(
        "--weight", default="min-residual",
        choices=("min-residual", "all-errors", "worst-case", "block"),
    )
    pd_p.set_defaults(func=cmd_pd)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.threads is None:
        env = os.environ.get("WOMKIT_THREADS")
        if env is not None:
            try:
                args.threads = int(env)
            except ValueError:
                print(f"womkit: WOMKIT_THREADS is not an integer: {env!r}", file=sys.stderr)
                return EXIT_USAGE
    try:
        return args.func(args)
    except AlistFormatError as err:
        print(f"womkit: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"womkit: {err}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as err:
        print(f"womkit: internal invariant violated: {err}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
