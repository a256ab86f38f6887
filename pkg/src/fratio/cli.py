"""Command-line front end.

Subcommands: fr, recover, phase, localize, rdcodec, sqdim, erasure.
Reports are deterministic functions of the arguments; JSON by default, CSV for
the phase sweep.  A JSON config file may supply defaults; explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict

import numpy as np

from .codec import rd_decode, rd_encode
from .harness import PhaseSweepConfig, derive_seed, fr_report, run_phase_sweep, success_threshold
from .localization import ProductDecomposition, localization_check
from .recovery import (
    RecoveryConfig,
    bernoulli_sample,
    erasure_row_statistics,
    recover_l1,
    restrict,
)
from .signals import generate_signal, write_signal
from .sqdim import covering_params, sq_dim_log2, sq_mse
from .systems import check_boundedness, parse_system


def _emit(payload: dict, out: str | None, fmt: str) -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True, default=_jsonify)
    else:
        raise ValueError(f"format {fmt!r} not supported for this subcommand")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _jsonify(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj)}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=50)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", default=None)
    parser.add_argument("--format", choices=["json", "csv"], default="json")


def cmd_fr(args) -> None:
    system = parse_system(args.system)
    f = generate_signal(system, args.signal, seed=args.seed)
    _emit(fr_report(system, f), args.out, "json")


def cmd_recover(args) -> None:
    system = parse_system(args.system)
    f = generate_signal(system, args.signal, seed=derive_seed(args.seed, 0))
    sample = bernoulli_sample(system.group, args.p, derive_seed(args.seed, 1))
    sigma = args.eps * f.l2
    config = RecoveryConfig(
        max_iterations=args.max_iterations,
        step=args.step,
        tolerance=args.tolerance,
        fidelity_radius=sigma,
    )
    result = recover_l1(system, sample, restrict(f.values, sample), config, truth=f)
    payload = {
        "system": system.system_id,
        "p": args.p,
        "eps": args.eps,
        "samples": sample.count,
        "coefficient_l1": result.coefficient_l1,
        "fidelity_residual": result.fidelity_residual,
        "iterations": result.iterations,
        "converged": result.converged,
        "tau": result.tau,
        "relative_error": result.relative_error,
        "success_threshold": success_threshold(args.eps),
        "boundedness": asdict(check_boundedness(system)),
    }
    if args.save_recovered:
        write_signal(args.save_recovered, result.recovered)
        payload["recovered_path"] = args.save_recovered
    _emit(payload, args.out, "json")


def cmd_phase(args) -> None:
    config = PhaseSweepConfig(
        system=args.system,
        signal=args.signal,
        p_values=tuple(float(p) for p in args.p.split(",")),
        trials=args.trials,
        master_seed=args.seed,
        eps=args.eps,
        max_iterations=args.max_iterations,
        jobs=args.jobs,
    )
    start = time.perf_counter()
    report = run_phase_sweep(config)
    elapsed = time.perf_counter() - start
    text = "\n".join(report.to_csv_rows()) if args.format == "csv" else report.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    print(f"phase sweep finished in {elapsed:.1f}s", file=sys.stderr)


def cmd_localize(args) -> None:
    system = parse_system(args.system)
    f = generate_signal(system, args.signal, seed=args.seed)
    d = ProductDecomposition(system.group, args.split)
    report = localization_check(f, d, transform=args.transform)
    _emit(asdict(report), args.out, "json")


def cmd_rdcodec(args) -> None:
    if args.action in ("encode", "roundtrip"):
        system = parse_system(args.system)
        f = generate_signal(system, args.signal, seed=args.seed)
        descriptor, account = rd_encode(system, f, args.eps)
        blob = descriptor.serialize()
        if args.descriptor:
            with open(args.descriptor, "wb") as fh:
                fh.write(blob)
        payload = {
            "action": args.action,
            "system": system.system_id,
            "eps": args.eps,
            "k": descriptor.k,
            "bytes": len(blob),
            "bit_account": asdict(account),
        }
        if args.action == "roundtrip":
            decoded = rd_decode(blob)
            err = float(np.linalg.norm(decoded.values - f.values))
            payload["distortion"] = err
            payload["relative_distortion"] = err / f.l2
            payload["within_budget"] = err <= args.eps * f.l2 * (1 + 1e-9)
        _emit(payload, args.out, "json")
    else:
        with open(args.descriptor, "rb") as fh:
            blob = fh.read()
        decoded = rd_decode(blob)
        if args.save_decoded:
            write_signal(args.save_decoded, decoded)
        _emit({"action": "decode", "group": str(decoded.group), "l2": decoded.l2}, args.out, "json")


def cmd_sqdim(args) -> None:
    system = parse_system(args.system)
    params = covering_params(system.size, system.tau, args.r)
    payload = {
        "system": system.system_id,
        "covering_params": asdict(params),
        "sq_dim_log2": sq_dim_log2(system.size, system.tau, args.r),
    }
    if args.mse_k:
        f = generate_signal(system, args.signal, seed=args.seed)
        report = sq_mse(system, f, k=args.mse_k, trials=args.trials, seed=derive_seed(args.seed, 1))
        payload["mse"] = asdict(report)
    _emit(payload, args.out, "json")


def cmd_erasure(args) -> None:
    stats = erasure_row_statistics(args.N, args.T, args.theta, args.E_max, args.trials, args.seed)
    _emit(asdict(stats), args.out, "json")


def build_parser(config: dict | None = None) -> argparse.ArgumentParser:
    """Build the argument parser; config values become defaults on every subparser."""
    parser = argparse.ArgumentParser(prog="fratio")
    parser.add_argument("--config", default=None, help="JSON file with default argument values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fr", help="coefficient ratio and sparsification summary")
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="harmonic")
    _add_common(p)
    p.set_defaults(func=cmd_fr)

    p = sub.add_parser("recover", help="single l1 recovery run")
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="sparse:3")
    p.add_argument("--p", type=float, default=0.75)
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("--tolerance", type=float, default=1e-9)
    p.add_argument("--save-recovered", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("phase", help="success-rate sweep over sampling rates")
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="sparse:3")
    p.add_argument("--p", default="0.25,0.5,0.75,1.0", help="comma-separated keep probabilities")
    p.add_argument("--eps", type=float, default=0.0)
    p.add_argument("--max-iterations", type=int, default=5000)
    _add_common(p)
    p.set_defaults(func=cmd_phase)

    p = sub.add_parser("localize", help="slice ratio inequality check")
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="random")
    p.add_argument("--split", type=int, default=1, help="number of leading factors forming H")
    p.add_argument("--transform", choices=["rowwise", "full"], default="rowwise")
    _add_common(p)
    p.set_defaults(func=cmd_localize)

    p = sub.add_parser("rdcodec", help="descriptor codec: encode, decode, or roundtrip")
    p.add_argument("action", choices=["encode", "decode", "roundtrip"])
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="harmonic")
    p.add_argument("--eps", type=float, default=0.2)
    p.add_argument("--descriptor", default=None, help="descriptor file to write/read")
    p.add_argument("--save-decoded", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_rdcodec)

    p = sub.add_parser("sqdim", help="covering parameters and dimension bound")
    p.add_argument("--system", default=None)
    p.add_argument("--signal", default="rademacher")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--mse-k", type=int, default=0, help="if > 0, run the MSE experiment with this k")
    _add_common(p)
    p.set_defaults(func=cmd_sqdim)

    p = sub.add_parser("erasure", help="row-wise erasure statistics")
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--E-max", type=int, default=None, dest="E_max")
    _add_common(p)
    p.set_defaults(func=cmd_erasure)

    if config:
        # config values become defaults everywhere they apply; explicit flags
        # still win because parse_args overwrites defaults
        defaults = {key.replace("-", "_"): value for key, value in config.items()}
        parser.set_defaults(**{k: v for k, v in defaults.items() if k != "command"})
        for child in sub.choices.values():
            known = {a.dest for a in child._actions}
            child.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    pre_args, _ = pre.parse_known_args(argv)
    config = None
    if pre_args.config:
        with open(pre_args.config) as fh:
            config = json.load(fh)
    parser = build_parser(config)
    args = parser.parse_args(argv)
    decode_only = args.command == "rdcodec" and args.action == "decode"
    for required in ("system", "N", "T", "theta", "E_max"):
        if required == "system" and decode_only:
            continue
        if hasattr(args, required) and getattr(args, required) is None:
            parser.error(f"missing required setting {required!r} (flag or config file)")
    if decode_only and not args.descriptor:
        parser.error("decode needs --descriptor")
    args.func(args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
