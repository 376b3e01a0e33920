"""Command line driver.

Exit codes: 0 success, 2 invalid configuration, 3 capacity guard,
4 internal consistency failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import asdict

import numpy as np

from . import __version__
from .analysis.counts import failure_counts
from .analysis.enumeration import boundary_table, enumerate_failures
from .analysis.fitting import FitDomainError, fit_threshold, read_records, write_records
from .analysis.lowrate import lowrate_estimate
from .decoders import RB_THEN_RG, RG_THEN_RB, Decoder, DecoderConfig, DecodingError, check_failure
from .experiment import RunConfig, sweep
from .lattice import BLUE, GREEN, LatticeError, build_color_lattice, validate
from .matching import CapacityError
from .noise import CODE_CAPACITY, PHENOMENOLOGICAL, NoiseError, NoiseSpec

EXIT_OK, EXIT_CONFIG, EXIT_CAPACITY, EXIT_INTERNAL = 0, 2, 3, 4


class ConsistencyError(RuntimeError):
    pass


def _decoder_cfg(args) -> DecoderConfig:
    if args.decoder == "restricted":
        return DecoderConfig.restricted(order=args.order, engine=args.engine)
    return DecoderConfig(order=args.order, w_b=args.wb, engine=args.engine)


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True, default=float)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _write_csv(rows, out, fields=None):
    fields = fields or list(rows[0]) if rows else []
    fh = open(out, "w", newline="") if out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    finally:
        if out:
            fh.close()


def cmd_lattice(args):
    lat = build_color_lattice(args.d[0])
    report = validate(lat, distance_check_max=args.distance_check)
    info = {"d": lat.distance, "qubits": lat.n, "faces": len(lat.checks),
            "blocks": len(lat.blocks), "invariants": report}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lat.dumps() + "\n")
    print(json.dumps(info, indent=2))
    if not all(report.values()):
        raise ConsistencyError("lattice invariant violated")


def cmd_sample(args):
    model = PHENOMENOLOGICAL if args.noise == "phenomenological" else CODE_CAPACITY
    logicals = (GREEN, BLUE) if args.logical == "both" else (args.logical,)
    records = []
    for p in args.p:
        rounds = args.rounds if model == PHENOMENOLOGICAL else 1
        base = RunConfig(
            d=args.d[0], noise=NoiseSpec(args.code, p, model=model, rounds=max(1, rounds or 1)),
            decoder=args.decoder, shots=args.shots, seed=args.seed, batch=args.batch,
            w_b=args.wb, engine=args.engine, logicals=logicals,
        )
        rpd = (lambda d: d) if model == PHENOMENOLOGICAL and not args.rounds else None
        records += sweep(base, args.d, [p], workers=args.workers, rounds_per_d=rpd,
                         progress=lambda r: print(
                             f"d={r.d} p={r.p:.5g} r={r.rounds} fail_any={r.fail_any}/{r.shots}",
                             file=sys.stderr))
    records.sort(key=lambda r: (r.d, r.p))
    if args.out:
        write_records(args.out, records)
        meta = {"version": __version__, "seed": args.seed, "argv": sys.argv[1:]}
        with open(args.out + ".meta.json", "w") as fh:
            json.dump(meta, fh, indent=2)
    else:
        _write_csv([asdict(r) for r in records], None)


def cmd_enumerate(args):
    if args.table:
        rows = []
        for d in args.d:
            rows += boundary_table(d, repeats=args.repeats, row=args.row, engine=args.engine)
        _write_csv(rows, args.out)
        return
    lat = build_color_lattice(args.d[0])
    res = enumerate_failures(args.d[0], _decoder_cfg(args), weight=args.weight,
                             repeats=args.repeats, screen=args.screen, lat=lat)
    by_row = {",".join(map(str, k)): v for k, v in sorted(res.by_row(lat).items())}
    _emit({"d": res.d, "weight": res.weight, "decoder": res.decoder, "logical": res.logical,
           "configurations": res.configurations, "repeats": res.repeats,
           "expected_failures": res.expected, "stderr": res.stderr,
           "failing_configurations": len(res.failing), "by_rows": by_row}, args.out)


def cmd_analytic(args):
    rows = [failure_counts(d // 2).as_row() for d in range(args.dmin, args.dmax + 1, 2)]
    _write_csv(rows, args.out)


def cmd_lowrate(args):
    est = lowrate_estimate(args.d[0], _decoder_cfg(args), args.p, shots_per_weight=args.shots,
                           w_max=args.wmax, seed=args.seed)
    rows = [{"p": float(p), "p_fail": float(f), "stderr": float(s), "truncation": float(t)}
            for p, f, s, t in zip(est.p, est.p_fail, est.stderr, est.truncation)]
    _write_csv(rows, args.out)
    print(json.dumps({"estimator": est.estimator,
                      "strata": [asdict(s) for s in est.strata]}, indent=1), file=sys.stderr)


def cmd_fit(args):
    records = read_records(args.input)
    res = fit_threshold(records, which=args.which, bootstrap=args.bootstrap, seed=args.seed)
    _emit(res.to_json(), args.out)


def cmd_decode(args):
    lat = build_color_lattice(args.d[0])
    err = np.zeros(lat.n, dtype=np.uint8)
    for q in args.errors:
        if not (0 <= q < lat.n):
            raise ValueError(f"qubit {q} outside [0, {lat.n})")
        err[q] ^= 1
    cfg = _decoder_cfg(args)
    if args.engine == "pymatching" and args.trace:
        cfg = DecoderConfig(**{**asdict(cfg), "engine": "blossom"})
    dec = Decoder(lat, cfg)
    syn = (lat.check_matrix().astype(np.int64) @ err) & 1
    corr = dec.decode(syn, key=None, trace=args.trace)
    flags = check_failure(err, corr.qubits, lat)
    out = {"error": np.flatnonzero(err).tolist(), "correction": corr.support,
           "logical_failure": flags}
    if args.trace:
        out["trace"] = corr.trace
    _emit(out, args.out)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="colormatch", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p, decoder=True):
        p.add_argument("--d", type=int, nargs="+", default=[8])
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)
        if decoder:
            p.add_argument("--decoder", choices=["correlated", "restricted"], default="correlated")
            p.add_argument("--wb", type=float, default=0.999)
            p.add_argument("--order", choices=[RB_THEN_RG, RG_THEN_RB], default=RB_THEN_RG)
            p.add_argument("--engine", choices=["pymatching", "blossom"], default="pymatching")

    p = sub.add_parser("lattice", help="build a lattice and check its invariants")
    common(p, decoder=False)
    p.add_argument("--distance-check", type=int, default=6)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("sample", help="Monte Carlo failure rates")
    common(p)
    p.add_argument("--code", choices=["color", "surface"], default="color")
    p.add_argument("--noise", choices=["capacity", "phenomenological"], default="capacity")
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--rounds", type=int, default=0, help="0 means rounds = d")
    p.add_argument("--shots", type=int, default=10_000)
    p.add_argument("--batch", type=int, default=1_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--logical", choices=["green", "blue", "both"], default="both")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("enumerate", help="exhaustive minimum-weight enumeration")
    common(p)
    p.add_argument("--weight", type=int, default=None)
    p.add_argument("--repeats", type=int, default=32)
    p.add_argument("--screen", type=int, default=None)
    p.add_argument("--table", action="store_true", help="boundary-row pattern table")
    p.add_argument("--row", type=int, default=None)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("analytic", help="closed-form failure counts")
    p.add_argument("--dmin", type=int, default=4)
    p.add_argument("--dmax", type=int, default=20)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("lowrate", help="stratified low-rate failure curve")
    common(p)
    p.add_argument("--p", type=float, nargs="+", required=True)
    p.add_argument("--shots", type=int, default=20_000)
    p.add_argument("--wmax", type=int, default=None)
    p.set_defaults(func=cmd_lowrate)

    p = sub.add_parser("fit", help="finite-size-scaling threshold fit")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--which", choices=["fail_any", "fail_g", "fail_b"], default="fail_any")
    p.add_argument("--bootstrap", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("decode", help="decode one error and print the trace")
    common(p)
    p.add_argument("--errors", type=int, nargs="*", default=[])
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_decode)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DecodingError, ConsistencyError) as exc:
        print(f"internal: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (ValueError, LatticeError, NoiseError, FitDomainError, FileNotFoundError) as exc:
        print(f"config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
