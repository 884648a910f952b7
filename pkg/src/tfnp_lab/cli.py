"""tfnp-lab command line.

gen | reduce | solve | verify | roundtrip | hunt | suite | serve.
Exit codes: 0 success, 1 runtime failure (rejected solution, sound
reduction with pullback failures, port in use), 2 usage or config errors.

All JSON output is canonical (sorted keys, no whitespace), so identical
seeds give byte-identical output; wall-clock measurements live only under
"elapsed_s" keys.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import roundtrip as roundtrip_mod
from . import serialization, suite
from .core import DomainError, SizeLimitError
from .generators import GeneratorConfig, GeneratorError, gen_instance
from .lc_reduction import HuntConfig, hunt_counterexamples
from .oracles import (
    enumerate_solutions,
    solve_long_choice_majority,
    solve_qp_walk,
)
from .problems import KindMismatchError, verify_solution
from .serialization import (
    SerializationError,
    canonical_dumps,
    certificate_from_json,
    certificate_to_json,
    hunt_report_lines,
    instance_to_json,
    instances_to_json,
    load_instance,
)

USAGE_ERRORS = (
    GeneratorError,
    SerializationError,
    suite.SuiteConfigError,
    roundtrip_mod.UnknownReductionError,
    KindMismatchError,
    SizeLimitError,
    DomainError,
    json.JSONDecodeError,
)


def _read_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _write_text(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        if not text.endswith("\n"):
            fh.write("\n")


def _emit(obj, path: str | None = None):
    _write_text(path, canonical_dumps(obj))


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(kind=args.kind, n=args.n, seed=args.seed,
                          m=args.m, count=args.count)
    _emit(instances_to_json(gen_instance(cfg)), args.output)
    return 0


def cmd_reduce(args) -> int:
    inst = load_instance(_read_json(args.input), args.index)
    artifact = roundtrip_mod.build_reduction(args.reduction, inst)
    payload = {
        "reduction": artifact.reduction_id,
        "original_digest": serialization.instance_digest(artifact.original),
        "reduced": instance_to_json(artifact.reduced),
    }
    _emit(payload, args.output)
    return 0


def cmd_solve(args) -> int:
    inst = load_instance(_read_json(args.input), args.index)
    if args.oracle == "walk" and inst.kind != "quotient_pigeon":
        raise KindMismatchError(f"the walk solver wants quotient_pigeon, "
                                f"got {inst.kind}")
    if args.oracle == "majority" and "long_choice" not in inst.kind:
        raise KindMismatchError(f"the majority solver wants a long-choice "
                                f"instance, got {inst.kind}")
    if args.oracle == "walk":
        cert, trace = solve_qp_walk(inst)
        payload = {
            "certificate": certificate_to_json(cert),
            "steps": max(len(trace.elements) - 1, 0),
            "reason": trace.reason,
        }
    elif args.oracle == "majority":
        cert = solve_long_choice_majority(inst)
        payload = {"certificate": certificate_to_json(cert)}
    else:
        certs = enumerate_solutions(inst, args.limit)
        payload = {
            "certificates": [certificate_to_json(c) for c in certs],
            "count": len(certs),
        }
    _emit(payload, args.output)
    return 0


def cmd_verify(args) -> int:
    inst = load_instance(_read_json(args.input), args.index)
    cert = certificate_from_json(_read_json(args.solution))
    verdict = verify_solution(inst, cert)
    payload = {"accepted": bool(verdict)}
    if not verdict:
        payload["code"] = verdict.code
        payload["detail"] = list(verdict.detail)
    _emit(payload, args.output)
    return 0 if verdict else 1


def _roundtrip_one(payload):
    reduction_id, obj, sample_count, seed = payload
    inst = serialization.instance_from_json(obj)
    report = roundtrip_mod.roundtrip_test(
        reduction_id, inst, sample_count=sample_count,
        rng=random.Random(seed),
    )
    return roundtrip_mod.report_to_json(report)


def cmd_roundtrip(args) -> int:
    raw = _read_json(args.input)
    batch = raw["instances"] if isinstance(raw, dict) and "instances" in raw else [raw]
    jobs = [
        (args.reduction, obj, args.sample_count, idx)
        for idx, obj in enumerate(batch)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_roundtrip_one, jobs))
    else:
        reports = [_roundtrip_one(j) for j in jobs]
    _emit({"reports": reports}, args.output)
    sound = args.reduction != "qp_to_clc"
    failed = any(r["failures"] for r in reports)
    return 1 if (sound and failed) else 0


def cmd_hunt(args) -> int:
    config = HuntConfig(
        families=tuple(args.family),
        ns=tuple(args.n),
        seeds=args.seeds,
        base_seed=args.base_seed,
        sample_count=args.sample_count,
        enumerate_width=args.enumerate_width,
    )
    report = hunt_counterexamples(config)
    _write_text(args.output, "\n".join(hunt_report_lines(report)))
    return 0


def cmd_suite(args) -> int:
    if args.config:
        config = suite.load_config(_read_json(args.config))
    else:
        config = suite.SuiteConfig()
    report = suite.run_suite(config)
    for result in report.results:
        mark = "PASS" if result.passed else "FAIL"
        print(f"{mark} {result.criterion_id:<28} {result.detail}")
    print(f"{'PASS' if report.passed else 'FAIL'} suite "
          f"({len(report.results)} criteria, {report.elapsed_s:.1f}s)")
    if args.output:
        _emit(suite.suite_report_to_json(report), args.output)
    return 0 if report.passed else 1


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    try:
        uvicorn.run(create_app(), host=args.host, port=args.port,
                    log_level="warning")
    except OSError as err:
        print(f"cannot bind {args.host}:{args.port}: {err}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tfnp-lab",
        description="Desk-scale search problems: generate, reduce, solve, probe.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate seeded instances")
    p.add_argument("--kind", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("reduce", help="apply a reduction to an instance")
    p.add_argument("--reduction", required=True,
                   choices=sorted(roundtrip_mod.REDUCTIONS))
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="run a solver on an instance")
    p.add_argument("--oracle", required=True,
                   choices=("walk", "majority", "enumerate"))
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a claimed solution")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--solution", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("roundtrip", help="reduce, solve reduced, pull back")
    p.add_argument("--reduction", required=True,
                   choices=sorted(roundtrip_mod.REDUCTIONS))
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--sample-count", type=int, default=100)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("hunt", help="drive instance families through the "
                                    "long-choice reduction and log pullbacks")
    p.add_argument("--family", action="append", required=True,
                   choices=("equality", "kernel", "random"))
    p.add_argument("--n", action="append", type=int, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--sample-count", type=int, default=100)
    p.add_argument("--enumerate-width", type=int, default=4)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_hunt)

    p = sub.add_parser("suite", help="run the acceptance property suite")
    p.add_argument("--config", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("serve", help="serve the game session API")
    p.add_argument("--port", type=int, default=8611)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except USAGE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except FileNotFoundError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # runtime failure, not misuse
        print(f"failure: {err!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
