"""Batch command line: enumeration, verification, transfer checks, tables.

Subcommands:

* ``enumerate --g N [--primitive]``     list admissible configurations
* ``verify --g N [--weyl] [--jobs N]``  certify every primitive configuration
* ``transfer --case gerth|quartic``     re-verify a built-in transfer chain
* ``quad class-number|bs-table|split-demo``  the quadratic laboratory
* ``cohomology --demo``                 cohomology self-tests

Report discipline: stdout carries the stable report, one JSON record per
line (a header, the payload records sorted by a canonical key, a summary),
and is byte-identical across reruns and worker counts; scheduling arguments
(--jobs) and wall time live only in the volatile stderr footer.

Exit codes: 0 pass; 1 usage error; 2 verified failure with the offending
artifact serialized into the report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__

CACHE_ENV_VAR = "CMRECIP_CACHE_DIR"

PERMITTED_KINDS = {
    1: {"FullImage"},
    2: {"FullImage"},
    3: {"FullImage"},
    4: {"FullImage", "TorsionFree", "IndexTwoSumEven"},
    5: {"FullImage", "TorsionFree", "CyclicThreeQuadraticAction"},
    6: {"FullImage", "TorsionFree", "SmallStabilizer"},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit code 1 on usage problems, not argparse's 2
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="cmrecip", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_enum = sub.add_parser("enumerate", help="list admissible configurations")
    p_enum.add_argument("--g", type=int, required=True)
    p_enum.add_argument("--primitive", action="store_true")
    p_enum.add_argument("--cache-dir", default=None)

    p_verify = sub.add_parser("verify", help="certify primitive configurations")
    p_verify.add_argument("--g", type=int, required=True)
    p_verify.add_argument("--weyl", action="store_true")
    p_verify.add_argument("--jobs", type=int, default=None)
    p_verify.add_argument("--cache-dir", default=None)

    p_transfer = sub.add_parser("transfer", help="verify a built-in chain")
    p_transfer.add_argument("--case", required=True)

    p_quad = sub.add_parser("quad", help="quadratic-forms laboratory")
    quad_sub = p_quad.add_subparsers(dest="quad_command", required=True)
    p_cn = quad_sub.add_parser("class-number")
    p_cn.add_argument("-d", "--discriminant", type=int, required=True)
    p_bs = quad_sub.add_parser("bs-table")
    p_bs.add_argument("--min", type=int, required=True)
    p_bs.add_argument("--max", type=int, required=True)
    p_sd = quad_sub.add_parser("split-demo")
    p_sd.add_argument("-d", "--discriminant", type=int, required=True)
    p_sd.add_argument("--bound", type=int, required=True)

    p_coh = sub.add_parser("cohomology", help="cohomology self-tests")
    p_coh.add_argument("--demo", action="store_true", required=True)
    return parser


def _resolve_cache_dir(flag_value: str | None) -> Path | None:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cmrecip"


def _dump(record: dict, out) -> None:
    out.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def _header(command: list[str], out) -> None:
    _dump({"record": "header", "command": command, "version": __version__}, out)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _verify_worker(payload: tuple[int, list[str]]) -> dict:
    """Certify one configuration, given (g, generator strings)."""
    from .cmtypes import make_config
    from .reciprocity import (
        NoCertificate,
        check_faithful_premise,
        check_transport,
        classify,
        image_lattice,
        report_record,
    )
    from .sgnperm import SignedPerm, closure

    g, gen_strings = payload
    gens = [SignedPerm.parse(s, degree=g) for s in gen_strings]
    config = make_config(closure(gens, degree=g))
    data = image_lattice(config)
    transport_ok = check_transport(config)
    faithful_ok = check_faithful_premise(data)
    try:
        cert = classify(data)
        rec = report_record(data, cert)
    except NoCertificate as exc:
        rec = dict(exc.payload)
        rec["certificateKind"] = "NoCertificate"
        rec["evidence"] = {}
    rec["record"] = "certificate"
    rec["transportHolds"] = transport_ok
    rec["faithfulPremiseHolds"] = faithful_ok
    return rec


def cmd_verify(args, out, err) -> int:
    from .cmtypes import enumerate_admissible
    from .reciprocity import check_weyl_surjectivity

    if not 1 <= args.g <= 6:
        raise UsageError("--g must be in 1..6")
    t0 = time.monotonic()
    cache_dir = _resolve_cache_dir(args.cache_dir)
    configs = enumerate_admissible(args.g, require_primitive=True, cache_dir=cache_dir)
    payloads = [(args.g, c.generator_strings()) for c in configs]

    jobs = args.jobs if args.jobs and args.jobs > 0 else (os.cpu_count() or 1)
    if jobs == 1 or len(payloads) <= 1:
        records = [_verify_worker(p) for p in payloads]
    else:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_verify_worker, payloads))
    records.sort(key=lambda r: r["configKey"])

    permitted = PERMITTED_KINDS[args.g]
    failures = [
        r
        for r in records
        if r["certificateKind"] not in permitted
        or not r["transportHolds"]
        or not r["faithfulPremiseHolds"]
    ]
    weyl_ok = check_weyl_surjectivity(args.g) if args.weyl else None

    command = ["verify", "--g", str(args.g)] + (["--weyl"] if args.weyl else [])
    _header(command, out)
    for r in records:
        _dump(r, out)
    summary = {
        "record": "summary",
        "configCount": len(records),
        "failures": len(failures),
        "pass": not failures and (weyl_ok is not False),
    }
    if weyl_ok is not None:
        summary["weylSurjectivity"] = weyl_ok
    _dump(summary, out)

    err.write(
        f"verify --g {args.g}: {len(records)} primitive configurations, "
        f"{len(failures)} failures"
        + (f", weyl={weyl_ok}" if weyl_ok is not None else "")
        + "\n"
    )
    err.write(f"# volatile: wall_time_seconds={time.monotonic() - t0:.3f} jobs={jobs}\n")
    return 0 if summary["pass"] else 2


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------


def cmd_enumerate(args, out, err) -> int:
    from .cmtypes import enumerate_admissible

    if not 1 <= args.g <= 6:
        raise UsageError("--g must be in 1..6")
    t0 = time.monotonic()
    cache_dir = _resolve_cache_dir(args.cache_dir)
    configs = enumerate_admissible(
        args.g, require_primitive=args.primitive, cache_dir=cache_dir
    )
    command = ["enumerate", "--g", str(args.g)] + (
        ["--primitive"] if args.primitive else []
    )
    _header(command, out)
    for c in configs:
        _dump(
            {
                "record": "config",
                "g": c.g,
                "configKey": c.key,
                "order": c.order,
                "generators": c.generator_strings(),
                "primitive": c.primitive,
                "faithfulCore": c.faithful_on_core,
                "stabilizerOrder": c.stabilizer.order,
            },
            out,
        )
    _dump({"record": "summary", "configCount": len(configs), "pass": True}, out)
    err.write(f"enumerate --g {args.g}: {len(configs)} configurations\n")
    err.write(f"# volatile: wall_time_seconds={time.monotonic() - t0:.3f}\n")
    return 0


# ---------------------------------------------------------------------------
# transfer
# ---------------------------------------------------------------------------


def cmd_transfer(args, out, err) -> int:
    from .transfer import BUILTIN_CHAINS, chain_report, verify_chain

    factory = BUILTIN_CHAINS.get(args.case)
    if factory is None:
        raise UsageError(
            f"unknown case {args.case!r}; choose from {sorted(BUILTIN_CHAINS)}"
        )
    t0 = time.monotonic()
    chain = factory()
    result = verify_chain(chain)
    _header(["transfer", "--case", args.case], out)
    rec = chain_report(chain)
    rec["record"] = "chain"
    _dump(rec, out)
    _dump(
        {
            "record": "summary",
            "chain": chain.name,
            "pass": result.ok,
            "failedStep": result.failed_step,
        },
        out,
    )
    err.write(f"transfer --case {args.case}: {'ok' if result.ok else 'FAILED'}\n")
    err.write(f"# volatile: wall_time_seconds={time.monotonic() - t0:.3f}\n")
    return 0 if result.ok else 2


# ---------------------------------------------------------------------------
# quad
# ---------------------------------------------------------------------------


def cmd_quad(args, out, err) -> int:
    from .quadforms import (
        BadDiscriminant,
        brauer_siegel_csv,
        class_number,
        split_prime_distinctness,
    )

    try:
        if args.quad_command == "class-number":
            out.write(f"{class_number(args.discriminant)}\n")
            return 0
        if args.quad_command == "bs-table":
            for line in brauer_siegel_csv(args.min, args.max):
                out.write(line + "\n")
            return 0
        if args.quad_command == "split-demo":
            report = split_prime_distinctness(args.discriminant, args.bound)
            _dump(report.to_dict(), out)
            return 0
    except (BadDiscriminant, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    raise UsageError("unknown quad subcommand")


# ---------------------------------------------------------------------------
# cohomology demo
# ---------------------------------------------------------------------------


def cmd_cohomology(args, out, err) -> int:
    from .glattice import GLattice, cohomology, cyclic_group, symmetric_group
    from .intlin import AbelianGroupStructure

    t0 = time.monotonic()
    _header(["cohomology", "--demo"], out)
    checks = []

    h1 = cohomology(GLattice.sign_flip(1), 1)
    checks.append(("H1(C2, Z with negation)", str(h1), h1 == AbelianGroupStructure((2,), 0)))
    h2 = cohomology(GLattice.trivial(cyclic_group(2), 1), 2)
    checks.append(("H2(C2, Z trivial)", str(h2), h2 == AbelianGroupStructure((2,), 0)))
    for name, grp in (("C2", cyclic_group(2)), ("C3", cyclic_group(3)), ("S3", symmetric_group(3))):
        h = cohomology(GLattice.regular(grp), 1)
        checks.append((f"H1({name}, Z[{name}])", str(h), h.is_trivial))

    ok = True
    for label, value, good in checks:
        ok &= good
        _dump({"record": "cohomology", "check": label, "value": value, "pass": good}, out)
    _dump({"record": "summary", "checks": len(checks), "pass": ok}, out)
    err.write(f"cohomology --demo: {len(checks)} checks, {'ok' if ok else 'FAILED'}\n")
    err.write(f"# volatile: wall_time_seconds={time.monotonic() - t0:.3f}\n")
    return 0 if ok else 2


_COMMANDS = {
    "enumerate": cmd_enumerate,
    "verify": cmd_verify,
    "transfer": cmd_transfer,
    "quad": cmd_quad,
    "cohomology": cmd_cohomology,
}


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args, out, err)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
