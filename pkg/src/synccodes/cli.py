"""Command-line entry point.

Exit codes: 0 success / SAT, 20 UNSAT or no code for any k, 3 timeout or
unknown, 2 usage error, 1 other failures (verification FAIL, bad input).
10 is reserved for SAT and not used; SAT is printed as text.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

from . import catalog as catalog_mod
from .codec import BitBuffer, CorruptionError, SyncError, decode_report, encode
from .core import Code, ContractError
from .export import SolutionError, VariableMap, emit_cnf, emit_opb, import_solution
from .oracle import OracleBudget, oracle_exists, oracle_min_k
from .solver import MinKStatus, SolverOptions, Status, find_code, min_k
from .verifier import is_sync_code, reliability

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_TIMEOUT, EXIT_UNSAT = 0, 1, 2, 3, 20

log = logging.getLogger("synccodes")


def _range(text: str) -> list[int]:
    """'2..8' -> [2, ..., 8]; '5' -> [5]; '2,4,6' -> [2, 4, 6]."""
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def _opts(args) -> SolverOptions:
    return SolverOptions(timeout=args.timeout, symmetry=not args.no_symmetry,
                         node_limit=args.node_limit)


def _record(args, code: Code, src: str) -> None:
    if getattr(args, "save", None):
        entry = catalog_mod.CatalogEntry(
            code.d, code.k, reliability(code), code, src,
            datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
        )
        catalog_mod.append(entry, args.save)


def cmd_find(args) -> int:
    res = find_code(args.d, args.k, args.n, _opts(args))
    print(f"{res.status.value.upper()} d={args.d} k={args.k} n={args.n} "
          f"nodes={res.nodes} time={res.elapsed:.2f}s")
    if res.status is Status.SAT:
        print(res.code)
        _record(args, res.code, "native-solver")
        return EXIT_OK
    return EXIT_UNSAT if res.status is Status.UNSAT else EXIT_TIMEOUT


def cmd_minx(args) -> int:
    res = min_k(args.d, args.n, _opts(args))
    for k, run in res.runs:
        log.info("k=%d %s nodes=%d time=%.2fs", k, run.status.value, run.nodes, run.elapsed)
    if res.status is MinKStatus.FINITE:
        print(f"k = {res.k}")
        print(res.code)
        _record(args, res.code, "native-solver")
        return EXIT_OK
    if res.status is MinKStatus.INFINITE:
        print(f"k = INF (every k <= {res.bound} refuted)")
        return EXIT_UNSAT
    print(f"k = ? (decided up to k={res.last_k_decided})")
    return EXIT_TIMEOUT


def cmd_verify(args) -> int:
    code = Code.parse(args.code)
    ok = is_sync_code(code, args.n)
    print(f"{'OK' if ok else 'FAIL'} {code} d={code.d} k={code.k} n={args.n}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reliability(args) -> int:
    code = Code.parse(args.code)
    rel = reliability(code)
    print(f"{code} d={code.d} k={code.k} n={'none' if rel is None else rel}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    budget = OracleBudget(max_length=args.max_length)
    if args.k is None:
        res = oracle_min_k(args.d, args.n, budget)
        print(f"k = {str(res) or '?'}")
        if res.code is not None:
            print(res.code)
        return {MinKStatus.FINITE: EXIT_OK, MinKStatus.INFINITE: EXIT_UNSAT}.get(res.status, EXIT_TIMEOUT)
    res = oracle_exists(args.d, args.k, args.n, budget)
    print(f"{res.status.value.upper()} d={args.d} k={args.k} n={args.n} enumerated={res.nodes}")
    if res.code is not None:
        print(res.code)
        _record(args, res.code, "oracle")
    return {Status.SAT: EXIT_OK, Status.UNSAT: EXIT_UNSAT}.get(res.status, EXIT_TIMEOUT)


def _read_input(path, as_bits: bool) -> BitBuffer:
    raw = sys.stdin.buffer.read() if path in (None, "-") else Path(path).read_bytes()
    return BitBuffer.from_str(raw.decode()) if as_bits else BitBuffer.from_bytes(raw)


def _write_output(path, buf: BitBuffer, as_bits: bool) -> None:
    data = (str(buf) + "\n").encode() if as_bits else buf.to_bytes()
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
    else:
        Path(path).write_bytes(data)


def cmd_encode(args) -> int:
    code = Code.parse(args.code)
    data = _read_input(args.input, args.bits)
    extra = (-len(data)) % code.d
    if extra:
        if not args.pad:
            raise ContractError(f"{len(data)} data bits is not a multiple of d={code.d}; use --pad")
        data = BitBuffer(data.bits + (0,) * extra)
    _write_output(args.output, encode(data, code), args.bits)
    return EXIT_OK


def cmd_decode(args) -> int:
    code = Code.parse(args.code)
    stream = _read_input(args.input, args.bits)
    rep = decode_report(stream, code, args.offset)
    log.info("phase=%d after %d bits; skipped %d head and %d tail bits",
             rep.phase, rep.consumed, rep.skipped_head, rep.skipped_tail)
    _write_output(args.output, rep.data, args.bits)
    return EXIT_OK


def cmd_export(args) -> int:
    emit = emit_opb if args.format == "opb" else emit_cnf
    text = emit(args.d, args.k, args.n, not args.no_symmetry)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return EXIT_OK


def cmd_import(args) -> int:
    vm = VariableMap.from_legend(Path(args.instance).read_text()) if args.instance else None
    doc = sys.stdin.read() if args.solution in (None, "-") else Path(args.solution).read_text()
    code = import_solution(doc, vm)
    print(f"OK {code} d={code.d} k={code.k} n={reliability(code)}")
    _record(args, code, "imported")
    return EXIT_OK


def _cell(job):
    d, n, timeout, symmetry = job
    start = time.monotonic()
    res = min_k(d, n, SolverOptions(timeout=timeout, symmetry=symmetry))
    return d, n, res, time.monotonic() - start


def cmd_table(args) -> int:
    ds, ns = _range(args.d), _range(args.n)
    jobs = [(d, n, args.timeout, not args.no_symmetry) for d in ds for n in ns]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_cell, jobs))
    else:
        results = [_cell(j) for j in jobs]
    grid = {(d, n): (res, secs) for d, n, res, secs in results}
    width = 5
    print("d\\n".ljust(5) + "".join(str(n).rjust(width) for n in ns))
    for d in ds:
        print(str(d).ljust(5) + "".join(str(grid[d, n][0]).rjust(width) for n in ns))
    if args.details:
        print()
        for d in ds:
            for n in ns:
                res, secs = grid[d, n]
                extra = res.code if res.code is not None else (
                    f"bound={res.bound}" if res.status is MinKStatus.INFINITE else f"decided<={res.last_k_decided}")
                per_k = " ".join(f"{k}:{r.status.value[0]}:{r.elapsed:.2f}" for k, r in res.runs)
                print(f"d={d} n={n} k={str(res) or '?'} {extra} time={secs:.2f}s [{per_k}]")
    return EXIT_OK


def cmd_catalog(args) -> int:
    path = args.catalog or catalog_mod.default_path()
    if args.action == "add":
        if path is None:
            raise ContractError("catalog add needs --catalog or $SYNCCODES_CATALOG")
        code = Code.parse(args.code)
        entry = catalog_mod.CatalogEntry(code.d, code.k, reliability(code), code, args.src,
                                         datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"))
        catalog_mod.append(entry, path)
        print(entry.format())
        return EXIT_OK
    entries = catalog_mod.load(path)
    if args.action == "list":
        sys.stdout.write(catalog_mod.dumps(entries))
    else:
        print(f"OK {len(entries)} entries verified")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="synccodes", description="Find, verify and apply (d,k,n)-synchronization codes.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def solver_flags(sp):
        sp.add_argument("--timeout", type=float, default=60.0, help="seconds per decision instance")
        sp.add_argument("--node-limit", type=int, default=None)
        sp.add_argument("--no-symmetry", action="store_true")

    sp = sub.add_parser("find", help="decide one (d,k,n) instance")
    for f in ("--d", "--k", "--n"):
        sp.add_argument(f, type=int, required=True)
    solver_flags(sp)
    sp.add_argument("--save", metavar="CATALOG")
    sp.set_defaults(func=cmd_find)

    sp = sub.add_parser("minx", help="smallest k for given d and n")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    solver_flags(sp)
    sp.add_argument("--save", metavar="CATALOG")
    sp.set_defaults(func=cmd_minx)

    sp = sub.add_parser("verify", help="check a code at window n")
    sp.add_argument("--code", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("reliability", help="exact reliability of a code")
    sp.add_argument("--code", required=True)
    sp.set_defaults(func=cmd_reliability)

    sp = sub.add_parser("oracle", help="brute-force search (small sizes)")
    sp.add_argument("--d", type=int, required=True)
    sp.add_argument("--k", type=int, help="omit to sweep k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--max-length", type=int, default=14)
    sp.add_argument("--save", metavar="CATALOG")
    sp.set_defaults(func=cmd_oracle)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        sp = sub.add_parser(name, help=f"{name} a bitstream (binary stdin/stdout by default)")
        sp.add_argument("--code", required=True)
        sp.add_argument("-i", "--input")
        sp.add_argument("-o", "--output")
        sp.add_argument("--bits", action="store_true", help="text 0/1 input and output")
        if name == "encode":
            sp.add_argument("--pad", action="store_true", help="zero-pad data to a multiple of d")
        else:
            sp.add_argument("--offset", type=int, default=0, help="bit offset to start reading at")
        sp.set_defaults(func=func)

    sp = sub.add_parser("export", help="emit the pseudo-Boolean model as OPB or CNF")
    for f in ("--d", "--k", "--n"):
        sp.add_argument(f, type=int, required=True)
    sp.add_argument("--format", choices=("opb", "cnf"), default="opb")
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_export)

    sp = sub.add_parser("import", help="read an external solver's assignment and verify it")
    sp.add_argument("--solution", help="solver output (default stdin)")
    sp.add_argument("--instance", help="emitted OPB/CNF file whose legend maps variables")
    sp.add_argument("--save", metavar="CATALOG")
    sp.set_defaults(func=cmd_import)

    sp = sub.add_parser("table", help="min-k grid over ranges of d and n")
    sp.add_argument("--d", default="2..8")
    sp.add_argument("--n", default="2..13")
    solver_flags(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--details", action="store_true", help="print witnesses and per-k runtimes")
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("catalog", help="list, check or extend a code catalog")
    sp.add_argument("action", choices=("list", "check", "add"))
    sp.add_argument("--catalog", help=f"catalog file (default ${catalog_mod.ENV_VAR} or the shipped seed)")
    sp.add_argument("--code")
    sp.add_argument("--src", default="native-solver", choices=catalog_mod.PROVENANCE)
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SolutionError, CorruptionError, SyncError, catalog_mod.CatalogError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
