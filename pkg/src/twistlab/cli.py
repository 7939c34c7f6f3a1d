"""Command-line front door.

Every subcommand reads curve records (``--curve`` or JSONL from ``--in`` /
stdin), runs one engine operation per record and writes one JSONL record
per input, in input order.
"""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from functools import partial

from .arith import REAL
from .config import DEFAULT_MAX_X, ENGINE_VERSION, RANDOM_SEED, configure_logging
from .curve import Curve, local_data, make_curve, minimal_model, two_division
from .descent import FullTorsionCurve, relaxed_strict, sel2, verify_twist_formula
from .errors import OutOfDomain, TwistlabError, UnsupportedPlace
from .gmodule import GModule, group_algebra, rank_stability, split_module
from .localdata import PlaceDescriptor, Violation, admissible, descriptors_for
from .parity import classify_constant_parity, root_number, selmer_envelope, twist_record
from .twistsearch import (
    density_scan,
    drop_twist_candidates,
    family_curve,
    flip_twist,
    stable_twist_primes,
    step_twist_candidates,
)
from .validate import print_summary, run_validation
from .writer import write_jsonl, write_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3

COMMANDS = ("analyze", "twist", "envelope", "descend", "search", "density", "classify", "gmodule")


# =========================================================
# INPUT
# =========================================================
def _curve(record: dict) -> Curve:
    if "a" in record:
        return make_curve(record["a"])
    if "e" in record:
        return FullTorsionCurve.from_json(record).curve
    raise TwistlabError("record needs an \"a\" or \"e\" curve field")


def _full(record: dict) -> FullTorsionCurve:
    if "e" not in record:
        raise TwistlabError("descent needs {\"e\": [e1, e2, e3]}")
    return FullTorsionCurve.from_json(record)


def _option(record: dict, key: str, default=None):
    value = record.get(key, default)
    if value is None:
        raise TwistlabError(f"missing {key!r}")
    return value


# =========================================================
# HANDLERS (record, options) -> (outputs, unsupported)
# =========================================================
def handle_analyze(record: dict, opts: dict) -> tuple:
    E = _curve(record)
    M = minimal_model(E)
    tdd = two_division(M)
    rn = root_number(M, strict=False)
    out = {
        "minimal": list(M.ainvs),
        "disc": M.disc,
        "c4": M.c4,
        "c6": M.c6,
        "j": str(M.j),
        "galoisType": tdd.galois_type.value,
        "torsionDimQ": tdd.torsion_dim_q,
        "reduction": [r.to_json() for r in local_data(M) if r.place != REAL],
        "rootNumber": rn.global_,
    }
    return out, not rn.domain_ok


def handle_twist(record: dict, opts: dict) -> tuple:
    E = _curve(record)
    d = int(_option(record, "d", opts.get("d")))
    out = twist_record(E, d)
    adm = admissible(E, d)
    out["admissible"] = {"reason": adm.reason} if isinstance(adm, Violation) else {"T": list(adm.T)}
    return out, out["flip"] is None or out["rootNumber"] is None


def handle_envelope(record: dict, opts: dict) -> tuple:
    E = _curve(record)
    d = int(_option(record, "d", opts.get("d")))
    d2 = int(_option(record, "d2", opts.get("d2")))
    env = selmer_envelope(E, d, d2, record.get("dimVT", opts.get("dim_vt")))
    return {"T": list(env.T), "t": env.t, "possible": list(env.possible), "exact": env.exact}, False


def handle_descend(record: dict, opts: dict) -> tuple:
    E = _full(record)
    out = sel2(E).to_json()
    T = record.get("T", opts.get("T"))
    if T:
        out["setup"] = relaxed_strict(E, T).to_json()
    d = record.get("d", opts.get("d"))
    if d is not None and int(d) != 1:
        out["twistFormula"] = verify_twist_formula(E, int(d)).to_json()
    return out, False


def handle_search(record: dict, opts: dict) -> tuple:
    mode = record.get("mode", opts.get("mode", "stable"))
    X = int(record.get("maxX", opts.get("max_x", DEFAULT_MAX_X)))
    if mode == "family":
        p = int(_option(record, "p", opts.get("p")))
        t0 = int(record.get("t0", opts.get("t0", 0)))
        E = family_curve(p, t0, record.get("eta", opts.get("eta")))
        return {"mode": mode, "curve": E.to_json(), "disc": E.disc}, False
    E = _curve(record)
    if mode == "stable":
        return {"mode": mode, "primes": stable_twist_primes(E, X)}, False
    if mode == "step":
        return {"mode": mode, "candidates": [c.to_json() for c in step_twist_candidates(E, X)]}, False
    if mode == "drop":
        return {"mode": mode, "candidates": [c.to_json() for c in drop_twist_candidates(E, X)]}, False
    if mode == "flip":
        return {"mode": mode, "d": flip_twist(E, X)}, False
    if mode == "density":
        return handle_density(record, opts)
    raise TwistlabError(f"unknown search mode {mode!r}")


def handle_density(record: dict, opts: dict) -> tuple:
    E = _curve(record)
    X = int(record.get("maxX", opts.get("max_x", DEFAULT_MAX_X)))
    report = density_scan(E, X)
    out = report.to_json()
    out["fractions"] = {str(k): round(v, 6) for k, v in report.fractions().items()}
    if opts.get("table"):
        out["table"] = write_table(report.to_frame(), "density", fmt=opts["table"])
    return out, False


def handle_classify(record: dict, opts: dict) -> tuple:
    if "places" in record:
        places = [PlaceDescriptor.from_json(p) for p in record["places"]]
    else:
        places = descriptors_for(_curve(record))
    return classify_constant_parity(places).to_json(), False


def handle_gmodule(record: dict, opts: dict) -> tuple:
    p = int(_option(record, "p", opts.get("p")))
    out = {"algebra": group_algebra(p).to_json()}
    if "rows" in record:
        split = split_module(GModule.from_rows(p, record["rows"]))
        out.update(split.to_json())
        out["verdict"] = rank_stability(split.multiplicities).value
    return out, False


HANDLERS = {
    "analyze": handle_analyze,
    "twist": handle_twist,
    "envelope": handle_envelope,
    "descend": handle_descend,
    "search": handle_search,
    "density": handle_density,
    "classify": handle_classify,
    "gmodule": handle_gmodule,
}


# =========================================================
# JOB EXECUTION
# =========================================================
def run_job(command: str, record: dict, opts: dict) -> dict:
    """One JobRecord. Errors are captured into the record."""
    start = time.perf_counter()
    job = {"command": command, "inputs": record, "engineVersion": ENGINE_VERSION}
    try:
        outputs, unsupported = HANDLERS[command](record, opts)
        job.update(outputs)
        job["status"] = "unsupported" if unsupported else "ok"
    except (UnsupportedPlace, OutOfDomain) as exc:
        job.update(status="unsupported", error=str(exc))
    except (TwistlabError, KeyError, TypeError, ValueError) as exc:
        job.update(status="error", error=f"{type(exc).__name__}: {exc}")
    if opts.get("timings"):
        job["elapsedMillis"] = round((time.perf_counter() - start) * 1000, 3)
    return job


def _run_indexed(item: tuple, opts: dict) -> dict:
    command, record = item
    return run_job(command, record, opts)


def run_jobs(items: list, opts: dict, jobs: int = 1) -> list:
    """Results in input order regardless of the worker count."""
    worker = partial(_run_indexed, opts=opts)
    if jobs <= 1 or len(items) <= 1:
        return [worker(item) for item in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, items, chunksize=max(1, len(items) // (4 * jobs))))


def read_records(lines) -> list:
    """(line number, record or None, error or None) for each non-blank line."""
    out = []
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
            if not isinstance(record, dict):
                raise ValueError("record is not a JSON object")
            out.append((n, record, None))
        except ValueError as exc:
            logger.warning("line %d: malformed record (%s)", n, exc)
            out.append((n, None, str(exc)))
    return out


def batch(lines, opts: dict, jobs: int = 1) -> tuple:
    """Run a JSONL stream of {"command": ..., ...inputs}; returns the output
    records in input order plus a summary."""
    parsed = read_records(lines)
    items, slots = [], []
    for n, record, error in parsed:
        command = (record or {}).get("command")
        if error is None and command not in HANDLERS:
            error = f"unknown command {command!r}"
            logger.warning("line %d: %s", n, error)
        if error is not None:
            slots.append({"line": n, "status": "error", "error": error})
            continue
        inputs = {k: v for k, v in record.items() if k != "command"}
        slots.append(len(items))
        items.append((command, inputs))
    results = run_jobs(items, opts, jobs)
    out = []
    for (n, _, _), slot in zip(parsed, slots):
        rec = results[slot] if isinstance(slot, int) else slot
        if isinstance(slot, int):
            rec = {"line": n, **rec}
        out.append(rec)
    ok = sum(1 for r in out if r["status"] == "ok")
    unsupported = sum(1 for r in out if r["status"] == "unsupported")
    summary = {"ok": ok, "unsupported": unsupported, "failed": len(out) - ok - unsupported}
    return out, summary


# =========================================================
# ARGUMENTS
# =========================================================
def _json_arg(text: str):
    try:
        return json.loads(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="twistlab", description="2-Selmer ranks in quadratic twist families")
    parser.add_argument("command", choices=COMMANDS + ("batch", "validate"))
    parser.add_argument("--in", dest="infile", help="JSONL input (default stdin)")
    parser.add_argument("--out", dest="outfile", help="JSONL output (default stdout)")
    parser.add_argument("--curve", type=_json_arg, help='single record, e.g. \'{"a":[0,-1,1,0,0]}\'')
    parser.add_argument("--strict", action="store_true", help="exit 3 on Unsupported/OutOfDomain results")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--max-x", dest="max_x", type=int, default=DEFAULT_MAX_X)
    parser.add_argument("--seed", type=int, default=RANDOM_SEED)
    parser.add_argument("--d", type=int)
    parser.add_argument("--d2", type=int)
    parser.add_argument("--dim-vt", dest="dim_vt", type=int)
    parser.add_argument("--T", type=_json_arg, help="place list for descend, e.g. '[17]' or '[\"Real\"]'")
    parser.add_argument("--mode", choices=("stable", "step", "drop", "flip", "density", "family"), default="stable")
    parser.add_argument("--p", type=int)
    parser.add_argument("--t0", type=int, default=0)
    parser.add_argument("--eta", type=int)
    parser.add_argument("--table", choices=("parquet", "csv"), help="also write the density table")
    parser.add_argument("--timings", action="store_true", help="add elapsedMillis to every record")
    parser.add_argument("--size", type=int, default=20, help="batch size per check for validate")
    parser.add_argument("--log", help="log level (overrides TWISTLAB_LOG)")
    return parser


def _input_lines(args):
    if args.infile:
        with open(args.infile) as fh:
            return fh.readlines()
    return sys.stdin.readlines()


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log)
    opts = {k: v for k, v in vars(args).items() if v is not None}

    if args.command == "validate":
        summary = run_validation(size=args.size, seed=args.seed)
        _emit([summary], args)
        print_summary(summary, sys.stderr)
        return EXIT_OK if summary["all_passed"] else 1

    if args.command == "batch":
        records, summary = batch(_input_lines(args), opts, args.jobs)
        _emit(records + [{"summary": summary}], args)
        return _exit_code(records, args.strict)

    if args.curve is not None:
        parsed = [(0, args.curve, None)]
    elif args.command == "search" and args.mode == "family":
        parsed = [(0, {}, None)]
    elif args.command == "gmodule" and args.p is not None and not args.infile:
        parsed = [(0, {}, None)]
    else:
        parsed = read_records(_input_lines(args))
    bad = [n for n, _, err in parsed if err is not None]
    if bad:
        print(f"twistlab: malformed input on line(s) {bad}", file=sys.stderr)
        return EXIT_INPUT
    records = run_jobs([(args.command, rec) for _, rec, _ in parsed], opts, args.jobs)
    _emit(records, args)
    return _exit_code(records, args.strict)


def _exit_code(records: list, strict: bool) -> int:
    errors = [r for r in records if r.get("status") == "error"]
    for r in errors:
        print(f"twistlab: {r['error']}", file=sys.stderr)
    if errors:
        return EXIT_INPUT
    if strict and any(r.get("status") == "unsupported" for r in records):
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _emit(records: list, args) -> None:
    if args.outfile:
        with open(args.outfile, "w") as fh:
            write_jsonl(records, fh)
    else:
        write_jsonl(records, sys.stdout)


def main() -> None:
    sys.exit(run())
