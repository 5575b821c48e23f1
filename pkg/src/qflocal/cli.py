"""Command line front-end: ``qflocal analyze|scan|verify-lemmas``.

Reports are JSON Lines on stdout.  Exit status: 0 when every report passes
(or is candidate-new), 1 when a scan found a witness or a suite failed,
2 on input or usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .invariants import nu_profile
from .jordan import jordan_decompose
from .lattice import GramLattice, LatticeError, make_lattice
from .localrep import local_classes, ramified_primes
from .regular import SUITES, ScanReport, escalation_check, newness_scan, q_structure_check, regularity_scan, run_suite

_PROFILE = {
    "type": "object",
    "required": ["eta", "nu", "nu_prime", "type_a"],
    "properties": {
        "eta": {"type": "object", "additionalProperties": {"type": ["integer", "string"]}},
        "nu": {"type": ["integer", "string"]},
        "nu_prime": {"type": "integer"},
        "type_a": {"type": "boolean"},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "kind", "params", "verdict", "witnesses", "profiles", "jordan"],
    "properties": {
        "name": {"type": "string"},
        "kind": {"enum": ["regularity", "newness", "structure", "lemma", "analysis"]},
        "params": {"type": "object"},
        "verdict": {"enum": ["pass", "witness", "not-new", "candidate-new"]},
        "witnesses": {"type": "array"},
        "profiles": {"type": "object", "additionalProperties": _PROFILE},
        "jordan": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["exp", "blocks"],
                    "properties": {
                        "exp": {"type": "integer", "minimum": 0},
                        "blocks": {"type": "array", "items": {"type": "string", "pattern": "^(u[0-9]+|A|H)$"}},
                    },
                },
            },
        },
    },
}

ERROR_SCHEMA = {
    "type": "object",
    "required": ["error", "source"],
    "properties": {"error": {"type": "string"}, "source": {"type": "string"}, "line": {"type": "integer"}},
}

SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["summary"],
    "properties": {"summary": {"type": "object"}},
}


class InputError(ValueError):
    def __init__(self, msg: str, source: str, line: int | None = None):
        super().__init__(msg)
        self.source = source
        self.line = line

    def record(self) -> dict:
        out = {"error": str(self), "source": self.source}
        if self.line is not None:
            out["line"] = self.line
        return out


@dataclass(frozen=True)
class CorpusEntry:
    name: str
    lattice: GramLattice
    source: str
    line: int


def _diag_matrix(entries) -> list[list[int]]:
    n = len(entries)
    return [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)]


def _entry_from_obj(obj, source: str, line: int) -> CorpusEntry:
    if not isinstance(obj, dict) or "name" not in obj:
        raise InputError("expected an object with a name", source, line)
    if "gram" in obj:
        g = obj["gram"]
    elif "diag" in obj:
        g = _diag_matrix(obj["diag"])
    else:
        raise InputError("entry needs 'gram' or 'diag'", source, line)
    try:
        lat = make_lattice(g, str(obj["name"]))
    except (LatticeError, TypeError) as exc:
        raise InputError(f"{obj['name']}: {exc}", source, line) from None
    return CorpusEntry(str(obj["name"]), lat, source, line)


def parse_literal(text: str) -> CorpusEntry:
    kind, _, body = text.partition(":")
    try:
        if kind == "diag":
            entries = [int(x) for x in body.split(",") if x.strip()]
            obj = {"name": text, "diag": entries}
        else:
            obj = {"name": text, "gram": json.loads(body)}
    except ValueError as exc:
        raise InputError(f"bad literal: {exc}", text) from None
    return _entry_from_obj(obj, text, 1)


def read_inputs(items: list[str]) -> Iterator[CorpusEntry | InputError]:
    """Entries from inline literals and JSONL files; errors are yielded, not raised."""
    for item in items:
        if item.startswith(("diag:", "gram:")):
            try:
                yield parse_literal(item)
            except InputError as exc:
                yield exc
            continue
        path = Path(item)
        if not path.is_file():
            yield InputError("no such corpus file", item)
            continue
        seen = set()
        for num, raw in enumerate(path.read_text().splitlines(), 1):
            if not raw.strip():
                continue
            try:
                obj = json.loads(raw)
            except json.JSONDecodeError as exc:
                yield InputError(f"invalid JSON: {exc.msg}", item, num)
                continue
            try:
                entry = _entry_from_obj(obj, item, num)
            except InputError as exc:
                yield exc
                continue
            if entry.name in seen:
                yield InputError(f"duplicate name {entry.name!r}", item, num)
                continue
            seen.add(entry.name)
            yield entry


def analyze(lat: GramLattice, primes=None, vcap: int = 3) -> ScanReport:
    primes = sorted(set(primes)) if primes else ramified_primes(lat)
    profiles, jordan, classes = {}, {}, {}
    for p in primes:
        jordan[str(p)] = jordan_decompose(lat, p).to_json()
        classes[str(p)] = [str(c.value) for c in local_classes(lat, p, vcap).sorted()]
        if lat.n >= 3:
            profiles[str(p)] = nu_profile(lat, p).to_json()
    params = {
        "primes": primes,
        "vcap": vcap,
        "rank": lat.n,
        "dL": lat.det,
        "scale": lat.scale,
        "norm": lat.norm,
        "local_classes": classes,
    }
    if lat.n >= 4:
        params["escalation"] = escalation_check(lat)
    return ScanReport("analysis", lat.name or str(lat), params, "pass", [], profiles, jordan)


def _scan_one(task) -> dict:
    kind, entry, bound, pmax = task
    lat = entry.lattice
    if kind == "regular":
        rep = regularity_scan(lat, bound)
    elif kind == "new":
        rep = newness_scan(lat, bound, pmax)
    else:
        rep = q_structure_check(lat, bound)
    return rep.to_dict()


def _analyze_one(task) -> dict:
    entry, primes, vcap = task
    return analyze(entry.lattice, primes, vcap).to_dict()


def _guarded(fn, task, entry: CorpusEntry):
    try:
        return fn(task)
    except (ValueError, ArithmeticError) as exc:
        return InputError(f"{entry.name}: {exc}", entry.source, entry.line).record()


def _run_guarded(args):
    fn, task, entry = args
    return _guarded(fn, task, entry)


def _fan_out(fn, tasks, entries, jobs: int):
    work = [(fn, t, e) for t, e in zip(tasks, entries)]
    if jobs <= 1 or len(work) <= 1:
        return [_run_guarded(w) for w in work]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_guarded, work))


def render_text(rec: dict) -> str:
    if "error" in rec:
        where = rec["source"] + (f":{rec['line']}" if "line" in rec else "")
        return f"error {where}: {rec['error']}"
    if "summary" in rec:
        return "summary " + " ".join(f"{k}={v}" for k, v in rec["summary"].items())
    lines = [f"{rec['kind']} {rec['name']}: {rec['verdict']}"]
    if rec["witnesses"]:
        lines.append(f"  witnesses: {json.dumps(rec['witnesses'])}")
    for p, blocks in rec["jordan"].items():
        parts = [f"{p}^{lv['exp']}:" + ",".join(lv["blocks"]) for lv in blocks]
        lines.append(f"  jordan[{p}]: " + " | ".join(parts))
    for p, prof in rec["profiles"].items():
        lines.append(f"  nu[{p}]={prof['nu']} nu'[{p}]={prof['nu_prime']} type_a={prof['type_a']}")
        lines.append(f"  eta[{p}]: " + " ".join(f"{s}->{e}" for s, e in prof["eta"].items()))
    for k, v in rec["params"].items():
        if k not in ("local_classes", "escalation"):
            lines.append(f"  {k}: {json.dumps(v)}")
    return "\n".join(lines)


def _emit(rec: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(rec, sort_keys=False) + "\n")
    else:
        out.write(render_text(rec) + "\n")


def _status(recs: list[dict]) -> int:
    code = 0
    for r in recs:
        if "error" in r:
            return 2
        if r.get("verdict") in ("witness", "not-new"):
            code = 1
    return code


def _parse_primes(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("primes must be a comma separated list of integers") from None
    from sympy import isprime

    if not out or any(not isprime(p) for p in out):
        raise argparse.ArgumentTypeError("every entry of --primes must be prime")
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected an integer") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qflocal", description="Local invariants and bounded scans of integral lattices.")
    sub = ap.add_subparsers(dest="command", required=True)

    fmt = argparse.ArgumentParser(add_help=False)
    fmt.add_argument("--format", choices=("json", "text"), default="json")
    fmt.add_argument("--jobs", type=_positive, default=1)

    an = sub.add_parser("analyze", parents=[fmt], help="Jordan splittings, profiles and escalation data")
    an.add_argument("inputs", nargs="+", help="corpus file or diag:... / gram:... literal")
    an.add_argument("--primes", type=_parse_primes, default=None)
    an.add_argument("--vcap", type=_nonneg, default=3)

    sc = sub.add_parser("scan", parents=[fmt], help="bounded regularity, new-ness or structure scans")
    sc.add_argument("kind", choices=("regular", "new", "structure"))
    sc.add_argument("inputs", nargs="+")
    sc.add_argument("--bound", type=_positive, default=2000)
    sc.add_argument("--pmax", type=_positive, default=5)

    vl = sub.add_parser("verify-lemmas", parents=[fmt], help="seeded property suites")
    vl.add_argument("--suite", choices=sorted(SUITES) + ["all"], default="all")
    vl.add_argument("--seed", type=int, default=1)
    vl.add_argument("--cases", type=_positive, default=100)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    recs: list[dict] = []

    if args.command == "verify-lemmas":
        names = sorted(SUITES) if args.suite == "all" else [args.suite]
        tasks = [(n, args.seed, args.cases) for n in names]
        if args.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reps = list(pool.map(_suite_task, tasks))
        else:
            reps = [_suite_task(t) for t in tasks]
        for rec in reps:
            recs.append(rec)
            _emit(rec, args.format, out)
        return _status(recs)

    items = list(read_inputs(args.inputs))
    entries = [it for it in items if not isinstance(it, InputError)]
    if args.command == "analyze":
        tasks = [(e, args.primes, args.vcap) for e in entries]
        results = iter(_fan_out(_analyze_one, tasks, entries, args.jobs))
    else:
        tasks = [(args.kind, e, args.bound, args.pmax) for e in entries]
        results = iter(_fan_out(_scan_one, tasks, entries, args.jobs))
    # input order, errors in place
    for it in items:
        rec = it.record() if isinstance(it, InputError) else next(results)
        recs.append(rec)
        _emit(rec, args.format, out)

    if args.command == "scan":
        counts: dict[str, int] = {}
        for r in recs:
            key = "error" if "error" in r else r["verdict"]
            counts[key] = counts.get(key, 0) + 1
        _emit({"summary": {"kind": args.kind, "entries": len(recs), **counts}}, args.format, out)
    return _status(recs)


def _suite_task(task) -> dict:
    name, seed, cases = task
    return run_suite(name, seed, cases).to_dict()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
