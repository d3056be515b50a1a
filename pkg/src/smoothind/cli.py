"""Batch front-end.

    smoothind run CATALOG -o REPORT [--seed S] [--precision N] [--box B]
                  [--ladder L] [--jobs J] [--samples K] [--summary]
    smoothind verify-uniform --p P --size N --level M --samples K --precision N --seed S
    smoothind oracle-suite --catalog CATALOG --report REPORT

Exit codes: 0 when every requested check passes, 2 when a check fails,
1 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .oracle import oracle_suite
from .padic import ConvergenceError, uniformity_suite
from .rootdata import GroupProfile, ProfileError, top_dimension
from .transition import (
    diagonal_vanishing,
    ext_table,
    strict_inclusion_check,
    vanishing_table,
)

REPORT_KINDS = ("vanishing", "ext", "diagonal", "uniformity", "oracles")

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    profile: GroupProfile
    m: int
    reports: tuple[str, ...]


def parse_catalog(text: str) -> list[CatalogEntry]:
    try:
        data = json.loads(text) if text.strip() else []
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from exc
    if isinstance(data, dict):
        data = data.get("entries", [])
    if not isinstance(data, list):
        raise CatalogError("catalog must be a list of entries or an object with 'entries'")
    entries = []
    for k, raw in enumerate(data):
        where = f"entries[{k}]"
        if not isinstance(raw, dict):
            raise CatalogError(f"{where}: entry must be an object")
        if "profile" not in raw:
            raise CatalogError(f"{where}: missing field 'profile'")
        try:
            profile = GroupProfile.from_json(raw["profile"])
        except ProfileError as exc:
            raise CatalogError(f"{where}.profile: {exc}") from exc
        m = raw.get("m", profile.min_admissible_level())
        if not isinstance(m, int) or isinstance(m, bool):
            raise CatalogError(f"{where}.m: must be an integer")
        try:
            profile.check_level(m, "m")
        except ProfileError as exc:
            raise CatalogError(f"{where}.m: {exc}") from exc
        reports = raw.get("reports", ["vanishing"])
        if isinstance(reports, str):
            reports = [reports]
        bad = [r for r in reports if r not in REPORT_KINDS]
        if bad:
            raise CatalogError(f"{where}.reports: unknown report {bad[0]!r} (expected one of {', '.join(REPORT_KINDS)})")
        entries.append(CatalogEntry(profile, m, tuple(reports)))
    return entries


def _vanishing_report(profile: GroupProfile, m: int, ladder: int, box: int) -> dict:
    table = vanishing_table(profile, m, ladder)
    out = table.to_json()
    i0, d = table.i0, table.d
    flags = table.nonvanishing
    strict, cert = strict_inclusion_check(profile, m, m, m + profile.e, box)
    witnesses_ok = all(w.fate.survives for entry in table.entries for w in entry.witnesses)
    out["checks"] = {
        "nonvanishing_iff_i_le_i0": flags == [i <= i0 for i in range(d + 2)],
        "witnesses_survive": witnesses_ok,
        "top_degree_vanishes": d > i0 and not flags[d],
        "strict_inclusion": strict,
    }
    out["strict_inclusion_certificate"] = cert
    out["passed"] = all(out["checks"].values())
    return out


def _diagonal_report(profile: GroupProfile, m: int, box: int) -> dict:
    d = top_dimension(profile)
    values = [diagonal_vanishing(profile, i, m, box) for i in range(d + 1)]
    return {"n": m, "values": values, "passed": values == [i > 0 for i in range(d + 1)]}


def process_entry(entry: CatalogEntry, seed: int, precision: int, box: int, ladder: int,
                  samples: int) -> dict:
    prof = entry.profile
    report: dict = {"profile": prof.to_json(), "m": entry.m, "seed": seed}
    passed = True
    for kind in entry.reports:
        if kind == "vanishing":
            sub = _vanishing_report(prof, entry.m, ladder, box)
        elif kind == "ext":
            sub = ext_table(prof, entry.m, ladder)
            sub["passed"] = [r["ext_nonzero"] for r in sub["table"]] == [
                r["nonvanishing"] for r in vanishing_table(prof, entry.m, ladder).to_json()["table"]]
        elif kind == "diagonal":
            sub = _diagonal_report(prof, entry.m, box)
        elif kind == "uniformity":
            sub = uniformity_suite(prof.p, 2, samples, prec=precision, seed=seed)
        else:
            reps = oracle_suite(prof, seed=seed, box=box)
            bad = [r.to_json() for r in reps if not r.agreement]
            sub = {"count": len(reps), "disagreements": bad, "passed": not bad}
        report[kind] = sub
        passed = passed and sub["passed"]
    report["passed"] = passed
    return report


def _run_entry(args):
    return process_entry(*args)


def run(catalog: Path, output: Path, seed: int = 0, precision: int = 12, box: int = 4,
        ladder: int = 3, jobs: int = 1, samples: int = 200, summary: bool = False) -> int:
    try:
        entries = parse_catalog(Path(catalog).read_text())
    except (OSError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    work = [(e, seed + k, precision, box, ladder, samples) for k, e in enumerate(entries)]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_entry, work))
    else:
        reports = [_run_entry(w) for w in work]
    doc = {"seed": seed, "precision": precision, "box": box, "ladder": ladder,
           "reports": reports, "passed": all(r["passed"] for r in reports)}
    Path(output).write_text(json.dumps(doc, indent=2) + "\n")
    if summary:
        print(format_summary(reports))
    return EXIT_OK if doc["passed"] else EXIT_CHECK


def format_summary(reports: list[dict]) -> str:
    lines = [f"{'group':<10} {'p':>3} {'e':>2} {'f':>2} {'m':>3} {'i0':>4} {'d':>4}  nonvanishing degrees  status"]
    for r in reports:
        prof = r["profile"]
        name = f"{prof['family']}{prof['rank']}"
        van = r.get("vanishing")
        i0 = van["i0"] if van else "-"
        d = van["d"] if van else "-"
        degs = ""
        if van:
            nz = [row["i"] for row in van["table"] if row["nonvanishing"]]
            degs = f"0..{max(nz)}" if nz else "none"
        status = "ok" if r["passed"] else "FAIL"
        lines.append(f"{name:<10} {prof['p']:>3} {prof['e']:>2} {prof['f']:>2} {r['m']:>3} {i0!s:>4} {d!s:>4}  {degs:<21} {status}")
    return "\n".join(lines)


def _cmd_run(ns) -> int:
    return run(ns.catalog, ns.output, ns.seed, ns.precision, ns.box, ns.ladder, ns.jobs, ns.samples, ns.summary)


def _cmd_verify(ns) -> int:
    try:
        res = uniformity_suite(ns.p, ns.size, ns.samples, prec=ns.precision, seed=ns.seed,
                               level=ns.level, slack=ns.slack)
    except (ConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(json.dumps(res, indent=2))
    return EXIT_OK if res["passed"] else EXIT_CHECK


def _cmd_oracles(ns) -> int:
    try:
        entries = parse_catalog(Path(ns.catalog).read_text())
    except (OSError, CatalogError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = []
    for k, entry in enumerate(entries):
        reps = oracle_suite(entry.profile, seed=ns.seed + k, box=ns.box, d_cap=ns.d_cap)
        out.append({"profile": entry.profile.to_json(), "count": len(reps),
                    "disagreements": [r.to_json() for r in reps if not r.agreement]})
    passed = all(not o["disagreements"] for o in out)
    Path(ns.report).write_text(json.dumps({"oracles": out, "passed": passed}, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smoothind", description=__doc__.split("\n\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate a catalog of group profiles")
    r.add_argument("catalog", type=Path)
    r.add_argument("-o", "--output", type=Path, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--precision", type=int, default=12)
    r.add_argument("--box", type=int, default=4)
    r.add_argument("--ladder", type=int, default=3)
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--samples", type=int, default=200)
    r.add_argument("--summary", action="store_true")
    r.set_defaults(func=_cmd_run)

    v = sub.add_parser("verify-uniform", help="p-adic checks in a congruence subgroup of GL_n(Z_p)")
    v.add_argument("--p", type=int, required=True)
    v.add_argument("--size", type=int, default=2)
    v.add_argument("--level", type=int, default=None)
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--precision", type=int, default=12)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--slack", type=int, default=3)
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle-suite", help="brute-force cross-checks for each catalog profile")
    o.add_argument("--catalog", type=Path, required=True)
    o.add_argument("--report", type=Path, required=True)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--box", type=int, default=4)
    o.add_argument("--d-cap", type=int, default=20)
    o.set_defaults(func=_cmd_oracles)
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    return ns.func(ns)


if __name__ == "__main__":
    sys.exit(main())
