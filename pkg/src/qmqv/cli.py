"""Command-line entry point: ``qmqv <command> <quiver.json> [flags]``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from importlib import metadata

from . import freealg, verify
from .degeneration import classical_limit_check, hbar_moment_check
from .moment import MomentError, moment_presentation, vertex_moment
from .quiver import QuiverError, flatness_report, load_quiver
from .relations import RelationError, full_presentation
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, worst
from .serialize import SCHEMA, poly_json, poly_text

EXIT = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3

SUITES = ("qybe", "hecke", "pbw", "reflection", "moment", "manyrelns", "fourier", "equivariance")
COMMANDS = ("relations", "verify", "flatness", "hilbert", "moment", "degenerate")


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


@dataclass
class RunConfig:
    command: str
    path: str
    kind: str = "Dq"
    suites: tuple = SUITES
    max_degree: int | None = None
    fmt: str = "json"
    seed: int = 0
    deterministic: bool = False
    json_out: str | None = None
    order: int = 2

    def echo(self) -> dict:
        return {
            "command": self.command,
            "quiver_file": self.path,
            "kind": self.kind,
            "suites": list(self.suites) if self.command == "verify" else None,
            "max_degree": self.max_degree,
            "seed": self.seed,
            "order": self.order if self.command == "degenerate" else None,
        }


@dataclass
class RunReport:
    config: RunConfig
    quiver: dict
    checks: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    text: list = field(default_factory=list)
    skipped: list = field(default_factory=list)

    @property
    def status(self) -> str:
        return worst(c.status for c in self.checks)

    def to_dict(self) -> dict:
        d = {
            "schema": SCHEMA,
            "tool": "qmqv",
            "version": tool_version(),
            "config": self.config.echo(),
            "quiver": self.quiver,
            "status": self.status,
            "checks": [c.to_dict(self.config.deterministic) for c in self.checks],
        }
        if self.skipped:
            d["skipped"] = self.skipped
        d.update(self.data)
        return d


# ---------------------------------------------------------------------------
# commands


def cmd_relations(cfg: RunConfig, q) -> RunReport:
    p = full_presentation(q, cfg.kind)
    rep = RunReport(cfg, q.to_json())
    rels, start = [], 0
    for label, n in p.families:
        for r in p.relations[start:start + n]:
            rels.append({"family": label, "terms": poly_json(r)})
            rep.text.append(f"[{label}] {poly_text(r)} = 0")
        start += n
    rep.data = {
        "generators": [g.to_json() for g in p.generators],
        "families": [[label, n] for label, n in p.families],
        "relations": rels,
    }
    rep.text.insert(0, f"{cfg.kind}: {len(p.generators)} generators, {len(p.relations)} relations")
    return rep


def _default_pbw_degree(p) -> int:
    return 3 if len(p.generators) > 8 else 4


def _suite_reports(cfg: RunConfig, q) -> tuple[list[CheckReport], list]:
    from .moment import edge_moment_alpha_bar, edge_moment_beta, edge_moment_loop

    out: list[CheckReport] = []
    skipped: list = []
    p = full_presentation(q, cfg.kind)
    dims = sorted({v.dim for v in q.vertices})
    D_id = cfg.max_degree or verify.DEFAULT_SUITE_DEGREE
    span = None

    def shared_span():
        nonlocal span
        if span is None:
            span = verify.DegreeSpan(p, D_id)
        return span

    needs_dq = {"reflection", "moment", "manyrelns"}
    for suite in cfg.suites:
        if suite == "qybe":
            out += [freealg.qybe_check(N) for N in dims]
        elif suite == "hecke":
            out += [freealg.hecke_check(N) for N in dims]
        elif suite == "pbw":
            D = cfg.max_degree or _default_pbw_degree(p)
            out.append(verify.pbw_check(p, D))
            out.append(verify.rank_cross_check(p, min(D, 3), seed=cfg.seed))
        elif suite in needs_dq and cfg.kind != "Dq":
            skipped.append({"suite": suite, "reason": "requires the Dq presentation"})
        elif suite == "reflection":
            for e in q.edges:
                if e.is_loop:
                    if q.dim(e.src) != 1:
                        out.append(CheckReport("reflection", INCONCLUSIVE, {"edge": e.id, "bound": D_id},
                                               details={"reason": "unsupported: loop with d>1"}))
                        continue
                    P = moment_presentation(q)
                    M = edge_moment_loop(q, e, P)
                    out.append(verify.reflection_check(M, P, D_id))
                else:
                    out.append(verify.reflection_check(edge_moment_beta(q, e), p, D_id, shared_span()))
                    out.append(verify.reflection_check(edge_moment_alpha_bar(q, e), p, D_id, shared_span(),
                                                       inverse=True))
        elif suite == "moment":
            for e in q.edges:
                out.append(verify.moment_condition_check(e, p, D_id, None if e.is_loop else shared_span()))
        elif suite == "manyrelns":
            for e in q.edges:
                if e.is_loop:
                    skipped.append({"suite": suite, "edge": e.id, "reason": "defined for non-loop edges"})
                else:
                    out.append(verify.manyrelns_check(e, p, D_id, shared_span()))
        elif suite == "fourier":
            for e in q.edges:
                out.append(verify.fourier_check(q, e))
        elif suite == "equivariance":
            out.append(verify.equivariance_check(p, 2))
    return out, skipped


def cmd_verify(cfg: RunConfig, q) -> RunReport:
    rep = RunReport(cfg, q.to_json())
    rep.checks, rep.skipped = _suite_reports(cfg, q)
    for c in rep.checks:
        where = {k: c.parameters[k] for k in ("N", "edge", "matrix") if k in c.parameters}
        rep.text.append(f"{c.status:>22}  {c.check_name} {json.dumps(where, sort_keys=True)}")
    return rep


def cmd_flatness(cfg: RunConfig, q) -> RunReport:
    rep = RunReport(cfg, q.to_json())
    r = flatness_report(q)
    rep.checks = [r]
    det = r.details
    rep.text = [f"p(d) = {det.get('p')}"]
    if "flat" in det:
        rep.text.append(f"decompositions: {det['decompositions']}; flat: {det['flat']}; strict: {det['strict']}")
    if r.witness:
        rep.text.append(f"violations: {json.dumps(r.witness, sort_keys=True)}")
    return rep


def cmd_hilbert(cfg: RunConfig, q) -> RunReport:
    rep = RunReport(cfg, q.to_json())
    p = full_presentation(q, cfg.kind)
    D = cfg.max_degree if cfg.max_degree is not None else 3
    span = verify.DegreeSpan(p, max(D, 0))
    g = len(p.generators)
    filtered = [verify.filtered_dimension(p, n, span) for n in range(D + 1)]
    classical = [verify.standard_count(g, n) for n in range(D + 1)]
    graded = verify.graded_dimensions(filtered)
    rows = [{"degree": n, "filtered": filtered[n], "graded": graded[n], "classical_filtered": classical[n]}
            for n in range(D + 1)]
    rep.data = {"table": rows}
    rep.text = ["n  filtered  graded  classical"]
    rep.text += [f"{r['degree']}  {r['filtered']}  {r['graded']}  {r['classical_filtered']}" for r in rows]
    ok = filtered == classical
    wit = None if ok else {"filtered": filtered, "classical": classical}
    rep.checks = [CheckReport("hilbert", PASS if ok else FAIL, {"bound": D, "kind": cfg.kind}, wit)]
    return rep


def cmd_moment(cfg: RunConfig, q) -> RunReport:
    rep = RunReport(cfg, q.to_json())
    P = moment_presentation(q)
    mats = []
    for v in q.vertices:
        try:
            M = vertex_moment(q, v.id, P).entries
        except MomentError as exc:
            rep.checks.append(CheckReport("moment_map", INCONCLUSIVE, {"vertex": v.id, "bound": None},
                                          details={"reason": f"unsupported: {exc}"}))
            rep.text.append(f"{v.id}: unsupported ({exc})")
            continue
        entries = []
        for (r, c), val in sorted(M.entries.items()):
            poly = val if isinstance(val, freealg.NCPoly) else freealg.NCPoly.const(val)
            entries.append({"row": r[0], "col": c[0], "terms": poly_json(poly)})
            rep.text.append(f"mu_{v.id}[{r[0]},{c[0]}] = {poly_text(poly)}")
        mats.append({"vertex": v.id, "dim": v.dim, "entries": entries})
    rep.data = {"inverses": [g.tag for g in P.generators if g.rank == 2], "moments": mats}
    return rep


def cmd_degenerate(cfg: RunConfig, q) -> RunReport:
    rep = RunReport(cfg, q.to_json())
    cl = classical_limit_check(full_presentation(q, cfg.kind))
    hb = hbar_moment_check(q, order=cfg.order)
    rep.checks = [cl, hb]
    rep.text.append(f"classical limit: {cl.status}")
    rep.text.append(f"hbar moment: {hb.status}")
    for v, entries in hb.details.get("vertices", {}).items():
        for ij, row in entries.items():
            rep.text.append(f"  {v}[{ij}]  h^2: {row['h2']}   classical: {row['classical']}")
    if "reason" in hb.details:
        rep.text.append(f"  {hb.details['reason']}")
    return rep


HANDLERS = {
    "relations": cmd_relations,
    "verify": cmd_verify,
    "flatness": cmd_flatness,
    "hilbert": cmd_hilbert,
    "moment": cmd_moment,
    "degenerate": cmd_degenerate,
}


# ---------------------------------------------------------------------------
# argument handling


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qmqv", description="Exact checks for q-deformed quiver algebras.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("quiver", help="quiver JSON file")
    ap.add_argument("--kind", choices=("Oq", "Dq"), default="Dq")
    ap.add_argument("--suite", action="append", choices=SUITES + ("all",),
                    help="verification suite (repeatable; default all)")
    ap.add_argument("--max-degree", type=int, default=None)
    ap.add_argument("--format", choices=("json", "text"), default="json")
    ap.add_argument("--json", dest="json_out", default=None, help="also write the JSON report to this path")
    ap.add_argument("--seed", type=int, default=0, help="seed for the modular rank cross-check")
    ap.add_argument("--order", type=int, default=2, help="h-adic truncation order for degenerate")
    ap.add_argument("--deterministic", action="store_true", help="omit timings for byte-stable output")
    return ap


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    suites = ns.suite or ["all"]
    if "all" in suites:
        suites = list(SUITES)
    if ns.max_degree is not None and ns.max_degree < 0:
        raise UsageError("--max-degree must be nonnegative")
    if ns.order < 2:
        raise UsageError("--order must be at least 2")
    return RunConfig(ns.command, ns.quiver, ns.kind, tuple(dict.fromkeys(suites)), ns.max_degree,
                     ns.format, ns.seed, ns.deterministic, ns.json_out, ns.order)


def render(rep: RunReport) -> str:
    if rep.config.fmt == "text":
        lines = [f"qmqv {rep.config.command}: {rep.status}"] + rep.text
        for s in rep.skipped:
            lines.append(f"skipped: {json.dumps(s, sort_keys=True)}")
        return "\n".join(lines) + "\n"
    return json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) + "\n"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        q = load_quiver(cfg.path)
    except (OSError, QuiverError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        rep = HANDLERS[cfg.command](cfg, q)
    except verify.GuardExceeded as exc:
        rep = RunReport(cfg, q.to_json())
        rep.checks = [CheckReport(cfg.command, INCONCLUSIVE, {"bound": cfg.max_degree},
                                  details={"reason": str(exc)})]
    except (RelationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if cfg.json_out:
        with open(cfg.json_out, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) + "\n")
    out.write(render(rep))
    return EXIT[rep.status]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
