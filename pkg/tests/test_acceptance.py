"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 -m tests.test_acceptance``.
"""

from __future__ import annotations

import io
import time

import pytest

from qmqv.cli import run
from qmqv.degeneration import classical_limit_check, hbar_moment_check
from qmqv.freealg import hecke_check, qybe_check
from qmqv.moment import character_check, edge_moment_alpha_bar, edge_moment_beta
from qmqv.quiver import flatness_report, load_quiver, p_value
from qmqv.relations import full_presentation
from qmqv.verify import (
    DegreeSpan,
    equivariance_check,
    fourier_check,
    manyrelns_check,
    moment_condition_check,
    pbw_check,
    rank_cross_check,
    reflection_check,
    standard_count,
)

from . import test_relations as rel
from .conftest import QUIVER_DIR, a2, calogero_moser, jordan, kron, star

NONLOOP = [(1, 1), (1, 2), (2, 1), (2, 2)]


def c1():
    bad = [(name, N) for N in (1, 2, 3, 4) for name, fn in (("qybe", qybe_check), ("hecke", hecke_check))
           if fn(N).status != "pass"]
    return not bad, f"failures {bad}" if bad else "N = 1..4 exact", 10


def c2():
    checks = {
        "quantum plane": lambda: rel.test_quantum_plane(2),
        "Kronecker (2,2) FRT": rel.test_kronecker_22_explicit_frt,
        "Kronecker (2,2) index forms": rel.test_kronecker_22_index_forms,
        "Jordan d=2 Oq explicit": rel.test_jordan_2_explicit_oq,
        "Jordan d=2 Oq/Dq matrix forms": rel.test_jordan_2_reflection_forms,
        "Kronecker (1,1) Dq": rel.test_kronecker_11_dq,
        "Jordan d=1 Dq": rel.test_jordan_1_dq,
    }
    bad = []
    for name, fn in checks.items():
        try:
            fn()
        except AssertionError:
            bad.append(name)
    return not bad, f"mismatched {bad}" if bad else f"{len(checks)} fixtures match", None


def c3():
    slow, bad = [], []
    for name, q in [("K(1,1)", kron(1, 1)), ("K(1,2)", kron(1, 2)), ("K(2,2)", kron(2, 2)),
                    ("J(2)", jordan(2)), ("CM(1,1)", calogero_moser(1))]:
        t0 = time.perf_counter()
        r = pbw_check(full_presentation(q, "Dq"), 3)
        if time.perf_counter() - t0 > 60:
            slow.append(name)
        g = r.parameters["generators"]
        if r.status != "pass" or r.details["filtered_dimensions"] != [standard_count(g, n) for n in range(4)]:
            bad.append(name)
    dims11 = pbw_check(full_presentation(kron(1, 1), "Dq"), 3).details["filtered_dimensions"]
    ok = not bad and not slow and dims11 == [1, 3, 6, 10]
    return ok, f"failed {bad} slow {slow}" if not ok else "D=3, K(1,1) dims 1,3,6,10", None


def c4():
    bad = []
    for dims in NONLOOP:
        q = kron(*dims)
        p = full_presentation(q, "Dq")
        span = DegreeSpan(p, 4)
        reps = [reflection_check(edge_moment_beta(q, "e"), p, 4, span),
                reflection_check(edge_moment_alpha_bar(q, "e"), p, 4, span, inverse=True),
                moment_condition_check("e", p, 4, span)]
        if dims == (1, 1) and reps[2].details.get("elements", 0) < 4:
            bad.append("qcentral items missing")
        bad += [f"{r.check_name}{dims}" for r in reps if r.status != "pass"]
    return not bad, f"failed {bad}" if bad else "D=4, g a = q^2 a g and g d = q^-2 d g certified", 120


def c5():
    bad = [name for name, r in (("nonloop", fourier_check(kron(1, 1), "e")), ("loop", fourier_check(jordan(1), "l")))
           if r.status != "pass"]
    for dims in NONLOOP:
        r = manyrelns_check("e", full_presentation(kron(*dims), "Dq"), 4)
        if r.details.get("items") != {str(k): "pass" for k in range(1, 8)}:
            bad.append(f"manyrelns{dims}")
    return not bad, f"failed {bad}" if bad else "Fourier d=1 both variants; items 1-7 on 4 shapes", 60


def c6():
    bad = [N for N in (1, 2, 3) if character_check(N).status != "pass"]
    return not bad, f"failed N={bad}" if bad else "symbolic rho, N = 1..3", None


def c7():
    r1 = equivariance_check(full_presentation(kron(1, 2), "Oq"), 2)
    r2 = equivariance_check(full_presentation(kron(1, 1), "Dq"), 2)
    ok = r1.status == r2.status == "pass"
    return ok, f"quantum plane {r1.status}, Dq K(1,1) {r2.status}", None


ALL_FIXTURES = [kron(1, 1), kron(1, 2), kron(2, 1), kron(2, 2), jordan(1), jordan(2), calogero_moser(1),
                calogero_moser(2), star(2), a2()]


def c8():
    bad = []
    for q in ALL_FIXTURES:
        for kind in ("Oq", "Dq"):
            if classical_limit_check(full_presentation(q, kind)).status != "pass":
                bad.append(f"classical {kind} {q.dims}")
    for name, q in (("K(1,1)", kron(1, 1)), ("K(1,2)", kron(1, 2)), ("star", star(2))):
        if hbar_moment_check(q).status != "pass":
            bad.append(f"hbar {name}")
    return not bad, f"failed {bad}" if bad else "q=1 on all fixtures; h^2 = 2(classical - L/2) on 3 quivers", None


def c9():
    facts = {
        "p Jordan = 1": all(p_value(jordan(n), [n]) == 1 for n in (1, 2, 3)),
        "p CM(1,n) = n": all(p_value(calogero_moser(n), [1, n]) == n for n in (1, 2, 3)),
        "p A2 = 0": p_value(a2(), [1, 1]) == 0,
        "A2 flat": flatness_report(a2()).status == "pass",
    }
    j = flatness_report(jordan(2))
    facts["Jordan(2) not flat, witness (1)+(1)"] = (
        j.status == "fail" and {"parts": [{"v": 1}, {"v": 1}], "sum_p": 2} in j.witness)
    cm = flatness_report(calogero_moser(2))
    facts["CM(1,2) flat"] = cm.details.get("flat") is True
    facts["CM(1,2) strict"] = cm.details.get("strict") is True
    bad = [k for k, v in facts.items() if not v]
    detail = "all verdicts reproduced" if not bad else (
        f"not reproduced {bad}; equality witnesses {cm.details['equalities']}")
    return not bad, detail, 5


FIXTURE_FILES = sorted(QUIVER_DIR.glob("*.json"))
COMMANDS = [("relations",), ("verify", "--suite", "all"), ("flatness",), ("hilbert",), ("moment",), ("degenerate",)]


def _call(argv):
    out = io.StringIO()
    code = run([str(a) for a in argv], out=out)
    return code, out.getvalue()


def c10():
    bad = []
    for f in FIXTURE_FILES:
        for cmd in COMMANDS:
            argv = [cmd[0], f, *cmd[1:], "--deterministic"]
            if _call(argv) != _call(argv):
                bad.append(f"{cmd[0]} {f.name}")
        p = full_presentation(load_quiver(f), "Dq")
        if rank_cross_check(p, 3, seed=2024).status != "pass":
            bad.append(f"rank {f.name}")
    return not bad, f"differences {bad}" if bad else f"{len(FIXTURE_FILES)} fixtures x {len(COMMANDS)} commands", None


CRITERIA = [
    (1, "R-matrix axioms", c1),
    (2, "presentation fixtures", c2),
    (3, "PBW certification", c3),
    (4, "moment identities", c4),
    (5, "Fourier and seven identities", c5),
    (6, "trace characters", c6),
    (7, "equivariance", c7),
    (8, "degeneration", c8),
    (9, "flatness criterion", c9),
    (10, "determinism and rank cross-checks", c10),
]


def evaluate(k, title, fn) -> tuple[bool, str]:
    t0 = time.perf_counter()
    ok, detail, limit = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok, detail = False, f"{detail}; took {dt:.1f}s > {limit}s"
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {title} ({detail}) [{dt:.2f}s]"
    return ok, line


@pytest.mark.parametrize("k, title, fn", CRITERIA, ids=[f"criterion_{k}" for k, _, _ in CRITERIA])
def test_criterion(k, title, fn, capsys):
    ok, line = evaluate(k, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    raise SystemExit(0 if all(ok for ok, _ in results) else 1)
