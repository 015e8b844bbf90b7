"""Acceptance criteria, one test per criterion.

Each test records a single PASS/FAIL line, shown in the pytest terminal
summary; ``python tests/test_acceptance.py`` prints the same lines directly.
"""

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import ACCEPTANCE_LINES  # noqa: E402
from oracles import brute_force_lp, random_lp, random_planar_fan, random_planar_polytope  # noqa: E402

from lvmb.cli import builtin_example  # noqa: E402
from lvmb.fans import SimplicialComplex  # noqa: E402
from lvmb.lp import INFEASIBLE, OPTIMAL, certificate_errors, polytopality, solve  # noqa: E402
from lvmb.moment import LVM, LVMB_NOT_LVM, NOT_LVMB, LVMBData, classify, verify_convexity  # noqa: E402
from lvmb.polytopes import is_normal_to, normal_fan, polytope_from_support  # noqa: E402


def load(name):
    return LVMBData.from_json(builtin_example(name))


def record(number, title, ok, detail):
    line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def timed(fn, *args, **kw):
    start = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - start


def test_criterion_1_positive_branch():
    problems = []
    worst = 0.0
    for name in [f"projective-space-{m}" for m in range(2, 6)] + ["calabi-eckmann"]:
        rep, dt = timed(classify, load(name))
        worst = max(worst, dt)
        if rep.verdict != LVM:
            problems.append(f"{name}: {rep.verdict}")
        elif not is_normal_to(rep.polytope, rep.quotient_fan):
            problems.append(f"{name}: polytope not normal")
        if dt >= 1.0:
            problems.append(f"{name}: {dt:.2f}s")
    record(1, "LVM examples with exact normal polytopes", not problems,
           "; ".join(problems) or f"5 examples LVM, normal exactly, slowest {worst:.3f}s")


def test_criterion_2_negative_branch():
    rep, dt = timed(classify, load("nonpolytopal-fan"))
    sup = rep.support
    farkas_ok = (sup is not None and sup.farkas is not None
                 and sup.farkas.status == INFEASIBLE
                 and not certificate_errors(sup.farkas_problem, sup.farkas))
    ok = (rep.verdict == LVMB_NOT_LVM and sup.t == 0 and farkas_ok
          and not certificate_errors(sup.problem, sup.certificate) and dt < 5.0)
    record(2, "non-polytopal fan is LVMB but not LVM", ok,
           f"verdict {rep.verdict}, t* = {sup.t if sup else None}, Farkas certificate "
           f"for t >= 1 {'verified' if farkas_ok else 'missing or invalid'}, {dt:.2f}s")


def test_criterion_3_polytopal_round_trip():
    rng = random.Random(20240501)
    fails = []
    for i in range(100):
        F = random_planar_fan(rng)
        res = polytopality(F)
        if not res.t > 0:
            fails.append(f"fan {i}: t = {res.t}")
            continue
        nf = normal_fan(polytope_from_support(F, res.offsets))
        same = (set(nf.rays) == set(F.rays)
                and {frozenset(nf.rays[j] for j in c) for c in nf.maximal_cones}
                == {frozenset(F.rays[j] for j in c) for c in F.maximal_cones})
        if not same:
            fails.append(f"fan {i}: normal fan differs")
    polys = 0
    while polys < 50:
        P = random_planar_polytope(rng)
        try:
            F = normal_fan(P)
        except ValueError:
            continue  # not generic (a non-simple vertex); draw again
        polys += 1
        if not polytopality(F).t > 0:
            fails.append(f"polytope {polys}: t = 0")
    record(3, "support LP and normal fan round trip in R^2", not fails,
           "; ".join(fails[:3]) or "100 fans and 50 polygons round-trip exactly")


@pytest.fixture(scope="module")
def harness_reports():
    out = {}
    for name in ["projective-space-2", "calabi-eckmann", "hopf"]:
        rep = classify(load(name))
        out[name] = timed(verify_convexity, rep, samples=1000, seed=0, tol=1e-9, directions=20)
    return out


def test_criterion_4_convexity(harness_reports):
    problems = []
    for name, (h, dt) in harness_reports.items():
        c = h.checks
        for key in ("membership", "vertex_images", "normal_polytope", "directions"):
            if not c[key]:
                problems.append(f"{name}: {key}")
        if len(h.directions) != 20:
            problems.append(f"{name}: {len(h.directions)} directions")
        if dt >= 10.0:
            problems.append(f"{name}: {dt:.2f}s")
    worst = max(h.max_violation for h, _ in harness_reports.values())
    record(4, "moment images fill the normal polytope", not problems,
           "; ".join(problems) or f"3 examples x 1000 samples, max violation {worst:.1e}, "
                                  "vertex images exact, 20 directions each")


def test_criterion_5_gauge(harness_reports):
    res = max(h.max_lift_residual for h, _ in harness_reports.values())
    spread = max(h.max_kernel_spread for h, _ in harness_reports.values())
    ok = res <= 1e-9 and spread <= 1e-9
    record(5, "lifted moment residual and kernel directions", ok,
           f"max residual {res:.1e}, max spread of h_v over ker q {spread:.1e}")


def test_criterion_6_lp_soundness():
    rng = random.Random(6)
    bad = []
    counts = {"optimal": 0, "infeasible": 0, "unbounded": 0, "oracle": 0}
    for i in range(500):
        bounded = i % 2 == 0
        p = random_lp(rng, bounded)
        cert = solve(p)
        counts[cert.status] += 1
        if certificate_errors(p, cert):
            bad.append(f"lp {i}: bad certificate")
        if bounded:
            counts["oracle"] += 1
            best = brute_force_lp(p)
            agree = (cert.status == INFEASIBLE) if best is None else \
                (cert.status == OPTIMAL and cert.value == best)
            if not agree:
                bad.append(f"lp {i}: oracle disagrees")
    record(6, "exact LP certificates", not bad,
           "; ".join(bad[:3]) or f"500 LPs ({counts['optimal']} optimal, "
                                 f"{counts['infeasible']} infeasible, {counts['unbounded']} unbounded), "
                                 f"{counts['oracle']} checked against vertex enumeration")


def test_criterion_7_degenerate_cases():
    hopf = classify(load("hopf"))
    problems = []
    if hopf.verdict != LVM or hopf.polytope.dim != 0 or hopf.vertex_list() != [()]:
        problems.append(f"hopf: {hopf.verdict}")
    for m in (1, 2, 3):
        rep = classify(LVMBData(m, [], sigma=SimplicialComplex(m, {frozenset()})))
        if rep.verdict != NOT_LVMB or rep.lvmb.condition2:
            problems.append(f"empty complex m={m}: {rep.verdict}")
    two_points = classify(LVMBData.from_json({"m": 2, "maximal_faces": [[1], [2]], "h_basis": []}))
    if two_points.verdict != NOT_LVMB or two_points.lvmb.condition2:
        problems.append("two rays, empty h: not rejected")
    record(7, "degenerate inputs", not problems,
           "; ".join(problems) or "hopf is LVM with a point polytope; empty complex and "
                                  "empty h report not-LVMB through condition (2)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
