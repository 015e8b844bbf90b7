"""Independent reference computations used by the tests."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from lvmb.arith import RatMatrix, dot, kernel_basis, rank, solve_linear
from lvmb.fans import Fan, walls
from lvmb.lp import EQ, GE, Constraint, LPProblem
from lvmb.polytopes import HPolytope


def brute_force_lp(p: LPProblem):
    """Best vertex of a bounded LP by enumerating square subsystems.

    Returns ``None`` when no vertex is feasible (the problem is infeasible,
    given that it is bounded and every feasible bounded polyhedron here is
    pointed), else the optimal value.
    """
    n = p.variables
    rows = p.constraints
    best = None
    for idx in combinations(range(len(rows)), n):
        M = RatMatrix([rows[i].coeffs for i in idx], ncols=n)
        if rank(M) < n:
            continue
        x = solve_linear(M, [rows[i].rhs for i in idx])
        if x is None:
            continue
        if all((dot(c.coeffs, x) == c.rhs) if c.relation == EQ else (dot(c.coeffs, x) >= c.rhs)
               for c in rows):
            v = dot(p.objective, x)
            if best is None:
                best = v
            elif p.sense == "maximize":
                best = max(best, v)
            else:
                best = min(best, v)
    return best


def random_lp(rng: random.Random, bounded: bool) -> LPProblem:
    """Small random LP: at most 6 variables and 10 constraints.

    Bounded instances live in the simplex x >= 0, sum x <= B.
    """
    n = rng.randint(1, 6)
    cons = []
    if bounded:
        cons += [Constraint([int(i == j) for j in range(n)], GE, 0) for i in range(n)]
        cons.append(Constraint([-1] * n, GE, -rng.randint(1, 9)))
    budget = 10 - len(cons)
    for _ in range(rng.randint(1 if not bounded else 0, budget)):
        coeffs = [rng.randint(-4, 4) for _ in range(n)]
        rel = EQ if rng.random() < 0.2 else GE
        cons.append(Constraint(coeffs, rel, Fraction(rng.randint(-6, 6), rng.randint(1, 3))))
    obj = [rng.randint(-5, 5) for _ in range(n)]
    return LPProblem(n, cons, obj, rng.choice(["maximize", "minimize"]))


def scipy_status(p: LPProblem):
    """HiGHS status of ``p``: ('optimal', value), ('infeasible',) or ('unbounded',)."""
    n = p.variables
    A_ub, b_ub, A_eq, b_eq = [], [], [], []
    for c in p.constraints:
        if c.relation == EQ:
            A_eq.append([float(x) for x in c.coeffs])
            b_eq.append(float(c.rhs))
        else:
            A_ub.append([-float(x) for x in c.coeffs])
            b_ub.append(-float(c.rhs))
    sign = -1.0 if p.sense == "maximize" else 1.0
    res = linprog([sign * float(x) for x in p.objective],
                  A_ub=A_ub or None, b_ub=b_ub or None, A_eq=A_eq or None, b_eq=b_eq or None,
                  bounds=[(None, None)] * n, method="highs")
    if res.status == 2:
        return ("infeasible",)
    if res.status == 3:
        return ("unbounded",)
    assert res.status == 0, res.message
    return ("optimal", sign * res.fun)


def wall_margin(F: Fan) -> float:
    """Float polytopality test through wall-crossing inequalities.

    For a wall w between sigma = w + {i} and tau = w + {j}, the linear
    relation lam_i r_i + lam_j r_j + sum mu_l r_l = 0 (lam > 0) must satisfy
    lam_i a_i + lam_j a_j + sum mu_l a_l < 0. Returns the optimum of
    max s subject to that expression + s <= 0 and s <= 1.
    """
    k = len(F.rays)
    rows = []
    maximal = F.maximal_cones
    for w, count in walls(F).items():
        assert count == 2
        s, t = [c for c in maximal if w <= c]
        (i,) = s - w
        (j,) = t - w
        idx = sorted(w) + [i, j]
        M = RatMatrix([[F.rays[x][d] for x in idx] for d in range(F.ambient_dim)], ncols=len(idx))
        rel = kernel_basis(M)[0]
        if rel[-1] < 0:
            rel = tuple(-x for x in rel)
        assert rel[-1] > 0 and rel[-2] > 0
        row = [0.0] * (k + 1)
        for x, c in zip(idx, rel):
            row[x] += float(c)
        row[k] = 1.0
        rows.append(row)
    obj = [0.0] * k + [-1.0]
    res = linprog(obj, A_ub=rows, b_ub=[0.0] * len(rows),
                  bounds=[(None, None)] * k + [(None, 1.0)], method="highs")
    assert res.status == 0, res.message
    return -res.fun


def random_planar_fan(rng: random.Random, kmax: int = 8, box: int = 5) -> Fan:
    """Complete simplicial fan in R^2 from cyclically ordered primitive rays."""
    while True:
        k = rng.randint(3, kmax)
        vs = set()
        while len(vs) < k:
            v = (rng.randint(-box, box), rng.randint(-box, box))
            if v != (0, 0) and math.gcd(*v) == 1:
                vs.add(v)
        rays = sorted(vs, key=lambda v: math.atan2(v[1], v[0]))
        ok = all(rays[i][0] * rays[(i + 1) % k][1] - rays[i][1] * rays[(i + 1) % k][0] > 0
                 for i in range(k))
        if ok:
            return Fan.from_cones(2, rays, [(i, (i + 1) % k) for i in range(k)])


def random_planar_polytope(rng: random.Random) -> HPolytope:
    """Bounded polygon with random primitive normals and random offsets < 0."""
    F = random_planar_fan(rng)
    offsets = [-Fraction(rng.randint(10, 200), rng.randint(1, 23)) for _ in F.rays]
    extra = rng.randint(0, 2)
    normals = list(F.rays)
    for _ in range(extra):
        v = (rng.randint(-5, 5), rng.randint(-5, 5))
        if v != (0, 0) and math.gcd(*v) == 1 and v not in normals:
            normals.append(v)
            offsets.append(-Fraction(rng.randint(10, 200), rng.randint(1, 23)))
    return HPolytope(2, normals, offsets)


def float_vertices(P: HPolytope) -> np.ndarray:
    """All vertices of a polygon by brute force in floats."""
    pts = []
    N = np.array([[float(x) for x in v] for v in P.normals])
    b = np.array([float(x) for x in P.offsets])
    for i, j in combinations(range(len(b)), 2):
        M = N[[i, j]]
        if abs(np.linalg.det(M)) < 1e-12:
            continue
        x = np.linalg.solve(M, b[[i, j]])
        if np.all(N @ x >= b - 1e-9):
            pts.append(x)
    return np.array(pts)
