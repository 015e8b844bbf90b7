"""Exact rational linear programming.

Problems are stated over free variables with constraints ``a.x = b`` or
``a.x >= b``. :func:`solve` runs a two-phase primal simplex with Bland's rule
on an integer tableau (fraction-free pivoting: every entry is the current
basis determinant times the rational tableau entry, so all divisions are
exact) and returns a certificate that can be checked by substitution:

* ``optimal``: primal point ``x`` and dual ``y`` with ``A^T y = c`` and
  ``c.x = b.y``; for maximization ``y_i <= 0`` on ``>=`` rows, for
  minimization ``y_i >= 0``.
* ``infeasible``: Farkas vector ``y`` with ``y_i >= 0`` on ``>=`` rows,
  ``A^T y = 0`` and ``b.y > 0``; summing the constraints reads ``0 >= b.y``.
* ``unbounded``: feasible ``x`` plus a ray ``r`` with ``A_eq r = 0``,
  ``A_ge r >= 0`` and an improving objective.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .arith import RatMatrix, dot, format_rational, parse_rational, solve_linear, vec

log = logging.getLogger(__name__)

EQ = "="
GE = ">="
OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(RuntimeError):
    """Raised when the simplex breaks an internal guarantee (a bug, not an outcome)."""


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple
    relation: str
    rhs: Fraction

    def __post_init__(self):
        object.__setattr__(self, "coeffs", vec(self.coeffs))
        object.__setattr__(self, "rhs", parse_rational(self.rhs))
        if self.relation not in (EQ, GE):
            raise ValueError(f"relation must be '=' or '>=', got {self.relation!r}")


def constraint(coeffs, relation: str, rhs) -> Constraint:
    """Build a constraint, accepting ``<=`` by negating both sides."""
    if relation == "<=":
        return Constraint(tuple(-x for x in vec(coeffs)), GE, -parse_rational(rhs))
    if relation == "==":
        relation = EQ
    return Constraint(coeffs, relation, rhs)


@dataclass(frozen=True)
class LPProblem:
    variables: int
    constraints: tuple
    objective: tuple
    sense: str = "maximize"

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "objective", vec(self.objective))
        if self.sense not in ("maximize", "minimize"):
            raise ValueError(f"sense must be maximize or minimize, got {self.sense!r}")
        if len(self.objective) != self.variables:
            raise ValueError("objective length differs from the variable count")
        for k, c in enumerate(self.constraints):
            if len(c.coeffs) != self.variables:
                raise ValueError(f"constraint {k} has {len(c.coeffs)} coefficients, "
                                 f"expected {self.variables}")

    def with_constraints(self, extra) -> LPProblem:
        return LPProblem(self.variables, self.constraints + tuple(extra),
                         self.objective, self.sense)

    def to_json(self) -> dict:
        return {
            "variables": self.variables,
            "sense": self.sense,
            "objective": [format_rational(x) for x in self.objective],
            "constraints": [
                {"coeffs": [format_rational(x) for x in c.coeffs],
                 "relation": c.relation, "rhs": format_rational(c.rhs)}
                for c in self.constraints
            ],
        }

    @classmethod
    def from_json(cls, obj) -> LPProblem:
        cons = [constraint([parse_rational(x) for x in c["coeffs"]], c["relation"],
                           parse_rational(c["rhs"])) for c in obj["constraints"]]
        return cls(obj["variables"], cons, [parse_rational(x) for x in obj["objective"]],
                   obj.get("sense", "maximize"))


@dataclass(frozen=True)
class LPCertificate:
    status: str
    primal: tuple | None = None
    dual: tuple | None = None
    ray: tuple | None = None
    value: Fraction | None = None
    iterations: int = 0

    def to_json(self) -> dict:
        def fmt(v):
            return None if v is None else [format_rational(x) for x in v]
        return {
            "status": self.status,
            "value": None if self.value is None else format_rational(self.value),
            "primal": fmt(self.primal),
            "dual": fmt(self.dual),
            "ray": fmt(self.ray),
            "iterations": self.iterations,
        }


@dataclass
class _Tableau:
    """Integer simplex tableau; the rational tableau is ``T / d``."""

    rows: list            # constraint rows, last entry is the rhs
    obj: list             # d * reduced costs (scaled), last entry -d * value
    basis: list
    d: int = 1
    iterations: int = 0
    cap: int = 0

    def pivot(self, r: int, s: int):
        p = self.rows[r][s]
        d = self.d
        prow = self.rows[r]
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[s]
            self.rows[i] = [(p * x - f * y) // d for x, y in zip(row, prow)]
        f = self.obj[s]
        self.obj = [(p * x - f * y) // d for x, y in zip(self.obj, prow)]
        self.basis[r] = s
        self.d = p
        if p < 0:
            self.rows = [[-x for x in row] for row in self.rows]
            self.obj = [-x for x in self.obj]
            self.d = -p
        self.iterations += 1
        if log.isEnabledFor(logging.DEBUG):
            log.debug("pivot row %d col %d (d=%d)\n%s", r, s, self.d, self.dump())

    def dump(self) -> str:
        lines = [" ".join(str(x) for x in self.obj)]
        lines += [f"[{b}] " + " ".join(str(x) for x in row)
                  for b, row in zip(self.basis, self.rows)]
        return "\n".join(lines)

    def run(self, allowed: set | None = None) -> tuple[str, int | None]:
        """Bland's rule on columns in ``allowed``; returns (status, column)."""
        ncols = len(self.obj) - 1
        while True:
            entering = next((j for j in range(ncols)
                             if self.obj[j] > 0 and (allowed is None or j in allowed)),
                            None)
            if entering is None:
                return OPTIMAL, None
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a <= 0:
                    continue
                if best is None:
                    best = i
                    continue
                bb = self.rows[best]
                lhs = row[-1] * bb[entering]
                rhs = bb[-1] * a
                if lhs < rhs or (lhs == rhs and self.basis[i] < self.basis[best]):
                    best = i
            if best is None:
                return UNBOUNDED, entering
            if self.iterations >= self.cap:
                raise LPError(f"simplex exceeded {self.cap} pivots; Bland's rule should "
                              "never cycle")
            self.pivot(best, entering)


def _standard_form(p: LPProblem):
    """Integer equality form ``A x' = b, x' >= 0`` with an identity start basis.

    Columns: x+_j, x-_j for every variable, a surplus per ``>=`` row, then
    one artificial per row that has no usable surplus. Each row is scaled by a
    positive multiple of its denominators and by a sign making ``b >= 0``.
    """
    nv = p.variables
    ge_rows = [k for k, c in enumerate(p.constraints) if c.relation == GE]
    surplus_col = {k: 2 * nv + t for t, k in enumerate(ge_rows)}
    nsurplus = len(ge_rows)
    rows, rhs, row_scale, basis_hint = [], [], [], []
    for k, c in enumerate(p.constraints):
        den = lcm(c.rhs.denominator, *(x.denominator for x in c.coeffs))
        sign = 1 if c.rhs > 0 or (c.rhs == 0 and c.relation == EQ) else -1
        scale = sign * den
        row = [0] * (2 * nv + nsurplus)
        for j, a in enumerate(c.coeffs):
            v = int(a * scale)
            row[2 * j] = v
            row[2 * j + 1] = -v
        if c.relation == GE:
            # surplus is rescaled so its coefficient is exactly -sign
            row[surplus_col[k]] = -sign
        rows.append(row)
        rhs.append(int(c.rhs * scale))
        row_scale.append(scale)
        basis_hint.append(surplus_col[k] if c.relation == GE and sign < 0 else None)
    return rows, rhs, row_scale, basis_hint, 2 * nv + nsurplus


def _duals(A_cols, basis, costs) -> tuple:
    """Solve B^T y = c_B exactly."""
    m = len(basis)
    BT = RatMatrix([A_cols[j] for j in basis], ncols=m)
    y = solve_linear(BT, [costs[j] for j in basis])
    if y is None:
        raise LPError("basis matrix is singular")
    return y


def solve(p: LPProblem) -> LPCertificate:
    rows, rhs, row_scale, basis_hint, nstd = _standard_form(p)
    m = len(rows)
    art_rows = [i for i in range(m) if basis_hint[i] is None]
    nart = len(art_rows)
    ncols = nstd + nart
    art_col = {i: nstd + t for t, i in enumerate(art_rows)}
    T = []
    basis = []
    for i in range(m):
        row = rows[i] + [0] * nart
        if i in art_col:
            row[art_col[i]] = 1
            basis.append(art_col[i])
        else:
            basis.append(basis_hint[i])
        T.append(row + [rhs[i]])
    cap = max(comb(ncols, m), 1) if m else 1
    # phase I: maximize -sum(artificials)
    obj = [0] * (ncols + 1)
    for i in art_rows:
        for j in range(nstd):
            obj[j] += T[i][j]
        obj[-1] += T[i][-1]
    tab = _Tableau(T, obj, basis, cap=cap)
    status, _ = tab.run()
    if status != OPTIMAL:
        raise LPError("phase I cannot be unbounded")
    start = list(_initial_rows(rows, art_col, nart))
    A_cols = [[row[j] for row in start] for j in range(ncols)]
    if tab.obj[-1] > 0:
        costs = [0] * nstd + [-1] * nart
        y = _duals(A_cols, tab.basis, costs)
        farkas = tuple(-y[i] * row_scale[i] for i in range(m))
        return LPCertificate(INFEASIBLE, dual=farkas, iterations=tab.iterations)

    # drive artificials out of the basis; rows where that fails are redundant
    keep = []
    for r in range(m):
        if tab.basis[r] < nstd:
            keep.append(r)
            continue
        j = next((j for j in range(nstd) if tab.rows[r][j] != 0), None)
        if j is None:
            continue
        tab.pivot(r, j)
        keep.append(r)
    tab.rows = [tab.rows[r][:nstd] + [tab.rows[r][-1]] for r in keep]
    tab.basis = [tab.basis[r] for r in keep]

    # phase II objective: always maximize internally
    c = p.objective if p.sense == "maximize" else tuple(-x for x in p.objective)
    cstd = [Fraction(0)] * nstd
    for j, cj in enumerate(c):
        cstd[2 * j] = cj
        cstd[2 * j + 1] = -cj
    cden = lcm(*(x.denominator for x in cstd)) if cstd else 1
    cint = [int(x * cden) for x in cstd]
    d = tab.d
    obj = [d * cj for cj in cint] + [0]
    for r, b in enumerate(tab.basis):
        cb = cint[b]
        if cb:
            row = tab.rows[r]
            obj = [o - cb * x for o, x in zip(obj, row)]
    tab.obj = obj
    status, entering = tab.run()

    xstd = [Fraction(0)] * nstd
    for r, b in enumerate(tab.basis):
        xstd[b] = Fraction(tab.rows[r][-1], tab.d)
    x = tuple(xstd[2 * j] - xstd[2 * j + 1] for j in range(p.variables))
    if status == UNBOUNDED:
        dstd = [Fraction(0)] * nstd
        dstd[entering] = Fraction(1)
        for r, b in enumerate(tab.basis):
            dstd[b] = -Fraction(tab.rows[r][entering], tab.d)
        ray = tuple(dstd[2 * j] - dstd[2 * j + 1] for j in range(p.variables))
        return LPCertificate(UNBOUNDED, primal=x, ray=ray, iterations=tab.iterations)

    kept_cols = [[A_cols[j][r] for r in keep] for j in range(nstd)]
    y_kept = _duals(kept_cols, tab.basis, cstd)
    y = [Fraction(0)] * m
    for t, r in enumerate(keep):
        y[r] = y_kept[t] * row_scale[r]
    if p.sense == "minimize":
        y = [-v for v in y]
    value = dot(p.objective, x)
    return LPCertificate(OPTIMAL, primal=x, dual=tuple(y), value=value,
                         iterations=tab.iterations)


def _initial_rows(rows, art_col, nart):
    for i, row in enumerate(rows):
        full = row + [0] * nart
        if i in art_col:
            full[art_col[i]] = 1
        yield full


def certificate_errors(p: LPProblem, cert: LPCertificate) -> list[str]:
    """Substitute a certificate back into the problem; an empty list means valid."""
    errs = []
    A = [c.coeffs for c in p.constraints]

    def primal_feasible(x, label):
        for k, c in enumerate(p.constraints):
            lhs = dot(c.coeffs, x)
            if c.relation == EQ and lhs != c.rhs:
                errs.append(f"{label}: row {k} equality violated ({lhs} != {c.rhs})")
            if c.relation == GE and lhs < c.rhs:
                errs.append(f"{label}: row {k} inequality violated ({lhs} < {c.rhs})")

    def combine(y):
        return tuple(sum((y[k] * A[k][j] for k in range(len(A))), Fraction(0))
                     for j in range(p.variables))

    if cert.status == OPTIMAL:
        x, y = cert.primal, cert.dual
        if x is None or y is None or len(y) != len(p.constraints):
            return ["optimal certificate needs primal and dual vectors"]
        primal_feasible(x, "primal")
        if combine(y) != p.objective:
            errs.append("dual: A^T y differs from the objective")
        for k, c in enumerate(p.constraints):
            if c.relation == GE:
                bad = y[k] > 0 if p.sense == "maximize" else y[k] < 0
                if bad:
                    errs.append(f"dual: row {k} multiplier has the wrong sign")
        pv = dot(p.objective, x)
        dv = dot([c.rhs for c in p.constraints], y)
        if pv != dv:
            errs.append(f"strong duality fails: {pv} != {dv}")
        if cert.value is not None and cert.value != pv:
            errs.append("reported value differs from c.x")
    elif cert.status == INFEASIBLE:
        y = cert.dual
        if y is None or len(y) != len(p.constraints):
            return ["infeasible certificate needs a Farkas vector"]
        for k, c in enumerate(p.constraints):
            if c.relation == GE and y[k] < 0:
                errs.append(f"farkas: row {k} multiplier is negative")
        if any(v != 0 for v in combine(y)):
            errs.append("farkas: y^T A is not zero")
        if dot([c.rhs for c in p.constraints], y) <= 0:
            errs.append("farkas: y.b is not positive")
    elif cert.status == UNBOUNDED:
        x, r = cert.primal, cert.ray
        if x is None or r is None:
            return ["unbounded certificate needs a point and a ray"]
        primal_feasible(x, "primal")
        for k, c in enumerate(p.constraints):
            lhs = dot(c.coeffs, r)
            if c.relation == EQ and lhs != 0:
                errs.append(f"ray: row {k} equality direction nonzero")
            if c.relation == GE and lhs < 0:
                errs.append(f"ray: row {k} leaves the feasible region")
        gain = dot(p.objective, r)
        if (gain <= 0) if p.sense == "maximize" else (gain >= 0):
            errs.append("ray does not improve the objective")
    else:
        errs.append(f"unknown status {cert.status!r}")
    return errs


def verify_certificate(p: LPProblem, cert: LPCertificate) -> bool:
    return not certificate_errors(p, cert)


def feasible_point(constraints: Sequence[Constraint], nvars: int) -> tuple | None:
    cert = solve(LPProblem(nvars, constraints, [0] * nvars))
    return cert.primal if cert.status == OPTIMAL else None


def polytope_constraints(P) -> list[Constraint]:
    return [Constraint(n, GE, a) for n, a in zip(P.normals, P.offsets)]


def minimize_over_polytope(P, direction) -> tuple[Fraction, frozenset]:
    """Exact minimum of <., direction> over ``P`` and the optimal face.

    ``P`` is anything with ``dim``, ``normals`` and ``offsets`` (an
    H-polytope ``<alpha, n_i> >= a_i``). The face is returned as the set of
    inequality indices that are tight on every minimizer.
    """
    direction = vec(direction)
    n = P.dim
    if len(direction) != n:
        raise ValueError(f"direction has length {len(direction)}, polytope dimension is {n}")
    cons = polytope_constraints(P)
    cert = solve(LPProblem(n, cons, direction, "minimize"))
    if cert.status == INFEASIBLE:
        raise ValueError("polytope is empty")
    if cert.status == UNBOUNDED:
        raise ValueError("polytope is unbounded in the given direction")
    value = cert.value
    x = cert.primal
    candidates = [i for i, c in enumerate(cons) if dot(c.coeffs, x) == c.rhs]
    on_face = cons + [Constraint(direction, EQ, value)]
    tight = []
    for i in candidates:
        # tight on the whole optimal face iff it cannot be made slack there
        c = cons[i]
        res = solve(LPProblem(n, on_face, c.coeffs, "maximize"))
        if res.status == OPTIMAL and res.value == c.rhs:
            tight.append(i)
    return value, frozenset(tight)


def _sorted_maximal(qfan) -> list:
    return sorted(qfan.maximal_cones, key=lambda c: (len(c), sorted(c)))


def support_function_lp(qfan) -> LPProblem:
    """Strictly convex support function search over a complete simplicial fan.

    Variables are laid out as ``a_1..a_k`` (one offset per ray), then one
    block ``alpha_sigma`` of length n per maximal cone (cones sorted by size,
    then by sorted ray indices), then the slack ``t``. The rows require
    ``<alpha_sigma, r_i> = a_i`` for rays of sigma and
    ``<alpha_sigma, r_j> - a_j >= t`` for the others; ``t <= 1`` caps the
    objective. The fan is polytopal iff the optimum is positive, and because
    the feasible set is a cone the optimum is then exactly 1.
    """
    from .fans import is_complete

    if not qfan.is_simplicial():
        raise ValueError("fan is not simplicial")
    if not is_complete(qfan):
        raise ValueError("fan is not complete")
    n = qfan.ambient_dim
    k = len(qfan.rays)
    cones = _sorted_maximal(qfan)
    nv = k + n * len(cones) + 1
    tcol = nv - 1
    cons = []
    for s, c in enumerate(cones):
        base = k + n * s
        for j, r in enumerate(qfan.rays):
            row = [0] * nv
            row[base:base + n] = r
            row[j] = -1
            if j in c:
                cons.append(Constraint(row, EQ, 0))
            else:
                row[tcol] = -1
                cons.append(Constraint(row, GE, 0))
    cap = [0] * nv
    cap[tcol] = -1
    cons.append(Constraint(cap, GE, -1))
    objective = [0] * nv
    objective[tcol] = 1
    return LPProblem(nv, cons, objective)


@dataclass(frozen=True)
class SupportResult:
    """Outcome of the polytopality test for a complete simplicial fan.

    ``t`` is the exact LP optimum. When it is positive, ``offsets`` and
    ``alphas`` (one vertex per maximal cone) describe a normal polytope.
    Otherwise ``farkas`` is an infeasibility certificate for
    ``farkas_problem``, the same LP with the extra row ``t >= 1``.
    """

    problem: LPProblem
    certificate: LPCertificate
    t: Fraction
    cones: tuple
    offsets: tuple | None = None
    alphas: dict | None = None
    farkas_problem: LPProblem | None = None
    farkas: LPCertificate | None = None

    @property
    def polytopal(self) -> bool:
        return self.t > 0

    def to_json(self) -> dict:
        out = {
            "t": format_rational(self.t),
            "polytopal": self.polytopal,
            "certificate": self.certificate.to_json(),
        }
        if self.offsets is not None:
            out["offsets"] = [format_rational(x) for x in self.offsets]
        if self.farkas is not None:
            out["farkas_t_ge_1"] = self.farkas.to_json()
        return out


def polytopality(qfan) -> SupportResult:
    """Solve :func:`support_function_lp` and gather the evidence either way."""
    p = support_function_lp(qfan)
    cert = solve(p)
    if cert.status != OPTIMAL:
        raise LPError(f"support LP returned {cert.status}; t = 0 is always feasible "
                      f"and t <= 1 bounds it")
    cones = tuple(_sorted_maximal(qfan))
    n = qfan.ambient_dim
    k = len(qfan.rays)
    t = cert.value
    if t > 0:
        x = cert.primal
        offsets = x[:k]
        alphas = {c: x[k + n * s:k + n * (s + 1)] for s, c in enumerate(cones)}
        return SupportResult(p, cert, t, cones, offsets, alphas)
    row = [0] * p.variables
    row[-1] = 1
    fp = p.with_constraints([Constraint(row, GE, 1)])
    farkas = solve(fp)
    if farkas.status != INFEASIBLE:
        raise LPError("t >= 1 is feasible although the optimum is not positive")
    return SupportResult(p, cert, t, cones, farkas_problem=fp, farkas=farkas)
