"""LVMB data, the LVM classification and the moment-map convexity harness.

Homogeneous coordinates
-----------------------
The moment-map side works in coordinates z_j indexed by *labels*. With a
simplicial complex on {0..m} the labels are 1..m, followed by 0 when {0} is a
face (0 not indispensable; otherwise z_0 = 1 is not a coordinate). Label j
carries the vector u_j = e_j of R^m (e_0 = -e_1 - ... - e_m). For a fan given
directly the labels are its ray indices and u_j is the ray itself.

With q: R^m -> R^n the quotient by p(h), ``Q`` is the n x k matrix with
columns q(u_j) and ``K`` an echelon basis of ker Q; when labels are exactly
1..m, K is the echelon basis of p(h). The moment map is
Phi(z) = pi |z_j|^2, the level value is beta = restriction of -a to K and the
lifted moment map solves Q^T alpha = Phi(z) + a, i.e. the gauge is
c = sum a_j e_j^*.

Coordinates that are not rays of the quotient fan (indispensable labels, and
every label when n = 0) get offsets that make their inequality redundant:
a_j = min over vertices of <v, q(u_j)> - 1, so z_j never vanishes on the
level set.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .arith import (GaussianRational, RatMatrix, complex_dimension, dot, format_rational,
                    inverse, kernel_basis, rank, real_projection_span, realification, rref,
                    solve_linear, vec)
from .fans import (Fan, NotAFanError, SimplicialComplex, basis_vector, complex_from_maximal,
                   complex_ray_labels, fan_from_complex, is_complete, is_nonsingular,
                   project_fan, uncovered_points, walls)
from .lp import SupportResult, minimize_over_polytope, polytopality
from .polytopes import HPolytope, normality_diagnostics, polytope_from_support, violation
from .polytopes import vertices as polytope_vertices

log = logging.getLogger(__name__)

LVM = "LVM"
LVMB_NOT_LVM = "LVMB-not-LVM"
NOT_LVMB = "not-LVMB"


def _fmt_vec(v) -> list:
    return [format_rational(x) for x in v]


@dataclass(frozen=True)
class LVMBData:
    """A simplicial complex (or a fan in R^m) together with a basis of h in C^m."""

    m: int
    h_basis: tuple = ()
    sigma: SimplicialComplex | None = None
    fan: Fan | None = None

    def __post_init__(self):
        basis = tuple(tuple(GaussianRational.coerce(z) for z in a) for a in self.h_basis)
        object.__setattr__(self, "h_basis", basis)
        if (self.sigma is None) == (self.fan is None):
            raise ValueError("give exactly one of a simplicial complex or a fan")
        if self.sigma is not None and self.sigma.m != self.m:
            raise ValueError(f"complex lives on {{0..{self.sigma.m}}}, expected m = {self.m}")
        if self.fan is not None and self.fan.ambient_dim != self.m:
            raise ValueError(f"fan lives in R^{self.fan.ambient_dim}, expected m = {self.m}")
        for a in basis:
            if len(a) != self.m:
                raise ValueError(f"h basis vector has length {len(a)}, expected {self.m}")

    @property
    def direct(self) -> bool:
        return self.fan is not None

    def ambient_fan(self) -> Fan:
        return self.fan if self.fan is not None else fan_from_complex(self.sigma)

    def to_json(self) -> dict:
        out = {}
        if self.fan is not None:
            out["fan"] = self.fan.to_json()
        else:
            out["m"] = self.m
            out["maximal_faces"] = [sorted(f) for f in self.sigma.maximal_faces]
        out["h_basis"] = [[z.to_json() for z in a] for a in self.h_basis]
        return out

    @classmethod
    def from_json(cls, obj) -> LVMBData:
        if not isinstance(obj, dict):
            raise ValueError("input must be a JSON object")
        try:
            h = [[GaussianRational.from_json(z) for z in a] for a in obj.get("h_basis", [])]
        except (TypeError, ValueError, KeyError) as exc:
            raise ValueError(f"h_basis: {exc}") from None
        if "fan" in obj:
            fan = Fan.from_json(obj["fan"])
            return cls(fan.ambient_dim, h, fan=fan)
        for key in ("m", "maximal_faces"):
            if key not in obj:
                raise ValueError(f"missing field {key!r}")
        sigma = complex_from_maximal(obj["m"], obj["maximal_faces"])
        return cls(obj["m"], h, sigma=sigma)


def g_J(data: LVMBData) -> RatMatrix:
    """Echelon basis of p(h), the real parts of h."""
    return real_projection_span(data.h_basis, data.m)


def quotient_map(pH: RatMatrix, m: int) -> RatMatrix:
    """q: R^m -> R^n in the coordinates not occupied by pivots of ``pH``.

    For a free column c, q(x)_c = x_c - sum_r x_{pivot_r} pH[r][c], whose
    kernel is exactly the row space of the echelon matrix ``pH``.
    """
    R, pivots = rref(pH) if pH.nrows else (pH, ())
    free = [c for c in range(m) if c not in pivots]
    rows = []
    for c in free:
        row = [Fraction(0)] * m
        row[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            row[pc] -= R.rows[r][c]
        rows.append(row)
    return RatMatrix(rows, ncols=m)


@dataclass(frozen=True)
class QuotientData:
    """p(h), the quotient q and the homogeneous-coordinate data (see module doc)."""

    pH: RatMatrix
    q: RatMatrix
    labels: tuple
    U: tuple
    Q: RatMatrix
    K: RatMatrix
    ray_index: tuple

    @property
    def n(self) -> int:
        return self.q.nrows

    @property
    def k(self) -> int:
        return len(self.labels)

    def image(self, j: int) -> tuple:
        """q(u_j)."""
        return self.Q.col(j)

    def to_json(self) -> dict:
        return {
            "g_J": self.pH.to_json(),
            "q": self.q.to_json(),
            "coordinate_labels": list(self.labels),
            "kernel_basis": self.K.to_json(),
        }


def coordinate_labels(data: LVMBData) -> list[int]:
    if data.direct:
        return list(range(len(data.fan.rays)))
    labels = list(range(1, data.m + 1))
    if frozenset({0}) in data.sigma:
        labels.append(0)
    return labels


def quotient_data(data: LVMBData) -> QuotientData:
    pH = g_J(data)
    q = quotient_map(pH, data.m)
    labels = coordinate_labels(data)
    if data.direct:
        U = [tuple(Fraction(x) for x in r) for r in data.fan.rays]
    else:
        U = [vec(basis_vector(lab, data.m)) for lab in labels]
    cols = [q @ u for u in U]
    Q = RatMatrix.from_columns(cols, q.nrows)
    kb = kernel_basis(Q)
    K = rref(RatMatrix(kb, ncols=len(labels)))[0] if kb else RatMatrix([], ncols=len(labels))
    if data.direct:
        ray_index = labels
    else:
        pos = {lab: i for i, lab in enumerate(complex_ray_labels(data.sigma))}
        ray_index = [pos.get(lab) for lab in labels]
    return QuotientData(pH, q, tuple(labels), tuple(U), Q, K, tuple(ray_index))


@dataclass
class LVMBReport:
    """Per-condition verdicts for (Delta, h) with witnesses on failure."""

    real_dim_h: int
    dim_pH: int
    injective: bool
    kernel_witness: tuple | None
    nonsingular: bool
    nonsingular_required: bool
    fan_error: NotAFanError | None
    complete: bool | None
    incomplete_reason: str | None
    uncovered_point: tuple | None
    quotient: QuotientData
    quotient_fan: Fan | None

    @property
    def condition1(self) -> bool:
        return self.injective

    @property
    def condition2(self) -> bool:
        return self.fan_error is None and bool(self.complete)

    @property
    def ok(self) -> bool:
        return (self.condition1 and self.condition2
                and (self.nonsingular or not self.nonsingular_required))

    def to_json(self) -> dict:
        c1 = {"ok": self.injective, "real_dim_h": self.real_dim_h, "dim_p_h": self.dim_pH}
        if self.kernel_witness is not None:
            c1["kernel_witness"] = [z.to_json() for z in self.kernel_witness]
        c2 = {"ok": self.condition2, "is_fan": self.fan_error is None,
              "complete": self.complete}
        if self.fan_error is not None:
            c2["fan_error"] = {"kind": self.fan_error.kind,
                               "cones": [sorted(c) for c in self.fan_error.cones],
                               "detail": self.fan_error.detail}
        if self.incomplete_reason is not None:
            c2["incomplete_reason"] = self.incomplete_reason
        if self.uncovered_point is not None:
            c2["uncovered_point"] = _fmt_vec(self.uncovered_point)
        out = {
            "ok": self.ok,
            "condition1": c1,
            "condition2": c2,
            "nonsingular": self.nonsingular,
            "nonsingular_required": self.nonsingular_required,
            "quotient": self.quotient.to_json(),
        }
        if self.quotient_fan is not None:
            out["quotient_fan"] = self.quotient_fan.to_json()
        return out


def _injectivity_witness(data: LVMBData) -> tuple | None:
    """A nonzero purely imaginary element of h (so p kills it), if any."""
    m = data.m
    R = realification(data.h_basis, m)
    M = RatMatrix([[row[j] for row in R.rows] for j in range(m)], ncols=R.nrows)
    for c in kernel_basis(M):
        w = [sum((c[k] * R.rows[k][j] for k in range(R.nrows)), Fraction(0))
             for j in range(2 * m)]
        if any(w):
            return tuple(GaussianRational(0, x) for x in w[m:])
    return None


def _incompleteness(F: Fan) -> tuple[str, tuple | None]:
    n = F.ambient_dim
    low = [sorted(c) for c in F.maximal_cones if len(c) != n or F.cone_dim(c) != n]
    if low:
        reason = f"maximal cone {low[0]} is not {n}-dimensional"
    else:
        bad = sorted((sorted(w), k) for w, k in walls(F).items() if k != 2)
        if bad:
            reason = f"wall {bad[0][0]} lies in {bad[0][1]} maximal cone(s)"
        else:
            reason = "maximal cones are not connected through walls"
    missed = uncovered_points(F, samples=256)
    return reason, (missed[0] if missed else None)


def check_lvmb(data: LVMBData) -> LVMBReport:
    """Evaluate injectivity of p on h and completeness of the quotient fan."""
    quot = quotient_data(data)
    real_dim = 2 * complex_dimension(data.h_basis, data.m)
    dim_pH = quot.pH.nrows
    injective = dim_pH == real_dim
    witness = None if injective else _injectivity_witness(data)
    delta = data.ambient_fan()
    nonsingular = is_nonsingular(delta)
    fan_error = None
    complete = None
    reason = point = None
    qfan = None
    try:
        qfan = project_fan(delta, quot.q)
    except NotAFanError as exc:
        fan_error = exc
    if qfan is not None:
        complete = is_complete(qfan)
        if not complete:
            reason, point = _incompleteness(qfan)
    log.info("condition (1): %s (dim_R h = %d, dim p(h) = %d); condition (2): fan=%s complete=%s",
             injective, real_dim, dim_pH, fan_error is None, complete)
    return LVMBReport(real_dim, dim_pH, injective, witness, nonsingular, not data.direct,
                      fan_error, complete, reason, point, quot, qfan)


@dataclass
class ClassificationReport:
    data: LVMBData
    lvmb: LVMBReport
    verdict: str
    support: SupportResult | None = None
    polytope: HPolytope | None = None
    vertices: dict | None = None
    offsets: tuple | None = None

    @property
    def certificate(self):
        return None if self.support is None else self.support.certificate

    @property
    def quotient_fan(self) -> Fan | None:
        return self.lvmb.quotient_fan

    def vertex_list(self) -> list:
        if self.vertices is None:
            return []
        return [self.vertices[c] for c in self.support.cones]

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "lvmb": self.lvmb.to_json()}
        if self.support is not None:
            out["support_lp"] = self.support.to_json()
        if self.polytope is not None:
            out["polytope"] = self.polytope.to_json(self.vertex_list())
            out["coordinate_offsets"] = _fmt_vec(self.offsets)
        return out


def coordinate_offsets(quot: QuotientData, qfan: Fan, b: Sequence, verts) -> tuple:
    """Offsets a_j of the homogeneous coordinates from the fan offsets ``b``.

    A coordinate carried by the ray rho of the quotient fan, with
    q(u_j) = lam * rho, gets a_j = lam * b_rho; any other coordinate gets the
    redundant offset described in the module docstring.
    """
    out = []
    for j in range(quot.k):
        g = quot.image(j)
        i = quot.ray_index[j]
        if i is None or quot.n == 0:
            out.append(min(dot(v, g) for v in verts) - 1)
            continue
        rho = qfan.rays[i]
        d = next(t for t, x in enumerate(rho) if x)
        out.append(g[d] / rho[d] * b[i])
    return tuple(out)


def classify(data: LVMBData) -> ClassificationReport:
    """LVM / LVMB-not-LVM / not-LVMB, with the polytope or the t = 0 evidence."""
    rep = check_lvmb(data)
    if not rep.ok:
        return ClassificationReport(data, rep, NOT_LVMB)
    qfan = rep.quotient_fan
    support = polytopality(qfan)
    log.info("support LP optimum t = %s", support.t)
    if not support.polytopal:
        return ClassificationReport(data, rep, LVMB_NOT_LVM, support)
    P = polytope_from_support(qfan, support.offsets)
    verts = polytope_vertices(P, qfan)
    a = coordinate_offsets(rep.quotient, qfan, support.offsets, list(verts.values()))
    return ClassificationReport(data, rep, LVM, support, P, verts, a)


# --- moment maps -----------------------------------------------------------

def moment_map(z) -> np.ndarray:
    """Phi(z) = (pi |z_1|^2, ..., pi |z_k|^2)."""
    z = np.asarray(z, dtype=complex)
    return math.pi * np.abs(z) ** 2


def beta(quot: QuotientData, a: Sequence) -> tuple:
    """-sum a_j e_j^* restricted to ker Q, in the echelon basis ``K``."""
    return tuple(-dot(a, w) for w in quot.K.rows)


@dataclass
class SamplePoint:
    z: np.ndarray
    r: np.ndarray
    zero_pattern: frozenset
    alpha: tuple = ()


@dataclass
class MomentModel:
    """Everything needed to sample the level set of an LVM classification."""

    report: ClassificationReport
    a: tuple
    P: HPolytope
    verts: dict
    lift_rows: tuple = field(init=False)
    lift_inv: RatMatrix = field(init=False)

    def __post_init__(self):
        quot = self.quot
        chosen = []
        for j in range(quot.k):
            trial = chosen + [j]
            if rank(RatMatrix([quot.image(i) for i in trial], ncols=quot.n)) == len(trial):
                chosen = trial
            if len(chosen) == quot.n:
                break
        self.lift_rows = tuple(chosen)
        M = RatMatrix([quot.image(i) for i in chosen], ncols=quot.n)
        self.lift_inv = inverse(M) if quot.n else RatMatrix([], ncols=0)
        self._Qf = np.array([[float(x) for x in row] for row in quot.Q.rows],
                            dtype=float).reshape(quot.n, quot.k)
        self._Kf = np.array([[float(x) for x in row] for row in quot.K.rows],
                            dtype=float).reshape(quot.K.nrows, quot.k)
        self._af = np.array([float(x) for x in self.a], dtype=float)
        self._inv_f = np.array([[float(x) for x in row] for row in self.lift_inv.rows],
                               dtype=float).reshape(quot.n, quot.n)

    @classmethod
    def from_report(cls, report: ClassificationReport, shift: Sequence | None = None) -> MomentModel:
        """Model for an LVM report; ``shift`` c moves every offset by <c, q(u_j)>."""
        if report.verdict != LVM:
            raise ValueError(f"moment data needs an LVM verdict, got {report.verdict}")
        a, P, verts = report.offsets, report.polytope, report.vertices
        if shift is not None:
            c = vec(shift)
            quot = report.lvmb.quotient
            a = tuple(x + dot(c, quot.image(j)) for j, x in enumerate(a))
            P = P.translate(c)
            verts = {s: tuple(x + y for x, y in zip(v, c)) for s, v in verts.items()}
        return cls(report, a, P, verts)

    @property
    def quot(self) -> QuotientData:
        return self.report.lvmb.quotient

    @property
    def qfan(self) -> Fan:
        return self.report.quotient_fan

    def is_face(self, pattern: frozenset) -> bool:
        data = self.report.data
        if data.direct:
            return pattern in data.fan.cones
        return pattern in data.sigma

    def beta(self) -> tuple:
        return beta(self.quot, self.a)

    def levels(self, alpha: Sequence) -> tuple:
        """Exact r_j = <alpha, q(u_j)> - a_j."""
        return tuple(dot(alpha, self.quot.image(j)) - self.a[j] for j in range(self.quot.k))

    def pattern(self, r) -> frozenset:
        return frozenset(lab for lab, x in zip(self.quot.labels, r) if x == 0)


def point_from_alpha(model: MomentModel, alpha: Sequence, phases=None) -> SamplePoint:
    """The level-set point over alpha (exact levels, float coordinates)."""
    alpha = vec(alpha)
    r = model.levels(alpha)
    if any(x < 0 for x in r):
        raise ValueError(f"{_fmt_vec(alpha)} lies outside the polytope")
    theta = np.zeros(len(r)) if phases is None else np.asarray(phases, dtype=float)
    z = np.sqrt(np.array([float(x) for x in r]) / math.pi) * np.exp(1j * theta)
    pattern = model.pattern(r)
    if not model.is_face(pattern):
        raise AssertionError(f"zero pattern {sorted(pattern)} is not a face")
    return SamplePoint(z, moment_map(z), pattern, alpha)


def vertex_levels(model: MomentModel, cone) -> tuple:
    """Exact levels of the level-set points with z_j = 0 on the rays of ``cone``.

    Solves K r = beta together with r_j = 0 for the coordinates that map onto
    rays of ``cone``; the polytope vertices are not consulted.
    """
    quot = model.quot
    rows = [list(w) for w in quot.K.rows]
    rhs = list(model.beta())
    for j in range(quot.k):
        if quot.n and quot.ray_index[j] in cone:
            rows.append([int(i == j) for i in range(quot.k)])
            rhs.append(0)
    r = solve_linear(RatMatrix(rows, ncols=quot.k), rhs)
    if r is None:
        raise ValueError(f"no level-set point vanishes on cone {sorted(cone)}")
    return r


def lifted_moment_exact(model: MomentModel, r: Sequence) -> tuple[tuple, tuple]:
    """Solve Q^T alpha = r + a exactly; returns alpha and the residual vector."""
    quot = model.quot
    rhs = [r[j] + model.a[j] for j in model.lift_rows]
    alpha = model.lift_inv @ vec(rhs) if quot.n else ()
    resid = tuple(r[j] + model.a[j] - dot(alpha, quot.image(j)) for j in range(quot.k))
    return tuple(alpha), resid


def lifted_moment(model: MomentModel, phi) -> tuple[np.ndarray, np.ndarray]:
    """Float lift of moment values (one row per point).

    Returns alpha with Q^T alpha = Phi + a on a fixed invertible set of
    coordinates, and the max-norm residual of Phi + c - q^*(alpha) over all
    coordinates.
    """
    phi = np.atleast_2d(np.asarray(phi, dtype=float))
    shifted = phi + model._af
    rows = list(model.lift_rows)
    alpha = shifted[:, rows] @ model._inv_f.T
    resid = shifted - alpha @ model._Qf
    return alpha, np.max(np.abs(resid), axis=1, initial=0.0)


def sample_ZP(model: MomentModel, count: int, seed: int = 0,
              max_trials: int = 10**6) -> list[SamplePoint]:
    """Seeded points of the level set, from alpha uniform in P.

    alpha is drawn by rejection from the bounding box of the vertices; the
    phases are uniform. ``max_trials`` consecutive rejections raise
    ``RuntimeError`` (a thin or degenerate polytope).
    """
    rng = np.random.default_rng(seed)
    n = model.quot.n
    V = np.array([[float(x) for x in v] for v in model.verts.values()],
                 dtype=float).reshape(len(model.verts), n)
    lo, hi = V.min(axis=0), V.max(axis=0)
    N = np.array([[float(x) for x in nv] for nv in model.P.normals],
                 dtype=float).reshape(len(model.P.normals), n)
    b = np.array([float(x) for x in model.P.offsets])
    alphas = []
    misses = 0
    while len(alphas) < count:
        batch = rng.uniform(lo, hi, size=(4096, n))
        ok = np.all(batch @ N.T >= b, axis=1) if len(b) else np.ones(len(batch), bool)
        for row, good in zip(batch, ok):
            if good:
                alphas.append(row)
                misses = 0
                if len(alphas) == count:
                    break
            else:
                misses += 1
                if misses >= max_trials:
                    raise RuntimeError(f"rejection sampling failed after {max_trials} "
                                       "trials; the polytope looks degenerate")
    A = np.array(alphas).reshape(count, n)
    R = A @ model._Qf - model._af
    R = np.maximum(R, 0.0)
    theta = rng.uniform(0.0, 2 * math.pi, size=R.shape)
    Z = np.sqrt(R / math.pi) * np.exp(1j * theta)
    out = []
    for i in range(count):
        z = Z[i]
        pattern = frozenset(lab for lab, x in zip(model.quot.labels, z) if x == 0)
        if not model.is_face(pattern):
            raise AssertionError(f"zero pattern {sorted(pattern)} is not a face")
        out.append(SamplePoint(z, moment_map(z), pattern, tuple(A[i])))
    return out


# --- convexity harness -----------------------------------------------------

def relint_cone(qfan: Fan, x: Sequence) -> frozenset:
    """The cone of a complete simplicial fan containing x in its relative interior."""
    x = vec(x)
    if not any(x):
        return frozenset()
    for c in qfan.maximal_cones:
        coeffs = inverse(qfan.generators(c).T) @ x
        if all(t >= 0 for t in coeffs):
            return frozenset(i for i, t in zip(sorted(c), coeffs) if t > 0)
    raise ValueError(f"{_fmt_vec(x)} lies in no maximal cone")


@dataclass
class DirectionCheck:
    v: tuple
    qv: tuple
    lp_min: Fraction
    lp_face: frozenset
    predicted_face: frozenset
    sampled_min: float
    vertex_min: Fraction
    tol: float

    @property
    def passed(self) -> bool:
        return (self.sampled_min >= float(self.lp_min) - self.tol
                and self.vertex_min == self.lp_min
                and self.lp_face == self.predicted_face)

    def to_json(self) -> dict:
        return {
            "v": _fmt_vec(self.v),
            "q_v": _fmt_vec(self.qv),
            "lp_min": format_rational(self.lp_min),
            "vertex_min": format_rational(self.vertex_min),
            "sampled_min": self.sampled_min,
            "lp_face": sorted(self.lp_face),
            "predicted_face": sorted(self.predicted_face),
            "passed": self.passed,
        }


@dataclass
class HarnessReport:
    samples: int
    seed: int
    tol: float
    max_violation: float
    max_lift_residual: float
    max_level_residual: float
    max_kernel_spread: float
    vertex_images_exact: bool
    vertex_mismatches: list
    normal: bool
    normal_diagnostics: list
    tightness_ok: bool
    directions: list

    @property
    def checks(self) -> dict:
        return {
            "membership": self.max_violation <= self.tol,
            "lift_residual": self.max_lift_residual <= self.tol,
            "level_set": self.max_level_residual <= self.tol,
            "kernel_directions": self.max_kernel_spread <= self.tol,
            "vertex_images": self.vertex_images_exact,
            "normal_polytope": self.normal and self.tightness_ok,
            "directions": all(d.passed for d in self.directions),
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": self.checks,
            "samples": self.samples,
            "seed": self.seed,
            "tol": self.tol,
            "max_membership_violation": self.max_violation,
            "max_lift_residual": self.max_lift_residual,
            "max_level_residual": self.max_level_residual,
            "max_kernel_spread": self.max_kernel_spread,
            "vertex_mismatches": self.vertex_mismatches,
            "normal_diagnostics": self.normal_diagnostics,
            "directions": [d.to_json() for d in self.directions],
        }


def verify_convexity(report: ClassificationReport, samples: int = 1000, seed: int = 0,
                     tol: float = 1e-9, directions: int = 20,
                     shift: Sequence | None = None) -> HarnessReport:
    """Image-level checks of the convexity theorem on seeded samples."""
    model = MomentModel.from_report(report, shift)
    quot = model.quot
    P = model.P
    pts = sample_ZP(model, samples, seed)
    phi = np.array([p.r for p in pts]).reshape(samples, quot.k)
    lifted, resid = lifted_moment(model, phi)
    max_violation = max((violation(P, x) for x in lifted), default=0.0)
    beta_f = np.array([float(x) for x in model.beta()])
    level = phi @ model._Kf.T - beta_f if quot.K.nrows else np.zeros((samples, 0))
    max_level = float(np.max(np.abs(level), initial=0.0))
    # for w in ker Q, <Phi(z), w> = -<a, w> on the whole level set
    spread = 0.0
    for w in model._Kf:
        h = phi @ w
        spread = max(spread, float(h.max() - h.min())) if len(h) else spread

    # vertex images, exact: points vanishing on each maximal cone
    mismatches = []
    images = {}
    for c in model.qfan.maximal_cones:
        r = vertex_levels(model, c)
        alpha, res = lifted_moment_exact(model, r)
        images[c] = alpha
        pattern = model.pattern(r)
        if any(res) or any(x < 0 for x in r) or not model.is_face(pattern) \
                or alpha != tuple(model.verts[c]):
            mismatches.append({"cone": sorted(c), "image": _fmt_vec(alpha),
                               "vertex": _fmt_vec(model.verts[c])})
    diags = normality_diagnostics(P, model.qfan)
    tight_ok = True
    for i, (nv, a) in enumerate(zip(P.normals, P.offsets)):
        on = {c for c, x in images.items() if dot(nv, x) == a}
        if on != {c for c in images if i in c}:
            tight_ok = False

    rng = np.random.default_rng([seed, 1])
    checks = []
    for _ in range(directions):
        v = vec(int(x) for x in rng.integers(-3, 4, size=quot.k))
        qv = quot.Q @ v
        lp_min, face = minimize_over_polytope(P, qv)
        qvf = np.array([float(x) for x in qv])
        sampled = float(np.min(lifted @ qvf)) if samples else math.inf
        vmin = min(dot(x, qv) for x in images.values())
        checks.append(DirectionCheck(v, qv, lp_min, face, relint_cone(model.qfan, qv),
                                     sampled, vmin, tol))
    return HarnessReport(samples, seed, tol, max_violation, float(np.max(resid, initial=0.0)),
                         max_level, spread, not mismatches, mismatches, not diags, diags,
                         tight_ok, checks)
