"""H-polytopes {alpha : <alpha, n_i> >= a_i}, their vertices and normal fans."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational
from typing import Sequence

from .arith import RatMatrix, dot, format_rational, parse_rational, primitive_integer_vector, rank, solve_linear, vec
from .fans import Fan
from .lp import GE, OPTIMAL, Constraint, LPProblem, minimize_over_polytope, solve


@dataclass(frozen=True)
class HPolytope:
    dim: int
    normals: tuple
    offsets: tuple

    def __post_init__(self):
        normals = tuple(vec(v) for v in self.normals)
        offsets = vec(self.offsets)
        object.__setattr__(self, "normals", normals)
        object.__setattr__(self, "offsets", offsets)
        if len(normals) != len(offsets):
            raise ValueError(f"{len(normals)} normals but {len(offsets)} offsets")
        for v in normals:
            if len(v) != self.dim:
                raise ValueError(f"normal {v} does not have length {self.dim}")

    def translate(self, c: Sequence) -> HPolytope:
        """The polytope P + c, i.e. offsets a_i + <c, n_i>."""
        c = vec(c)
        return HPolytope(self.dim, self.normals,
                         [a + dot(c, nv) for nv, a in zip(self.normals, self.offsets)])

    def to_json(self, vertices=None) -> dict:
        out = {
            "dim": self.dim,
            "normals": [[format_rational(x) for x in v] for v in self.normals],
            "offsets": [format_rational(x) for x in self.offsets],
        }
        if vertices is not None:
            out["vertices"] = [[format_rational(x) for x in v] for v in vertices]
        return out

    @classmethod
    def from_json(cls, obj) -> HPolytope:
        try:
            return cls(obj["dim"],
                       [[parse_rational(x) for x in v] for v in obj["normals"]],
                       [parse_rational(x) for x in obj["offsets"]])
        except KeyError as exc:
            raise ValueError(f"polytope is missing field {exc.args[0]!r}") from None


@dataclass(frozen=True)
class FaceDescriptor:
    tight_set: frozenset
    dim: int


def polytope_from_support(qfan: Fan, a: Sequence) -> HPolytope:
    """One inequality <alpha, r_i> >= a_i per ray of ``qfan``."""
    if len(a) != len(qfan.rays):
        raise ValueError(f"{len(a)} offsets for {len(qfan.rays)} rays")
    return HPolytope(qfan.ambient_dim, qfan.rays, a)


def vertices(P: HPolytope, qfan: Fan) -> dict:
    """The vertex alpha_sigma of P cut out by the rays of each maximal cone.

    Raises ``ValueError`` when a system is singular or the resulting points
    are not distinct vertices of P; both mean the offsets are not a strictly
    convex support function on ``qfan``.
    """
    if P.dim != qfan.ambient_dim or len(P.normals) != len(qfan.rays):
        raise ValueError("polytope and fan do not match")
    out = {}
    for c in qfan.maximal_cones:
        idx = sorted(c)
        if len(idx) != P.dim:
            raise ValueError(f"cone {idx} is not full-dimensional")
        M = RatMatrix([P.normals[i] for i in idx], ncols=P.dim)
        if rank(M) < P.dim:
            raise ValueError(f"singular vertex system for cone {idx}")
        x = solve_linear(M, [P.offsets[i] for i in idx])
        bad = [i for i in range(len(P.normals))
               if i not in c and dot(P.normals[i], x) <= P.offsets[i]]
        if bad:
            raise ValueError(f"offsets are not strictly convex: the point of cone {idx} "
                             f"does not satisfy ray {bad[0]} strictly")
        out[c] = x
    return out


def contains(P: HPolytope, x: Sequence, tol: float = 1e-9) -> bool:
    """Membership test; exact for rational input, ``tol`` slack for floats."""
    if len(x) != P.dim:
        raise ValueError(f"point has length {len(x)}, polytope dimension is {P.dim}")
    if all(isinstance(v, Rational) for v in x):
        return all(dot(nv, x) >= a for nv, a in zip(P.normals, P.offsets))
    xs = [float(v) for v in x]
    return all(sum(float(c) * v for c, v in zip(nv, xs)) >= float(a) - tol
               for nv, a in zip(P.normals, P.offsets))


def violation(P: HPolytope, x: Sequence[float]) -> float:
    """Largest amount by which a float point breaks an inequality (0 inside)."""
    worst = 0.0
    for nv, a in zip(P.normals, P.offsets):
        gap = float(a) - sum(float(c) * float(v) for c, v in zip(nv, x))
        worst = max(worst, gap)
    return worst


def face_dim(P: HPolytope, tight) -> int:
    return P.dim - rank(RatMatrix([P.normals[i] for i in sorted(tight)], ncols=P.dim))


def min_face(P: HPolytope, v: Sequence) -> FaceDescriptor:
    """The face of P on which <., v> is minimal."""
    _, tight = minimize_over_polytope(P, v)
    return FaceDescriptor(tight, face_dim(P, tight))


def _interior_margin(P: HPolytope) -> Fraction | None:
    """max s with <alpha, n_i> - a_i >= s, s <= 1; None when P is empty."""
    n = P.dim
    cons = [Constraint(list(nv) + [-1], GE, a) for nv, a in zip(P.normals, P.offsets)]
    cons.append(Constraint([0] * n + [-1], GE, -1))
    cert = solve(LPProblem(n + 1, cons, [0] * n + [1]))
    if cert.status != OPTIMAL or cert.value < 0:
        return None
    return cert.value


def is_bounded(P: HPolytope) -> bool:
    """No nonzero recession direction d with <d, n_i> >= 0 for all i."""
    n = P.dim
    if n == 0:
        return True
    if not P.normals or rank(RatMatrix(P.normals, ncols=n)) < n:
        return False
    total = [sum(nv[j] for nv in P.normals) for j in range(n)]
    cons = [Constraint(nv, GE, 0) for nv in P.normals]
    cons.append(Constraint([-x for x in total], GE, -1))
    cert = solve(LPProblem(n, cons, total))
    return cert.status == OPTIMAL and cert.value == 0


def vertex_tight_sets(P: HPolytope) -> dict:
    """Map each vertex of a nonempty bounded P to its set of tight inequalities."""
    n = P.dim
    if n == 0:
        return {(): frozenset()}
    found = {}
    for idx in combinations(range(len(P.normals)), n):
        M = RatMatrix([P.normals[i] for i in idx], ncols=n)
        if rank(M) < n:
            continue
        x = solve_linear(M, [P.offsets[i] for i in idx])
        if x in found or not contains(P, x):
            continue
        found[x] = frozenset(i for i, (nv, a) in enumerate(zip(P.normals, P.offsets))
                             if dot(nv, x) == a)
    return found


def normal_fan_with_labels(P: HPolytope) -> tuple[Fan, list[int]]:
    """Inner normal fan of a full-dimensional simple polytope.

    Also returns, for each ray of the fan, the index of the inequality of P
    it comes from. Inequalities that are not facets contribute no ray.
    """
    n = P.dim
    margin = _interior_margin(P)
    if margin is None:
        raise ValueError("polytope is empty")
    if not is_bounded(P):
        raise ValueError("polytope is unbounded")
    if n == 0:
        return Fan(0, (), {frozenset()}), []
    if margin == 0:
        raise ValueError("polytope is not full-dimensional; its normal fan is not defined here")
    verts = vertex_tight_sets(P)
    for x, tight in verts.items():
        if len(tight) != n:
            raise ValueError(f"polytope is not simple at vertex {x}")
    facets = sorted(set().union(*verts.values()))
    prims = [primitive_integer_vector(P.normals[i]) for i in facets]
    if len(set(prims)) < len(prims):
        raise ValueError("two facet inequalities have the same normal direction")
    pos = {i: k for k, i in enumerate(facets)}
    cones = [frozenset(pos[i] for i in tight) for tight in verts.values()]
    return Fan.from_cones(n, prims, cones), facets


def normal_fan(P: HPolytope) -> Fan:
    return normal_fan_with_labels(P)[0]


def _cone_vectors(F: Fan) -> set:
    return {frozenset(F.rays[i] for i in c) for c in F.maximal_cones}


def normality_diagnostics(P: HPolytope, qfan: Fan) -> list[str]:
    """Reasons why P is not a normal polytope of ``qfan``; empty when it is."""
    if P.dim != qfan.ambient_dim:
        return [f"polytope lives in dimension {P.dim}, fan in {qfan.ambient_dim}"]
    try:
        nf, facets = normal_fan_with_labels(P)
    except ValueError as exc:
        return [str(exc)]
    out = []
    fan_rays = {primitive_integer_vector(r) for r in qfan.rays}
    poly_rays = set(nf.rays)
    redundant = [i for i in range(len(P.normals)) if i not in facets]
    for i in redundant:
        out.append(f"inequality {i} (normal {list(map(str, P.normals[i]))}) is never a facet")
    for r in sorted(fan_rays - poly_rays):
        out.append(f"fan ray {list(r)} is not a facet normal of the polytope")
    for r in sorted(poly_rays - fan_rays):
        out.append(f"facet normal {list(r)} is not a ray of the fan")
    if not out:
        prim_fan = Fan.from_cones(qfan.ambient_dim,
                                  [primitive_integer_vector(r) for r in qfan.rays],
                                  qfan.maximal_cones)
        if _cone_vectors(prim_fan) != _cone_vectors(nf):
            out.append("maximal cones differ")
    return out


def is_normal_to(P: HPolytope, qfan: Fan) -> bool:
    return not normality_diagnostics(P, qfan)
