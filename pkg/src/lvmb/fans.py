"""Simplicial complexes, simplicial fans and their quotients.

A cone is a ``frozenset`` of indices into the owning fan's ray table. Fans
store every face, so ``{0}`` (the empty ray set) is always a cone.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .arith import RatMatrix, inverse, kernel_basis, primitive_integer_vector, rank, vec
from .lp import EQ, GE, OPTIMAL, Constraint, LPProblem, solve

Cone = frozenset


def _closure(faces: Iterable[Iterable[int]]) -> frozenset:
    out = {frozenset()}
    for f in faces:
        f = tuple(sorted(set(f)))
        for k in range(len(f) + 1):
            out.update(frozenset(c) for c in combinations(f, k))
    return frozenset(out)


def _sort_key(c):
    return (len(c), sorted(c))


@dataclass(frozen=True)
class SimplicialComplex:
    """Abstract simplicial complex on the vertex labels ``0..m``."""

    m: int
    faces: frozenset

    def __post_init__(self):
        faces = frozenset(frozenset(f) for f in self.faces)
        object.__setattr__(self, "faces", faces)
        if frozenset() not in faces:
            raise ValueError("the empty face is missing")
        ground = frozenset(range(self.m + 1))
        for f in faces:
            if not f <= ground:
                raise ValueError(f"face {sorted(f)} is not contained in {{0..{self.m}}}")
            if f == ground:
                raise ValueError("the whole ground set cannot be a face")
            for i in f:
                if f - {i} not in faces:
                    raise ValueError(f"not downward closed: {sorted(f - {i})} "
                                     f"missing below {sorted(f)}")

    @property
    def maximal_faces(self) -> list:
        return sorted((f for f in self.faces if not any(f < g for g in self.faces)),
                      key=_sort_key)

    @property
    def vertices(self) -> list[int]:
        return sorted(i for i in range(self.m + 1) if frozenset({i}) in self.faces)

    def __contains__(self, face) -> bool:
        return frozenset(face) in self.faces

    def to_json(self) -> dict:
        return {"m": self.m, "maximal_faces": [sorted(f) for f in self.maximal_faces]}


def complex_from_maximal(m: int, maximal_faces: Iterable[Iterable[int]]) -> SimplicialComplex:
    if m < 0:
        raise ValueError("m must be nonnegative")
    ground = set(range(m + 1))
    listed = [frozenset(f) for f in maximal_faces]
    for f in listed:
        if not f <= ground:
            raise ValueError(f"face {sorted(f)} has labels outside 0..{m}")
        if f == ground:
            raise ValueError(f"face {sorted(f)} equals the whole ground set")
    return SimplicialComplex(m, _closure(listed))


def is_indispensable(sigma: SimplicialComplex, i: int) -> bool:
    if not 0 <= i <= sigma.m:
        raise ValueError(f"vertex {i} is outside 0..{sigma.m}")
    return frozenset({i}) not in sigma.faces


@dataclass(frozen=True)
class Fan:
    ambient_dim: int
    rays: tuple
    cones: frozenset

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        object.__setattr__(self, "rays", rays)
        cones = frozenset(frozenset(c) for c in self.cones)
        object.__setattr__(self, "cones", cones)
        for r in rays:
            if len(r) != self.ambient_dim:
                raise ValueError(f"ray {r} does not live in R^{self.ambient_dim}")
            g = 0
            for x in r:
                g = gcd(g, x)
            if g != 1:
                raise ValueError(f"ray {r} is not a primitive integer vector")
        if len(set(rays)) != len(rays):
            raise ValueError("duplicate rays in the ray table")
        if frozenset() not in cones:
            raise ValueError("the zero cone is missing")
        for c in cones:
            for i in c:
                if not 0 <= i < len(rays):
                    raise ValueError(f"cone {sorted(c)} refers to a missing ray {i}")
                if c - {i} not in cones:
                    raise ValueError(f"cone {sorted(c)} is present but its face "
                                     f"{sorted(c - {i})} is not")

    @classmethod
    def from_cones(cls, ambient_dim: int, rays, cones) -> Fan:
        return cls(ambient_dim, rays, _closure(cones))

    @property
    def maximal_cones(self) -> list:
        return sorted((c for c in self.cones if not any(c < d for d in self.cones)),
                      key=_sort_key)

    def generators(self, cone) -> RatMatrix:
        """Rows are the ray vectors of ``cone`` (in increasing ray order)."""
        return RatMatrix([self.rays[i] for i in sorted(cone)], ncols=self.ambient_dim)

    def cone_dim(self, cone) -> int:
        return rank(self.generators(cone)) if cone else 0

    def is_simplicial(self) -> bool:
        return all(self.cone_dim(c) == len(c) for c in self.maximal_cones)

    def to_json(self) -> dict:
        return {
            "ambient_dim": self.ambient_dim,
            "rays": [list(r) for r in self.rays],
            "cones": [sorted(c) for c in self.maximal_cones],
        }

    @classmethod
    def from_json(cls, obj) -> Fan:
        try:
            n = obj["ambient_dim"]
            rays = obj["rays"]
            cones = obj["cones"]
        except KeyError as exc:
            raise ValueError(f"fan is missing field {exc.args[0]!r}") from None
        return cls.from_cones(n, rays, cones)


def complex_ray_labels(sigma: SimplicialComplex) -> list[int]:
    """Vertex labels in the ray order used by :func:`fan_from_complex`."""
    labels = [i for i in sigma.vertices if i >= 1]
    if 0 in sigma.vertices:
        labels.append(0)
    return labels


def basis_vector(label: int, m: int) -> tuple[int, ...]:
    """e_label in R^m, with e_0 = -e_1 - ... - e_m."""
    if label == 0:
        return tuple([-1] * m)
    return tuple(int(j == label - 1) for j in range(m))


def fan_from_complex(sigma: SimplicialComplex) -> Fan:
    """The fan {pos(e_i : i in I) : I in sigma} in R^m."""
    labels = complex_ray_labels(sigma)
    index = {lab: k for k, lab in enumerate(labels)}
    rays = [basis_vector(lab, sigma.m) for lab in labels]
    cones = [frozenset(index[i] for i in f) for f in sigma.faces]
    return Fan(sigma.m, rays, cones)


def elementary_divisors(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal of the Smith normal form of an integer matrix."""
    A = [list(map(int, r)) for r in rows]
    m = len(A)
    n = len(A[0]) if A else 0
    divs = []
    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            for i in range(t + 1, m):
                q = A[i][t] // p
                if q:
                    A[i] = [x - q * y for x, y in zip(A[i], A[t])]
            for j in range(t + 1, n):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]] + \
                   [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                A[t], A[i] = A[i], A[t]
                for row in A:
                    row[t], row[j] = row[j], row[t]
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % p), None)
            if bad is None:
                break
            A[t] = [x + y for x, y in zip(A[t], A[bad[0]])]
        divs.append(abs(A[t][t]))
        t += 1
    return divs


def is_nonsingular(F: Fan) -> bool:
    """Every cone's generators extend to a Z-basis (all elementary divisors 1)."""
    for c in F.maximal_cones:
        if not c:
            continue
        gens = [F.rays[i] for i in sorted(c)]
        divs = elementary_divisors(gens)
        if len(divs) < len(gens) or any(d != 1 for d in divs):
            return False
    return True


def faces_of(cone, F: Fan | None = None) -> list:
    """All faces of a simplicial cone: every subset of its rays."""
    cone = frozenset(cone)
    if F is not None and cone not in F.cones:
        raise ValueError(f"{sorted(cone)} is not a cone of the fan")
    items = sorted(cone)
    return [frozenset(s) for k in range(len(items) + 1) for s in combinations(items, k)]


class NotAFanError(Exception):
    """The projected cones do not form a fan.

    ``kind`` is ``"line"`` (an image contains a line), ``"collision"`` (two
    cones have the same image) or ``"overlap"`` (two images meet outside
    their common face); ``cones`` holds the witnessing cones of the source fan.
    """

    def __init__(self, kind: str, cones: tuple, detail: str = ""):
        self.kind = kind
        self.cones = tuple(frozenset(c) for c in cones)
        self.detail = detail
        shown = ", ".join(str(sorted(c)) for c in self.cones)
        super().__init__(f"{kind}: {shown}" + (f" ({detail})" if detail else ""))


def _contains_line(gens: list) -> bool:
    """Whether pos(gens) contains a line: some convex combination is zero."""
    k = len(gens)
    n = len(gens[0]) if gens else 0
    cons = [Constraint([g[d] for g in gens], EQ, 0) for d in range(n)]
    cons.append(Constraint([1] * k, EQ, 1))
    cons += [Constraint([int(i == j) for j in range(k)], GE, 0) for i in range(k)]
    return solve(LPProblem(k, cons, [0] * k)).status == OPTIMAL


def _overlap_beyond_common(gs: list, gt: list, only_s: list) -> bool:
    """pos(gs) and pos(gt) share a point using a generator outside the common face."""
    ks, kt = len(gs), len(gt)
    nv = ks + kt
    n = len(gs[0])
    cons = [Constraint([g[d] for g in gs] + [-g[d] for g in gt], EQ, 0) for d in range(n)]
    cons.append(Constraint([int(i in only_s) for i in range(ks)] + [0] * kt, EQ, 1))
    cons += [Constraint([int(i == j) for j in range(nv)], GE, 0) for i in range(nv)]
    return solve(LPProblem(nv, cons, [0] * nv)).status == OPTIMAL


def projected_rays(F: Fan, q: RatMatrix) -> list[tuple]:
    return [q @ r for r in F.rays]


def project_fan(F: Fan, q: RatMatrix) -> Fan:
    """Image fan {q(sigma)}; raises :class:`NotAFanError` with a witness.

    Every image must be a strongly convex simplicial cone of the same
    dimension as its source (so ray images stay distinct and cone identity is
    preserved), and images of maximal cones must meet in images of common
    faces. Rays of the result are the primitive integer vectors along q(ray),
    indexed like the source rays. A zero-dimensional target gives the fan {0}.
    """
    n = q.nrows
    if q.ncols != F.ambient_dim:
        raise ValueError(f"quotient map has {q.ncols} columns, fan lives in "
                         f"R^{F.ambient_dim}")
    if rank(q) != n:
        raise ValueError("quotient map does not have full row rank")
    if n == 0:
        return Fan(0, (), {frozenset()})
    images = projected_rays(F, q)
    for i, g in enumerate(images):
        if all(x == 0 for x in g):
            raise NotAFanError("collision", (frozenset(), {i}),
                               f"ray {i} is mapped to zero")
    maximal = F.maximal_cones
    for c in maximal:
        gens = [images[i] for i in sorted(c)]
        if _contains_line(gens):
            raise NotAFanError("line", (c,), "image contains a line")
        if rank(RatMatrix(gens, ncols=n)) < len(gens):
            order = sorted(c)
            rel = _relation(gens)
            pos = {order[k] for k, x in enumerate(rel) if x > 0}
            neg = {order[k] for k, x in enumerate(rel) if x < 0}
            raise NotAFanError("overlap", (pos, neg),
                               "images of two disjoint faces share a nonzero point")
    for a, b in combinations(maximal, 2):
        sa, sb = sorted(a), sorted(b)
        only_a = [k for k, i in enumerate(sa) if i not in b]
        if _overlap_beyond_common([images[i] for i in sa], [images[i] for i in sb], only_a):
            same = {primitive_integer_vector(images[i]) for i in a} == \
                   {primitive_integer_vector(images[i]) for i in b}
            raise NotAFanError("collision" if same else "overlap", (a, b),
                               "images meet outside the image of their common face")
    rays = [primitive_integer_vector(g) for g in images]
    return Fan(n, rays, F.cones)


def _relation(gens: list) -> tuple:
    k = len(gens)
    M = RatMatrix([[g[d] for g in gens] for d in range(len(gens[0]))], ncols=k)
    return kernel_basis(M)[0]


def _random_points(n: int, count: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    pts = []
    while len(pts) < count:
        p = tuple(Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 1000)) for _ in range(n))
        if any(p):
            pts.append(p)
    return pts


def point_in_cone(F: Fan, cone, x, inv: RatMatrix | None = None) -> bool:
    """Exact membership of x in a full-dimensional simplicial cone."""
    if inv is None:
        inv = inverse(F.generators(cone).T)
    return all(c >= 0 for c in inv @ vec(x))


def uncovered_points(F: Fan, samples: int = 64, seed: int = 0) -> list[tuple]:
    """Pseudo-random rational points lying in no maximal cone of ``F``."""
    n = F.ambient_dim
    if n == 0:
        return []
    full = [c for c in F.maximal_cones if len(c) == n and F.cone_dim(c) == n]
    invs = [inverse(F.generators(c).T) for c in full]
    return [p for p in _random_points(n, samples, seed)
            if not any(all(x >= 0 for x in inv @ p) for inv in invs)]


def walls(F: Fan) -> Counter:
    """Codimension-one faces of maximal cones with their multiplicities."""
    n = F.ambient_dim
    count = Counter()
    for c in F.maximal_cones:
        for w in combinations(sorted(c), n - 1):
            count[frozenset(w)] += 1
    return count


def _wall_connected(F: Fan) -> bool:
    maximal = F.maximal_cones
    if not maximal:
        return True
    by_wall = {}
    for k, c in enumerate(maximal):
        for w in combinations(sorted(c), F.ambient_dim - 1):
            by_wall.setdefault(frozenset(w), []).append(k)
    seen = {0}
    todo = deque([0])
    while todo:
        k = todo.popleft()
        for w in combinations(sorted(maximal[k]), F.ambient_dim - 1):
            for j in by_wall[frozenset(w)]:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
    return len(seen) == len(maximal)


def is_complete(F: Fan, samples: int = 64, seed: int = 0) -> bool:
    """Whether the support of a (valid, simplicial) fan is all of R^n.

    Decided by the wall criterion: pure of dimension n, every wall in exactly
    two maximal cones, maximal cones connected through walls. A positive
    answer is cross-checked against random rational points.
    """
    n = F.ambient_dim
    if n == 0:
        return True
    maximal = F.maximal_cones
    if any(len(c) != n or F.cone_dim(c) != n for c in maximal):
        return False
    if any(k != 2 for k in walls(F).values()):
        return False
    if not _wall_connected(F):
        return False
    missed = uncovered_points(F, samples, seed)
    if missed:
        raise AssertionError(f"wall criterion says complete but {missed[0]} is uncovered")
    return True
