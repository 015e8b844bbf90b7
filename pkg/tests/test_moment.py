import math
from fractions import Fraction

import numpy as np
import pytest

from lvmb.arith import I, GaussianRational, RatMatrix
from lvmb.cli import builtin_example
from lvmb.fans import SimplicialComplex, complex_from_maximal
from lvmb.lp import certificate_errors
from lvmb.moment import (LVM, LVMB_NOT_LVM, NOT_LVMB, LVMBData, MomentModel, beta, check_lvmb,
                         classify, g_J, lifted_moment, lifted_moment_exact, moment_map,
                         point_from_alpha, quotient_map, relint_cone, sample_ZP,
                         verify_convexity, vertex_levels)
from lvmb.polytopes import contains, is_normal_to, min_face


def load(name):
    return LVMBData.from_json(builtin_example(name))


def ce_data():
    return LVMBData(4, [[1, 1, I, I]], sigma=complex_from_maximal(4, [[1, 3], [1, 4], [2, 3], [2, 4]]))


def test_g_J_examples():
    assert g_J(ce_data()) == RatMatrix([[1, 1, 0, 0], [0, 0, 1, 1]])
    assert g_J(load("projective-space-2")).nrows == 0
    full = LVMBData(2, [[1, 0], [0, 1]], sigma=complex_from_maximal(2, [[1], [2]]))
    assert g_J(full) == RatMatrix.identity(2)


def test_quotient_kills_g_J():
    pH = g_J(ce_data())
    q = quotient_map(pH, 4)
    assert q.nrows == 2
    assert all(v == 0 for row in pH.rows for v in q @ row)


def test_check_calabi_eckmann():
    rep = check_lvmb(ce_data())
    assert rep.condition1 and rep.condition2 and rep.ok


def test_check_non_injective():
    rep = check_lvmb(load("bad-h"))
    assert not rep.condition1
    w = rep.kernel_witness
    assert any(z != 0 for z in w) and all(z.re == 0 for z in w)


def test_check_incomplete():
    data = LVMBData(2, [], sigma=complex_from_maximal(2, [[1], [2]]))
    rep = check_lvmb(data)
    assert rep.condition1 and not rep.condition2
    assert rep.uncovered_point is not None


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_projective_space_is_lvm(m):
    rep = classify(load(f"projective-space-{m}"))
    assert rep.verdict == LVM
    assert len(rep.vertices) == m + 1
    assert is_normal_to(rep.polytope, rep.quotient_fan)


def test_calabi_eckmann_is_lvm_square():
    rep = classify(ce_data())
    assert rep.verdict == LVM
    assert len(rep.vertices) == 4 and len(rep.polytope.normals) == 4


def test_hopf_is_lvm_point():
    rep = classify(load("hopf"))
    assert rep.verdict == LVM
    assert rep.polytope.dim == 0 and rep.vertex_list() == [()]
    assert rep.lvmb.dim_pH == 2


def test_nonpolytopal_fixture():
    rep = classify(load("nonpolytopal-fan"))
    assert rep.verdict == LVMB_NOT_LVM
    assert rep.support.t == 0
    assert not certificate_errors(rep.support.farkas_problem, rep.support.farkas)
    assert not rep.lvmb.nonsingular and not rep.lvmb.nonsingular_required


def test_empty_complex_and_empty_h():
    for m in (1, 2, 3):
        rep = classify(LVMBData(m, [], sigma=SimplicialComplex(m, {frozenset()})))
        assert rep.verdict == NOT_LVMB and not rep.lvmb.condition2


def test_moment_map_examples():
    assert np.allclose(moment_map([0, 0]), [0, 0])
    assert np.allclose(moment_map([1, 0, 0]), [math.pi, 0, 0])
    assert np.allclose(moment_map([1 + 1j, 0]), [2 * math.pi, 0])


def test_beta_examples():
    rep = classify(ce_data())
    quot = rep.lvmb.quotient
    assert beta(quot, [-1, -1, -1, -1]) == (2, 2)
    assert beta(quot, [0] * 4) == (0, 0)
    assert beta(classify(load("projective-space-2")).lvmb.quotient, [0, 0, 0]) == (0,)


def test_cp2_vertex_sample():
    model = MomentModel.from_report(classify(load("projective-space-2")))
    # shift so that a = (0, 0, -1) and the vertex (0, 0) is the cone {1, 2}
    c = tuple(-x for x in model.verts[frozenset({0, 1})])
    model = MomentModel.from_report(model.report, shift=c)
    assert model.a == (0, 0, -1)
    pt = point_from_alpha(model, (0, 0))
    assert tuple(pt.zero_pattern) == (1, 2) or pt.zero_pattern == {1, 2}
    assert np.allclose(pt.r, [0, 0, 1])


@pytest.mark.parametrize("name", ["projective-space-2", "calabi-eckmann", "hopf"])
def test_samples_lie_on_level_set(name):
    model = MomentModel.from_report(classify(load(name)))
    pts = sample_ZP(model, 200, seed=3)
    b = np.array([float(x) for x in model.beta()])
    K = np.array([[float(x) for x in r] for r in model.quot.K.rows]).reshape(-1, model.quot.k)
    for p in pts:
        assert model.is_face(p.zero_pattern)
        assert np.max(np.abs(K @ p.r - b), initial=0) < 1e-9
        alpha, res = lifted_moment(model, p.r)
        assert res[0] < 1e-9
        assert np.allclose(alpha[0], p.alpha, atol=1e-9)
        assert contains(model.P, alpha[0], tol=1e-9)


def test_hopf_samples_share_levels():
    model = MomentModel.from_report(classify(load("hopf")))
    pts = sample_ZP(model, 20, seed=1)
    assert all(np.allclose(p.r, pts[0].r) for p in pts)
    assert len({round(float(np.angle(p.z[0])), 6) for p in pts}) > 1


def test_sampling_is_seeded():
    model = MomentModel.from_report(classify(ce_data()))
    a = sample_ZP(model, 10, seed=7)
    b = sample_ZP(model, 10, seed=7)
    assert all(np.array_equal(x.z, y.z) for x, y in zip(a, b))


def test_vertex_images_are_exact():
    rep = classify(ce_data())
    model = MomentModel.from_report(rep)
    for cone, v in model.verts.items():
        r = vertex_levels(model, cone)
        alpha, resid = lifted_moment_exact(model, r)
        assert alpha == v and not any(resid)


def test_relint_cone():
    rep = classify(ce_data())
    F = rep.quotient_fan
    e = F.rays.index((1, 0))
    assert relint_cone(F, (1, 0)) == {e}
    assert relint_cone(F, (0, 0)) == frozenset()
    assert len(relint_cone(F, (1, 1))) == 2


@pytest.mark.parametrize("name", ["projective-space-2", "projective-space-3", "calabi-eckmann", "hopf"])
def test_harness_passes(name):
    h = verify_convexity(classify(load(name)), samples=300, seed=0)
    assert h.passed, h.to_json()


def test_harness_translation():
    rep = classify(ce_data())
    c = (Fraction(1, 3), Fraction(-2))
    h = verify_convexity(rep, samples=100, seed=2, shift=c)
    assert h.passed
    base = MomentModel.from_report(rep)
    moved = MomentModel.from_report(rep, shift=c)
    for cone in base.verts:
        a0, _ = lifted_moment_exact(base, vertex_levels(base, cone))
        a1, _ = lifted_moment_exact(moved, vertex_levels(moved, cone))
        assert tuple(x + y for x, y in zip(a0, c)) == a1


def test_calabi_eckmann_direction_e1():
    rep = classify(ce_data())
    model = MomentModel.from_report(rep)
    qv = model.quot.Q @ (1, 0, 0, 0)
    # quotient coordinates are the non-pivot columns, so q(e_1) = -e_1 here
    assert qv == (-1, 0)
    f = min_face(rep.polytope, qv)
    assert f.dim == 1
    assert [rep.polytope.normals[i] for i in f.tight_set] == [qv]
    pts = sample_ZP(model, 200, seed=0)
    lifted, _ = lifted_moment(model, [p.r for p in pts])
    exact_min = min(sum(x * y for x, y in zip(v, qv)) for v in model.verts.values())
    assert np.min(lifted @ np.array([float(x) for x in qv])) >= float(exact_min) - 1e-9


def test_relabeling_keeps_verdict():
    data = ce_data()
    perm = {1: 3, 2: 4, 3: 1, 4: 2}
    sigma = complex_from_maximal(4, [[perm[i] for i in f] for f in data.sigma.maximal_faces])
    h = [[None] * 4]
    for i, z in enumerate(data.h_basis[0], start=1):
        h[0][perm[i] - 1] = z
    assert classify(LVMBData(4, h, sigma=sigma)).verdict == LVM


def test_data_json_round_trip():
    data = ce_data()
    assert LVMBData.from_json(data.to_json()) == data
    with pytest.raises(ValueError):
        LVMBData.from_json({"m": 2})
    with pytest.raises(ValueError):
        LVMBData(2, [[1, 2, 3]], sigma=complex_from_maximal(2, [[1]]))


def test_gaussian_input():
    z = GaussianRational.from_json({"re": "1/2", "im": "-3"})
    assert z == GaussianRational(Fraction(1, 2), -3)
