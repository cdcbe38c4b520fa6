"""Slice points, lifts, representation formulas, spherical operators, products, zeros."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import hyperslice.algebra as alg
import hyperslice.slicefun as sf
import hyperslice.stem as stm
from hyperslice.algebra import OCTONION, basis, element, one
from hyperslice.complexified import ComplexifiedElement

TAG = OCTONION
E0, E1, E2, E3 = one(TAG), basis(TAG, 1), basis(TAG, 2), basis(TAG, 3)


def _unit(vec):
    return alg.unit_from_vector(TAG, vec)


# --- points -------------------------------------------------------------------


def test_slice_point_canonicalization_same_point():
    J = _unit([1.0, 1.0, 0, 0, 0, 0, 0])
    a = sf.slice_point([0.5], [2.0], J)
    b = sf.slice_point([0.5], [-2.0], -J)
    assert np.allclose(a.alpha, b.alpha) and np.allclose(a.beta, b.beta)
    assert (a.j.value - b.j.value).norm() == 0.0
    np.testing.assert_allclose(a.components()[0].coeffs, b.components()[0].coeffs)


def test_decompose_point_two_variables():
    J = _unit([0.0, 3.0, 4.0, 0, 0, 0, 0])
    x1 = 0.5 * E0 + alg.multiply(alg.scalar(TAG, 2.0), J.value)
    x2 = -1.0 * E0 + alg.multiply(alg.scalar(TAG, -0.25), J.value)
    p = sf.decompose_point([x1, x2])
    assert not p.is_real
    np.testing.assert_allclose(p.alpha, [0.5, -1.0])
    # beta J must reassemble the imaginary parts exactly
    for l, x in enumerate((x1, x2)):
        im = x - alg.scalar(TAG, x.real)
        np.testing.assert_allclose((p.j.value * p.beta[l]).coeffs, im.coeffs, atol=1e-14)


def test_decompose_point_real_tuple():
    p = sf.decompose_point([alg.scalar(TAG, 1.5), alg.scalar(TAG, -2.0)])
    assert p.is_real
    np.testing.assert_allclose(p.alpha, [1.5, -2.0])


def test_decompose_point_rejects_non_coplanar():
    x1 = 0.5 * E0 + E1
    x2 = -1.0 * E0 + E2
    with pytest.raises(sf.NotInSliceConeError):
        sf.decompose_point([x1, x2])


def test_point_json_round_trip():
    J = _unit([0.6, 0.8, 0, 0, 0, 0, 0])
    p = sf.slice_point([0.1, -0.9], [1.0, 2.0], J)
    blob = sf.slice_point_to_json(p)
    q = sf.slice_point_from_json(blob)
    np.testing.assert_allclose(q.alpha, p.alpha)
    np.testing.assert_allclose(q.beta, p.beta)
    np.testing.assert_allclose(q.j.coeffs, p.j.coeffs)


# --- lift and representation ----------------------------------------------


def test_lift_evaluate_one_variable_by_hand():
    # f(x) = x^2 at x = 1 + 2 e1: (1 + 2e1)^2 = 1 + 4 e1 - 4
    p = stm.stem_polynomial(TAG, 1, {(2,): E0})
    f = sf.lift(p)
    x = sf.slice_point([1.0], [2.0], _unit([1, 0, 0, 0, 0, 0, 0]))
    expected = alg.multiply(E0 + 2.0 * E1, E0 + 2.0 * E1)
    assert (f(x) - expected).norm() <= 1e-14
    np.testing.assert_allclose(expected.coeffs, (-3.0 * E0 + 4.0 * E1).coeffs)


def test_lift_well_defined_under_flip():
    p = stm.stem_polynomial(TAG, 2, {(1, 2): E3, (2, 0): E1})
    f = sf.lift(p)
    J = _unit([0.2, -0.4, 0.7, 0, 0, 0.5, 0])
    a = sf.slice_point([0.3, -0.1], [0.8, 0.5], J)
    b = sf.slice_point([0.3, -0.1], [-0.8, -0.5], -J)
    assert (f(a) - f(b)).norm() <= 1e-15


def test_lift_rejects_non_intrinsic_stem():
    broken = stm.StemFunction(
        arity=1,
        tag=TAG,
        evaluator=lambda z: ComplexifiedElement(E0 * float(np.imag(z[0])), alg.zero(TAG)),
    )
    with pytest.raises(sf.IntrinsicityError):
        sf.lift(broken)


def test_real_point_evaluation_uses_even_part():
    p = stm.stem_polynomial(TAG, 1, {(1,): E1, (0,): E0})
    f = sf.lift(p)
    x = sf.slice_point([0.75], [0.0], _unit([1, 0, 0, 0, 0, 0, 0]))
    assert x.is_real
    assert (f(x) - (E0 + 0.75 * E1)).norm() <= 1e-15


@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_representation_recovers_values(seed):
    rng = np.random.default_rng(seed)
    p = stm.stem_polynomial(
        TAG,
        2,
        {
            (1, 0): element(TAG, rng.standard_normal(8)),
            (0, 2): element(TAG, rng.standard_normal(8)),
            (2, 1): element(TAG, rng.standard_normal(8)),
        },
    )
    f = sf.lift(p)
    I, J, K = (alg.sample_unit_imaginary(TAG, rng) for _ in range(3))
    if (J.value - K.value).norm() < 0.15:
        return
    alpha = rng.uniform(-1, 1, 2)
    beta = rng.uniform(-1, 1, 2)
    fJ = f(sf.slice_point(alpha, beta, J))
    fK = f(sf.slice_point(alpha, beta, K))
    rep = sf.representation(fJ, fK, I, J, K)
    direct = f(sf.slice_point(alpha, beta, I))
    assert (rep - direct).norm() <= 1e-11


def test_representation_degenerate_units_raise():
    J = _unit([1, 0, 0, 0, 0, 0, 0])
    with pytest.raises(sf.DegenerateUnitsError):
        sf.representation(E0, E0, J, J, J)


def test_symmetric_formula_agrees_with_general():
    rng = np.random.default_rng(21)
    p = stm.stem_polynomial(TAG, 1, {(3,): E1, (1,): E0})
    f = sf.lift(p)
    for _ in range(25):
        I, J = (alg.sample_unit_imaginary(TAG, rng) for _ in range(2))
        alpha, beta = rng.uniform(-1, 1, 1), rng.uniform(0.2, 1, 1)
        fJ = f(sf.slice_point(alpha, beta, J))
        fmJ = f(sf.slice_point(alpha, beta, -J))
        g = sf.representation(fJ, fmJ, I, J, -J)
        s = sf.representation_symmetric(fJ, fmJ, I, J)
        assert (g - s).norm() <= 1e-13


# --- spherical operators -------------------------------------------------


def test_spherical_identity_and_constancy():
    rng = np.random.default_rng(17)
    p = stm.stem_polynomial(TAG, 2, {(2, 1): E3, (0, 1): E0})
    f = sf.lift(p)
    x = sf.slice_point([0.4, -0.2], [0.5, 0.9], alg.sample_unit_imaginary(TAG, rng))
    value, deriv = sf.spherical(f, x)
    recon = value + alg.multiply(sf.imaginary_element(x), deriv)
    assert (recon - f(x)).norm() <= 1e-14
    # definitional check at another unit of the same sphere
    I = alg.sample_unit_imaginary(TAG, rng)
    y = sf.slice_point(x.alpha, x.beta, I)
    yb = sf.slice_point(x.alpha, -x.beta, I)
    v2 = (f(y) + f(yb)) * 0.5
    d2 = alg.multiply(I.value * (-0.5 / float(np.linalg.norm(x.beta))), f(y) - f(yb))
    assert (v2 - value).norm() <= 1e-14
    assert (d2 - deriv).norm() <= 1e-14


def test_spherical_derivative_real_point_raises():
    f = sf.lift(stm.coordinate(TAG, 1, 0))
    x = sf.slice_point([0.3], [0.0], _unit([1, 0, 0, 0, 0, 0, 0]))
    with pytest.raises(sf.RealPointError):
        sf.spherical_derivative(f, x)
    assert (sf.spherical_value(f, x) - 0.3 * E0).norm() <= 1e-15


# --- products ---------------------------------------------------------------


def test_star_product_matches_slice_product_on_slices():
    rng = np.random.default_rng(33)
    p = stm.stem_polynomial(TAG, 1, {(1,): E1, (0,): E0})
    q = stm.stem_polynomial(TAG, 1, {(2,): E2, (1,): E3})
    f, g = sf.lift(p), sf.lift(q)
    star = sf.lift(sf.star_product(p, q))
    prod = sf.slice_product(f, g)
    for _ in range(50):
        x = sf.slice_point(rng.uniform(-1, 1, 1), rng.uniform(0.1, 1, 1), alg.sample_unit_imaginary(TAG, rng))
        assert (star(x) - prod(x)).norm() <= 1e-13


def test_product_with_real_stem_is_pointwise():
    rng = np.random.default_rng(34)
    realp = stm.stem_polynomial(TAG, 1, {(2,): alg.scalar(TAG, 1.5), (0,): alg.scalar(TAG, -0.5)})
    q = stm.stem_polynomial(TAG, 1, {(1,): E2})
    f, g = sf.lift(realp), sf.lift(q)
    prod = sf.slice_product(f, g)
    assert sf.is_real_slice(f)
    assert not sf.is_real_slice(g)
    for _ in range(20):
        x = sf.slice_point(rng.uniform(-1, 1, 1), rng.uniform(0.1, 1, 1), alg.sample_unit_imaginary(TAG, rng))
        assert (prod(x) - alg.multiply(f(x), g(x))).norm() <= 1e-13


def test_product_not_pointwise_in_general():
    f = sf.lift(stm.constant_poly(TAG, 1, E1))
    g = sf.lift(stm.monomial(TAG, 1, (1,), E2))
    prod = sf.slice_product(f, g)
    x = sf.slice_point([0.3], [0.7], _unit([0, 0, 1.0, 0, 0, 0, 0]))
    gap = (prod(x) - alg.multiply(f(x), g(x))).norm()
    assert gap > 1.0  # 2 * beta exactly, here 1.4


def test_leibniz_for_spherical_derivative():
    rng = np.random.default_rng(35)
    p = stm.stem_polynomial(TAG, 1, {(2,): E1, (1,): E0})
    q = stm.stem_polynomial(TAG, 1, {(1,): E3, (0,): E2})
    f, g = sf.lift(p), sf.lift(q)
    prod = sf.slice_product(f, g)
    for _ in range(20):
        x = sf.slice_point(rng.uniform(-1, 1, 1), rng.uniform(0.2, 1, 1), alg.sample_unit_imaginary(TAG, rng))
        vf, df = sf.spherical(f, x)
        vg, dg = sf.spherical(g, x)
        lhs = sf.spherical_derivative(prod, x)
        rhs = alg.multiply(df, vg) + alg.multiply(vf, dg)
        assert (lhs - rhs).norm() <= 1e-12


# --- regularity --------------------------------------------------------------


def test_polynomials_are_slice_regular():
    rng = np.random.default_rng(40)
    p = stm.stem_polynomial(TAG, 2, {(2, 1): element(TAG, rng.standard_normal(8)), (1, 0): E1})
    rep = sf.check_slice_regular(sf.lift(p), tol=1e-8)
    assert rep.passed


def test_antiholomorphic_residual_is_two_norms():
    a = element(TAG, [0.5, -1.0, 0, 0.25, 0, 0, 2.0, 0])
    F = stm.StemFunction(
        arity=1,
        tag=TAG,
        evaluator=lambda z: ComplexifiedElement(
            a * float(np.real(z[0])), a * (-float(np.imag(z[0])))
        ),
    )
    rep = sf.check_slice_regular(sf.SliceFunction(stem=F))
    assert not rep.passed
    assert abs(rep.max_residual - 2.0 * a.norm()) <= 1e-6


def test_restrict_slice_polynomial():
    p = stm.stem_polynomial(TAG, 2, {(1, 2): E1, (0, 1): E0})
    f = sf.lift(p)
    r = sf.restrict_slice(f, 0, [0.0, 0.5])
    assert r.poly is not None and r.arity == 1
    J = _unit([0, 1.0, 0, 0, 0, 0, 0])
    x1 = sf.slice_point([0.3], [0.4], J)
    full = f(sf.slice_point([0.3, 0.5], [0.4, 0.0], J))
    assert (r(x1) - full).norm() <= 1e-13
    with pytest.raises(sf.NonIntrinsicRestrictionError):
        sf.restrict_slice(f, 0, [0.0, 0.5 + 1.0j])


# --- zero sets on spheres ------------------------------------------------


def test_zero_classification_fixed_cases():
    J = _unit([0.0, 0.6, 0.8, 0, 0, 0, 0])
    f_sphere = sf.lift(stm.stem_polynomial(TAG, 1, {(2,): E0, (0,): E0}))
    r = sf.classify_sphere_zeros(f_sphere, sf.slice_point([0.0], [1.0], J))
    assert r.kind == sf.ZeroKind.SPHERICAL

    f_point = sf.lift(stm.stem_polynomial(TAG, 1, {(1,): E0, (0,): -2.0 * E1}))
    r = sf.classify_sphere_zeros(f_point, sf.slice_point([0.0], [2.0], J))
    assert r.kind == sf.ZeroKind.POINT
    np.testing.assert_allclose(r.point.components()[0].coeffs, (2.0 * E1).coeffs, atol=1e-12)
    assert (sf.lift_evaluate(f_point, r.point)).norm() <= 1e-12

    f_empty = sf.lift(stm.constant_poly(TAG, 1, 3.0 * E0 + E1))
    r = sf.classify_sphere_zeros(f_empty, sf.slice_point([0.2], [0.7], J))
    assert r.kind == sf.ZeroKind.EMPTY

    f_real = sf.lift(stm.coordinate(TAG, 1, 0))
    r = sf.classify_sphere_zeros(f_real, sf.slice_point([0.0], [0.0], J))
    assert r.kind == sf.ZeroKind.REAL_ZERO


def test_zero_empty_odd_only():
    # F1 = 0 but F2 nonzero forces the empty verdict through the candidate path
    f = sf.lift(stm.coordinate(TAG, 1, 0))
    J = _unit([1.0, 0, 0, 0, 0, 0, 0])
    r = sf.classify_sphere_zeros(f, sf.slice_point([0.0], [1.0], J))
    assert r.kind == sf.ZeroKind.EMPTY


def test_zero_classification_against_minimizer():
    # scipy searches the sphere for min |f|; classification must agree
    from scipy.optimize import minimize

    rng = np.random.default_rng(77)
    units0 = alg.sample_unit_imaginaries(TAG, 256, rng)

    def sphere_min(f, x):
        def objective(v):
            nrm = np.linalg.norm(v)
            row = np.zeros(8)
            row[1:] = v / nrm
            return np.linalg.norm(sf.sphere_values(f, x, row[None, :])[0])

        best = np.inf
        vals = np.linalg.norm(sf.sphere_values(f, x, units0), axis=1)
        for idx in np.argsort(vals)[:4]:
            res = minimize(objective, units0[idx][1:], method="Nelder-Mead",
                           options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000})
            best = min(best, res.fun)
        return best

    for trial in range(12):
        terms = {
            (d,): element(TAG, rng.standard_normal(8))
            for d in range(int(rng.integers(1, 4)) + 1)
        }
        f = sf.lift(stm.stem_polynomial(TAG, 1, terms))
        x = sf.slice_point(rng.uniform(-1, 1, 1), [float(rng.uniform(0.2, 1.2))],
                           alg.sample_unit_imaginary(TAG, rng))
        res = sf.classify_sphere_zeros(f, x)
        lo = sphere_min(f, x)
        if res.kind == sf.ZeroKind.EMPTY:
            assert lo > 1e-8, f"trial {trial}: classifier says empty, minimizer found {lo:.2e}"
        elif res.kind == sf.ZeroKind.POINT:
            assert lo <= 1e-7
            assert sf.lift_evaluate(f, res.point).norm() <= 1e-7
        elif res.kind == sf.ZeroKind.SPHERICAL:
            assert lo <= 1e-7

    # engineered point zero: (z - p) with p = 1.3 e2 on the matching sphere
    p_el = 1.3 * E2
    f = sf.lift(stm.stem_polynomial(TAG, 1, {(1,): E0, (0,): -p_el}))
    x = sf.slice_point([0.0], [1.3], alg.sample_unit_imaginary(TAG, rng))
    res = sf.classify_sphere_zeros(f, x)
    assert res.kind == sf.ZeroKind.POINT
    assert sphere_min(f, x) <= 1e-8
    np.testing.assert_allclose(res.point.components()[0].coeffs, p_el.coeffs, atol=1e-12)


def test_zero_classification_scan_agreement_bulk():
    rng = np.random.default_rng(55)
    units = alg.sample_unit_imaginaries(TAG, 10_000, rng)
    from hyperslice.suites import _scan_consistent

    for _ in range(50):
        terms = {
            (d,): element(TAG, rng.standard_normal(8)) for d in range(int(rng.integers(1, 4)) + 1)
        }
        f = sf.lift(stm.stem_polynomial(TAG, 1, terms))
        x = sf.slice_point(rng.uniform(-1, 1, 1), [float(rng.uniform(0.1, 1.5))],
                           alg.sample_unit_imaginary(TAG, rng))
        res = sf.classify_sphere_zeros(f, x)
        assert _scan_consistent(f, x, res, units)
