"""Slice functions induced by stem functions on the slice cone.

A point of the slice cone is an n-tuple x = alpha + beta J whose components
share one imaginary unit J.  The lift of an intrinsic stem F = F1 + i F2 is

    f(alpha + beta J) = F1(z) + J F2(z),        z = alpha + i beta,

well defined because (beta, J) and (-beta, -J) describe the same point and the
even-odd symmetry of F compensates the flip.  This module holds the point
decomposition, the lift, representation formulas, spherical value and
derivative, slice and star products, reality and regularity checks, per-sphere
zero classification, and one-variable restrictions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .algebra import (
    AlgebraElement,
    AlgebraMismatchError,
    AlgebraTag,
    ImaginaryUnit,
    basis,
    canonicalize_unit,
    element,
    inverse,
    left_mult_matrix,
    multiply,
    multiply_batch,
    parse_algebra,
    sample_unit_imaginary,
    unit_from_vector,
)
from .stem import (
    StemFunction,
    StemPolynomial,
    check_intrinsic,
    evaluate_stem,
    is_holomorphic,
    poly_product,
    restrict_stem,
    stem_product,
)

__all__ = [
    "NotInSliceConeError",
    "DegenerateUnitsError",
    "RealPointError",
    "NonIntrinsicRestrictionError",
    "IntrinsicityError",
    "SlicePoint",
    "slice_point",
    "point_from_z",
    "decompose_point",
    "slice_point_to_json",
    "slice_point_from_json",
    "SliceFunction",
    "lift",
    "lift_evaluate",
    "sphere_values",
    "representation",
    "representation_symmetric",
    "SphericalData",
    "spherical",
    "spherical_value",
    "spherical_derivative",
    "imaginary_element",
    "slice_product",
    "star_product",
    "is_real_slice",
    "RegularityReport",
    "check_slice_regular",
    "ZeroKind",
    "SphereZeroResult",
    "classify_sphere_zeros",
    "restrict_slice",
]


class NotInSliceConeError(ValueError):
    """Imaginary parts of the tuple are not parallel to a common unit."""


class DegenerateUnitsError(ValueError):
    """J - K is numerically non-invertible in a representation formula."""


class RealPointError(ValueError):
    """Spherical derivative requested at a real point."""


class NonIntrinsicRestrictionError(ValueError):
    """Restriction anchors break conjugation symmetry."""


class IntrinsicityError(ValueError):
    """Stem fails the intrinsicity requirement of the lift."""


PARALLEL_RTOL = 1e-10


# ---------------------------------------------------------------------------
# slice points


@dataclass(frozen=True, eq=False)
class SlicePoint:
    """Canonicalized point alpha + beta J of the slice cone.

    Invariants: alpha, beta real vectors of equal length; if is_real then
    beta = 0; otherwise j is sign-canonical (first coefficient above the
    noise threshold is positive).
    """

    alpha: np.ndarray
    beta: np.ndarray
    j: ImaginaryUnit
    is_real: bool

    def __post_init__(self) -> None:
        a = np.asarray(self.alpha, dtype=np.float64)
        b = np.asarray(self.beta, dtype=np.float64)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("alpha and beta must be 1-d arrays of equal length")
        a = a.copy()
        b = b.copy()
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def arity(self) -> int:
        return self.alpha.shape[0]

    @property
    def tag(self) -> AlgebraTag:
        return self.j.tag

    @property
    def z(self) -> np.ndarray:
        return self.alpha + 1j * self.beta

    def components(self) -> list[AlgebraElement]:
        jc = self.j.coeffs
        out = []
        for k in range(self.arity):
            c = jc * self.beta[k]
            c = c.copy()
            c[0] += self.alpha[k]
            out.append(element(self.tag, c))
        return out

    def conjugated(self) -> "SlicePoint":
        return SlicePoint(self.alpha, -self.beta, self.j, self.is_real)

    def __repr__(self) -> str:
        return f"<SlicePoint alpha={self.alpha} beta={self.beta} j={self.j.coeffs[1:]}>"


def slice_point(alpha, beta, j: ImaginaryUnit) -> SlicePoint:
    """Canonicalizing constructor; (beta, J) and (-beta, -J) map to the same point."""
    a = np.atleast_1d(np.asarray(alpha, dtype=np.float64))
    b = np.atleast_1d(np.asarray(beta, dtype=np.float64))
    jc, sign = canonicalize_unit(j)
    real = bool(np.all(b == 0.0))
    return SlicePoint(a, b * sign if not real else np.zeros_like(b), jc, real)


def point_from_z(z, j: ImaginaryUnit) -> SlicePoint:
    z = np.atleast_1d(np.asarray(z, dtype=np.complex128))
    return slice_point(z.real, z.imag, j)


def decompose_point(xs: Sequence[AlgebraElement]) -> SlicePoint:
    """Split a tuple into (alpha, beta, J) or raise NotInSliceConeError.

    The parallelism test is relative to the largest imaginary magnitude, so
    float-level noise in computed tuples still decomposes.
    """
    if not xs:
        raise ValueError("empty tuple")
    tag = xs[0].tag
    for x in xs:
        if x.tag != tag:
            raise AlgebraMismatchError("mixed algebras in point tuple")
    alpha = np.array([x.real for x in xs])
    V = np.stack([x.coeffs[1:] for x in xs])
    mags = np.linalg.norm(V, axis=1)
    big = float(mags.max())
    scale = max(1.0, float(np.max(np.abs(alpha))))
    if big <= 1e-12 * scale:
        return SlicePoint(alpha, np.zeros_like(alpha), ImaginaryUnit(basis(tag, 1)), True)
    k = int(np.argmax(mags))
    u = V[k] / mags[k]
    beta = V @ u
    residual = np.linalg.norm(V - beta[:, None] * u[None, :], axis=1)
    if np.any(residual > PARALLEL_RTOL * big):
        raise NotInSliceConeError(
            f"imaginary parts deviate from a common direction by {residual.max():.3e}"
        )
    return slice_point(alpha, beta, unit_from_vector(tag, u))


def slice_point_to_json(x: SlicePoint) -> dict:
    return {
        "alpha": [float(v) for v in x.alpha],
        "beta": [float(v) for v in x.beta],
        "j": [float(v) for v in x.j.coeffs],
    }


def slice_point_from_json(data: dict) -> SlicePoint:
    jc = np.asarray(data["j"], dtype=np.float64)
    tag = parse_algebra({4: "quaternion", 8: "octonion"}[jc.shape[0]])
    return slice_point(data["alpha"], data["beta"], ImaginaryUnit(element(tag, jc)))


# ---------------------------------------------------------------------------
# the lift


@dataclass(frozen=True, eq=False)
class SliceFunction:
    """Lift of an intrinsic stem; evaluation happens through the stem components."""

    stem: "StemFunction | StemPolynomial"
    poly: StemPolynomial | None = None

    @property
    def tag(self) -> AlgebraTag:
        return self.stem.tag

    @property
    def arity(self) -> int:
        return self.stem.arity

    def __call__(self, x: SlicePoint) -> AlgebraElement:
        return lift_evaluate(self, x)


def lift(F, validate: bool = True, samples=None, tol: float = 1e-10) -> SliceFunction:
    """Wrap a stem as a slice function, verifying intrinsicity on a sample grid."""
    if isinstance(F, StemPolynomial):
        # algebra-coefficient polynomials are intrinsic identically
        return SliceFunction(stem=F, poly=F)
    if not F.intrinsic:
        raise IntrinsicityError("stem is flagged non-intrinsic")
    if validate:
        report = check_intrinsic(F, samples=samples, tol=tol)
        if not report.passed:
            raise IntrinsicityError(
                f"stem violates intrinsicity by {report.max_violation:.3e} (tol {tol:.1e})"
            )
    return SliceFunction(stem=F, poly=None)


def lift_evaluate(f: SliceFunction, x: SlicePoint) -> AlgebraElement:
    """f(alpha + beta J) = F1(z) + J F2(z); at real points the odd part must vanish."""
    w = evaluate_stem(f.stem, x.z)
    if x.is_real:
        if w.im.norm() > 1e-10:
            raise IntrinsicityError(
                f"odd component {w.im.norm():.3e} does not vanish at a real point"
            )
        return w.re
    return w.re + multiply(x.j.value, w.im)


def sphere_values(f: SliceFunction, x: SlicePoint, units: np.ndarray) -> np.ndarray:
    """Evaluate f over the sphere through x at many units, one stem evaluation total.

    units: (N, dim) coefficient rows of imaginary units I; returns (N, dim)
    coefficients of f(alpha + beta I).
    """
    w = evaluate_stem(f.stem, x.z)
    vals = multiply_batch(f.tag, units, w.im.coeffs[None, :])
    return vals + w.re.coeffs[None, :]


# ---------------------------------------------------------------------------
# representation formulas


def representation(
    f_at_J: AlgebraElement,
    f_at_K: AlgebraElement,
    I: ImaginaryUnit,
    J: ImaginaryUnit,
    K: ImaginaryUnit,
) -> AlgebraElement:
    """Recover f(alpha + beta I) from values on two other slices.

    Parenthesization matters in a non-associative algebra and is kept exactly:
    (I - K)((J - K)^{-1} f_J) - (I - J)((J - K)^{-1} f_K).
    """
    dJK = J.value - K.value
    if dJK.norm() <= 1e-8:
        raise DegenerateUnitsError("J - K is numerically non-invertible")
    u = inverse(dJK)
    t1 = multiply(I.value - K.value, multiply(u, f_at_J))
    t2 = multiply(I.value - J.value, multiply(u, f_at_K))
    return t1 - t2


def representation_symmetric(
    f_at_J: AlgebraElement,
    f_at_mJ: AlgebraElement,
    I: ImaginaryUnit,
    J: ImaginaryUnit,
) -> AlgebraElement:
    """K = -J special case: (f_J + f_{-J})/2 - (I/2)(J (f_J - f_{-J}))."""
    avg = (f_at_J + f_at_mJ) * 0.5
    skew = multiply(I.value * 0.5, multiply(J.value, f_at_J - f_at_mJ))
    return avg - skew


# ---------------------------------------------------------------------------
# spherical value and derivative


class SphericalData(NamedTuple):
    value: AlgebraElement
    derivative: AlgebraElement


def spherical_value(f: SliceFunction, x: SlicePoint) -> AlgebraElement:
    """(f(x) + f(conj x))/2, which is the even component F1(z)."""
    return evaluate_stem(f.stem, x.z).re


def spherical_derivative(f: SliceFunction, x: SlicePoint) -> AlgebraElement:
    """Im(x)^{-1}(f(x) - f(conj x))/2 under the convention Im(x)^{-1} := -J/|beta|.

    With that scaling the derivative equals F2(z)/|beta| and the pointwise
    identity f(x) = value + Im(x) * derivative holds with Im(x) = |beta| J.
    """
    if x.is_real:
        raise RealPointError("spherical derivative undefined at real points")
    nbeta = float(np.linalg.norm(x.beta))
    return evaluate_stem(f.stem, x.z).im / nbeta


def spherical(f: SliceFunction, x: SlicePoint) -> SphericalData:
    if x.is_real:
        raise RealPointError("spherical derivative undefined at real points")
    w = evaluate_stem(f.stem, x.z)
    nbeta = float(np.linalg.norm(x.beta))
    return SphericalData(w.re, w.im / nbeta)


def imaginary_element(x: SlicePoint) -> AlgebraElement:
    """Im(x) = |beta| J, the scalar imaginary magnitude against the point's unit."""
    return x.j.value * float(np.linalg.norm(x.beta))


# ---------------------------------------------------------------------------
# products


def slice_product(f: SliceFunction, g: SliceFunction) -> SliceFunction:
    """The lift of the stem product; pointwise f(x)g(x) only for real-stem factors."""
    if f.tag != g.tag or f.arity != g.arity:
        raise AlgebraMismatchError("slice functions with different tag or arity")
    if f.poly is not None and g.poly is not None:
        p = poly_product(f.poly, g.poly)
        return SliceFunction(stem=p, poly=p)
    prod = stem_product(f.stem, g.stem)
    return SliceFunction(stem=prod, poly=None)


def star_product(p, q) -> StemPolynomial:
    """Coefficient convolution of polynomial stems (factor order preserved)."""
    if isinstance(p, SliceFunction):
        p = p.poly
    if isinstance(q, SliceFunction):
        q = q.poly
    if p is None or q is None:
        raise ValueError("star product requires polynomial stems")
    return poly_product(p, q)


def is_real_slice(f: SliceFunction, samples=None, tol: float = 1e-10, rng=None) -> bool:
    """True when both stem components are real valued on the sample set."""
    if samples is None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(3)
        dom = getattr(f.stem, "domain", None)
        if dom is None:
            from .stem import _default_domain

            dom = _default_domain(f.arity)
        samples = dom.sample_symmetric(gen, 16)
    for z in samples:
        w = evaluate_stem(f.stem, z)
        off = max(
            float(np.max(np.abs(w.re.coeffs[1:]), initial=0.0)),
            float(np.max(np.abs(w.im.coeffs[1:]), initial=0.0)),
        )
        if off > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# slice regularity


class RegularityReport(NamedTuple):
    max_residual: float
    stem_residual: float
    passed: bool


def check_slice_regular(
    f: SliceFunction,
    units: Sequence[ImaginaryUnit] | None = None,
    samples=None,
    tol: float = 1e-6,
    h: float = 1e-5,
    rng=None,
) -> RegularityReport:
    """Per-slice Cauchy-Riemann residual |df_J/dalpha_t + J df_J/dbeta_t| by central differences.

    Also cross-checks holomorphy of the stem itself; both residuals must clear
    the tolerance to pass.
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(17)
    if units is None:
        units = [sample_unit_imaginary(f.tag, gen) for _ in range(2)]
    if samples is None:
        dom = getattr(f.stem, "domain", None)
        if dom is None:
            from .stem import _default_domain

            dom = _default_domain(f.arity)
        samples = dom.sample_symmetric(gen, 8)
    samples = np.asarray(samples, dtype=np.complex128)

    worst = 0.0
    L = [left_mult_matrix(J.value) for J in units]
    for z in samples:
        for t in range(f.arity):
            step = np.zeros(f.arity, dtype=np.complex128)
            step[t] = h
            wap = evaluate_stem(f.stem, z + step)
            wam = evaluate_stem(f.stem, z - step)
            wbp = evaluate_stem(f.stem, z + 1j * step)
            wbm = evaluate_stem(f.stem, z - 1j * step)
            da1 = (wap.re.coeffs - wam.re.coeffs) / (2.0 * h)
            da2 = (wap.im.coeffs - wam.im.coeffs) / (2.0 * h)
            db1 = (wbp.re.coeffs - wbm.re.coeffs) / (2.0 * h)
            db2 = (wbp.im.coeffs - wbm.im.coeffs) / (2.0 * h)
            for LJ in L:
                dalpha = da1 + LJ @ da2
                dbeta = db1 + LJ @ db2
                res = dalpha + LJ @ dbeta
                worst = max(worst, float(np.linalg.norm(res)))
    stem_rep = is_holomorphic(f.stem, samples=samples, tol=tol, h=h)
    return RegularityReport(worst, stem_rep.max_residual, worst <= tol and stem_rep.passed)


# ---------------------------------------------------------------------------
# zero classification on spheres


class ZeroKind(str, enum.Enum):
    EMPTY = "empty"
    REAL_ZERO = "real_zero"
    SPHERICAL = "spherical"
    POINT = "point"


@dataclass(frozen=True)
class SphereZeroResult:
    kind: ZeroKind
    unit: ImaginaryUnit | None
    point: SlicePoint | None
    f1_norm: float
    f2_norm: float
    re_residual: float | None = None
    unit_residual: float | None = None


def classify_sphere_zeros(f: SliceFunction, x: SlicePoint, tol: float = 1e-9) -> SphereZeroResult:
    """Classify the zero set of f on the sphere through x.

    Mutually exclusive outcomes: no zero on the sphere, a real zero (degenerate
    sphere), the whole sphere, or exactly one point alpha + beta I.  The point
    case solves I = (-F1) F2^{-1} by right division, which two-generator
    associativity makes valid, and accepts the candidate only when it is a
    genuine imaginary unit within tol.
    """
    w = evaluate_stem(f.stem, x.z)
    n1, n2 = w.re.norm(), w.im.norm()
    if x.is_real:
        if n1 <= tol:
            return SphereZeroResult(ZeroKind.REAL_ZERO, None, x, n1, n2)
        return SphereZeroResult(ZeroKind.EMPTY, None, None, n1, n2)
    if n1 <= tol and n2 <= tol:
        return SphereZeroResult(ZeroKind.SPHERICAL, None, None, n1, n2)
    if n2 <= tol:
        return SphereZeroResult(ZeroKind.EMPTY, None, None, n1, n2)
    cand = multiply(-w.re, inverse(w.im))
    re_res = abs(cand.real)
    unit_res = abs(cand.norm() - 1.0)
    if re_res <= tol and unit_res <= tol:
        unit = unit_from_vector(f.tag, cand.coeffs[1:])
        pt = slice_point(x.alpha, x.beta, unit)
        return SphereZeroResult(ZeroKind.POINT, unit, pt, n1, n2, re_res, unit_res)
    return SphereZeroResult(ZeroKind.EMPTY, None, None, n1, n2, re_res, unit_res)


# ---------------------------------------------------------------------------
# restrictions


def restrict_slice(f: SliceFunction, axis: int, anchors) -> SliceFunction:
    """One-variable restriction with the other coordinates frozen at real anchors."""
    a = np.asarray(anchors, dtype=np.complex128).reshape(f.arity)
    for k in range(f.arity):
        if k != axis and abs(a[k].imag) > 1e-12:
            raise NonIntrinsicRestrictionError(
                f"anchor {k} has imaginary part {a[k].imag:.3e}; restriction would not be intrinsic"
            )
    base = f.poly if f.poly is not None else f.stem
    r = restrict_stem(base, axis, a)
    if isinstance(r, StemPolynomial):
        return SliceFunction(stem=r, poly=r)
    return SliceFunction(stem=r, poly=None)
