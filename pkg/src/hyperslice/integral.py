"""Bochner-Martinelli quadrature on polydiscs inside one slice plane.

The integration domain is a polydisc D with real centers (so D is conjugation
symmetric) sitting in the plane C_J^n picked out by a unit J.  The kernel is

    omega_x(xi) = c_n sum_j (-1)^{j-1} g_j(xi) dxi-bar[j] ^ dxi,
    g_j(xi) = conj(xi_j - x_j) / |xi - x|^{2n},    c_n = (n-1)!/(2 pi J)^n,

a C_J-valued form that left-multiplies boundary values of f.  On the k-th
boundary face only the j = k term survives (dxi-bar_k is parallel to dxi_k on
the circle), which reduces each face to an explicit Jacobian times a product
grid: trapezoidal nodes in every angle, Gauss-Legendre radially.  The written
ordering of the differentials relates to the standard orientation of
C^n = R^{2n} by a factor (-1)^{n(n-1)/2}, which is folded into the constant and
pinned by the f = 1 calibration test.

The correction for non-regular f is the volume term

    VT = (n-1)!/pi^n * integral_D sum_j g_j(xi) dbar_j f(xi) dV(xi),

with the sign convention that boundary - VT = f(x) (for n = 1 this is exactly
the Cauchy-Pompeiu correction).  Its quadrature uses per-disc polar grids
centered at x with dyadically refined radial panels, so the integrable
singularity at x never meets a node.

Every integral is computed twice, componentwise over the complex component
functions F_J^k and directly in the algebra, and the two routes must agree to
1e-12.
"""

from __future__ import annotations

import csv
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .algebra import (
    AlgebraElement,
    AlgebraTag,
    ImaginaryUnit,
    canonicalize_unit,
    element,
    left_mult_matrix,
    units_close,
)
from .slicefun import SliceFunction, SlicePoint, lift_evaluate, representation_symmetric, slice_point
from .stem import Smoothness, StemPolynomial, evaluate_stem_batch, wirtinger_batch

__all__ = [
    "SliceMismatchError",
    "PointTooCloseToBoundaryError",
    "HartogsRequiresSeveralVariablesError",
    "PolydiscDomain",
    "QuadratureSpec",
    "BMReport",
    "bm_report_to_json",
    "bm_report_from_json",
    "bm_boundary_integral",
    "bm_boundary_dual",
    "bm_volume_integral",
    "bm_volume_dual",
    "off_slice_evaluate",
    "HartogsExtension",
    "hartogs_extend",
    "reproduce_check",
    "write_convergence_csv",
    "cauchy_kernel_values",
]

INTERIOR_MARGIN = 0.05
ROUTE_AGREEMENT_TOL = 1e-12
CHUNK = 65536


class SliceMismatchError(ValueError):
    """Evaluation point does not lie on the domain's slice plane."""


class PointTooCloseToBoundaryError(ValueError):
    """Kernel too singular: point within the safety margin of a face."""


class HartogsRequiresSeveralVariablesError(ValueError):
    """Hartogs extension has no one-variable analogue."""


@dataclass(frozen=True, eq=False)
class PolydiscDomain:
    """Product of n discs with real centers inside the slice plane C_J^n."""

    centers: np.ndarray
    radii: np.ndarray
    j: ImaginaryUnit

    def __post_init__(self) -> None:
        c = np.atleast_1d(np.asarray(self.centers, dtype=np.float64)).copy()
        r = np.atleast_1d(np.asarray(self.radii, dtype=np.float64)).copy()
        if c.shape != r.shape or c.ndim != 1:
            raise ValueError("centers and radii must be 1-d arrays of equal length")
        if np.any(r <= 0.0):
            raise ValueError("radii must be positive")
        # real centers keep the disc set conjugation invariant
        jc, _ = canonicalize_unit(self.j)
        c.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "j", jc)

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    def scaled(self, fraction: float) -> "PolydiscDomain":
        if fraction <= 0.0:
            raise ValueError("scale fraction must be positive")
        return PolydiscDomain(self.centers, self.radii * fraction, self.j)

    def contains_z(self, z: np.ndarray, margin: float = 0.0) -> bool:
        z = np.asarray(z, dtype=np.complex128)
        return bool(np.all(np.abs(z - self.centers) <= (1.0 - margin) * self.radii))


@dataclass(frozen=True)
class QuadratureSpec:
    """M angular nodes per circle, R radial Gauss-Legendre nodes per disc, V volume refinement."""

    angular_nodes: int = 64
    radial_nodes: int = 32
    volume_refinement: int = 3

    def __post_init__(self) -> None:
        if self.angular_nodes < 8:
            raise ValueError("angular_nodes must be >= 8")
        if self.radial_nodes < 4:
            raise ValueError("radial_nodes must be >= 4")
        if self.volume_refinement < 0:
            raise ValueError("volume_refinement must be >= 0")


@dataclass(frozen=True, eq=False)
class BMReport:
    reproduced: AlgebraElement
    reference: AlgebraElement
    abs_error: float
    nodes_used: int
    wall_time: float


def make_bm_report(
    reproduced: AlgebraElement, reference: AlgebraElement, nodes_used: int, wall_time: float
) -> BMReport:
    return BMReport(reproduced, reference, (reproduced - reference).norm(), nodes_used, wall_time)


def bm_report_to_json(r: BMReport) -> dict:
    return {
        "algebra": r.reproduced.tag.name,
        "reproduced": [float(v) for v in r.reproduced.coeffs],
        "reference": [float(v) for v in r.reference.coeffs],
        "abs_error": float(r.abs_error),
        "nodes_used": int(r.nodes_used),
        "wall_time": float(r.wall_time),
    }


def bm_report_from_json(data: dict) -> BMReport:
    from .algebra import parse_algebra

    tag = parse_algebra(data["algebra"])
    return BMReport(
        element(tag, data["reproduced"]),
        element(tag, data["reference"]),
        float(data["abs_error"]),
        int(data["nodes_used"]),
        float(data["wall_time"]),
    )


# ---------------------------------------------------------------------------
# shared plumbing


def _worker_count() -> int:
    try:
        return max(1, int(os.environ.get("HYPERSLICE_THREADS", "1")))
    except ValueError:
        return 1


def _chunks(total: int, size: int = CHUNK):
    for lo in range(0, total, size):
        yield lo, min(lo + size, total)


def _map_chunks(fn, total: int):
    """Apply fn to fixed-size index spans [lo, hi), in order; optionally threaded.

    Chunk boundaries never depend on the worker count, and results are reduced
    in chunk order, so output is bitwise identical for any HYPERSLICE_THREADS.
    """
    spans = list(_chunks(total))
    workers = _worker_count()
    if workers <= 1 or len(spans) <= 1:
        return [fn(lo, hi) for lo, hi in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda span: fn(*span), spans))


def _check_point(dom: PolydiscDomain, x: SlicePoint) -> None:
    if x.tag != dom.j.tag:
        raise SliceMismatchError(f"point algebra {x.tag} does not match domain {dom.j.tag}")
    if not x.is_real and not units_close(x.j, dom.j, 1e-12):
        raise SliceMismatchError("point lies on a different slice than the domain")
    if x.arity != dom.n:
        raise ValueError(f"point arity {x.arity} != domain arity {dom.n}")
    if not dom.contains_z(x.z, margin=INTERIOR_MARGIN):
        raise PointTooCloseToBoundaryError(
            f"each coordinate must stay {INTERIOR_MARGIN:.2f}*radius away from its circle"
        )


def _face_orientation_sign(n: int, k: int) -> float:
    """Permutation sign from the written differential order to the face block order.

    Written: conj differentials for l != k ascending, then all holomorphic ones.
    Block:   the circle differential dxi_k first, then (conj_l, holo_l) pairs.
    """
    original = [("c", l) for l in range(n) if l != k] + [("h", l) for l in range(n)]
    target = [("h", k)] + [p for l in range(n) if l != k for p in (("c", l), ("h", l))]
    perm = [original.index(row) for row in target]
    inversions = sum(
        1 for a in range(len(perm)) for b in range(a + 1, len(perm)) if perm[a] > perm[b]
    )
    return -1.0 if inversions % 2 else 1.0


def _gauss_legendre_01(m: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(m)
    return 0.5 * (x + 1.0), 0.5 * w


def _face_nodes(dom: PolydiscDomain, spec: QuadratureSpec, k: int):
    """Quadrature nodes and complex form-coefficients for boundary face k.

    Returns (Z, coeff) where Z is (N, n) complex and coeff already contains the
    kernel constant, orientation, Jacobians and product weights; only g_k(xi)
    and f(xi) remain to be multiplied in.
    """
    n = dom.n
    M, R = spec.angular_nodes, spec.radial_nodes
    cn = math.factorial(n - 1) / (2j * math.pi) ** n
    orient = (-1.0) ** (n * (n - 1) // 2)
    sgn = (-1.0) ** k * _face_orientation_sign(n, k)

    vals: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    jacs: list[np.ndarray] = []
    theta = 2.0 * math.pi * np.arange(M) / M
    w_ang = 2.0 * math.pi / M
    for l in range(n):
        if l == k:
            ring = np.exp(1j * theta)
            vals.append(dom.centers[l] + dom.radii[l] * ring)
            weights.append(np.full(M, w_ang))
            jacs.append(1j * dom.radii[l] * ring)
        else:
            t01, w01 = _gauss_legendre_01(R)
            rho = dom.radii[l] * t01
            wr = dom.radii[l] * w01
            ring = np.exp(1j * theta)
            vals.append((dom.centers[l] + rho[:, None] * ring[None, :]).ravel())
            weights.append((wr[:, None] * np.full(M, w_ang)[None, :]).ravel())
            # dxi-bar_l ^ dxi_l pulls back to 2i rho drho dphi
            jacs.append(2j * np.repeat(rho, M))

    grids = np.meshgrid(*[np.arange(v.shape[0]) for v in vals], indexing="ij")
    idx = [g.ravel() for g in grids]
    N = idx[0].shape[0]
    Z = np.empty((N, n), dtype=np.complex128)
    coeff = np.full(N, cn * orient * sgn, dtype=np.complex128)
    for l in range(n):
        Z[:, l] = vals[l][idx[l]]
        coeff *= weights[l][idx[l]] * jacs[l][idx[l]]
    return Z, coeff


def _kernel_g(Z: np.ndarray, x_z: np.ndarray, j: int, n: int) -> np.ndarray:
    diff = Z - x_z[None, :]
    dist2 = np.sum(np.abs(diff) ** 2, axis=1)
    return np.conj(diff[:, j]) / dist2**n


def cauchy_kernel_values(dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """n=1 sanity hook: (c_1 g_1(xi), 1/(2 pi i (xi - x))) at the circle nodes."""
    if dom.n != 1:
        raise ValueError("Cauchy comparison is one-variable only")
    Z, _ = _face_nodes(dom, spec, 0)
    bm = _kernel_g(Z, x.z, 0, 1) / (2j * math.pi)
    cauchy = 1.0 / (2j * math.pi * (Z[:, 0] - x.z[0]))
    return bm, cauchy


# ---------------------------------------------------------------------------
# boundary integral


def _bm_boundary_both(f: SliceFunction, dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec):
    _check_point(dom, x)
    n = dom.n
    tag = f.tag
    dim = tag.dim
    LJ = left_mult_matrix(dom.j.value)
    x_z = x.z

    direct = np.zeros(dim)
    comp = np.zeros(dim, dtype=np.complex128)
    nodes = 0
    for k in range(n):
        Z, coeff = _face_nodes(dom, spec, k)
        nodes += Z.shape[0]
        gk = _kernel_g(Z, x_z, k, n)
        full = coeff * gk

        def _piece(lo, hi, Zk=Z, ck=full):
            c = ck[lo:hi]
            F1, F2 = evaluate_stem_batch(f.stem, Zk[lo:hi])
            fvals = F1 + F2 @ LJ.T
            d = np.real(c)[:, None] * fvals + np.imag(c)[:, None] * (fvals @ LJ.T)
            cw = c[:, None] * (F1 + 1j * F2)
            return d.sum(axis=0), cw.sum(axis=0)

        for d_part, c_part in _map_chunks(_piece, Z.shape[0]):
            direct = direct + d_part
            comp = comp + c_part
    direct_el = element(tag, direct)
    comp_el = element(tag, np.real(comp)) + element(tag, LJ @ np.imag(comp))
    return direct_el, comp_el, nodes


def bm_boundary_dual(
    f: SliceFunction, dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec
) -> tuple[AlgebraElement, AlgebraElement]:
    """Both evaluation routes (direct algebra, componentwise complex) for testing."""
    direct, comp, _ = _bm_boundary_both(f, dom, x, spec)
    return direct, comp


def bm_boundary_integral(
    f: SliceFunction, dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec
) -> AlgebraElement:
    direct, comp, _ = _bm_boundary_both(f, dom, x, spec)
    gap = (direct - comp).norm()
    if gap > ROUTE_AGREEMENT_TOL * max(1.0, direct.norm()):
        raise RuntimeError(f"componentwise and direct routes disagree by {gap:.3e}")
    return direct


# ---------------------------------------------------------------------------
# volume term


def _volume_nodes(dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec, seed: int):
    """Product polar grids centered at x with dyadic radial panels toward the singularity.

    Per disc l the ray length to the circle is smax(phi) (the domain is
    star-shaped around any interior point); panels [smax 2^{-m-1}, smax 2^{-m}]
    concentrate nodes near x.  Angular offsets are jittered from the seed so no
    node hits x or a symmetry line, deterministically.
    """
    V = spec.volume_refinement
    M = max(8, spec.angular_nodes // 2)
    levels = max(6, 4 * V)
    per_panel = max(2, V + 1)
    rng = np.random.default_rng(seed)
    x_z = x.z

    vals: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for l in range(dom.n):
        e = complex(x_z[l] - dom.centers[l])
        offset = rng.uniform(0.05, 0.45)
        phi = 2.0 * math.pi * (np.arange(M) + offset) / M
        u = np.exp(1j * phi)
        edotu = np.real(np.conj(e) * u)
        smax = -edotu + np.sqrt(edotu**2 + dom.radii[l] ** 2 - abs(e) ** 2)
        t01, w01 = _gauss_legendre_01(per_panel)
        breaks = [2.0 ** (-m) for m in range(levels + 1)] + [0.0]
        v_parts = []
        w_parts = []
        for m in range(M):
            for b_hi, b_lo in zip(breaks[:-1], breaks[1:]):
                hi = smax[m] * b_hi
                lo = smax[m] * b_lo
                s = lo + (hi - lo) * t01
                w = (hi - lo) * w01
                v_parts.append(x_z[l] + s * u[m])
                w_parts.append(w * s * (2.0 * math.pi / M))
        vals.append(np.concatenate(v_parts))
        weights.append(np.concatenate(w_parts))

    grids = np.meshgrid(*[np.arange(v.shape[0]) for v in vals], indexing="ij")
    idx = [g.ravel() for g in grids]
    N = idx[0].shape[0]
    Z = np.empty((N, dom.n), dtype=np.complex128)
    W = np.ones(N)
    for l in range(dom.n):
        Z[:, l] = vals[l][idx[l]]
        W *= weights[l][idx[l]]
    return Z, W


def _bm_volume_both(
    f: SliceFunction, dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec, seed: int
):
    _check_point(dom, x)
    stem = f.stem
    if not isinstance(stem, StemPolynomial) and stem.smoothness < Smoothness.C1:
        raise ValueError("volume term needs a C1 stem with Wirtinger derivatives")
    n = dom.n
    tag = f.tag
    dim = tag.dim
    LJ = left_mult_matrix(dom.j.value)
    vol_const = math.factorial(n - 1) / math.pi**n
    x_z = x.z

    Z, W = _volume_nodes(dom, x, spec, seed)

    def _piece(lo, hi):
        Zc = Z[lo:hi]
        Wc = W[lo:hi]
        d_rows = np.zeros((Zc.shape[0], dim))
        c_rows = np.zeros((Zc.shape[0], dim), dtype=np.complex128)
        for jx in range(n):
            g = _kernel_g(Zc, x_z, jx, n)
            _, (b1, b2) = wirtinger_batch(stem, Zc, jx)
            a, b = np.real(g), np.imag(g)
            d_rows += (a[:, None] * b1 - b[:, None] * b2) + (
                a[:, None] * b2 + b[:, None] * b1
            ) @ LJ.T
            c_rows += g[:, None] * (b1 + 1j * b2)
        return (Wc[:, None] * d_rows).sum(axis=0), (Wc[:, None] * c_rows).sum(axis=0)

    direct = np.zeros(dim)
    comp = np.zeros(dim, dtype=np.complex128)
    for d_part, c_part in _map_chunks(_piece, Z.shape[0]):
        direct = direct + d_part
        comp = comp + c_part
    direct_el = element(tag, vol_const * direct)
    comp_el = element(tag, vol_const * np.real(comp)) + element(
        tag, LJ @ (vol_const * np.imag(comp))
    )
    return direct_el, comp_el, Z.shape[0]


def bm_volume_dual(
    f: SliceFunction,
    dom: PolydiscDomain,
    x: SlicePoint,
    spec: QuadratureSpec,
    seed: int = 0,
) -> tuple[AlgebraElement, AlgebraElement]:
    direct, comp, _ = _bm_volume_both(f, dom, x, spec, seed)
    return direct, comp


def bm_volume_integral(
    f: SliceFunction,
    dom: PolydiscDomain,
    x: SlicePoint,
    spec: QuadratureSpec,
    seed: int = 0,
) -> AlgebraElement:
    """The dbar correction, signed so that boundary - volume = f(x)."""
    direct, comp, _ = _bm_volume_both(f, dom, x, spec, seed)
    gap = (direct - comp).norm()
    if gap > ROUTE_AGREEMENT_TOL * max(1.0, direct.norm()):
        raise RuntimeError(f"componentwise and direct routes disagree by {gap:.3e}")
    return direct


# ---------------------------------------------------------------------------
# off-slice evaluation and Hartogs extension


def _is_analytic(f: SliceFunction) -> bool:
    if f.poly is not None:
        return True
    return f.stem.smoothness >= Smoothness.ANALYTIC


def off_slice_evaluate(
    f: SliceFunction,
    dom: PolydiscDomain,
    q_point: SlicePoint,
    spec: QuadratureSpec,
    include_volume: bool | None = None,
) -> AlgebraElement:
    """Evaluate f at alpha + beta I from boundary data on the J-slice alone.

    The J-slice mirrors x = alpha + beta J and conj(x) are integrated and the
    two results are combined by the symmetric representation formula; the unit
    combination is applied after each integral is reduced to an algebra
    element.  For I = J the combination collapses to the plain boundary value.
    """
    if q_point.tag != dom.j.tag:
        raise SliceMismatchError("point algebra does not match domain")
    x = slice_point(q_point.alpha, q_point.beta, dom.j)
    xb = x.conjugated()
    if include_volume is None:
        include_volume = not _is_analytic(f)
    Rx = bm_boundary_integral(f, dom, x, spec)
    Rxb = bm_boundary_integral(f, dom, xb, spec)
    if include_volume:
        Rx = Rx - bm_volume_integral(f, dom, x, spec)
        Rxb = Rxb - bm_volume_integral(f, dom, xb, spec)
    if q_point.is_real:
        return (Rx + Rxb) * 0.5
    return representation_symmetric(Rx, Rxb, q_point.j, dom.j)


@dataclass(frozen=True, eq=False)
class HartogsExtension:
    """Evaluator returned by hartogs_extend; callable on slice points inside the contour."""

    source: SliceFunction
    contour: PolydiscDomain
    spec: QuadratureSpec
    hole_fraction: float

    def __call__(self, q_point: SlicePoint) -> AlgebraElement:
        return off_slice_evaluate(
            self.source, self.contour, q_point, self.spec, include_volume=False
        )


def hartogs_extend(
    f: SliceFunction,
    dom: PolydiscDomain,
    hole_radius_fraction: float,
    spec: QuadratureSpec,
) -> HartogsExtension:
    """Extension across a concentric polydisc hole via the scaled-boundary integral.

    Needs n >= 2: the one-variable Cauchy integral over the outer circle does
    not reproduce functions with singularities inside the hole.
    """
    if dom.n < 2:
        raise HartogsRequiresSeveralVariablesError("extension requires at least two variables")
    if not 0.0 < hole_radius_fraction < 0.8:
        raise ValueError("hole_radius_fraction must lie in (0, 0.8)")
    return HartogsExtension(f, dom.scaled(0.95), spec, hole_radius_fraction)


# ---------------------------------------------------------------------------
# reports


def reproduce_check(
    f: SliceFunction, dom: PolydiscDomain, x: SlicePoint, spec: QuadratureSpec
) -> BMReport:
    """Boundary integral against the direct lift, packaged with node and timing data."""
    t0 = time.perf_counter()
    direct, _, nodes = _bm_boundary_both(f, dom, x, spec)
    wall = time.perf_counter() - t0
    return make_bm_report(direct, lift_evaluate(f, x), nodes, wall)


def write_convergence_csv(path, rows) -> None:
    """Rows of dicts with keys M, R, V, abs_error, wall_ms; fixed header order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["M", "R", "V", "abs_error", "wall_ms"])
        for row in rows:
            writer.writerow(
                [
                    int(row["M"]),
                    int(row["R"]),
                    int(row["V"]),
                    "%.15e" % float(row["abs_error"]),
                    "%.3f" % float(row["wall_ms"]),
                ]
            )
