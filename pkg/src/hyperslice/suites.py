"""Named verification suites and their config plumbing.

Each suite bundles the checks for one verified property family (algebra
identities, representation formulas, products, spherical operators, zero
classification, boundary quadrature, off-slice evaluation, Hartogs extension,
slice regularity).  Suites are deterministic under a fixed seed, and `all`
runs every suite once for the configured algebra and mirrors the non-algebra
suites in the other algebra.

Report serialization is byte stable: keys are sorted, floats are rendered with
%.15e, and wall-clock times are excluded from JSON (report equality ignores
them too).
"""

from __future__ import annotations

import io
import json
import time
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from . import algebra as alg
from . import integral as quad
from . import slicefun as sf
from . import stem as st
from .algebra import OCTONION, QUATERNION, AlgebraTag, parse_algebra
from .complexified import ComplexifiedElement
from .stem import StemPolynomial

__all__ = [
    "SUITE_NAMES",
    "CheckRecord",
    "SuiteReport",
    "ExperimentConfig",
    "load_config",
    "run_suite",
    "emit_report",
    "report_from_json",
    "random_polynomial",
    "random_nonreal_point",
    "separated_units",
]

SUITE_NAMES = (
    "algebra",
    "representation",
    "products",
    "spherical",
    "zeros",
    "bm",
    "off-slice",
    "hartogs",
    "regularity",
    "all",
)

DEFAULT_TOLERANCES = {
    "alternativity": 1e-10,
    "artin_words": 1e-10,
    "norm_composition": 1e-10,
    "inverse_law": 1e-10,
    "representation_direct": 1e-12,
    "formula_agreement": 1e-13,
    "star_vs_slice": 1e-12,
    "leibniz": 1e-10,
    "real_factor_pointwise": 1e-12,
    "value_constant_on_sphere": 1e-10,
    "derivative_constant_on_sphere": 1e-10,
    "d_s_of_v_s_zero": 1e-10,
    "reconstruction_identity": 1e-10,
    "zero_scan_agreement": 0.0,
    "zero_fixed_cases": 0.0,
    "calibration_constant": 1e-10,
    "poly_reproduction": 1e-8,
    "monotone_angular": 1.0,
    "route_agreement": 1e-12,
    "volume_vanishes_regular": 2e-3,
    "volume_correction": 5e-3,
    "offslice_match": 1e-8,
    "offslice_collapse": 1e-12,
    "offslice_real_in_plane": 1e-8,
    "hartogs_inside_hole": 1e-6,
    "hartogs_annulus": 1e-6,
    "hartogs_n1_detects_failure": 0.1,
    "polynomials_regular": 1e-8,
    "antiholomorphic_residual": 1e-6,
    "osgood_restrictions": 1e-8,
}


@dataclass(frozen=True, eq=False)
class CheckRecord:
    name: str
    passed: bool
    metric: float
    tolerance: float
    wall_ms: float = 0.0
    m: int | None = None
    r: int | None = None
    v: int | None = None
    abs_error: float | None = None

    def content_key(self) -> tuple:
        fmt = lambda v: None if v is None else "%.15e" % v
        return (self.name, self.passed, fmt(self.metric), fmt(self.tolerance), self.m, self.r, self.v, fmt(self.abs_error))


@dataclass(frozen=True, eq=False)
class SuiteReport:
    suite: str
    records: list

    @property
    def overall_pass(self) -> bool:
        return all(r.passed for r in self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuiteReport):
            return NotImplemented
        return self.suite == other.suite and [r.content_key() for r in self.records] == [
            r.content_key() for r in other.records
        ]


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    suite: str = "all"
    algebra: AlgebraTag = OCTONION
    n: int = 2
    seed: int = 0
    samples: int = 1000
    tolerances: dict = field(default_factory=dict)
    quadrature: quad.QuadratureSpec = field(default_factory=quad.QuadratureSpec)
    functions: list = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.suite not in SUITE_NAMES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {SUITE_NAMES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        for name, tol in self.tolerances.items():
            if not tol > 0.0:
                raise ValueError(f"tolerance override {name!r} must be positive")

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Read a YAML config; overrides (suite/seed/...) win over file values."""
    import os

    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"config root must be a mapping, got {type(data).__name__}")
    if overrides:
        data.update({k: v for k, v in overrides.items() if v is not None})
    known = {"suite", "algebra", "n", "seed", "samples", "tolerances", "quadrature", "functions"}
    for key in data:
        if key not in known:
            raise ValueError(f"unknown config field {key!r}")
    q = data.get("quadrature", {})
    if not isinstance(q, dict):
        raise ValueError("quadrature must be a mapping")
    quadrature = quad.QuadratureSpec(
        angular_nodes=int(q.get("angular_nodes", 64)),
        radial_nodes=int(q.get("radial_nodes", 32)),
        volume_refinement=int(q.get("volume_refinement", 3)),
    )
    functions: list[StemPolynomial] = []
    base = os.path.dirname(os.path.abspath(path))
    for entry in data.get("functions", []) or []:
        fpath = entry if os.path.isabs(entry) else os.path.join(base, entry)
        functions.extend(st.load_polynomials(fpath))
    return ExperimentConfig(
        suite=str(data.get("suite", "all")),
        algebra=parse_algebra(str(data.get("algebra", "octonion"))),
        n=int(data.get("n", 2)),
        seed=int(data.get("seed", 0)),
        samples=int(data.get("samples", 1000)),
        tolerances={str(k): float(v) for k, v in (data.get("tolerances") or {}).items()},
        quadrature=quadrature,
        functions=functions,
    )


# ---------------------------------------------------------------------------
# samplers


def random_polynomial(
    tag: AlgebraTag, arity: int, degree: int, rng: np.random.Generator, terms: int = 4
) -> StemPolynomial:
    out = {}
    for _ in range(terms):
        mu = tuple(int(v) for v in rng.integers(0, degree + 1, size=arity))
        while sum(mu) > degree:
            mu = tuple(int(v) for v in rng.integers(0, degree + 1, size=arity))
        out[mu] = alg.random_element(tag, rng)
    return st.stem_polynomial(tag, arity, out)


def random_nonreal_point(
    tag: AlgebraTag, arity: int, rng: np.random.Generator, box: float = 0.8
) -> sf.SlicePoint:
    alpha = rng.uniform(-box, box, arity)
    beta = rng.uniform(-box, box, arity)
    while np.linalg.norm(beta) < 0.1:
        beta = rng.uniform(-box, box, arity)
    return sf.slice_point(alpha, beta, alg.sample_unit_imaginary(tag, rng))


def separated_units(
    tag: AlgebraTag, rng: np.random.Generator, count: int, min_sep: float = 0.2
) -> list[alg.ImaginaryUnit]:
    """Random units pairwise at least min_sep apart, so unit differences invert stably."""
    units: list[alg.ImaginaryUnit] = []
    while len(units) < count:
        cand = alg.sample_unit_imaginary(tag, rng)
        if all((cand.value - u.value).norm() >= min_sep for u in units):
            units.append(cand)
    return units


def _timed(records: list, name: str, tol: float, fn, invert: bool = False, **extras) -> None:
    """Run fn() -> metric, append a CheckRecord; invert=True passes when metric > tol."""
    t0 = time.perf_counter()
    metric = float(fn())
    wall = (time.perf_counter() - t0) * 1e3
    ok = metric > tol if invert else metric <= tol
    records.append(CheckRecord(name, bool(ok), metric, tol, wall, **extras))


# ---------------------------------------------------------------------------
# suite bodies (each returns a list of CheckRecords)


def _algebra_suite(cfg: ExperimentConfig) -> list:
    records: list[CheckRecord] = []
    for tag in (OCTONION, QUATERNION):
        rng = np.random.default_rng(cfg.seed + 1)
        pairs = [
            (alg.random_element(tag, rng), alg.random_element(tag, rng))
            for _ in range(cfg.samples)
        ]
        label = tag.name

        def alternativity() -> float:
            worst = 0.0
            for a, b in pairs:
                ab = alg.multiply(a, b)
                left = (alg.multiply(a, ab) - alg.multiply(alg.multiply(a, a), b)).norm()
                right = (alg.multiply(ab, b) - alg.multiply(a, alg.multiply(b, b))).norm()
                worst = max(worst, left, right)
            return worst

        def artin() -> float:
            # any two generators span an associative subalgebra: compare
            # reassociations of the word a b a b
            worst = 0.0
            for a, b in pairs:
                ab = alg.multiply(a, b)
                ba = alg.multiply(b, a)
                w1 = alg.multiply(alg.multiply(ab, a), b)
                w2 = alg.multiply(alg.multiply(a, ba), b)
                w3 = alg.multiply(a, alg.multiply(b, ab))
                w4 = alg.multiply(ab, ab)
                w5 = alg.multiply(a, alg.multiply(ba, b))
                base = w4
                for w in (w1, w2, w3, w5):
                    worst = max(worst, (w - base).norm())
            return worst

        def norm_comp() -> float:
            worst = 0.0
            for a, b in pairs:
                lhs = alg.multiply(a, b).norm_squared()
                rhs = a.norm_squared() * b.norm_squared()
                worst = max(worst, abs(lhs - rhs) / max(1.0, rhs))
            return worst

        def inverse_law() -> float:
            worst = 0.0
            onev = alg.one(tag)
            for a, _ in pairs:
                ia = alg.inverse(a)
                worst = max(
                    worst,
                    (alg.multiply(a, ia) - onev).norm(),
                    (alg.multiply(ia, a) - onev).norm(),
                )
            return worst

        _timed(records, f"{label}_alternativity", cfg.tol("alternativity"), alternativity)
        _timed(records, f"{label}_artin_words", cfg.tol("artin_words"), artin)
        _timed(records, f"{label}_norm_composition", cfg.tol("norm_composition"), norm_comp)
        _timed(records, f"{label}_inverse_law", cfg.tol("inverse_law"), inverse_law)

    def octonion_witness() -> float:
        # largest associator over all basis triples; nonzero certifies non-associativity
        worst = 0.0
        for i in range(8):
            for jj in range(8):
                for k in range(8):
                    a, b, c = alg.basis(OCTONION, i), alg.basis(OCTONION, jj), alg.basis(OCTONION, k)
                    d = alg.multiply(alg.multiply(a, b), c) - alg.multiply(a, alg.multiply(b, c))
                    worst = max(worst, d.norm())
        return worst

    def quaternion_exhaustive() -> float:
        worst = 0.0
        for i in range(4):
            for jj in range(4):
                for k in range(4):
                    a, b, c = alg.basis(QUATERNION, i), alg.basis(QUATERNION, jj), alg.basis(QUATERNION, k)
                    d = alg.multiply(alg.multiply(a, b), c) - alg.multiply(a, alg.multiply(b, c))
                    worst = max(worst, d.norm())
        return worst

    _timed(records, "octonion_nonassociative_witness", 1.0, octonion_witness, invert=True)
    _timed(records, "quaternion_basis_associativity", 0.0, quaternion_exhaustive)
    return records


def _representation_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 2)
    per_n = max(1, cfg.samples // 3)

    worst_direct = 0.0
    worst_agree = 0.0
    for n in (1, 2, 3):
        polys = [random_polynomial(tag, n, 4, rng, terms=5)]
        polys += [p for p in cfg.functions if p.arity == n and p.tag == tag]
        fs = [sf.lift(p) for p in polys]
        for _ in range(per_n):
            f = fs[int(rng.integers(0, len(fs)))]
            I, J, K = separated_units(tag, rng, 3)
            alpha = rng.uniform(-0.8, 0.8, n)
            beta = rng.uniform(-0.8, 0.8, n)
            fJ = f(sf.slice_point(alpha, beta, J))
            fK = f(sf.slice_point(alpha, beta, K))
            fmJ = f(sf.slice_point(alpha, beta, -J))
            direct = f(sf.slice_point(alpha, beta, I))
            rep = sf.representation(fJ, fK, I, J, K)
            worst_direct = max(worst_direct, (rep - direct).norm())
            general = sf.representation(fJ, fmJ, I, J, -J)
            symmetric = sf.representation_symmetric(fJ, fmJ, I, J)
            worst_agree = max(worst_agree, (general - symmetric).norm())
            worst_direct = max(worst_direct, (symmetric - direct).norm())

    records.append(
        CheckRecord("representation_direct", worst_direct <= cfg.tol("representation_direct"), worst_direct, cfg.tol("representation_direct"))
    )
    records.append(
        CheckRecord("formula_agreement", worst_agree <= cfg.tol("formula_agreement"), worst_agree, cfg.tol("formula_agreement"))
    )
    return records


def _products_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 3)
    n = cfg.n

    p = random_polynomial(tag, n, 3, rng, terms=4)
    q = random_polynomial(tag, n, 3, rng, terms=4)
    f, g = sf.lift(p), sf.lift(q)

    def star_vs_slice() -> float:
        star = sf.lift(sf.star_product(p, q))
        prod = sf.slice_product(f, g)
        worst = 0.0
        for _ in range(100):
            x = random_nonreal_point(tag, n, rng)
            worst = max(worst, (star(x) - prod(x)).norm())
        return worst

    def leibniz() -> float:
        prod = sf.slice_product(f, g)
        worst = 0.0
        for _ in range(50):
            x = random_nonreal_point(tag, n, rng)
            vf, df = sf.spherical(f, x)
            vg, dg = sf.spherical(g, x)
            lhs = sf.spherical_derivative(prod, x)
            rhs = alg.multiply(df, vg) + alg.multiply(vf, dg)
            worst = max(worst, (lhs - rhs).norm())
        return worst

    def real_factor() -> float:
        terms = {}
        for _ in range(3):
            mu = tuple(int(v) for v in rng.integers(0, 3, size=n))
            terms[mu] = alg.scalar(tag, float(rng.uniform(-2, 2)))
        rp = st.stem_polynomial(tag, n, terms)
        rf = sf.lift(rp)
        prod = sf.slice_product(rf, g)
        worst = 0.0
        for _ in range(50):
            x = random_nonreal_point(tag, n, rng)
            worst = max(worst, (prod(x) - alg.multiply(rf(x), g(x))).norm())
        return worst

    def witness() -> float:
        # constant e_1 times z_1 e_2 does not multiply pointwise off the e_3 slice
        fw = sf.lift(st.constant_poly(tag, n, alg.basis(tag, 1)))
        gw = sf.lift(st.monomial(tag, n, (1,) + (0,) * (n - 1), alg.basis(tag, 2)))
        prod = sf.slice_product(fw, gw)
        x = sf.slice_point(
            np.full(n, 0.3), np.full(n, 0.7), alg.unit_from_vector(tag, np.eye(tag.dim - 1)[2])
        )
        return (prod(x) - alg.multiply(fw(x), gw(x))).norm()

    _timed(records, "star_vs_slice", cfg.tol("star_vs_slice"), star_vs_slice)
    _timed(records, "leibniz", cfg.tol("leibniz"), leibniz)
    _timed(records, "real_factor_pointwise", cfg.tol("real_factor_pointwise"), real_factor)
    _timed(records, "pointwise_product_witness", 1e-3, witness, invert=True)
    return records


def _spherical_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 4)
    n = cfg.n
    p = random_polynomial(tag, n, 4, rng, terms=5)
    f = sf.lift(p)

    def _definitional(x: sf.SlicePoint, unit: alg.ImaginaryUnit):
        # even/odd combination of f at alpha + beta I and alpha - beta I, with
        # the sampled unit kept aligned to the base point's beta vector
        y = sf.slice_point(x.alpha, x.beta, unit)
        yb = sf.slice_point(x.alpha, -x.beta, unit)
        fy, fyb = f(y), f(yb)
        value = (fy + fyb) * 0.5
        nbeta = float(np.linalg.norm(x.beta))
        deriv = alg.multiply(unit.value * (-0.5 / nbeta), fy - fyb)
        return value, deriv

    def value_constant() -> float:
        worst = 0.0
        for _ in range(50):
            x = random_nonreal_point(tag, n, rng)
            v1, _ = _definitional(x, alg.sample_unit_imaginary(tag, rng))
            v2, _ = _definitional(x, alg.sample_unit_imaginary(tag, rng))
            worst = max(worst, (v1 - v2).norm(), (v1 - sf.spherical_value(f, x)).norm())
        return worst

    def derivative_constant() -> float:
        worst = 0.0
        for _ in range(50):
            x = random_nonreal_point(tag, n, rng)
            _, d1 = _definitional(x, alg.sample_unit_imaginary(tag, rng))
            _, d2 = _definitional(x, alg.sample_unit_imaginary(tag, rng))
            worst = max(worst, (d1 - d2).norm(), (d1 - sf.spherical_derivative(f, x)).norm())
        return worst

    def ds_of_vs() -> float:
        # the spherical value lifts to a slice function with vanishing odd part
        even = st.StemFunction(
            arity=n,
            tag=tag,
            evaluator=lambda z: ComplexifiedElement(st.evaluate_stem(p, z).re, alg.zero(tag)),
            smoothness=st.Smoothness.C1,
        )
        vs_f = sf.SliceFunction(stem=even)
        worst = 0.0
        for _ in range(25):
            x = random_nonreal_point(tag, n, rng)
            worst = max(worst, sf.spherical_derivative(vs_f, x).norm())
        return worst

    def reconstruction() -> float:
        worst = 0.0
        for _ in range(50):
            x = random_nonreal_point(tag, n, rng)
            value, deriv = sf.spherical(f, x)
            recon = value + alg.multiply(sf.imaginary_element(x), deriv)
            worst = max(worst, (recon - f(x)).norm())
        return worst

    _timed(records, "value_constant_on_sphere", cfg.tol("value_constant_on_sphere"), value_constant)
    _timed(records, "derivative_constant_on_sphere", cfg.tol("derivative_constant_on_sphere"), derivative_constant)
    _timed(records, "d_s_of_v_s_zero", cfg.tol("d_s_of_v_s_zero"), ds_of_vs)
    _timed(records, "reconstruction_identity", cfg.tol("reconstruction_identity"), reconstruction)
    return records


def _scan_consistent(f: sf.SliceFunction, x: sf.SlicePoint, result, units: np.ndarray) -> bool:
    """Compare a classification against a brute-force sphere scan (zero iff |f| < 1e-7)."""
    vals = sf.sphere_values(f, x, units)
    norms = np.linalg.norm(vals, axis=1)
    hits = norms < 1e-7
    if result.kind == sf.ZeroKind.SPHERICAL:
        return bool(hits.all())
    if result.kind == sf.ZeroKind.EMPTY:
        return not bool(hits.any())
    if result.kind == sf.ZeroKind.POINT:
        at_claim = sf.lift_evaluate(f, result.point).norm()
        if at_claim >= 1e-7:
            return False
        # any scan hit must sit next to the claimed unit
        close = np.linalg.norm(units - result.unit.coeffs[None, :], axis=1) < 1e-2
        return bool(np.all(~hits | close))
    if result.kind == sf.ZeroKind.REAL_ZERO:
        return sf.lift_evaluate(f, x).norm() < 1e-7
    return False


def _zeros_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 5)
    e0 = alg.one(tag)
    e1 = alg.basis(tag, 1)

    def fixed_cases() -> float:
        mismatches = 0
        J = alg.sample_unit_imaginary(tag, rng)
        # z^2 + 1 vanishes on the whole unit sphere at alpha=0, beta=1
        f1 = sf.lift(st.stem_polynomial(tag, 1, {(2,): e0, (0,): e0}))
        r1 = sf.classify_sphere_zeros(f1, sf.slice_point([0.0], [1.0], J))
        mismatches += r1.kind != sf.ZeroKind.SPHERICAL
        # z - 2 e_1 vanishes at the single point 2 e_1 of the sphere |x| = 2
        f2 = sf.lift(st.stem_polynomial(tag, 1, {(1,): e0, (0,): -2.0 * e1}))
        r2 = sf.classify_sphere_zeros(f2, sf.slice_point([0.0], [2.0], J))
        mismatches += r2.kind != sf.ZeroKind.POINT
        if r2.kind == sf.ZeroKind.POINT:
            # the zero sits at 2 e_1 whichever way the sphere was parameterized
            mismatches += (r2.point.components()[0] - 2.0 * e1).norm() > 1e-12
        # nonzero constants never vanish
        f3 = sf.lift(st.constant_poly(tag, 1, 3.0 * e0 + e1))
        r3 = sf.classify_sphere_zeros(f3, sf.slice_point([0.2], [0.7], J))
        mismatches += r3.kind != sf.ZeroKind.EMPTY
        # z vanishes at the real point 0
        f4 = sf.lift(st.coordinate(tag, 1, 0))
        r4 = sf.classify_sphere_zeros(f4, sf.slice_point([0.0], [0.0], J))
        mismatches += r4.kind != sf.ZeroKind.REAL_ZERO
        return float(mismatches)

    def scan_agreement() -> float:
        units = alg.sample_unit_imaginaries(tag, 10_000, np.random.default_rng(cfg.seed + 50))
        disagreements = 0
        for _ in range(50):
            f = sf.lift(random_polynomial(tag, 1, 3, rng, terms=3))
            alpha = rng.uniform(-1.0, 1.0, 1)
            beta = np.array([rng.uniform(0.1, 1.5)])
            x = sf.slice_point(alpha, beta, alg.sample_unit_imaginary(tag, rng))
            res = sf.classify_sphere_zeros(f, x)
            if not _scan_consistent(f, x, res, units):
                disagreements += 1
        return float(disagreements)

    _timed(records, "zero_fixed_cases", cfg.tol("zero_fixed_cases"), fixed_cases)
    _timed(records, "zero_scan_agreement", cfg.tol("zero_scan_agreement"), scan_agreement)
    return records


def _bm_domain(cfg: ExperimentConfig, tag: AlgebraTag) -> tuple:
    rng = np.random.default_rng(cfg.seed + 6)
    J = alg.sample_unit_imaginary(tag, rng)
    dom = quad.PolydiscDomain(np.zeros(2), np.ones(2), J)
    x = sf.point_from_z(np.array([0.3 + 0.2j, -0.1 + 0.4j]), dom.j)
    return rng, dom, x


def _bm_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng, dom, x = _bm_domain(cfg, tag)
    M, R, V = cfg.quadrature.angular_nodes, cfg.quadrature.radial_nodes, cfg.quadrature.volume_refinement
    spec = quad.QuadratureSpec(M, R, V)

    f_fixed = sf.lift(
        st.stem_polynomial(tag, 2, {(1, 2): alg.one(tag), (1, 0): alg.basis(tag, 3)})
    )
    f_rand = sf.lift(random_polynomial(tag, 2, 3, rng, terms=4))
    polys = [f_fixed, f_rand] + [sf.lift(p) for p in cfg.functions if p.arity == 2 and p.tag == tag]

    def calibration() -> float:
        f1 = sf.lift(st.constant_poly(tag, 2, alg.one(tag)))
        val = quad.bm_boundary_integral(f1, dom, x, spec)
        return (val - alg.one(tag)).norm()

    def reproduction() -> float:
        worst = 0.0
        for f in polys:
            rep = quad.reproduce_check(f, dom, x, spec)
            worst = max(worst, rep.abs_error)
        return worst

    def monotone() -> float:
        errs = []
        for m in (16, 32, 64):
            rep = quad.reproduce_check(f_fixed, dom, x, quad.QuadratureSpec(m, R, V))
            errs.append(rep.abs_error)
        # metric < 1 certifies strict decrease at every doubling
        return max(errs[1] / errs[0], errs[2] / errs[1])

    def route_agreement() -> float:
        worst = 0.0
        for f in polys:
            direct, comp = quad.bm_boundary_dual(f, dom, x, spec)
            worst = max(worst, (direct - comp).norm())
        return worst

    def volume_regular() -> float:
        vt = quad.bm_volume_integral(f_fixed, dom, x, quad.QuadratureSpec(M, R, 1))
        return vt.norm()

    def volume_correction() -> float:
        c = alg.random_element(tag, np.random.default_rng(cfg.seed + 60))
        f = sf.lift(_conj_z1_stem(tag, 2, c))
        boundary = quad.bm_boundary_integral(f, dom, x, spec)
        volume = quad.bm_volume_integral(f, dom, x, spec)
        return (boundary - volume - sf.lift_evaluate(f, x)).norm()

    _timed(records, "calibration_constant", cfg.tol("calibration_constant"), calibration, m=M, r=R, v=V)
    _timed(records, "poly_reproduction", cfg.tol("poly_reproduction"), reproduction, m=M, r=R, v=V)
    _timed(records, "monotone_angular", cfg.tol("monotone_angular"), monotone, m=M, r=R, v=V)
    _timed(records, "route_agreement", cfg.tol("route_agreement"), route_agreement, m=M, r=R, v=V)
    _timed(records, "volume_vanishes_regular", cfg.tol("volume_vanishes_regular"), volume_regular, m=M, r=R, v=1)
    _timed(records, "volume_correction", cfg.tol("volume_correction"), volume_correction, m=M, r=R, v=V)
    return [replace(rec, abs_error=rec.metric) if rec.abs_error is None else rec for rec in records]


def _conj_z1_stem(tag: AlgebraTag, arity: int, c: alg.AlgebraElement) -> st.StemFunction:
    """F(z) = conj(z_1) c: the standard non-regular C1 test stem with exact dbar."""
    from .complexified import ComplexifiedElement

    def _eval(z):
        return ComplexifiedElement(c * float(np.real(z[0])), c * (-float(np.imag(z[0]))))

    def _batch(Z):
        re = np.real(Z[:, 0])[:, None] * c.coeffs[None, :]
        im = -np.imag(Z[:, 0])[:, None] * c.coeffs[None, :]
        return re, im

    def _wirt(z, t):
        zero_c = ComplexifiedElement(alg.zero(tag), alg.zero(tag))
        if t == 0:
            return zero_c, ComplexifiedElement(c, alg.zero(tag))
        return zero_c, zero_c

    def _batch_wirt(Z, t):
        N = Z.shape[0]
        zeros = np.zeros((N, tag.dim))
        if t == 0:
            b1 = np.tile(c.coeffs, (N, 1))
            return (zeros, zeros.copy()), (b1, np.zeros((N, tag.dim)))
        return (zeros, zeros.copy()), (np.zeros((N, tag.dim)), np.zeros((N, tag.dim)))

    return st.StemFunction(
        arity=arity,
        tag=tag,
        evaluator=_eval,
        smoothness=st.Smoothness.C1,
        wirtinger_evaluator=_wirt,
        batch_evaluator=_batch,
        batch_wirtinger=_batch_wirt,
        domain=st.Domain.polydisc(np.full(arity, 1.2)),
    )


def _offslice_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng, dom, x = _bm_domain(cfg, tag)
    spec = cfg.quadrature
    f = sf.lift(random_polynomial(tag, 2, 3, rng, terms=4))

    def match() -> float:
        worst = 0.0
        for _ in range(4):
            I = alg.sample_unit_imaginary(tag, rng)
            q_point = sf.slice_point(x.alpha, x.beta, I)
            val = quad.off_slice_evaluate(f, dom, q_point, spec)
            worst = max(worst, (val - sf.lift_evaluate(f, q_point)).norm())
        return worst

    def collapse() -> float:
        q_point = sf.slice_point(x.alpha, x.beta, dom.j)
        val = quad.off_slice_evaluate(f, dom, q_point, spec)
        return (val - quad.bm_boundary_integral(f, dom, q_point, spec)).norm()

    def real_in_plane() -> float:
        terms = {}
        gen = np.random.default_rng(cfg.seed + 70)
        for _ in range(3):
            mu = tuple(int(v) for v in gen.integers(0, 3, size=2))
            terms[mu] = alg.scalar(tag, float(gen.uniform(-1.5, 1.5)))
        rf = sf.lift(st.stem_polynomial(tag, 2, terms))
        I = alg.sample_unit_imaginary(tag, rng)
        q_point = sf.slice_point(x.alpha, x.beta, I)
        val = quad.off_slice_evaluate(rf, dom, q_point, spec)
        # remove the components along e_0 and I; the rest must vanish
        proj = val - alg.scalar(tag, val.real) - alg.multiply(
            alg.scalar(tag, float(np.dot(val.coeffs, q_point.j.coeffs))), q_point.j.value
        )
        return proj.norm()

    _timed(records, "offslice_match", cfg.tol("offslice_match"), match, m=spec.angular_nodes, r=spec.radial_nodes)
    _timed(records, "offslice_collapse", cfg.tol("offslice_collapse"), collapse, m=spec.angular_nodes, r=spec.radial_nodes)
    _timed(records, "offslice_real_in_plane", cfg.tol("offslice_real_in_plane"), real_in_plane, m=spec.angular_nodes, r=spec.radial_nodes)
    return records


def _rational_stem(tag: AlgebraTag, c: alg.AlgebraElement) -> st.StemFunction:
    """F(z) = (z_1 - 2)^{-1} c: holomorphic on the unit bidisc, pole at real 2."""
    from .complexified import ComplexifiedElement

    def _eval(z):
        w = 1.0 / (complex(z[0]) - 2.0)
        return ComplexifiedElement(c * w.real, c * w.imag)

    def _batch(Z):
        w = 1.0 / (Z[:, 0] - 2.0)
        return np.real(w)[:, None] * c.coeffs[None, :], np.imag(w)[:, None] * c.coeffs[None, :]

    def _wirt(z, t):
        zero_c = ComplexifiedElement(alg.zero(tag), alg.zero(tag))
        if t == 0:
            w = -1.0 / (complex(z[0]) - 2.0) ** 2
            return ComplexifiedElement(c * w.real, c * w.imag), zero_c
        return zero_c, zero_c

    return st.StemFunction(
        arity=2,
        tag=tag,
        evaluator=_eval,
        smoothness=st.Smoothness.ANALYTIC,
        wirtinger_evaluator=_wirt,
        batch_evaluator=_batch,
        domain=st.Domain.polydisc(np.ones(2)),
    )


def _inverse_z_stem(tag: AlgebraTag) -> st.StemFunction:
    """F(z) = z^{-1} e_0 on an annulus around the puncture at 0."""
    from .complexified import ComplexifiedElement

    e0 = alg.one(tag)

    def _eval(z):
        w = 1.0 / complex(z[0])
        return ComplexifiedElement(e0 * w.real, e0 * w.imag)

    def _batch(Z):
        w = 1.0 / Z[:, 0]
        return np.real(w)[:, None] * e0.coeffs[None, :], np.imag(w)[:, None] * e0.coeffs[None, :]

    return st.StemFunction(
        arity=1,
        tag=tag,
        evaluator=_eval,
        smoothness=st.Smoothness.ANALYTIC,
        batch_evaluator=_batch,
        domain=st.Domain.annulus(0.3, 1.0),
    )


def _hartogs_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 8)
    J = alg.sample_unit_imaginary(tag, rng)
    dom = quad.PolydiscDomain(np.zeros(2), np.ones(2), J)
    spec = cfg.quadrature
    c = alg.random_element(tag, rng)
    f = sf.lift(_rational_stem(tag, c))
    ext = quad.hartogs_extend(f, dom, 0.5, spec)

    def inside_hole() -> float:
        worst = 0.0
        for _ in range(4):
            alpha = rng.uniform(-0.3, 0.3, 2)
            beta = rng.uniform(-0.3, 0.3, 2)
            I = alg.sample_unit_imaginary(tag, rng)
            q_point = sf.slice_point(alpha, beta, I)
            worst = max(worst, (ext(q_point) - sf.lift_evaluate(f, q_point)).norm())
        return worst

    def annulus_region() -> float:
        worst = 0.0
        for _ in range(4):
            alpha = np.array([rng.uniform(0.55, 0.75) * (1 if rng.uniform() < 0.5 else -1), rng.uniform(-0.4, 0.4)])
            beta = rng.uniform(-0.4, 0.4, 2)
            I = alg.sample_unit_imaginary(tag, rng)
            q_point = sf.slice_point(alpha, beta, I)
            worst = max(worst, (ext(q_point) - sf.lift_evaluate(f, q_point)).norm())
        return worst

    def n1_detects_failure() -> float:
        f1 = sf.lift(_inverse_z_stem(tag))
        contour = quad.PolydiscDomain(np.zeros(1), np.array([0.95]), J)
        x = sf.slice_point([0.0], [0.7], J)
        g = quad.bm_boundary_integral(f1, contour, x, spec)
        return (g - sf.lift_evaluate(f1, x)).norm()

    def n1_raises() -> float:
        try:
            quad.hartogs_extend(
                sf.lift(_inverse_z_stem(tag)), quad.PolydiscDomain(np.zeros(1), np.ones(1), J), 0.5, spec
            )
        except quad.HartogsRequiresSeveralVariablesError:
            return 1.0
        return 0.0

    _timed(records, "hartogs_inside_hole", cfg.tol("hartogs_inside_hole"), inside_hole, m=spec.angular_nodes, r=spec.radial_nodes)
    _timed(records, "hartogs_annulus", cfg.tol("hartogs_annulus"), annulus_region, m=spec.angular_nodes, r=spec.radial_nodes)
    _timed(records, "hartogs_n1_detects_failure", cfg.tol("hartogs_n1_detects_failure"), n1_detects_failure, invert=True, m=spec.angular_nodes, r=spec.radial_nodes)
    _timed(records, "hartogs_n1_raises", 0.5, n1_raises, invert=True)
    return records


def _regularity_suite(cfg: ExperimentConfig, tag: AlgebraTag) -> list:
    records: list[CheckRecord] = []
    rng = np.random.default_rng(cfg.seed + 9)
    n = max(2, cfg.n)

    def polys_regular() -> float:
        worst = 0.0
        for _ in range(3):
            f = sf.lift(random_polynomial(tag, n, 4, rng, terms=4))
            rep = sf.check_slice_regular(f, tol=cfg.tol("polynomials_regular"), rng=rng)
            worst = max(worst, rep.max_residual, rep.stem_residual)
        return worst

    def antiholomorphic() -> float:
        a = alg.random_element(tag, rng)
        f = sf.SliceFunction(stem=_conj_z1_stem(tag, n, a))
        rep = sf.check_slice_regular(f, rng=rng)
        # the per-slice residual of conj(z_1) a is exactly 2|a|
        return abs(rep.max_residual - 2.0 * a.norm())

    def osgood() -> float:
        f = sf.lift(random_polynomial(tag, n, 3, rng, terms=4))
        worst_restriction = 0.0
        for axis in range(n):
            for _ in range(3):
                anchors = rng.uniform(-0.9, 0.9, n).astype(complex)
                r = sf.restrict_slice(f, axis, anchors)
                rep = sf.check_slice_regular(r, rng=rng)
                worst_restriction = max(worst_restriction, rep.max_residual, rep.stem_residual)
        joint = sf.check_slice_regular(f, rng=rng)
        # hypothesis side (restrictions) and conclusion side (joint) both bounded
        return max(worst_restriction, joint.max_residual, joint.stem_residual)

    _timed(records, "polynomials_regular", cfg.tol("polynomials_regular"), polys_regular)
    _timed(records, "antiholomorphic_residual", cfg.tol("antiholomorphic_residual"), antiholomorphic)
    _timed(records, "osgood_restrictions", cfg.tol("osgood_restrictions"), osgood)
    return records


# ---------------------------------------------------------------------------
# dispatch


_MIRRORABLE = {
    "representation": _representation_suite,
    "products": _products_suite,
    "spherical": _spherical_suite,
    "zeros": _zeros_suite,
    "bm": _bm_suite,
    "off-slice": _offslice_suite,
    "hartogs": _hartogs_suite,
    "regularity": _regularity_suite,
}


def run_suite(cfg: ExperimentConfig) -> SuiteReport:
    """Execute the configured suite; `all` adds the other-algebra mirror of suites 2-9."""
    if cfg.suite == "algebra":
        return SuiteReport("algebra", _algebra_suite(cfg))
    if cfg.suite in _MIRRORABLE:
        return SuiteReport(cfg.suite, _MIRRORABLE[cfg.suite](cfg, cfg.algebra))
    records: list[CheckRecord] = []
    for rec in _algebra_suite(cfg):
        records.append(replace(rec, name=f"algebra/{rec.name}"))
    for name, fn in _MIRRORABLE.items():
        for rec in fn(cfg, cfg.algebra):
            records.append(replace(rec, name=f"{name}/{rec.name}"))
    mirror = QUATERNION if cfg.algebra != QUATERNION else OCTONION
    for name, fn in _MIRRORABLE.items():
        for rec in fn(cfg, mirror):
            records.append(replace(rec, name=f"{name}[{mirror.name}]/{rec.name}"))
    return SuiteReport("all", records)


# ---------------------------------------------------------------------------
# emission


def _record_dict(rec: CheckRecord) -> dict:
    return {
        "name": rec.name,
        "pass": bool(rec.passed),
        "metric": "%.15e" % rec.metric,
        "tolerance": "%.15e" % rec.tolerance,
        "M": rec.m,
        "R": rec.r,
        "V": rec.v,
        "abs_error": None if rec.abs_error is None else "%.15e" % rec.abs_error,
    }


def report_to_json(r: SuiteReport) -> str:
    data = {
        "suite": r.suite,
        "overall_pass": r.overall_pass,
        "records": [_record_dict(rec) for rec in r.records],
    }
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def report_from_json(text: str) -> SuiteReport:
    data = json.loads(text)
    records = []
    for rec in data["records"]:
        records.append(
            CheckRecord(
                name=rec["name"],
                passed=bool(rec["pass"]),
                metric=float(rec["metric"]),
                tolerance=float(rec["tolerance"]),
                m=rec["M"],
                r=rec["R"],
                v=rec["V"],
                abs_error=None if rec["abs_error"] is None else float(rec["abs_error"]),
            )
        )
    return SuiteReport(data["suite"], records)


def report_to_csv(r: SuiteReport) -> str:
    out = io.StringIO()
    out.write("name,pass,metric,tolerance,M,R,V,abs_error,wall_ms\n")
    for rec in r.records:
        fields = [
            rec.name,
            "1" if rec.passed else "0",
            "%.15e" % rec.metric,
            "%.15e" % rec.tolerance,
            "" if rec.m is None else str(rec.m),
            "" if rec.r is None else str(rec.r),
            "" if rec.v is None else str(rec.v),
            "" if rec.abs_error is None else "%.15e" % rec.abs_error,
            "%.3f" % rec.wall_ms,
        ]
        out.write(",".join(fields) + "\n")
    return out.getvalue()


def report_to_text(r: SuiteReport) -> str:
    width = max([len(rec.name) for rec in r.records] + [10])
    lines = [f"suite: {r.suite}"]
    for rec in r.records:
        status = "PASS" if rec.passed else "FAIL"
        lines.append(
            f"  {rec.name:<{width}}  {status}  metric={rec.metric:.3e}  tol={rec.tolerance:.3e}  ({rec.wall_ms:.1f} ms)"
        )
    lines.append(f"overall: {'PASS' if r.overall_pass else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(r: SuiteReport, fmt: str = "text", path=None) -> str:
    if fmt == "json":
        text = report_to_json(r)
    elif fmt == "csv":
        text = report_to_csv(r)
    elif fmt == "text":
        text = report_to_text(r)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
