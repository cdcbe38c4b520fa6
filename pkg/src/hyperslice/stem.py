"""Stem functions: maps from a conjugation-symmetric set D in C^n into A (x) C.

A stem function F is *intrinsic* when F(conj z) = complex_conjugate(F(z)); only
intrinsic stems induce well-defined slice functions.  The even-odd splitting
F = F1 + i F2 gives the two algebra-valued components used everywhere else.

Two concrete representations coexist:

  * StemPolynomial: finitely many monomials z^mu with algebra coefficients on
    the right.  These are automatically intrinsic, have exact Wirtinger
    derivatives, and evaluate in vectorized form over large node sets.
  * StemFunction: an arbitrary evaluator with optional batch and derivative
    hooks, a smoothness grade, and a sampling domain.

Wirtinger derivatives fall back to central finite differences with step
DEFAULT_FD_STEP when no exact hook is present.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .algebra import (
    AlgebraElement,
    AlgebraMismatchError,
    AlgebraTag,
    element,
    multiply,
    parse_algebra,
    zero,
)
from .complexified import (
    ComplexifiedElement,
    c_multiply,
    c_multiply_batch,
    complex_conjugate,
    times_i,
)

__all__ = [
    "DEFAULT_FD_STEP",
    "Smoothness",
    "Domain",
    "StemFunction",
    "StemPolynomial",
    "stem_polynomial",
    "monomial",
    "coordinate",
    "constant_poly",
    "poly_product",
    "evaluate_stem",
    "evaluate_stem_batch",
    "decompose_stem",
    "StemComponents",
    "check_intrinsic",
    "IntrinsicReport",
    "wirtinger",
    "WirtingerPair",
    "wirtinger_batch",
    "is_holomorphic",
    "HolomorphyReport",
    "stem_product",
    "restrict_stem",
    "stem_polynomial_to_json",
    "stem_polynomial_from_json",
    "load_polynomials",
]

DEFAULT_FD_STEP = 1e-5


class Smoothness(enum.IntEnum):
    CONTINUOUS = 0
    C1 = 1
    ANALYTIC = 2


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Domain:
    """A conjugation-symmetric sampling region: membership predicate plus a polydisc box.

    The box drives sampling; the predicate rejects (e.g. annulus holes).  Both
    must be invariant under z -> conj(z) for stems to make sense on it.
    """

    centers: np.ndarray
    radii: np.ndarray
    predicate: Callable[[np.ndarray], bool] | None = None

    def __post_init__(self) -> None:
        c = np.asarray(self.centers, dtype=np.float64)
        r = np.asarray(self.radii, dtype=np.float64)
        if c.shape != r.shape or c.ndim != 1:
            raise ValueError("centers and radii must be 1-d arrays of equal length")
        if np.any(r <= 0.0):
            raise ValueError("radii must be positive")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)

    @property
    def arity(self) -> int:
        return self.centers.shape[0]

    def contains(self, z: np.ndarray) -> bool:
        z = np.asarray(z, dtype=np.complex128)
        if np.any(np.abs(z - self.centers) > self.radii):
            return False
        if self.predicate is not None and not self.predicate(z):
            return False
        return True

    def sample_symmetric(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Points z with both z and conj(z) inside the domain, shape (count, n)."""
        out = np.empty((count, self.arity), dtype=np.complex128)
        got = 0
        while got < count:
            re = rng.uniform(-1.0, 1.0, self.arity) * self.radii + self.centers
            im = rng.uniform(-1.0, 1.0, self.arity) * self.radii
            z = re + 1j * im
            if self.contains(z) and self.contains(np.conj(z)):
                out[got] = z
                got += 1
        return out

    @classmethod
    def polydisc(cls, radii, centers=None) -> "Domain":
        r = np.asarray(radii, dtype=np.float64)
        c = np.zeros_like(r) if centers is None else np.asarray(centers, dtype=np.float64)
        return cls(c, r)

    @classmethod
    def annulus(cls, inner: float, outer: float) -> "Domain":
        # one-variable ring; conjugation symmetric by construction
        if not 0.0 < inner < outer:
            raise ValueError("need 0 < inner < outer")
        return cls(
            np.zeros(1),
            np.array([outer]),
            predicate=lambda z: bool(np.abs(z[0]) >= inner),
        )


def _default_domain(arity: int) -> Domain:
    return Domain.polydisc(np.full(arity, 1.2))


# ---------------------------------------------------------------------------
# stem containers


@dataclass(frozen=True, eq=False)
class StemFunction:
    """A stem function given by an evaluator z -> A (x) C.

    Optional hooks:
      wirtinger_evaluator(z, t) -> (dF/dz_t, dF/dzbar_t) as ComplexifiedElements
      batch_evaluator(Z) -> (F1, F2) arrays of shape (N, dim) for Z of shape (N, n)
      batch_wirtinger(Z, t) -> ((dz_F1, dz_F2), (dzbar_F1, dzbar_F2)) arrays
    """

    arity: int
    tag: AlgebraTag
    evaluator: Callable[[np.ndarray], ComplexifiedElement]
    smoothness: Smoothness = Smoothness.C1
    wirtinger_evaluator: Callable | None = None
    batch_evaluator: Callable | None = None
    batch_wirtinger: Callable | None = None
    domain: Domain | None = None
    intrinsic: bool = True

    def __post_init__(self) -> None:
        if self.arity < 1:
            raise ValueError("arity must be >= 1")

    def __call__(self, z) -> ComplexifiedElement:
        return evaluate_stem(self, z)


@dataclass(frozen=True, eq=False)
class StemPolynomial:
    """sum_mu z^mu a_mu with multi-indices mu and algebra coefficients a_mu on the right.

    Such stems are intrinsic for free: z^mu conjugates to conj(z^mu) and the
    coefficients are untouched by complex conjugation on A (x) C.
    """

    tag: AlgebraTag
    arity: int
    terms: dict

    @property
    def degree(self) -> int:
        return max((sum(mu) for mu in self.terms), default=0)

    def evaluate(self, z) -> ComplexifiedElement:
        z = np.asarray(z, dtype=np.complex128).reshape(self.arity)
        re = np.zeros(self.tag.dim)
        im = np.zeros(self.tag.dim)
        for mu, coeff in self.terms.items():
            w = complex(np.prod(z**np.asarray(mu)))
            re += w.real * coeff.coeffs
            im += w.imag * coeff.coeffs
        return ComplexifiedElement(element(self.tag, re), element(self.tag, im))

    def evaluate_batch(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(F1, F2) arrays of shape (N, dim); powers are accumulated once per axis."""
        Z = np.asarray(Z, dtype=np.complex128)
        N = Z.shape[0]
        dim = self.tag.dim
        F1 = np.zeros((N, dim))
        F2 = np.zeros((N, dim))
        if not self.terms:
            return F1, F2
        max_deg = [0] * self.arity
        for mu in self.terms:
            for t, m in enumerate(mu):
                max_deg[t] = max(max_deg[t], m)
        powers = []
        for t in range(self.arity):
            P = np.empty((N, max_deg[t] + 1), dtype=np.complex128)
            P[:, 0] = 1.0
            for m in range(1, max_deg[t] + 1):
                P[:, m] = P[:, m - 1] * Z[:, t]
            powers.append(P)
        for mu, coeff in self.terms.items():
            w = np.ones(N, dtype=np.complex128)
            for t, m in enumerate(mu):
                if m:
                    w = w * powers[t][:, m]
            F1 += np.real(w)[:, None] * coeff.coeffs[None, :]
            F2 += np.imag(w)[:, None] * coeff.coeffs[None, :]
        return F1, F2

    def wirtinger_poly(self, t: int) -> "StemPolynomial":
        """Exact dF/dz_t as a polynomial; dF/dzbar_t is identically zero."""
        if not 0 <= t < self.arity:
            raise ValueError(f"axis {t} out of range for arity {self.arity}")
        out: dict = {}
        for mu, coeff in self.terms.items():
            if mu[t] == 0:
                continue
            nu = list(mu)
            nu[t] -= 1
            nu = tuple(nu)
            prev = out.get(nu)
            scaled = coeff * float(mu[t])
            out[nu] = scaled if prev is None else prev + scaled
        return stem_polynomial(self.tag, self.arity, out)

    def __add__(self, other: "StemPolynomial") -> "StemPolynomial":
        if self.tag != other.tag or self.arity != other.arity:
            raise AlgebraMismatchError("polynomial stems with different tag or arity")
        out = dict(self.terms)
        for mu, coeff in other.terms.items():
            out[mu] = out[mu] + coeff if mu in out else coeff
        return stem_polynomial(self.tag, self.arity, out)

    def __neg__(self) -> "StemPolynomial":
        return stem_polynomial(self.tag, self.arity, {mu: -c for mu, c in self.terms.items()})

    def __sub__(self, other: "StemPolynomial") -> "StemPolynomial":
        return self + (-other)

    def as_stem(self) -> StemFunction:
        def _wirt(z, t, _p=self):
            dz = _p.wirtinger_poly(t).evaluate(z)
            dzero = ComplexifiedElement(zero(_p.tag), zero(_p.tag))
            return dz, dzero

        def _batch_wirt(Z, t, _p=self):
            d = _p.wirtinger_poly(t).evaluate_batch(Z)
            zeros_pair = (np.zeros_like(d[0]), np.zeros_like(d[1]))
            return d, zeros_pair

        return StemFunction(
            arity=self.arity,
            tag=self.tag,
            evaluator=self.evaluate,
            smoothness=Smoothness.ANALYTIC,
            wirtinger_evaluator=_wirt,
            batch_evaluator=self.evaluate_batch,
            batch_wirtinger=_batch_wirt,
            domain=_default_domain(self.arity),
            intrinsic=True,
        )


def stem_polynomial(tag: AlgebraTag, arity: int, terms: dict) -> StemPolynomial:
    """Validate and normalize a term map; zero coefficients are dropped."""
    norm_terms: dict = {}
    for mu, coeff in terms.items():
        mu = tuple(int(m) for m in mu)
        if len(mu) != arity or any(m < 0 for m in mu):
            raise ValueError(f"bad multi-index {mu} for arity {arity}")
        if not isinstance(coeff, AlgebraElement):
            coeff = element(tag, coeff)
        if coeff.tag != tag:
            raise AlgebraMismatchError("coefficient from a different algebra")
        if coeff.norm() > 0.0:
            norm_terms[mu] = coeff
    ordered = dict(sorted(norm_terms.items()))
    return StemPolynomial(tag=tag, arity=arity, terms=ordered)


def monomial(tag: AlgebraTag, arity: int, mu, coeff) -> StemPolynomial:
    return stem_polynomial(tag, arity, {tuple(mu): coeff})


def coordinate(tag: AlgebraTag, arity: int, t: int) -> StemPolynomial:
    mu = [0] * arity
    mu[t] = 1
    c = np.zeros(tag.dim)
    c[0] = 1.0
    return monomial(tag, arity, mu, c)


def constant_poly(tag: AlgebraTag, arity: int, coeff) -> StemPolynomial:
    return monomial(tag, arity, (0,) * arity, coeff)


def poly_product(p: StemPolynomial, q: StemPolynomial) -> StemPolynomial:
    """Coefficient convolution: the gamma coefficient is sum over mu+nu=gamma of a_mu b_nu.

    Factor order a_mu * b_nu is preserved; the base algebra is noncommutative.
    """
    if p.tag != q.tag or p.arity != q.arity:
        raise AlgebraMismatchError("polynomial stems with different tag or arity")
    out: dict = {}
    for mu, a in p.terms.items():
        for nu, b in q.terms.items():
            gamma = tuple(m + n for m, n in zip(mu, nu))
            ab = multiply(a, b)
            out[gamma] = out[gamma] + ab if gamma in out else ab
    return stem_polynomial(p.tag, p.arity, out)


# ---------------------------------------------------------------------------
# evaluation and component extraction


def evaluate_stem(F, z) -> ComplexifiedElement:
    if isinstance(F, StemPolynomial):
        return F.evaluate(z)
    z = np.asarray(z, dtype=np.complex128).reshape(F.arity)
    return F.evaluator(z)


def evaluate_stem_batch(F, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Evaluate at all rows of Z, returning (F1, F2) component arrays of shape (N, dim)."""
    Z = np.asarray(Z, dtype=np.complex128)
    if isinstance(F, StemPolynomial):
        return F.evaluate_batch(Z)
    if F.batch_evaluator is not None:
        F1, F2 = F.batch_evaluator(Z)
        return np.asarray(F1, dtype=np.float64), np.asarray(F2, dtype=np.float64)
    dim = F.tag.dim
    F1 = np.empty((Z.shape[0], dim))
    F2 = np.empty((Z.shape[0], dim))
    for k in range(Z.shape[0]):
        w = F.evaluator(Z[k])
        F1[k] = w.re.coeffs
        F2[k] = w.im.coeffs
    return F1, F2


class StemComponents(NamedTuple):
    even: AlgebraElement
    odd: AlgebraElement
    components: np.ndarray  # complex (dim,), entry k is F1_k + i F2_k


def decompose_stem(F, z) -> StemComponents:
    w = evaluate_stem(F, z)
    return StemComponents(w.re, w.im, w.re.coeffs + 1j * w.im.coeffs)


class IntrinsicReport(NamedTuple):
    max_violation: float
    passed: bool
    samples_checked: int


def _stem_samples(F, rng: np.random.Generator, count: int) -> np.ndarray:
    dom = getattr(F, "domain", None) or _default_domain(F.arity if hasattr(F, "arity") else 1)
    return dom.sample_symmetric(rng, count)


def check_intrinsic(F, samples=None, tol: float = 1e-10, rng=None) -> IntrinsicReport:
    """Max of |F(conj z) - complex_conjugate(F(z))| over the sample set."""
    if samples is None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(0)
        samples = _stem_samples(F, gen, 32)
    worst = 0.0
    count = 0
    for z in samples:
        lhs = evaluate_stem(F, np.conj(z))
        rhs = complex_conjugate(evaluate_stem(F, z))
        worst = max(worst, (lhs - rhs).norm())
        count += 1
    return IntrinsicReport(worst, worst <= tol, count)


# ---------------------------------------------------------------------------
# derivatives


class WirtingerPair(NamedTuple):
    dz: ComplexifiedElement
    dzbar: ComplexifiedElement


def wirtinger(F, z, t: int, h: float = DEFAULT_FD_STEP) -> WirtingerPair:
    """(dF/dz_t, dF/dzbar_t); exact for polynomials, else hook or central differences."""
    arity = F.arity
    if not 0 <= t < arity:
        raise ValueError(f"axis {t} out of range for arity {arity}")
    if isinstance(F, StemPolynomial):
        dz = F.wirtinger_poly(t).evaluate(z)
        return WirtingerPair(dz, ComplexifiedElement(zero(F.tag), zero(F.tag)))
    if F.wirtinger_evaluator is not None:
        dz, dzbar = F.wirtinger_evaluator(np.asarray(z, dtype=np.complex128), t)
        return WirtingerPair(dz, dzbar)
    z = np.asarray(z, dtype=np.complex128).reshape(arity)
    step_re = np.zeros(arity, dtype=np.complex128)
    step_re[t] = h
    step_im = np.zeros(arity, dtype=np.complex128)
    step_im[t] = 1j * h
    dalpha = (evaluate_stem(F, z + step_re) - evaluate_stem(F, z - step_re)) * (0.5 / h)
    dbeta = (evaluate_stem(F, z + step_im) - evaluate_stem(F, z - step_im)) * (0.5 / h)
    dz = (dalpha - times_i(dbeta)) * 0.5
    dzbar = (dalpha + times_i(dbeta)) * 0.5
    return WirtingerPair(dz, dzbar)


def wirtinger_batch(F, Z: np.ndarray, t: int, h: float = DEFAULT_FD_STEP):
    """Batched derivatives: ((dz_F1, dz_F2), (dzbar_F1, dzbar_F2)) of shape (N, dim) each."""
    Z = np.asarray(Z, dtype=np.complex128)
    if isinstance(F, StemPolynomial):
        d = F.wirtinger_poly(t).evaluate_batch(Z)
        zeros_pair = (np.zeros_like(d[0]), np.zeros_like(d[1]))
        return d, zeros_pair
    if F.batch_wirtinger is not None:
        return F.batch_wirtinger(Z, t)
    step_re = np.zeros(F.arity, dtype=np.complex128)
    step_re[t] = h
    step_im = np.zeros(F.arity, dtype=np.complex128)
    step_im[t] = 1j * h
    ap1, ap2 = evaluate_stem_batch(F, Z + step_re)
    am1, am2 = evaluate_stem_batch(F, Z - step_re)
    bp1, bp2 = evaluate_stem_batch(F, Z + step_im)
    bm1, bm2 = evaluate_stem_batch(F, Z - step_im)
    da1, da2 = (ap1 - am1) * (0.5 / h), (ap2 - am2) * (0.5 / h)
    db1, db2 = (bp1 - bm1) * (0.5 / h), (bp2 - bm2) * (0.5 / h)
    # i*(w1 + i w2) = -w2 + i w1
    dz = (0.5 * (da1 + db2), 0.5 * (da2 - db1))
    dzbar = (0.5 * (da1 - db2), 0.5 * (da2 + db1))
    return dz, dzbar


class HolomorphyReport(NamedTuple):
    max_residual: float
    passed: bool
    samples_checked: int


def is_holomorphic(F, samples=None, tol: float = 1e-6, rng=None, h: float = DEFAULT_FD_STEP) -> HolomorphyReport:
    """Max |dF/dzbar_t| over all axes and samples."""
    if samples is None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(0)
        samples = _stem_samples(F, gen, 16)
    worst = 0.0
    count = 0
    arity = F.arity
    for z in samples:
        for t in range(arity):
            worst = max(worst, wirtinger(F, z, t, h=h).dzbar.norm())
        count += 1
    return HolomorphyReport(worst, worst <= tol, count)


# ---------------------------------------------------------------------------
# products and restrictions


def stem_product(F, G):
    """Pointwise product in A (x) C; polynomial inputs stay polynomial."""
    if isinstance(F, StemPolynomial) and isinstance(G, StemPolynomial):
        return poly_product(F, G)
    Fs = F.as_stem() if isinstance(F, StemPolynomial) else F
    Gs = G.as_stem() if isinstance(G, StemPolynomial) else G
    if Fs.tag != Gs.tag or Fs.arity != Gs.arity:
        raise AlgebraMismatchError("stems with different tag or arity")
    tag = Fs.tag

    def _eval(z):
        return c_multiply(Fs.evaluator(z), Gs.evaluator(z))

    batch = None
    if Fs.batch_evaluator is not None and Gs.batch_evaluator is not None:
        def batch(Z):
            return c_multiply_batch(tag, Fs.batch_evaluator(Z), Gs.batch_evaluator(Z))

    wirt = None
    if Fs.wirtinger_evaluator is not None and Gs.wirtinger_evaluator is not None:
        def wirt(z, t):
            # Leibniz in the commutative-scalar variable: both conjugate types
            f = Fs.evaluator(z)
            g = Gs.evaluator(z)
            df = Fs.wirtinger_evaluator(z, t)
            dg = Gs.wirtinger_evaluator(z, t)
            dz = c_multiply(df[0], g) + c_multiply(f, dg[0])
            dzbar = c_multiply(df[1], g) + c_multiply(f, dg[1])
            return dz, dzbar

    return StemFunction(
        arity=Fs.arity,
        tag=tag,
        evaluator=_eval,
        smoothness=Smoothness(min(Fs.smoothness, Gs.smoothness)),
        wirtinger_evaluator=wirt,
        batch_evaluator=batch,
        batch_wirtinger=None,
        domain=Fs.domain or Gs.domain,
        intrinsic=Fs.intrinsic and Gs.intrinsic,
    )


def restrict_stem(F, axis: int, anchors) -> "StemFunction | StemPolynomial":
    """Freeze every variable except `axis` at the anchor values.

    Off-axis anchors with nonzero imaginary part destroy intrinsicity (the
    anchored set is no longer conjugation symmetric); the restriction is still
    returned but flagged intrinsic=False.  Polynomial stems with real anchors
    restrict to one-variable polynomial stems.
    """
    arity = F.arity
    if not 0 <= axis < arity:
        raise ValueError(f"axis {axis} out of range for arity {arity}")
    a = np.asarray(anchors, dtype=np.complex128).reshape(arity)
    off_axis_real = all(abs(a[k].imag) <= 1e-12 for k in range(arity) if k != axis)

    if isinstance(F, StemPolynomial) and off_axis_real:
        out: dict = {}
        for mu, coeff in F.terms.items():
            w = 1.0
            for k, m in enumerate(mu):
                if k != axis and m:
                    w *= float(a[k].real) ** m
            nu = (mu[axis],)
            scaled = coeff * w
            out[nu] = out[nu] + scaled if nu in out else scaled
        return stem_polynomial(F.tag, 1, out)

    Fs = F.as_stem() if isinstance(F, StemPolynomial) else F

    def _inflate(u_vals: np.ndarray) -> np.ndarray:
        Z = np.tile(a, (u_vals.shape[0], 1))
        Z[:, axis] = u_vals
        return Z

    def _eval(z1):
        zz = a.copy()
        zz[axis] = complex(np.asarray(z1).reshape(1)[0])
        return Fs.evaluator(zz)

    batch = None
    if Fs.batch_evaluator is not None:
        def batch(Z1):
            return Fs.batch_evaluator(_inflate(np.asarray(Z1, dtype=np.complex128).reshape(-1)))

    wirt = None
    if Fs.wirtinger_evaluator is not None:
        def wirt(z1, _t):
            zz = a.copy()
            zz[axis] = complex(np.asarray(z1).reshape(1)[0])
            return Fs.wirtinger_evaluator(zz, axis)

    dom = None
    if Fs.domain is not None:
        dom = Domain.polydisc(Fs.domain.radii[axis : axis + 1], Fs.domain.centers[axis : axis + 1])

    return StemFunction(
        arity=1,
        tag=Fs.tag,
        evaluator=_eval,
        smoothness=Fs.smoothness,
        wirtinger_evaluator=wirt,
        batch_evaluator=batch,
        domain=dom,
        intrinsic=Fs.intrinsic and off_axis_real,
    )


# ---------------------------------------------------------------------------
# serialization


def stem_polynomial_to_json(p: StemPolynomial) -> dict:
    return {
        "arity": p.arity,
        "algebra": p.tag.name,
        "terms": [
            {"mu": list(mu), "coeff": [float(v) for v in coeff.coeffs]}
            for mu, coeff in sorted(p.terms.items())
        ],
    }


def stem_polynomial_from_json(data: dict) -> StemPolynomial:
    tag = parse_algebra(data["algebra"])
    terms = {tuple(t["mu"]): element(tag, t["coeff"]) for t in data["terms"]}
    return stem_polynomial(tag, int(data["arity"]), terms)


def load_polynomials(path) -> list[StemPolynomial]:
    """Read one StemPolynomial or a list of them from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if isinstance(data, dict):
        data = [data]
    return [stem_polynomial_from_json(d) for d in data]
