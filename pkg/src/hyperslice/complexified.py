"""The complexification A (x) C of a Cayley-Dickson algebra A.

Elements are pairs w = x + iy with x, y in A and a central imaginary unit i
that commutes with everything.  The product is

    (x + iy)(u + iv) = (xu - yv) + i(xv + yu),

and two conjugations act on w: the c-involution conj(x) + i conj(y) (algebra
conjugation on both parts) and the complex conjugation x - iy.  Stem functions
take values here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .algebra import (
    AlgebraElement,
    AlgebraMismatchError,
    AlgebraTag,
    multiply,
    multiply_batch,
    zero,
    one,
)

__all__ = [
    "ComplexifiedElement",
    "from_algebra",
    "czero",
    "cone",
    "c_multiply",
    "c_multiply_batch",
    "c_involution",
    "complex_conjugate",
    "c_involutions",
    "scalar_action",
    "times_i",
    "c_norm",
]


@dataclass(frozen=True, eq=False)
class ComplexifiedElement:
    """w = re + i*im with re, im in the base algebra."""

    re: AlgebraElement
    im: AlgebraElement

    def __post_init__(self) -> None:
        if self.re.tag != self.im.tag:
            raise AlgebraMismatchError("real and imaginary parts from different algebras")

    @property
    def tag(self) -> AlgebraTag:
        return self.re.tag

    def __add__(self, other: "ComplexifiedElement") -> "ComplexifiedElement":
        return ComplexifiedElement(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexifiedElement") -> "ComplexifiedElement":
        return ComplexifiedElement(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "ComplexifiedElement":
        return ComplexifiedElement(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, ComplexifiedElement):
            return c_multiply(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return ComplexifiedElement(self.re * float(other), self.im * float(other))
        if isinstance(other, complex):
            return scalar_action(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.floating, np.integer)):
            return self.__mul__(other)
        return NotImplemented

    def norm(self) -> float:
        return float(np.hypot(self.re.norm(), self.im.norm()))

    def __repr__(self) -> str:
        return f"<{self.tag.name}_C re={self.re!r} im={self.im!r}>"


def from_algebra(a: AlgebraElement) -> ComplexifiedElement:
    return ComplexifiedElement(a, zero(a.tag))


def czero(tag: AlgebraTag) -> ComplexifiedElement:
    return ComplexifiedElement(zero(tag), zero(tag))


def cone(tag: AlgebraTag) -> ComplexifiedElement:
    return ComplexifiedElement(one(tag), zero(tag))


def c_multiply(w: ComplexifiedElement, v: ComplexifiedElement) -> ComplexifiedElement:
    re = multiply(w.re, v.re) - multiply(w.im, v.im)
    im = multiply(w.re, v.im) + multiply(w.im, v.re)
    return ComplexifiedElement(re, im)


def c_multiply_batch(
    tag: AlgebraTag,
    A: tuple[np.ndarray, np.ndarray],
    B: tuple[np.ndarray, np.ndarray],
) -> tuple[np.ndarray, np.ndarray]:
    """Row-wise complexified product on ((N,dim),(N,dim)) component arrays."""
    a_re, a_im = A
    b_re, b_im = B
    re = multiply_batch(tag, a_re, b_re) - multiply_batch(tag, a_im, b_im)
    im = multiply_batch(tag, a_re, b_im) + multiply_batch(tag, a_im, b_re)
    return re, im


def c_involution(w: ComplexifiedElement) -> ComplexifiedElement:
    """w^c: algebra conjugation applied to both components."""
    return ComplexifiedElement(w.re.conjugate(), w.im.conjugate())


def complex_conjugate(w: ComplexifiedElement) -> ComplexifiedElement:
    """w-bar: negate the central imaginary part."""
    return ComplexifiedElement(w.re, -w.im)


class Involutions(NamedTuple):
    c_inv: ComplexifiedElement
    conj: ComplexifiedElement


def c_involutions(w: ComplexifiedElement) -> Involutions:
    return Involutions(c_involution(w), complex_conjugate(w))


def scalar_action(c: complex, w: ComplexifiedElement) -> ComplexifiedElement:
    """(p + iq) * w with p + iq a central complex scalar."""
    p, q = float(np.real(c)), float(np.imag(c))
    return ComplexifiedElement(w.re * p - w.im * q, w.re * q + w.im * p)


def times_i(w: ComplexifiedElement) -> ComplexifiedElement:
    return ComplexifiedElement(-w.im, w.re)


def c_norm(w: ComplexifiedElement) -> float:
    return w.norm()
