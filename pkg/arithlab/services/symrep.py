# the irreducible n-dimensional representation of SL(2)
# tau_n acts on homogeneous polynomials of degree n-1 in X, Y
# basis order is X^{n-1}, X^{n-2}Y, ..., Y^{n-1}; J_n and the trace polynomial live here too

import logging
from dataclasses import dataclass
from math import factorial
from typing import List, Sequence

import numpy as np

from arithlab.core.errors import InputError, NotInvertible
from arithlab.services.numfield import NumberField
from arithlab.utils import matrices as mx

logger = logging.getLogger(__name__)


def poly_mul(p: Sequence, q: Sequence, zero) -> List:
    out = [zero] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if not x:
            continue
        for j, y in enumerate(q):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def poly_pow(p: Sequence, k: int, one, zero) -> List:
    result = [one]
    for _ in range(k):
        result = poly_mul(result, p, zero)
    return result


def tau(n: int, m: np.ndarray) -> np.ndarray:
    """
    tau_n(M) for a 2x2 matrix M = [[a, b], [c, d]]

    Column j holds the coefficients of (aX + cY)^{n-1-j} (bX + dY)^j,
    row i being the coefficient of X^{n-1-i} Y^i. GL(2) inputs are accepted.
    """
    if n < 1:
        raise InputError("tau needs n >= 1")
    field = mx.field_of(m)
    if not mx.det(m):
        raise NotInvertible("tau of a singular matrix")
    a, b = m[0, 0], m[0, 1]
    c, d = m[1, 0], m[1, 1]
    one, zero = field.one(), field.zero()
    # polynomials in Y with X eliminated by homogeneity
    first = [a, c]
    second = [b, d]
    out = mx.zeros(n, n, field)
    for j in range(n):
        col = poly_mul(poly_pow(first, n - 1 - j, one, zero), poly_pow(second, j, one, zero), zero)
        for i, x in enumerate(col):
            out[i, j] = x
    return out


def tau_lie(n: int, x: np.ndarray) -> np.ndarray:
    """Derivative of tau_n at the identity in the direction of a 2x2 matrix"""
    field = mx.field_of(x)
    out = mx.zeros(n, n, field)
    for j in range(n):
        # d/de of (X + e(x11 X + x21 Y))^{n-1-j} (Y + e(x12 X + x22 Y))^j
        out[j, j] = out[j, j] + (n - 1 - j) * x[0, 0] + j * x[1, 1]
        if j + 1 < n:
            out[j + 1, j] = out[j + 1, j] + (n - 1 - j) * x[1, 0]
        if j >= 1:
            out[j - 1, j] = out[j - 1, j] + j * x[0, 1]
    return out


def j_form(n: int, field: NumberField) -> np.ndarray:
    """Antidiagonal form with entry (i, n+1-i) = (-1)^{i-1} (n-i)! (i-1)! (1-indexed)"""
    if n < 2:
        raise InputError("J_n needs n >= 2")
    out = mx.zeros(n, n, field)
    for r in range(n):
        out[r, n - 1 - r] = field((-1) ** r * factorial(n - 1 - r) * factorial(r))
    return out


def check_invariance(n: int, m: np.ndarray) -> bool:
    """tau_n(M)^T J_n tau_n(M) == J_n"""
    field = mx.field_of(m)
    t = tau(n, m)
    j = j_form(n, field)
    if not mx.equal(t.T @ j @ t, j):
        logger.debug(f"tau_{n} image does not preserve J_{n} over {field}")
        return False
    return True


@dataclass(frozen=True)
class TracePoly:
    """Phi_n with Tr tau_n(M) = Phi_n(Tr M) on SL(2); coeffs in ascending degree"""
    n: int
    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t):
        # Horner, works for field elements, galois arrays and ints alike
        acc = self.coeffs[-1] + 0 * t
        for c in reversed(self.coeffs[:-1]):
            acc = acc * t + c
        return acc


def trace_poly(n: int) -> TracePoly:
    """Phi_1 = 1, Phi_2 = t, Phi_{k+1} = t Phi_k - Phi_{k-1}"""
    if n < 1:
        raise InputError("trace polynomial needs n >= 1")
    prev, cur = [1], [0, 1]
    if n == 1:
        return TracePoly(1, (1,))
    for _ in range(n - 2):
        shifted = [0] + cur
        padded = prev + [0] * (len(shifted) - len(prev))
        prev, cur = cur, [s - p for s, p in zip(shifted, padded)]
    return TracePoly(n, tuple(cur))


def phi_eval(n: int, t):
    return trace_poly(n)(t)


def signature_pattern(n: int):
    """Expected signature of J_n for odd n = 2k+1: (k+1, k) for k even, (k, k+1) for k odd"""
    if n % 2 == 0:
        raise InputError("J_n is alternating for even n")
    k = (n - 1) // 2
    return (k + 1, k) if k % 2 == 0 else (k, k + 1)
