# exact dense matrices over a number field tower
# numpy object arrays of FieldElem, so @, .T, slicing and np.block all work unchanged
# elimination routines never round: pivots are any nonzero entry

from typing import Callable, List, Optional, Sequence

import numpy as np

from arithlab.core.errors import FieldMismatch, NotInvertible
from arithlab.services.numfield import FieldElem, GaloisChar, NumberField


def matrix(rows: Sequence[Sequence], field: NumberField) -> np.ndarray:
    """Build an object array, coercing ints/Fractions/base elements into the field"""
    data = [[field(x) for x in row] for row in rows]
    out = np.empty((len(data), len(data[0]) if data else 0), dtype=object)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            out[i, j] = x
    return out


def vector(entries: Sequence, field: NumberField) -> np.ndarray:
    out = np.empty(len(entries), dtype=object)
    for i, x in enumerate(entries):
        out[i] = field(x)
    return out


def zeros(n: int, m: int, field: NumberField) -> np.ndarray:
    out = np.empty((n, m), dtype=object)
    out.fill(field.zero())
    return out


def identity(n: int, field: NumberField) -> np.ndarray:
    out = zeros(n, n, field)
    for i in range(n):
        out[i, i] = field.one()
    return out


def diag(entries: Sequence, field: NumberField) -> np.ndarray:
    out = zeros(len(entries), len(entries), field)
    for i, x in enumerate(entries):
        out[i, i] = field(x)
    return out


def block_diag(blocks: Sequence[np.ndarray], field: NumberField) -> np.ndarray:
    size = sum(b.shape[0] for b in blocks)
    out = zeros(size, size, field)
    at = 0
    for b in blocks:
        k = b.shape[0]
        out[at:at + k, at:at + k] = b
        at += k
    return out


def field_of(a: np.ndarray) -> NumberField:
    for x in a.flat:
        if isinstance(x, FieldElem):
            return x.field
    raise FieldMismatch("matrix has no field elements")


def coerce(a: np.ndarray, field: NumberField) -> np.ndarray:
    """Embed every entry into field (e.g. a base-field matrix into a tower)"""
    return np.frompyfunc(field, 1, 1)(a).astype(object)


def entrywise(fn: Callable, a: np.ndarray) -> np.ndarray:
    return np.frompyfunc(fn, 1, 1)(a).astype(object)


def scale(a: np.ndarray, c) -> np.ndarray:
    return entrywise(lambda x: x * c, a)


def equal(a: np.ndarray, b: np.ndarray) -> bool:
    if a.shape != b.shape:
        return False
    return all(x == y for x, y in zip(a.flat, b.flat))


def is_zero(a: np.ndarray) -> bool:
    return all(not x for x in a.flat)


def trace(a: np.ndarray):
    total = field_of(a).zero()
    for i in range(a.shape[0]):
        total = total + a[i, i]
    return total


def galois_map(sigma: GaloisChar, a: np.ndarray) -> np.ndarray:
    """Apply a Galois character entrywise"""
    return np.frompyfunc(sigma.apply, 1, 1)(a).astype(object)


def reversal(n: int, field: NumberField) -> np.ndarray:
    """Antidiagonal permutation matrix"""
    out = zeros(n, n, field)
    for i in range(n):
        out[i, n - 1 - i] = field.one()
    return out


def power(a: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return power(inverse(a), -k)
    result = identity(a.shape[0], field_of(a))
    base = a
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def rref(a: np.ndarray):
    """
    Reduced row echelon form

    Returns:
        (R, pivot columns)
    """
    r = a.copy()
    rows, cols = r.shape
    pivots: List[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        pivot = next((i for i in range(row, rows) if r[i, col]), None)
        if pivot is None:
            continue
        if pivot != row:
            r[[row, pivot]] = r[[pivot, row]]
        inv = r[row, col].inverse()
        r[row] = r[row] * inv
        for i in range(rows):
            if i != row and r[i, col]:
                r[i] = r[i] - r[row] * r[i, col]
        pivots.append(col)
        row += 1
    return r, pivots


def rank(a: np.ndarray) -> int:
    return len(rref(a)[1])


def nullspace(a: np.ndarray) -> List[np.ndarray]:
    """Basis of {x : a @ x = 0} as a list of vectors"""
    field = field_of(a)
    r, pivots = rref(a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.empty(cols, dtype=object)
        v.fill(field.zero())
        v[f] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -r[i, f]
        basis.append(v)
    return basis


def det(a: np.ndarray):
    """Determinant by Gaussian elimination with exact field division"""
    field = field_of(a)
    m = a.copy()
    n = m.shape[0]
    result = field.one()
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i, col]), None)
        if pivot is None:
            return field.zero()
        if pivot != col:
            m[[col, pivot]] = m[[pivot, col]]
            result = -result
        result = result * m[col, col]
        inv = m[col, col].inverse()
        for i in range(col + 1, n):
            if m[i, col]:
                m[i] = m[i] - m[col] * (m[i, col] * inv)
    return result


def inverse(a: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse; raises NotInvertible for singular input"""
    n = a.shape[0]
    if a.shape != (n, n):
        raise NotInvertible(f"non-square matrix of shape {a.shape}")
    field = field_of(a)
    aug = np.concatenate([a, identity(n, field)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise NotInvertible("matrix is singular")
    return r[:, n:]


def proj_normalize(a: np.ndarray) -> np.ndarray:
    """Scale so the first nonzero entry in row-major order is 1"""
    lead = next((x for x in a.flat if x), None)
    if lead is None:
        return a.copy()
    return scale(a, lead.inverse())


def proj_equal(a: np.ndarray, b: np.ndarray) -> bool:
    return equal(proj_normalize(a), proj_normalize(b))


def scalar_ratio(a: np.ndarray, b: np.ndarray):
    """c with a = c*b when a and b are proportional, else None"""
    if a.shape != b.shape:
        return None
    idx = next((i for i, x in enumerate(b.flat) if x), None)
    if idx is None:
        return None
    c = a.flat[idx] / b.flat[idx]
    return c if equal(a, scale(b, c)) else None


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """[a, b] = a b a^-1 b^-1"""
    return a @ b @ inverse(a) @ inverse(b)


def vec(a: np.ndarray) -> np.ndarray:
    """Row-major flattening into a vector"""
    return a.reshape(-1).copy()


def unvec(v: np.ndarray, n: int, m: int) -> np.ndarray:
    return np.array(v, dtype=object).reshape(n, m)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    field = field_of(b)
    n, m = a.shape
    p, q = b.shape
    out = zeros(n * p, m * q, field)
    for i in range(n):
        for j in range(m):
            if a[i, j]:
                out[i * p:(i + 1) * p, j * q:(j + 1) * q] = b * a[i, j]
    return out
