"""Small dense linear algebra over F_ell, scalar (nested tuples) and batched (numpy)."""

from __future__ import annotations

import numpy as np

Matrix = tuple[tuple[int, ...], ...]

# symplectic form x^T J y on F^4, basis order (e1, e2, f1, f2)
J4: Matrix = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))


def as_matrix(rows, ell: int) -> Matrix:
    return tuple(tuple(int(x) % ell for x in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def diag(entries, ell: int) -> Matrix:
    n = len(entries)
    return tuple(tuple(entries[i] % ell if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a))


def mat_mul(a: Matrix, b: Matrix, ell: int) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % ell for col in bt) for row in a)


def mat_scale(a: Matrix, s: int, ell: int) -> Matrix:
    return tuple(tuple(s * x % ell for x in row) for row in a)


def rref(rows, ell: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [[x % ell for x in row] for row in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, ell)
        m[r] = [x * inv % ell for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % ell for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(a, ell: int) -> list[tuple[int, ...]]:
    """Basis of {x : a x = 0}, in reduced echelon form (each vector's first nonzero is 1)."""
    n = len(a[0])
    red, pivots = rref(a, ell)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = -row[f] % ell
        basis.append(v)
    if not basis:
        return []
    red_basis, _ = rref(basis, ell)
    return [tuple(v) for v in red_basis]


def det(a: Matrix, ell: int) -> int:
    m = [list(row) for row in a]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] % ell), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = d * m[c][c] % ell
        inv = pow(m[c][c], -1, ell)
        for i in range(c + 1, n):
            f = m[i][c] * inv % ell
            if f:
                m[i] = [(x - f * y) % ell for x, y in zip(m[i], m[c])]
    return d % ell


def mat_inv(a: Matrix, ell: int) -> Matrix:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, ell)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(row[n:]) for row in red)


def charpoly(a: Matrix, ell: int) -> tuple[int, ...]:
    """
    Coefficients (c_{n-1}, ..., c_0) of det(X I - a), leading 1 omitted.

    Faddeev-LeVerrier over the integers (the divisions are exact there),
    reduced mod ell at the end, so it is valid in every characteristic.
    """
    n = len(a)
    m = [[int(x) for x in row] for row in a]
    coeffs = []
    mk = [[int(i == j) for j in range(n)] for i in range(n)]
    c = 1
    for k in range(1, n + 1):
        if k > 1:
            mk = [[mk[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(m[i][t] * mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
        mk = am
    return tuple(x % ell for x in coeffs)


def symplectic_form(x, y, ell: int) -> int:
    # x^T J y with J = [[0, I], [-I, 0]]
    return (x[0] * y[2] + x[1] * y[3] - x[2] * y[0] - x[3] * y[1]) % ell


# ---------------------------------------------------------------- batched

def bmatmul(a: np.ndarray, b: np.ndarray, ell: int) -> np.ndarray:
    return np.matmul(a, b) % ell


def inverse_table(ell: int) -> np.ndarray:
    inv = np.zeros(ell, dtype=np.int64)
    for x in range(1, ell):
        inv[x] = pow(x, -1, ell)
    return inv


def bdet2(m: np.ndarray, ell: int) -> np.ndarray:
    return (m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]) % ell


def binv2(m: np.ndarray, ell: int) -> np.ndarray:
    dinv = inverse_table(ell)[bdet2(m, ell)]
    adj = np.empty_like(m)
    adj[..., 0, 0] = m[..., 1, 1]
    adj[..., 1, 1] = m[..., 0, 0]
    adj[..., 0, 1] = -m[..., 0, 1]
    adj[..., 1, 0] = -m[..., 1, 0]
    return adj * dinv[..., None, None] % ell


def bcharpoly(m: np.ndarray, ell: int) -> np.ndarray:
    """
    Batched Faddeev-LeVerrier; returns (..., n) array of (c_{n-1}, ..., c_0).

    Runs over Z in int64, so entries must be reduced residues and n <= 4 with
    ell below a few thousand.
    """
    m = m.astype(np.int64)
    n = m.shape[-1]
    eye = np.eye(n, dtype=np.int64)
    mk = np.broadcast_to(eye, m.shape).copy()
    out = []
    c = np.zeros(m.shape[:-2], dtype=np.int64)
    for k in range(1, n + 1):
        if k > 1:
            mk = mk + c[..., None, None] * eye
        am = np.matmul(m, mk)
        tr = np.trace(am, axis1=-2, axis2=-1)
        c = -(tr // k)
        out.append(c % ell)
        mk = am
    return np.stack(out, axis=-1)


def bsymplectic_inverse(m: np.ndarray, mu: np.ndarray, ell: int) -> np.ndarray:
    """Inverse of GSp4 elements: M^{-1} = mu^{-1} J^{-1} M^T J."""
    j = np.array(J4, dtype=np.int64)
    jinv = -j
    muinv = inverse_table(ell)[mu % ell]
    mt = np.swapaxes(m, -1, -2)
    return np.matmul(np.matmul(jinv, mt), j) * muinv[..., None, None] % ell
