"""Dense exact linear algebra over an ExtField.

Matrices are lists of row lists of FieldElement.  Dimensions here stay small
(a few dozen), so simple Gaussian elimination and Faddeev-LeVerrier are the
right tools.
"""

from __future__ import annotations

from .fields import ExtField, FieldElement


def identity(F: ExtField, n: int):
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def mat_mul(F: ExtField, A, B):
    n, m, k = len(A), len(B[0]), len(B)
    out = []
    for i in range(n):
        row = []
        Ai = A[i]
        for j in range(m):
            acc = F.zero
            for t in range(k):
                if Ai[t]:
                    acc = acc + Ai[t] * B[t][j]
            row.append(acc)
        out.append(row)
    return out


def mat_vec(F: ExtField, A, v):
    out = []
    for row in A:
        acc = F.zero
        for a, x in zip(row, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def mat_sub(F: ExtField, A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add_scalar_diag(F: ExtField, A, c: FieldElement):
    out = [list(r) for r in A]
    for i in range(len(A)):
        out[i][i] = out[i][i] + c
    return out


def trace(F: ExtField, A):
    acc = F.zero
    for i in range(len(A)):
        acc = acc + A[i][i]
    return acc


def charpoly(F: ExtField, A):
    """Characteristic polynomial, ascending coefficients, monic of degree n.

    Faddeev-LeVerrier; valid since n < p here.
    """
    n = len(A)
    coeffs = [F.zero] * (n + 1)
    coeffs[n] = F.one
    Mk = identity(F, n)
    cs = []
    for k in range(1, n + 1):
        Mk = mat_mul(F, A, Mk)
        t = trace(F, Mk)
        ck = -(t / F(k))
        cs.append(ck)
        Mk = mat_add_scalar_diag(F, Mk, ck)
    for k, ck in enumerate(cs, start=1):
        coeffs[n - k] = ck
    return coeffs


def rref(F: ExtField, A):
    """Reduced row echelon form; returns (matrix, pivot column list)."""
    m = [list(r) for r in A]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots = []
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if m[r][c]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = m[rank][c].inverse()
        m[rank] = [x * inv for x in m[rank]]
        for r in range(rows):
            if r != rank and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        pivots.append(c)
        rank += 1
        if rank == rows:
            break
    return m, pivots


def rank(F: ExtField, A) -> int:
    return len(rref(F, A)[1])


def kernel(F: ExtField, A):
    """Basis of the right kernel, as a list of column vectors."""
    if not A:
        return []
    m, pivots = rref(F, A)
    cols = len(A[0])
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [F.zero] * cols
        v[fc] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(v)
    return basis


def solve(F: ExtField, A, b):
    """One solution of A x = b, or None if inconsistent."""
    rows = len(A)
    cols = len(A[0]) if rows else 0
    aug = [list(r) + [bb] for r, bb in zip(A, b)]
    m, pivots = rref(F, aug)
    for r in range(len(pivots), rows):
        if m[r][cols]:
            return None
    if pivots and pivots[-1] == cols:
        return None
    x = [F.zero] * cols
    for i, pc in enumerate(pivots):
        x[pc] = m[i][cols]
    return x


def columns_to_matrix(vectors):
    """Column vectors -> matrix whose columns are the vectors."""
    n = len(vectors[0])
    return [[v[i] for v in vectors] for i in range(n)]


def restrict_operator(F: ExtField, T, basis_vectors):
    """Matrix of T on the span of basis_vectors (which must be T-stable).

    Returns the k x k matrix M with T B = B M, columns solved exactly.
    """
    B = columns_to_matrix(basis_vectors)
    cols = []
    for v in basis_vectors:
        tv = mat_vec(F, T, v)
        x = solve(F, B, tv)
        if x is None:
            raise ValueError("subspace is not stable under the operator")
        cols.append(x)
    k = len(basis_vectors)
    return [[cols[j][i] for j in range(k)] for i in range(k)]
