"""Dense exact linear algebra over any exact scalar type.

Works for gmpy2 rationals and for number-field elements alike: the only
requirements are +, -, *, /, truthiness for zero-testing, and (for the
inertia routines) an explicit sign callback.  Matrices are lists of lists,
vectors are lists; nothing here mutates its arguments.
"""

from .errors import DimensionMismatch


def zero_like(x):
    return x - x


def mat_mul(A, B):
    n, k = len(A), len(B)
    m = len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = None
            for t in range(k):
                a = Ai[t]
                if a:
                    term = a * B[t][j]
                    acc = term if acc is None else acc + term
            row.append(acc if acc is not None else zero_like(Ai[0]))
        out.append(row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        acc = zero_like(row[0])
        for a, x in zip(row, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def vec_dot(u, v):
    acc = zero_like(u[0])
    for a, b in zip(u, v):
        if a and b:
            acc = acc + a * b
    return acc


def transpose(A):
    return [list(col) for col in zip(*A)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[c * a for a in row] for row in A]


def identity_like(n, one):
    zero = zero_like(one)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def rref(rows):
    """Reduced row echelon form; returns (new_rows, pivot_columns)."""
    R = [list(r) for r in rows]
    if not R:
        return R, []
    m, n = len(R), len(R[0])
    pivots = []
    r = 0
    for c in range(n):
        pr = None
        for i in range(r, m):
            if R[i][c]:
                pr = i
                break
        if pr is None:
            continue
        R[r], R[pr] = R[pr], R[r]
        inv = R[r][c]
        R[r] = [x / inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return R, pivots


def rank(rows):
    return len(rref(rows)[1])


def kernel(rows):
    """Basis of the right null space, as a list of vectors."""
    if not rows:
        return []
    n = len(rows[0])
    R, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    zero = zero_like(rows[0][0])
    one = None
    for row in rows:
        for x in row:
            if x:
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        one = zero + 1
    basis = []
    for fc in free:
        v = [zero] * n
        v[fc] = one
        for r, pc in enumerate(pivots):
            v[pc] = -R[r][fc]
        basis.append(v)
    return basis


def inverse(A):
    n = len(A)
    if any(len(row) != n for row in A):
        raise DimensionMismatch("inverse of a non-square matrix")
    zero = zero_like(A[0][0])
    one = None
    for row in A:
        for x in row:
            if x:
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        raise ZeroDivisionError("matrix is singular")
    M = [list(r) + [one if i == j else zero for j in range(n)]
         for i, r in enumerate(A)]
    R, pivots = rref(M)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def det(A):
    n = len(A)
    M = [list(r) for r in A]
    if n == 0:
        raise DimensionMismatch("determinant of an empty matrix")
    acc = None
    sign_flips = 0
    for c in range(n):
        pr = None
        for i in range(c, n):
            if M[i][c]:
                pr = i
                break
        if pr is None:
            return zero_like(M[0][0])
        if pr != c:
            M[c], M[pr] = M[pr], M[c]
            sign_flips += 1
        piv = M[c][c]
        acc = piv if acc is None else acc * piv
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] / piv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return -acc if sign_flips % 2 else acc


class LinearSolver:
    """Repeated exact solves against one fixed coefficient matrix.

    Precomputes a row-reduction transform of A once; solve(b) then costs a
    single matrix-vector product plus a consistency check.  Free variables
    are set to zero, so solutions are deterministic.
    """

    def __init__(self, A):
        m = len(A)
        n = len(A[0]) if m else 0
        self.m, self.n = m, n
        zero = zero_like(A[0][0]) if m else None
        one = None
        for row in A:
            for x in row:
                if x:
                    one = x / x
                    break
            if one is not None:
                break
        self._zero = zero
        aug = [list(r) + [one if i == j else zero for j in range(m)]
               for i, r in enumerate(A)] if one is not None else \
              [[zero] * (n + m) for _ in range(m)]
        R, pivots = rref(aug)
        pivots = [p for p in pivots if p < n]
        self.pivots = pivots
        self.rank = len(pivots)
        self.transform = [row[n:] for row in R]
        self.reduced = [row[:n] for row in R]

    def solve(self, b):
        """One solution of A x = b, or None if inconsistent."""
        if len(b) != self.m:
            raise DimensionMismatch("rhs length %d != %d" % (len(b), self.m))
        y = mat_vec(self.transform, b) if self.m else []
        for i in range(self.rank, self.m):
            if y[i]:
                return None
        x = [self._zero] * self.n
        for r, pc in enumerate(self.pivots):
            x[pc] = y[r]
        return x


def inertia(rows, sign):
    """Counts (positive, negative, zero) of a symmetric matrix by exact
    congruence elimination.  Returns None when a hyperbolic block shows up,
    which already certifies the matrix indefinite."""
    n = len(rows)
    A = [list(r) for r in rows]
    pos = neg = null = 0
    active = list(range(n))
    while active:
        piv = None
        for i in active:
            if A[i][i]:
                piv = i
                break
        if piv is None:
            leftover = False
            for ii, i in enumerate(active):
                for j in active[ii + 1:]:
                    if A[i][j]:
                        leftover = True
                        break
                if leftover:
                    break
            if leftover:
                return None
            null += len(active)
            break
        d = A[piv][piv]
        if sign(d) > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if A[i][piv]:
                f = A[i][piv] / d
                for j in active:
                    A[i][j] = A[i][j] - f * A[piv][j]
    return pos, neg, null


def is_positive_definite(rows, sign):
    res = inertia(rows, sign)
    return res is not None and res[0] == len(rows)


def is_positive_semidefinite(rows, sign):
    res = inertia(rows, sign)
    return res is not None and res[1] == 0


def is_negative_semidefinite(rows, sign):
    res = inertia(rows, sign)
    return res is not None and res[0] == 0
