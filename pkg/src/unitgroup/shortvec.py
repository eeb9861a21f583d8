"""Exact short-vector enumeration for positive definite Gram matrices.

Everything here is exact: LLL runs on the Gram matrix itself with rational
(or embedded number field) arithmetic, and the enumeration avoids square
roots by testing the quadratic partial sums directly.  Scalars are either
gmpy2 rationals or field elements; comparisons go through the domain's
sign function, so irrational Gram entries are handled exactly.

Vectors come back in canonical sign (first nonzero coordinate positive),
one representative per +-pair, sorted, which keeps every downstream
computation deterministic.
"""

from gmpy2 import mpq

from .errors import NotPositive


def nearest_int(x, domain):
    """Closest integer to a scalar, exactly (ties go up)."""
    if domain.degree == 1:
        num, den = x.numerator, x.denominator
        return int((2 * num + den) // (2 * den))
    n = round(domain.approx_float(x))
    half = mpq(1, 2)
    while (x - n) > half:
        n += 1
    while (x - n) < -half:
        n -= 1
    return n


def _gso(G, domain):
    """Exact Gram-Schmidt data: squared norms d and coefficients mu."""
    n = len(G)
    zero = domain.zero
    mu = [[zero] * n for _ in range(n)]
    d = [zero] * n
    for i in range(n):
        for j in range(i):
            acc = G[i][j]
            for t in range(j):
                if mu[i][t] and mu[j][t] and d[t]:
                    acc = acc - mu[i][t] * mu[j][t] * d[t]
            mu[i][j] = acc / d[j]
        acc = G[i][i]
        for t in range(i):
            if mu[i][t] and d[t]:
                acc = acc - mu[i][t] * mu[i][t] * d[t]
        d[i] = acc
        if domain.sign_of(acc) <= 0:
            raise NotPositive("Gram matrix is not positive definite")
    return d, mu


def _apply_row_op(G, U, k, j, x):
    # basis_k -= x * basis_j, congruence update of the Gram
    n = len(G)
    for t in range(n):
        G[k][t] = G[k][t] - x * G[j][t]
    for t in range(n):
        G[t][k] = G[t][k] - x * G[t][j]
    U[k] = [a - x * b for a, b in zip(U[k], U[j])]


def _swap_rows(G, U, k):
    G[k], G[k - 1] = G[k - 1], G[k]
    for row in G:
        row[k], row[k - 1] = row[k - 1], row[k]
    U[k], U[k - 1] = U[k - 1], U[k]


def lll_transform(gram_rows, domain, delta=mpq(99, 100)):
    """LLL-reduce a PD Gram matrix; returns (reduced_gram, U) with
    U integer rows and reduced = U G U^T."""
    n = len(gram_rows)
    G = [list(r) for r in gram_rows]
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    delta = domain.from_rational(delta)
    k = 1
    guard = 0
    while k < n:
        guard += 1
        if guard > 10000:
            raise NotPositive("LLL failed to terminate; bad Gram input")
        d, mu = _gso(G, domain)
        for j in range(k - 1, -1, -1):
            x = nearest_int(mu[k][j], domain)
            if x:
                _apply_row_op(G, U, k, j, x)
                d, mu = _gso(G, domain)
        m = mu[k][k - 1]
        lhs = d[k]
        rhs = (delta - m * m) * d[k - 1]
        if domain.sign_of(lhs - rhs) < 0:
            _swap_rows(G, U, k)
            k = max(k - 1, 1)
        else:
            k += 1
    return G, [tuple(int(x) for x in row) for row in U]


def _enumerate(d, mu, bound, domain):
    """All nonzero x with Q(x) <= bound for the GSO data, both signs."""
    n = len(d)
    out = []
    x = [0] * n

    def level_sum(i):
        acc = domain.zero
        for j in range(i + 1, n):
            if x[j]:
                acc = acc + mu[j][i] * x[j]
        return acc

    def descend(i, remaining):
        if i < 0:
            if any(x):
                out.append((tuple(x), bound - remaining))
            return
        c = level_sum(i)
        center = nearest_int(-c, domain)
        for direction in (1, -1):
            xi = center if direction == 1 else center - 1
            while True:
                t = xi + c
                used = d[i] * t * t
                if domain.sign_of(used - remaining) > 0:
                    break
                x[i] = xi
                descend(i - 1, remaining - used)
                xi += direction
        x[i] = 0

    descend(n - 1, bound)
    return out


def canonical_sign(vec):
    for v in vec:
        if v > 0:
            return tuple(vec)
        if v < 0:
            return tuple(-a for a in vec)
    return tuple(vec)


def enumerate_up_to(gram_rows, bound, domain):
    """Nonzero lattice vectors with form value <= bound.

    Returns a sorted list of (vector, value) with one canonical
    representative per +-pair.
    """
    reduced, U = lll_transform(gram_rows, domain)
    d, mu = _gso(reduced, domain)
    raw = _enumerate(d, mu, bound, domain)
    n = len(gram_rows)
    seen = {}
    for y, val in raw:
        vec = canonical_sign(
            [sum(y[i] * U[i][j] for i in range(n)) for j in range(n)])
        if vec not in seen:
            seen[vec] = val
    return sorted(seen.items())


def minimal_vectors(gram_rows, domain):
    """(minimum, vectors) of a PD Gram matrix, vectors canonical-sorted."""
    reduced, U = lll_transform(gram_rows, domain)
    d, mu = _gso(reduced, domain)
    bound = reduced[0][0]
    for i in range(1, len(reduced)):
        if domain.sign_of(reduced[i][i] - bound) < 0:
            bound = reduced[i][i]
    raw = _enumerate(d, mu, bound, domain)
    minimum = None
    for _, val in raw:
        if minimum is None or domain.sign_of(val - minimum) < 0:
            minimum = val
    n = len(gram_rows)
    seen = set()
    for y, val in raw:
        if domain.sign_of(val - minimum) == 0:
            vec = canonical_sign(
                [sum(y[i] * U[i][j] for i in range(n)) for j in range(n)])
            seen.add(vec)
    return minimum, sorted(seen)


def box_oracle(gram_rows, radius, domain):
    """Brute-force (minimum, vectors) over the integer box; test helper."""
    n = len(gram_rows)
    best = None
    vecs = []

    def value(v):
        acc = domain.zero
        for i in range(n):
            if v[i]:
                for j in range(n):
                    if v[j]:
                        acc = acc + gram_rows[i][j] * v[i] * v[j]
        return acc

    def rec(i, v):
        nonlocal best, vecs
        if i == n:
            if not any(v):
                return
            val = value(v)
            can = canonical_sign(v)
            if best is None or domain.sign_of(val - best) < 0:
                best, vecs = val, [can]
            elif domain.sign_of(val - best) == 0 and can not in vecs:
                vecs.append(can)
            return
        for x in range(-radius, radius + 1):
            v[i] = x
            rec(i + 1, v)
        v[i] = 0

    rec(0, [0] * n)
    return best, sorted(set(vecs))
