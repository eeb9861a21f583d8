"""Form stabilizers and isometries inside the unit group.

Two engines.  When lattice vectors are invertible algebra elements (rank
one over a division algebra), every isometry g sending F1 to F2 satisfies
g x0 in S(F2) for any fixed minimal vector x0, so the finite candidate
set {y x0^-1} is complete.  Otherwise a backtracking search in the style
of Plesken and Souvignier assigns images to a short independent base,
constrained by the form and by one twisted form per module endomorphism;
preserving the twisted forms forces the map to commute with the full
endomorphism ring, which pins it inside the acting algebra.

All maps returned are exact unit elements of the order.
"""

from gmpy2 import mpq

from . import linalg
from .errors import GroupTooLarge
from .shortvec import enumerate_up_to, minimal_vectors


def bilinear(F, x, y, zero):
    acc = zero
    for i, xi in enumerate(x):
        if xi:
            row = F[i]
            for j, yj in enumerate(y):
                if yj:
                    acc = acc + xi * yj * row[j]
    return acc


def form_minimum(problem, f):
    """(minimum, canonical minimal vectors) of a PD chart form."""
    return minimal_vectors(problem.form_gram_rows(f), problem.domain)


def _division_maps(problem, f_from, f_to, s_from, s_to):
    """Complete isometry candidates when minimal vectors invert.

    Returns None when the shortcut does not apply.
    """
    alg = problem.algebra
    x0 = None
    for x in s_from:
        a = alg.from_img(problem.lattice.vector_image(x))
        if a is None:
            return None
        a_inv = alg.inv(a)
        if a_inv is not None:
            x0 = a_inv
            break
    if x0 is None:
        return None
    out = []
    seen = set()
    for y in s_to:
        b = alg.from_img(problem.lattice.vector_image(y))
        if b is None:
            return None
        for sign in (1, -1):
            g = alg.mul(tuple(sign * c for c in b), x0)
            u = problem.units.try_unit(g)
            if u is None or u.rho in seen:
                continue
            seen.add(u.rho)
            if problem.act_form(u, f_from) == f_to:
                out.append(u)
    return out


def _independent_base(problem, vectors):
    """Greedy prefix of the given vectors completed to a rational basis."""
    B = problem.rank
    base = []
    rows = []
    rank = 0
    pool = list(vectors) + [
        tuple(1 if i == j else 0 for j in range(B)) for i in range(B)]
    for v in pool:
        if rank == B:
            break
        cand = rows + [[mpq(x) for x in v]]
        r = linalg.rank(cand)
        if r > rank:
            rows = cand
            rank = r
            base.append(tuple(v))
    return base


def _backtrack_maps(problem, g_from, g_to, s_from):
    """Integer isometries X with X^T g_to X = g_from that also commute
    with the module endomorphisms.  Yields unimodular X lazily."""
    dom = problem.domain
    zero = dom.zero
    B = problem.rank
    forms_from = [g_from]
    forms_to = [g_to]
    for b in problem.lattice.endo_matrices:
        forms_from.append(linalg.mat_mul(g_from, b))
        forms_to.append(linalg.mat_mul(g_to, b))
    base = _independent_base(problem, s_from)
    nforms = len(forms_from)
    targets = [[[bilinear(forms_from[k], base[i], base[j], zero)
                 for j in range(len(base))] for i in range(len(base))]
               for k in range(nforms)]
    cands = []
    pool_vectors = {}
    for i, s in enumerate(base):
        norm = targets[0][i][i]
        pool = []
        for w, val in enumerate_up_to(g_to, norm, dom):
            if dom.sign_of(val - norm) == 0:
                neg = tuple(-x for x in w)
                pool.append(w)
                pool.append(neg)
                pool_vectors[w] = None
                pool_vectors[neg] = None
        cands.append(pool)
    # x^T F y = dot(x, F y); cache F y per twisted form and candidate
    matvec = []
    for k in range(nforms):
        Fk = forms_to[k]
        cache = {}
        for w in pool_vectors:
            cache[w] = tuple(
                sum((row[j] * wj for j, wj in enumerate(w) if wj), zero)
                for row in Fk)
        matvec.append(cache)

    def pair(x, fy):
        acc = zero
        for i, xi in enumerate(x):
            if xi:
                acc = acc + xi * fy[i]
        return acc

    # rows of base form S^T; X = W S^-1 gives X^T = (S^T)^-1 W^T
    base_rows_inv = linalg.inverse(
        [[mpq(base[i][j]) for j in range(B)] for i in range(B)])
    images = [None] * B

    def ok(i, w):
        for k in range(nforms):
            Tk = targets[k]
            cache = matvec[k]
            fw = cache[w]
            for j in range(i):
                wj = images[j]
                if pair(w, cache[wj]) != Tk[i][j]:
                    return False
                if pair(wj, fw) != Tk[j][i]:
                    return False
            if pair(w, fw) != Tk[i][i]:
                return False
        return True

    def descend(i):
        if i == B:
            w_rows = [[mpq(images[k][j]) for j in range(B)]
                      for k in range(B)]
            xt = linalg.mat_mul(base_rows_inv, w_rows)
            if any(x.denominator != 1 for row in xt for x in row):
                return
            d = linalg.det(xt)
            if abs(d) != 1:
                return
            yield tuple(tuple(int(xt[j][i]) for j in range(B))
                        for i in range(B))
            return
        for w in cands[i]:
            if ok(i, w):
                images[i] = w
                yield from descend(i + 1)
        images[i] = None

    yield from descend(0)


def _backtrack_units(problem, f_from, f_to, s_from, first_only=False):
    g_from = problem.form_gram_rows(f_from)
    g_to = problem.form_gram_rows(f_to)
    out = []
    seen = set()
    for X in _backtrack_maps(problem, g_from, g_to, s_from):
        u = problem.action_to_unit(X)
        if u is None or u.rho in seen:
            continue
        seen.add(u.rho)
        if problem.act_form(u, f_from) == f_to:
            out.append(u)
            if first_only:
                break
    return out


def isometry_units(problem, f_from, f_to, s_from=None, s_to=None,
                   first_only=False):
    """Units g pulling f_from onto f_to; empty if none.

    first_only stops the backtracking engine at the first witness.
    """
    if s_from is None:
        _, s_from = form_minimum(problem, f_from)
    if s_to is None:
        _, s_to = form_minimum(problem, f_to)
    if len(s_from) != len(s_to):
        return []
    res = _division_maps(problem, f_from, f_to, s_from, s_to)
    if res is not None:
        return res
    return _backtrack_units(problem, f_from, f_to, s_from,
                            first_only=first_only)


def stabilizer_units(problem, f, s=None):
    """The full stabilizer of a form inside the unit group."""
    if s is None:
        _, s = form_minimum(problem, f)
    return isometry_units(problem, f, f, s, s)


def first_isometry_unit(problem, f_from, f_to, s_from=None, s_to=None):
    units = isometry_units(problem, f_from, f_to, s_from, s_to,
                           first_only=True)
    return units[0] if units else None


def close_group(gens, identity, cap=10 ** 7):
    """BFS closure of a generating set; deterministic element order."""
    elements = [identity]
    index = {identity.rho: 0}
    head = 0
    while head < len(elements):
        h = elements[head]
        head += 1
        for s in gens:
            p = h * s
            if p.rho not in index:
                index[p.rho] = len(elements)
                elements.append(p)
                if len(elements) > cap:
                    raise GroupTooLarge(
                        "group closure exceeded %d elements" % cap)
    return elements


def generates(gens, identity, target_order, cap=None):
    if cap is None:
        cap = target_order
    try:
        return len(close_group(gens, identity, cap=cap)) == target_order
    except GroupTooLarge:
        return False


def express_words(identity, gens, targets, max_depth=12, cap=120000):
    """Breadth-first words over gens and inverses for each target unit.

    Returns one word per target (tuples of signed one-based generator
    indices) or None where the search bound ran out.  The visited set
    is keyed by hash, so callers must verify returned words exactly.
    """
    steps = []
    for i, u in enumerate(gens, 1):
        steps.append((i, u))
        steps.append((-i, u.inverse()))
    out = [None] * len(targets)
    want = {}
    for ti, u in enumerate(targets):
        want.setdefault(hash(u.rho), []).append(ti)
    for ti in want.get(hash(identity.rho), ()):
        out[ti] = ()
    seen = {hash(identity.rho): ()}
    frontier = [identity]
    for _ in range(max_depth):
        nxt = []
        for u in frontier:
            w = seen[hash(u.rho)]
            for s, gu in steps:
                v = u * gu
                hv = hash(v.rho)
                if hv in seen:
                    continue
                seen[hv] = w + (s,)
                for ti in want.get(hv, ()):
                    if out[ti] is None:
                        out[ti] = w + (s,)
                nxt.append(v)
        if len(seen) >= cap or all(o is not None for o in out):
            break
        frontier = nxt
    return out


def _pair_tiers(by_order, prefer_orders):
    """Order-class pairs to try, most wanted first.

    With a preference list like (6, 4): mixed preferred-order pairs,
    then each preferred order against the remaining orders ascending,
    then preferred orders squared, then everything else ascending.
    """
    prefer = [o for o in (prefer_orders or ()) if o in by_order]
    others = sorted(o for o in by_order if o not in prefer)
    tiers = []
    for i, o1 in enumerate(prefer):
        for o2 in prefer[i + 1:]:
            tiers.append((o1, o2))
    for o1 in prefer:
        for o2 in others:
            tiers.append((o1, o2))
    for o1 in prefer:
        tiers.append((o1, o1))
    for i, o1 in enumerate(others):
        for o2 in others[i:]:
            tiers.append((o1, o2))
    return tiers


def small_generating_set(elements, identity, prefer_orders=None,
                         tier_budget=256):
    """A small generating set for a finite unit group.

    Tries single generators, then pairs tier by tier (see _pair_tiers),
    then falls back to a greedy sweep.  Each tier of order-class pairs
    gets at most tier_budget attempts so one barren class cannot starve
    the rest.
    """
    n = len(elements)
    if n == 1:
        return []
    orders = {}
    by_order = {}
    for e in elements:
        if e.rho == identity.rho:
            continue
        o = e.element_order(cap=n + 1)
        orders[e] = o
        by_order.setdefault(o, []).append(e)
    for e, o in orders.items():
        if o == n:
            return [e]
    for lst in by_order.values():
        lst.sort(key=lambda e: e.rho)
    for o1, o2 in _pair_tiers(by_order, prefer_orders):
        tried = 0
        for a in by_order[o1]:
            for b in by_order[o2]:
                if b is a:
                    continue
                tried += 1
                if tried > tier_budget:
                    break
                if generates([a, b], identity, n):
                    return [a, b]
            if tried > tier_budget:
                break
    gens = []
    have = {identity.rho}
    ranked = sorted(orders, key=lambda e: (orders[e], e.rho))
    for e in ranked:
        if e.rho in have:
            continue
        gens.append(e)
        have = {g.rho for g in close_group(gens, identity, cap=n)}
        if len(have) == n:
            return gens
    return gens
