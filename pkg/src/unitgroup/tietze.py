"""Tietze simplification and abelian invariants of presentations.

Words are tuples of nonzero signed one-based letter indices.  The
simplifier only applies moves that preserve the presented group: free
and cyclic reduction, merging relators that are powers of a common
root, replacing long subwords by the shorter complement from another
relator, and eliminating a letter that occurs exactly once in some
relator.
"""

from collections import Counter
from math import gcd

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form

from .errors import RelatorEvaluationFailure
from .presentation import cyclic_reduce, free_reduce, inverse_word

# relators are matched as strings so subword search runs in C
_CHAR = 0x1000


def _encode(word):
    return "".join(chr(_CHAR + c) for c in word)


def _canonical_cyclic(word):
    best = None
    for w in (word, inverse_word(word)):
        for r in range(len(w)):
            rot = w[r:] + w[:r]
            if best is None or rot < best:
                best = rot
    return best if best is not None else ()


def _substitute(word, x, repl):
    out = []
    for c in word:
        if c == x:
            out.extend(repl)
        elif c == -x:
            out.extend(inverse_word(repl))
        else:
            out.append(c)
    return free_reduce(tuple(out))


def _primitive_root(word):
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return word[:p], n // p
    return word, 1


def _dedupe(rels):
    """Cyclic reduction, plus merging relators that are powers of a
    common primitive word into the gcd power."""
    groups = {}
    order = []
    for r in rels:
        r = cyclic_reduce(r)
        if not r:
            continue
        root, exp = _primitive_root(r)
        key = _canonical_cyclic(root)
        if key in groups:
            kept_root, kept_exp = groups[key]
            groups[key] = (kept_root, gcd(kept_exp, exp))
        else:
            groups[key] = (root, exp)
            order.append(key)
    return [groups[key][0] * groups[key][1] for key in order]


def _tool_patterns(tool):
    """(m, encoded u, v^-1) triples for every split of every rotation
    of the tool and its inverse into u v with len(u) = m >= len(v).

    Since the tool is a relator, u = v^-1 in the group, so matching u
    inside a target lets the strictly shorter v^-1 stand in for it
    (ties only help when free reduction then shrinks the target).
    """
    L = len(tool)
    pats = []
    lo = L // 2 + (0 if L % 2 == 0 else 1)
    for base in (tool, inverse_word(tool)):
        for r in range(L):
            w = base[r:] + base[:r]
            for m in range(L - 1, lo - 1, -1):
                pats.append((m, _encode(w[:m]), inverse_word(w[m:])))
    pats.sort(key=lambda p: (-p[0], p[1]))
    return pats


def _shorten_one(patterns, target):
    """Shortened target using the tool patterns, or None."""
    n = len(target)
    doubled = _encode(target + target)
    for m, enc, repl in patterns:
        if m > n:
            continue
        pos = doubled.find(enc)
        if pos < 0:
            continue
        rot = target[pos:] + target[:pos]
        out = free_reduce(repl + rot[m:])
        if len(out) < n:
            return out
    return None


def _shorten(rels, max_tool=24):
    """Subword replacement between relators until nothing shrinks."""
    rels = list(rels)
    changed = True
    while changed:
        changed = False
        order = sorted(range(len(rels)), key=lambda i: (len(rels[i]), rels[i]))
        patterns = {}
        for ti in order:
            tool = rels[ti]
            if not 1 < len(tool) <= max_tool:
                continue
            if ti not in patterns:
                patterns[ti] = _tool_patterns(tool)
            for si in range(len(rels)):
                if si == ti or len(rels[si]) < 2:
                    continue
                out = _shorten_one(patterns[ti], rels[si])
                if out is not None:
                    rels[si] = cyclic_reduce(out)
                    changed = True
        if changed:
            rels = _dedupe(rels)
    return rels


def _pick_elimination(rels, keep, hard=False):
    best = None
    occ_total = Counter(abs(c) for r in rels for c in r)
    for ri, r in enumerate(rels):
        counts = Counter(abs(c) for c in r)
        for x, cnt in counts.items():
            if cnt != 1:
                continue
            if hard and x in keep:
                continue
            growth = (occ_total[x] - 1) * (len(r) - 2)
            key = (x in keep, growth, len(r), x, ri)
            if best is None or key < best[0]:
                best = (key, ri, x)
    return best


def _eliminate(rels, ri, x):
    r = rels[ri]
    pos = next(i for i, c in enumerate(r) if abs(c) == x)
    rot = r[pos:] + r[:pos]
    repl = inverse_word(rot[1:]) if rot[0] == x else rot[1:]
    return _dedupe([_substitute(rr, x, repl)
                    for k, rr in enumerate(rels) if k != ri])


def _bigrams(rels):
    """Signed two-letter subwords by cyclic occurrence count, most
    frequent first; a bigram and its inverse are the same key."""
    counts = Counter()
    for r in rels:
        n = len(r)
        if n < 2:
            continue
        for i in range(n):
            c1, c2 = r[i], r[(i + 1) % n]
            if c1 == -c2 or abs(c1) == abs(c2):
                continue
            counts[min((c1, c2), (-c2, -c1))] += 1
    return sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))


def _substitute_bigram(rels, pair, z):
    """Relators with non-wrapping occurrences of the bigram (or its
    inverse) contracted to the fresh letter z, plus z's definition."""
    p1, p2 = pair
    out = []
    for r in rels:
        new = []
        i = 0
        while i < len(r):
            duo = (r[i], r[i + 1]) if i + 1 < len(r) else None
            if duo == (p1, p2):
                new.append(z)
                i += 2
            elif duo == (-p2, -p1):
                new.append(-z)
                i += 2
            else:
                new.append(r[i])
                i += 1
        out.append(free_reduce(tuple(new)))
    out.append((-z, p1, p2))
    return out


def _go(rels, alive, keep, hard=False):
    """Shorten and eliminate until neither applies."""
    alive = set(alive)
    while True:
        rels = _shorten(rels)
        best = _pick_elimination(rels, keep, hard)
        if best is None:
            return rels, alive
        _, ri, x = best
        rels = _eliminate(rels, ri, x)
        alive.discard(x)


def _rebase(rels, alive, keep, pair, z):
    """Swap the cheaper factor of the bigram for the fresh letter z and
    run to the next deadlock; None when the factor is protected."""
    drop = min((abs(pair[0]), abs(pair[1])), key=lambda x: (x in keep, x))
    if drop in keep:
        return None
    rels = _dedupe(_substitute_bigram(rels, pair, z))
    signature = sorted((z, abs(pair[0]), abs(pair[1])))
    ri = next(i for i, r in enumerate(rels)
              if sorted(map(abs, r)) == signature)
    rels = _eliminate(rels, ri, drop)
    return _go(rels, (alive | {z}) - {drop}, keep)


def simplify(letters, relators, keep=(), max_subs=64, lookahead=16):
    """Simplified (names, relators, traces).

    keep lists one-based letter indices to hold on to when there is a
    choice.  traces gives each surviving generator as a word in the
    original letters; plain eliminations keep one-letter traces, while
    the bigram rebases used to break elimination deadlocks produce
    composite ones.  Each rebase candidate is played to its own
    deadlock and the best outcome is committed only when it beats the
    current (generators, total length) state, so the loop terminates.
    """
    keep = set(keep)
    names = list(letters)
    trace = {i: (i,) for i in range(1, len(names) + 1)}
    rels, alive = _go(_dedupe(list(relators)), set(trace), keep)
    for _ in range(max_subs):
        measure = (len(alive), sum(len(r) for r in rels))
        z = len(names) + 1
        chosen = None
        for pair, count in _bigrams(rels)[:lookahead]:
            if count < 2:
                break
            trial = _rebase(rels, alive, keep, pair, z)
            if trial is None:
                continue
            t_rels, t_alive = trial
            score = (len(t_alive), sum(len(r) for r in t_rels))
            if score < measure and (chosen is None or score < chosen[0]):
                chosen = (score, pair, t_rels, t_alive)
        if chosen is None:
            break
        _, pair, rels, alive = chosen
        names.append("g%d" % (z - len(letters)))
        w1 = trace[abs(pair[0])]
        w2 = trace[abs(pair[1])]
        if pair[0] < 0:
            w1 = inverse_word(w1)
        if pair[1] < 0:
            w2 = inverse_word(w2)
        trace[z] = free_reduce(w1 + w2)
    kept = sorted(alive)
    remap = {x: i + 1 for i, x in enumerate(kept)}
    out_rels = _dedupe([
        tuple(remap[c] if c > 0 else -remap[-c] for c in r) for r in rels])
    out_rels.sort(key=lambda r: (len(r), r))
    return ([names[x - 1] for x in kept], tuple(out_rels),
            [trace[x] for x in kept])


def _pair_reaches_stab(problem, stab, y, x, depth=7, cap=12000):
    """Cheap filter: does the ball of the pair meet the stabilizer in a
    generating subset?"""
    from .isometry import generates
    identity = problem.units.identity
    stab_rhos = {s.rho for s in stab}
    steps = [y, y.inverse(), x, x.inverse()]
    seen = {identity.rho: identity}
    frontier = [identity]
    for _ in range(depth):
        nxt = []
        for u in frontier:
            for gu in steps:
                v = u * gu
                if v.rho in seen:
                    continue
                seen[v.rho] = v
                nxt.append(v)
        if len(seen) > cap:
            break
        frontier = nxt
    inter = [u for r, u in sorted(seen.items()) if r in stab_rhos]
    return generates(inter, identity, len(stab))


def two_generator_reduction(pres, orders=(6, 4), max_depth=12, cap=120000):
    """Presentation of the same group on two generators whose images
    have the given orders, or None when the bounded search fails.

    Candidate pairs are a stabilizer element of the first order with an
    edge letter of the second.  Every original generator is rewritten
    as a word in the pair, each rewriting is verified exactly before
    its relator is added, and the original letters are then eliminated.
    """
    from .isometry import express_words
    from .presentation import VERTEX_NAMES, _name
    problem = pres.problem
    identity = problem.units.identity
    minus = problem.units.minus_one()
    allowed = {identity.rho}
    if pres.mode == "units-mod-center":
        allowed.add(minus.rho)
    x_lis = [li for li in sorted(set(pres.edge_letters.values()))
             if pres.images[li - 1].element_order(cap=max(orders) + 1)
             == orders[1]]
    for x_li in x_lis:
        x = pres.images[x_li - 1]
        for vi, stab in enumerate(pres.graph.stabilizers):
            words_v = pres.vertex_words[vi]
            ys = sorted((s for s in stab
                         if s.element_order(cap=len(stab) + 1) == orders[0]),
                        key=lambda s: s.rho)
            for y in ys:
                if not _pair_reaches_stab(problem, stab, y, x):
                    continue
                words = express_words(identity, [y, x], pres.images,
                                      max_depth, cap)
                if any(w is None for w in words):
                    continue
                bad = False
                for li, w in enumerate(words, 1):
                    u = identity
                    for c in w:
                        g = y if abs(c) == 1 else x
                        u = u * (g if c > 0 else g.inverse())
                    if u.rho != pres.images[li - 1].rho:
                        bad = True
                        break
                if bad:
                    continue
                n0 = len(pres.letters)
                y_idx = n0 + 1
                rels = list(pres.relators)
                rels.append(free_reduce((-y_idx,) + tuple(words_v[y.rho])))
                for li in range(1, n0 + 1):
                    if li == x_li:
                        continue
                    tw = tuple((y_idx if c > 0 else -y_idx) if abs(c) == 1
                               else (x_li if c > 0 else -x_li)
                               for c in words[li - 1])
                    rels.append(free_reduce((li,) + inverse_word(tw)))
                keep = {x_li, y_idx}
                rels, alive = _go(_dedupe(rels), set(range(1, n0 + 2)),
                                  keep, hard=True)
                if alive != keep:
                    continue
                used = set(pres.letters)
                k = 0
                while _name(VERTEX_NAMES, "s", k) in used:
                    k += 1
                kept = sorted(alive)
                remap = {li: i + 1 for i, li in enumerate(kept)}
                out = _dedupe([
                    tuple(remap[c] if c > 0 else -remap[-c] for c in r)
                    for r in rels])
                out.sort(key=lambda r: (len(r), r))
                names = [pres.letters[x_li - 1]
                         if li == x_li else _name(VERTEX_NAMES, "s", k)
                         for li in kept]
                traces = [(x_li,) if li == x_li else tuple(words_v[y.rho])
                          for li in kept]
                final_images = [pres.evaluate(t) for t in traces]
                for r in out:
                    u = identity
                    for c in r:
                        g = final_images[abs(c) - 1]
                        u = u * (g if c > 0 else g.inverse())
                    if u.rho not in allowed:
                        raise RelatorEvaluationFailure(
                            "reduced relator fails exact evaluation")
                return names, tuple(out), traces
    return None


def preferred_survivors(pres, orders=(6, 4)):
    """Letter indices worth keeping through simplification: the vertex
    letters whose images have one of the given orders."""
    keep = set()
    cap = max((len(s) for s in pres.graph.stabilizers), default=1)
    for group in pres.vertex_letters:
        for li in group:
            if pres.images[li - 1].element_order(cap=cap) in orders:
                keep.add(li)
    return keep


def expand_word(traces, word):
    """Rewrite a word over simplified letters into the original letters."""
    out = []
    for c in word:
        t = traces[abs(c) - 1]
        out.extend(t if c > 0 else inverse_word(t))
    return free_reduce(tuple(out))


def deficiency(letters, relators):
    return len(letters) - len(relators)


def abelian_invariants(n_letters, relators):
    """(free rank, torsion orders) of the abelianized presentation."""
    if n_letters == 0:
        return 0, ()
    rows = []
    seen = set()
    for r in relators:
        row = [0] * n_letters
        for c in r:
            row[abs(c) - 1] += 1 if c > 0 else -1
        t = tuple(row)
        if any(t) and t not in seen:
            seen.add(t)
            rows.append(row)
    if not rows:
        return n_letters, ()
    s = smith_normal_form(Matrix(rows))
    diag = [abs(int(s[i, i])) for i in range(min(s.rows, s.cols))]
    nonzero = [d for d in diag if d]
    free = n_letters - len(nonzero)
    torsion = tuple(sorted(d for d in nonzero if d > 1))
    return free, torsion


def abelian_str(free, torsion):
    parts = ["Z"] * free + ["Z/%d" % d for d in torsion]
    return " x ".join(parts) if parts else "1"


def abelianization(pres, simplified=False):
    """Abelian invariants of a GroupPresentation.

    With simplified=True the presentation is Tietze-reduced first; the
    result is the same group either way.
    """
    letters, relators = pres.letters, pres.relators
    if simplified:
        letters, relators, _ = simplify(letters, relators,
                                        keep=preferred_survivors(pres))
    return abelian_invariants(len(letters), relators)
