"""Finite presentations of unit groups from the perfect-form complex.

The group acts on a contractible complex dual to the perfect-form
tessellation: vertices are domains, edges are shared facets, two-cells
are ridges, all filtered to well-rounded incidence.  A presentation is
assembled from one vertex group per orbit (as a Cayley multiplication
table on a small generating set), one letter per non-tree edge orbit,
and one cycle relator per ridge orbit, walked exactly.

Words are tuples of nonzero signed letter indices, one-based.  Every
relator is verified by exact evaluation into the unit group before the
presentation is returned.
"""

from .errors import (
    NonInvertedTreeImpossible, NoStabilizerWitness, NotWellRounded,
    RelatorEvaluationFailure, WalkNotClosing,
)
from .isometry import small_generating_set
from .wellrounded import (
    form_fixers, is_well_rounded, ridges_of_form, transport_incidence,
)

VERTEX_NAMES = "a b c d f h k m p q r s".split()
EDGE_NAMES = "t u v w x y z".split()


def _name(pool, prefix, k):
    return pool[k] if k < len(pool) else "%s%d" % (prefix, k - len(pool))


def inverse_word(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    word = free_reduce(word)
    while len(word) > 1 and word[0] == -word[-1]:
        word = word[1:-1]
    return word


def cayley_words(identity, gens):
    """Breadth-first words for every element generated by gens.

    Returns (elements ordered by discovery, {rho: word}).
    """
    words = {identity.rho: ()}
    elements = [identity]
    head = 0
    steps = []
    for k, g in enumerate(gens):
        steps.append((k + 1, g))
        steps.append((-(k + 1), g.inverse()))
    while head < len(elements):
        h = elements[head]
        base = words[h.rho]
        head += 1
        for letter, g in steps:
            p = h * g
            if p.rho not in words:
                words[p.rho] = base + (letter,)
                elements.append(p)
    return elements, words


def cayley_relators(elements, words, gens):
    """Multiplication-table relators for a finite group."""
    out = []
    seen = set()
    for h in elements:
        base = words[h.rho]
        for k, g in enumerate(gens):
            target = words[(h * g).rho]
            rel = cyclic_reduce(base + (k + 1,) + inverse_word(target))
            if rel and rel not in seen:
                seen.add(rel)
                out.append(rel)
    return out


class DirectedEdge:
    """One directed edge-orbit representative: a facet-orbit rep slot."""

    __slots__ = ("orbit", "slot", "kind", "letter", "partner", "rev_witness",
                 "swap")

    def __init__(self, orbit, slot):
        self.orbit = orbit
        self.slot = slot
        self.kind = None        # "tree" | "plus" | "plus_rev" | "minus"
        self.letter = None
        self.partner = None     # (orbit, slot) of the reverse side rep
        self.rev_witness = None
        self.swap = None


class GroupPresentation:
    """Letters, relators, and the exact evaluation data behind them."""

    def __init__(self, graph, mode, letters, images, relators,
                 vertex_letters, vertex_gens, vertex_words, slot_tokens,
                 edge_letters, edge_orbits):
        self.graph = graph
        self.mode = mode
        self.letters = letters
        self.images = images
        self.relators = relators
        self.vertex_letters = vertex_letters
        self.vertex_gens = vertex_gens
        self.vertex_words = vertex_words
        self.slot_tokens = slot_tokens
        self.edge_letters = edge_letters
        self.edge_orbits = edge_orbits

    @property
    def problem(self):
        return self.graph.problem

    def evaluate(self, word):
        u = self.problem.units.identity
        for x in word:
            g = self.images[abs(x) - 1]
            u = u * (g if x > 0 else g.inverse())
        return u

    def word_str(self, word):
        if not word:
            return "1"
        parts = []
        for x in word:
            name = self.letters[abs(x) - 1]
            parts.append(name if x > 0 else name + "^-1")
        return " ".join(parts)

    def __repr__(self):
        return "GroupPresentation(%d generators, %d relators, %s)" % (
            len(self.letters), len(self.relators), self.mode)


def _facet_orbits(problem, stab, edges):
    """Partition facet slots under the stabilizer action.

    Returns (rep slot per slot, witness per slot) with
    witness . incidence(slot) = incidence(rep).
    """
    reps = {}
    rep_of = {}
    witness = {}
    identity = problem.units.identity
    preferred = sorted(range(len(edges)),
                       key=lambda fi: (not edges[fi].is_tree, fi))
    for fi in preferred:
        inc = edges[fi].incidence
        found = None
        for rep_slot, rep_inc in reps.items():
            for s in stab:
                if transport_incidence(s, inc) == rep_inc:
                    found = (rep_slot, s)
                    break
            if found:
                break
        if found is None:
            reps[fi] = inc
            rep_of[fi] = fi
            witness[fi] = identity
        else:
            rep_of[fi] = found[0]
            witness[fi] = found[1]
    return rep_of, witness


def _neighbor_chart(problem, graph, orbit, slot):
    e = graph.facet_edges[orbit][slot]
    return problem.act_form(e.transporter.inverse(),
                            graph.forms[e.dst].chart)


def assemble_presentation(graph, mode="units"):
    """Build and verify a presentation of the unit group (mode "units")
    or of its quotient by the central +-1 ("units-mod-center")."""
    if mode not in ("units", "units-mod-center"):
        raise ValueError("unknown mode %r" % mode)
    problem = graph.problem
    forms = graph.forms
    n_orbits = len(forms)

    for form in forms:
        if not is_well_rounded(problem, form.min_vectors):
            raise NotWellRounded("a perfect form misses the open "
                                 "positivity cone")
    for edges in graph.facet_edges:
        for e in edges:
            if e.is_tree and not is_well_rounded(problem, e.incidence):
                raise NotWellRounded(
                    "a spanning tree facet is not well rounded; "
                    "representatives cannot be kept")

    # vertex groups: generators, words, letters
    letters = []
    images = []
    vertex_letters = []
    vertex_gens = []
    vertex_words = []
    vertex_elements = []
    for i in range(n_orbits):
        stab = graph.stabilizers[i]
        gens = small_generating_set(stab, problem.units.identity,
                                    prefer_orders=(6, 4))
        elements, words = cayley_words(problem.units.identity, gens)
        if len(elements) != len(stab):
            raise NoStabilizerWitness(
                "generating set does not close the stabilizer")
        ids = []
        for g in gens:
            letters.append(_name(VERTEX_NAMES, "s", len(images)))
            images.append(g)
            ids.append(len(images))
        vertex_letters.append(ids)
        vertex_gens.append(gens)
        vertex_elements.append(elements)
        vertex_words.append({
            rho: _rebase(word, ids) for rho, word in words.items()})
    n_vertex_letters = len(letters)

    # facet orbits and directed edge reps
    rep_of = []
    witness = []
    for i in range(n_orbits):
        r, w = _facet_orbits(problem, graph.stabilizers[i],
                             graph.facet_edges[i])
        rep_of.append(r)
        witness.append(w)

    directed = {}
    for i in range(n_orbits):
        for fi in sorted(set(rep_of[i].values())):
            directed[(i, fi)] = DirectedEdge(i, fi)

    # reverse map with exact witnesses
    for (i, fi), de in sorted(directed.items()):
        e = graph.facet_edges[i][fi]
        j = e.dst
        inc_rev = transport_incidence(e.transporter, e.incidence)
        slot_rev = None
        for fj, ej in enumerate(graph.facet_edges[j]):
            if ej.incidence == inc_rev:
                slot_rev = fj
                break
        if slot_rev is None:
            raise NoStabilizerWitness("reverse facet not found on the "
                                      "destination representative")
        fo = rep_of[j][slot_rev]
        s = witness[j][slot_rev]
        de.partner = (j, fo)
        de.rev_witness = s * e.transporter
    return _finish_presentation(
        graph, mode, letters, images, vertex_letters, vertex_gens,
        vertex_words, vertex_elements, rep_of, witness, directed,
        n_vertex_letters)


def _rebase(word, ids):
    out = []
    for x in word:
        k = ids[abs(x) - 1]
        out.append(k if x > 0 else -k)
    return tuple(out)


def _finish_presentation(graph, mode, letters, images, vertex_letters,
                         vertex_gens, vertex_words, vertex_elements,
                         rep_of, witness, directed, n_vertex_letters):
    problem = graph.problem
    forms = graph.forms
    n_orbits = len(forms)
    identity = problem.units.identity

    # pair directed reps into undirected orbits; classify kinds
    tree_slots = {
        (i, fi)
        for i in range(n_orbits)
        for fi, e in enumerate(graph.facet_edges[i]) if e.is_tree}
    edge_letters = {}
    n_edge = 0
    for key in sorted(directed):
        de = directed[key]
        if de.kind is not None:
            continue
        partner = de.partner
        if partner == key:
            de.kind = "minus"
            h = _swap_witness(problem, graph, de)
            de.swap = h
            letters.append(_name(EDGE_NAMES, "t", n_edge))
            n_edge += 1
            images.append(h)
            de.letter = len(images)
            edge_letters[key] = de.letter
            continue
        other = directed[partner]
        if other.partner != key:
            raise NoStabilizerWitness("edge reversal is not an involution")
        orbit_slots = _orbit_slot_set(rep_of, key, partner)
        is_tree = bool(orbit_slots & tree_slots)
        if is_tree:
            canon = _tree_side(graph, rep_of, key, partner, tree_slots)
            rev = partner if canon == key else key
            directed[canon].kind = "tree"
            directed[rev].kind = "tree_rev"
        else:
            canon, rev = min(key, partner), max(key, partner)
            directed[canon].kind = "plus"
            directed[rev].kind = "plus_rev"
            letters.append(_name(EDGE_NAMES, "t", n_edge))
            n_edge += 1
            u_can = graph.facet_edges[canon[0]][canon[1]].transporter
            images.append(u_can.inverse())
            directed[canon].letter = len(images)
            directed[rev].letter = len(images)
            edge_letters[canon] = len(images)

    # token words per slot, verified exactly
    slot_tokens = {}
    for i in range(n_orbits):
        for fi in range(len(graph.facet_edges[i])):
            tok = _slot_token(problem, graph, directed, rep_of, witness,
                              vertex_words, i, fi)
            u_slot = graph.facet_edges[i][fi].transporter
            got = _evaluate(problem, images, tok)
            if got.rho != u_slot.rho:
                raise RelatorEvaluationFailure(
                    "slot token does not evaluate to its transporter")
            slot_tokens[(i, fi)] = tok

    relators = []
    seen = set()

    def push(rel):
        rel = cyclic_reduce(rel)
        if rel and rel not in seen:
            seen.add(rel)
            relators.append(rel)

    # vertex group multiplication tables
    for i in range(n_orbits):
        words = {rho: w for rho, w in vertex_words[i].items()}
        gens = vertex_gens[i]
        ids = vertex_letters[i]
        for h in vertex_elements[i]:
            base = words[h.rho]
            for k, g in enumerate(gens):
                target = words[(h * g).rho]
                push(base + (ids[k],) + inverse_word(target))

    # edge relations
    for key in sorted(directed):
        de = directed[key]
        i, fi = key
        e = graph.facet_edges[i][fi]
        nb = _neighbor_chart(problem, graph, i, fi)
        edge_group = form_fixers(problem, graph.stabilizers[i], nb)
        edge_gens = small_generating_set(edge_group, identity)
        if de.kind in ("tree", "plus"):
            j = e.dst
            u_can = e.transporter
            tok = (-de.letter,) if de.kind == "plus" else ()
            for g in edge_gens:
                moved = u_can * g * u_can.inverse()
                if problem.act_form(moved, forms[j].chart) \
                        != forms[j].chart:
                    raise NoStabilizerWitness(
                        "conjugated edge element leaves the stabilizer")
                push(tok + vertex_words[i][g.rho]
                     + inverse_word(tok)
                     + inverse_word(vertex_words[j][moved.rho]))
        elif de.kind == "minus":
            h = de.swap
            k = de.letter
            sq = h * h
            push((k, k) + inverse_word(vertex_words[i][sq.rho]))
            for g in edge_gens:
                moved = h.inverse() * g * h
                push((-k,) + vertex_words[i][g.rho] + (k,)
                     + inverse_word(vertex_words[i][moved.rho]))

    # ridge cycles
    for rel in _ridge_relators(problem, graph, rep_of, slot_tokens,
                               vertex_words, images):
        push(rel)

    if mode == "units-mod-center":
        minus = problem.units.minus_one()
        for i in range(n_orbits):
            push(vertex_words[i][minus.rho])

    edge_orbits = []
    for key in sorted(directed):
        de = directed[key]
        if de.kind in ("tree", "plus", "minus"):
            edge_orbits.append({
                "rep": key,
                "kind": de.kind,
                "letter": (letters[de.letter - 1]
                           if de.letter is not None else None),
            })

    pres = GroupPresentation(graph, mode, letters, images, tuple(relators),
                             vertex_letters, vertex_gens, vertex_words,
                             slot_tokens, edge_letters, edge_orbits)
    verify_presentation(pres)
    return pres


def _orbit_slot_set(rep_of, key, partner):
    out = set()
    for (i, fi) in (key, partner):
        for slot, rep in rep_of[i].items():
            if rep == fi:
                out.add((i, slot))
    return out


def _tree_side(graph, rep_of, key, partner, tree_slots):
    """The directed side whose facet orbit holds the discovery slot."""
    for (i, fi) in (key, partner):
        for slot, rep in rep_of[i].items():
            if rep == fi and (i, slot) in tree_slots:
                if slot != fi:
                    raise NonInvertedTreeImpossible(
                        "discovery slot is not its own facet orbit rep")
                return (i, fi)
    raise NonInvertedTreeImpossible("no tree slot on a tree edge orbit")


def _swap_witness(problem, graph, de):
    """A unit exchanging the two domains of an inverted edge."""
    i, fi = de.orbit, de.slot
    tau = de.rev_witness
    nb = _neighbor_chart(problem, graph, i, fi)
    target = problem.act_form(tau, graph.forms[i].chart)
    for s in graph.stabilizers[i]:
        if problem.act_form(s, nb) == target:
            h = tau.inverse() * s
            if problem.act_form(h, graph.forms[i].chart) == nb \
                    and problem.act_form(h, nb) == graph.forms[i].chart:
                return h
    raise NoStabilizerWitness("no unit swaps the two sides of an "
                              "inverted edge")


def _slot_token(problem, graph, directed, rep_of, witness, vertex_words,
                i, fi):
    """Letter word evaluating exactly to the slot transporter."""
    e = graph.facet_edges[i][fi]
    fo = rep_of[i][fi]
    s = witness[i][fi]
    e_rep = graph.facet_edges[i][fo]
    if e_rep.dst != e.dst:
        raise NoStabilizerWitness("facet orbit mates disagree on the "
                                  "destination orbit")
    j = e.dst
    de = directed[(i, fo)]
    if de.kind in ("tree", "plus"):
        tok_rep = (-de.letter,) if de.kind == "plus" else ()
    elif de.kind == "minus":
        delta2 = e_rep.transporter * de.swap.inverse()
        tok_rep = vertex_words[i][delta2.rho] + (de.letter,)
    else:
        canon = de.partner
        dc = directed[canon]
        ci = canon[0]
        u_can = graph.facet_edges[ci][canon[1]].transporter
        tau = dc.rev_witness
        delta4 = tau * u_can.inverse()
        delta3 = e_rep.transporter * tau
        letter = (-dc.letter,) if dc.kind == "plus" else ()
        tok_rep = (vertex_words[ci][delta3.rho]
                   + inverse_word(letter)
                   + inverse_word(vertex_words[i][delta4.rho]))
    delta1 = e.transporter * s.inverse() * e_rep.transporter.inverse()
    if problem.act_form(delta1, graph.forms[j].chart) \
            != graph.forms[j].chart:
        raise NoStabilizerWitness("slot decomposition leaves the "
                                  "destination stabilizer")
    return (vertex_words[j][delta1.rho] + tok_rep
            + vertex_words[i][s.rho])


def _evaluate(problem, images, word):
    u = problem.units.identity
    for x in word:
        g = images[abs(x) - 1]
        u = u * (g if x > 0 else g.inverse())
    return u


def _ridge_relators(problem, graph, rep_of, slot_tokens, vertex_words,
                    images, max_steps=10000):
    """One verified cycle relator per well-rounded ridge orbit."""
    out = []
    visited = set()
    for i0 in range(len(graph.forms)):
        edges0 = graph.facet_edges[i0]
        for inc0, (fa, fb) in ridges_of_form(problem, edges0):
            if (i0, inc0) in visited:
                continue
            if not is_well_rounded(problem, inc0):
                for s in graph.stabilizers[i0]:
                    visited.add((i0, transport_incidence(s, inc0)))
                continue
            rel, states = _walk_ridge(problem, graph, slot_tokens,
                                      vertex_words, images, i0, inc0,
                                      fa, max_steps)
            for (m, inc) in states:
                for s in graph.stabilizers[m]:
                    visited.add((m, transport_incidence(s, inc)))
            out.append(rel)
    return out


def _walk_ridge(problem, graph, slot_tokens, vertex_words, images,
                i0, inc0, exit_slot, max_steps):
    """Walk the cycle of domains around one ridge, collecting tokens.

    Starts at orbit i0, leaves through exit_slot; closes at the first
    return to the starting domain.  Returns (relator, visited states).
    """
    m = i0
    w = problem.units.identity
    inc = inc0
    exit_ = exit_slot
    tokens = ()
    states = [(i0, inc0)]
    for _ in range(max_steps):
        e = graph.facet_edges[m][exit_]
        tokens = slot_tokens[(m, exit_)] + tokens
        w = e.transporter * w
        inc = transport_incidence(e.transporter, inc)
        entry_inc = transport_incidence(e.transporter, e.incidence)
        m = e.dst
        if m == i0 and problem.act_form(w, graph.forms[i0].chart) \
                == graph.forms[i0].chart:
            relator = tokens + inverse_word(vertex_words[i0][w.rho])
            got = _evaluate(problem, images, tokens)
            if got.rho != w.rho:
                raise RelatorEvaluationFailure(
                    "ridge tokens do not evaluate to the holonomy")
            return relator, states
        states.append((m, inc))
        holders = []
        entry = None
        for fi, em in enumerate(graph.facet_edges[m]):
            if inc <= em.incidence:
                holders.append(fi)
                if em.incidence == entry_inc:
                    entry = fi
        if entry is None or len(holders) != 2:
            raise WalkNotClosing(
                "ridge walk lost the entry facet (%d holders)"
                % len(holders))
        exit_ = holders[0] if holders[1] == entry else holders[1]
    raise WalkNotClosing("ridge walk exceeded %d steps" % max_steps)


def verify_presentation(pres):
    """Exact check that every relator evaluates to the identity, or to
    the central unit in quotient mode."""
    problem = pres.problem
    minus = problem.units.minus_one()
    allowed = {problem.units.identity.rho}
    if pres.mode == "units-mod-center":
        allowed.add(minus.rho)
    for rel in pres.relators:
        got = pres.evaluate(rel)
        if got.rho not in allowed:
            raise RelatorEvaluationFailure(
                "relator %s evaluates to a nontrivial unit"
                % pres.word_str(rel))
    return True
