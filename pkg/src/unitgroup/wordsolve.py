"""Word problem via a straight-line walk through the domain tessellation.

A generic interior point of the base domain and its image under the
target unit span a segment; the segment sweeps a chain of adjacent
domains, each facet crossing contributes the inverse of that facet's
slot token, and the leftover element lands in the base stabilizer where
the Cayley table finishes the word.  All crossing decisions are exact
scalar-sign tests; degenerate segments raise AmbiguousCrossing and the
driver retries with fresh random weights.
"""

import random

from .errors import (AmbiguousCrossing, NoProgress,
                     PerturbationBudgetExceeded)
from .presentation import free_reduce, inverse_word
from .voronoi import transport_vector


def _pair(problem, normal, config):
    """Pairing of a facet normal with a weighted vector configuration."""
    acc = problem.domain.zero
    for w, x in config:
        acc = acc + w * problem.form_value(normal, x)
    return acc


def _walk(pres, target, weights_p, weights_q):
    graph = pres.graph
    problem = graph.problem
    dom = problem.domain
    base = graph.forms[0]

    # independent weights at the two ends break the symmetry a torsion
    # unit would otherwise force onto the segment
    p_cfg = [(w, tuple(x)) for w, x in zip(weights_p, base.min_vectors)]
    q_cfg = [(w, transport_vector(target, x))
             for w, x in zip(weights_q, base.min_vectors)]
    for e in graph.facet_edges[0]:
        if problem.sign(_pair(problem, e.normal, p_cfg)) <= 0:
            raise NoProgress("base point is not interior")

    m = 0
    g = problem.units.identity
    tokens = []
    t_num, t_den = dom.zero, dom.one
    for _ in range(4096):
        p_vals = {}
        q_vals = {}
        for e in graph.facet_edges[m]:
            p_vals[e.facet_index] = _pair(problem, e.normal, p_cfg)
            q_vals[e.facet_index] = _pair(problem, e.normal, q_cfg)

        exit_edge = None
        best_num = best_den = None
        tie = False
        for e in graph.facet_edges[m]:
            vq = q_vals[e.facet_index]
            if problem.sign(vq) >= 0:
                continue
            vp = p_vals[e.facet_index]
            num, den = vp, vp - vq
            ahead = problem.sign(num * t_den - t_num * den)
            if ahead < 0:
                raise NoProgress("crossing parameter moved backwards")
            if ahead == 0:
                raise AmbiguousCrossing("segment grazes a ridge")
            if exit_edge is None:
                exit_edge, best_num, best_den = e, num, den
                continue
            c = problem.sign(num * best_den - best_num * den)
            if c < 0:
                exit_edge, best_num, best_den = e, num, den
                tie = False
            elif c == 0:
                tie = True

        if exit_edge is None:
            for fi, vq in q_vals.items():
                if problem.sign(vq) == 0:
                    raise AmbiguousCrossing("endpoint touches a wall")
            break
        if tie:
            raise AmbiguousCrossing("two walls at the same parameter")

        s = exit_edge.transporter
        tokens.append(pres.slot_tokens[(m, exit_edge.facet_index)])
        g = g * s.inverse()
        p_cfg = [(w, transport_vector(s, x)) for w, x in p_cfg]
        q_cfg = [(w, transport_vector(s, x)) for w, x in q_cfg]
        m = exit_edge.dst
        t_num, t_den = best_num, best_den
    else:
        raise NoProgress("crossing budget exhausted")

    if m != 0:
        raise NoProgress("segment ended off the base orbit")
    h = g.inverse() * target
    tail = pres.vertex_words[0].get(h.rho)
    if tail is None:
        raise NoProgress("residue escaped the base stabilizer")
    word = []
    for tok in tokens:
        word.extend(inverse_word(tok))
    word.extend(tail)
    return free_reduce(tuple(word))


def solve_word(pres, target, seed=0, budget=20):
    """Word in the presentation letters evaluating exactly to the unit.

    The first attempt uses the plain barycenter; AmbiguousCrossing
    retries draw fresh positive weights from the seeded generator, up to
    the perturbation budget.
    """
    n = len(pres.graph.forms[0].min_vectors)
    rng = random.Random(seed)
    weights_p = [1] * n
    weights_q = [2] * n
    for _ in range(budget):
        try:
            word = _walk(pres, target, weights_p, weights_q)
        except AmbiguousCrossing:
            weights_p = [rng.randint(1, 9) for _ in range(n)]
            weights_q = [rng.randint(1, 9) for _ in range(n)]
            continue
        if pres.evaluate(word).rho != target.rho:
            raise NoProgress("solved word does not evaluate to the unit")
        return word
    raise PerturbationBudgetExceeded(
        "no generic segment within %d attempts" % budget)
