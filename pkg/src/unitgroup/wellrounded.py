"""Faces of Voronoi domains and the well-rounded filter.

A face of a domain is the cone spanned by the rank-one projections of a
subset of its minimal vectors; its dimension equals the chart rank of
that subset.  Only faces that meet the interior of the positivity cone
(equivalently: the sum of their rank-one projections is positive
definite) carry finite stabilizers and contribute cells to the
contractible complex the presentation is read from.
"""

from . import linalg
from .errors import NoProgress
from .voronoi import transport_vector


def face_barycenter(problem, incidence):
    """Sum of the rank-one projections of an incidence set."""
    total = problem.zero_form()
    for x in incidence:
        total = tuple(a + b for a, b in
                      zip(total, problem.rank_one_chart(x)))
    return total


def is_well_rounded(problem, incidence):
    """True when the face meets the open positivity cone."""
    return problem.is_pd_form(face_barycenter(problem, incidence))


def face_rank(problem, incidence):
    """Chart dimension of the face spanned by an incidence set."""
    rows = [list(problem.rank_one_chart(x)) for x in incidence]
    return linalg.rank(rows)


def transport_incidence(u, incidence):
    """Push a set of minimal vectors through a unit, canonical signs."""
    return frozenset(transport_vector(u, x) for x in incidence)


def ridges_of_form(problem, facet_edges):
    """Codimension-two faces of one domain, as (incidence, facet pair).

    Every ridge lies in exactly two facets; that pair drives the walk
    around the ridge.
    """
    target = problem.chart_dim - 2
    if target < 1:
        return []
    seen = {}
    for a in range(len(facet_edges)):
        for b in range(a + 1, len(facet_edges)):
            inc = facet_edges[a].incidence & facet_edges[b].incidence
            if not inc or inc in seen:
                continue
            if face_rank(problem, inc) != target:
                continue
            holders = [k for k, e in enumerate(facet_edges)
                       if inc <= e.incidence]
            if len(holders) != 2:
                raise NoProgress(
                    "ridge lies in %d facets, not two" % len(holders))
            seen[inc] = (holders[0], holders[1])
    return sorted(seen.items(),
                  key=lambda kv: (kv[1], sorted(kv[0])))


def form_fixers(problem, units, chart):
    """Subset of the given units that fix a chart form."""
    return [g for g in units if problem.act_form(g, chart) == chart]


def swap_witnesses(problem, candidates, f, g):
    """Units among the candidates exchanging the two chart forms."""
    out = []
    for h in candidates:
        if problem.act_form(h, f) == g and problem.act_form(h, g) == f:
            out.append(h)
    return out
