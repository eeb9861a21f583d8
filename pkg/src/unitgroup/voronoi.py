"""Perfect-form enumeration by the generalized neighbor-walk algorithm.

A form is perfect when the rank-one projections of its minimal vectors
span the whole symmetric chart.  Starting from the trace form, a
perfection walk adds minimal vectors until the span fills up; after that,
every facet of the polyhedral domain spanned by the rank-one projections
leads to exactly one neighboring perfect form, and a breadth-first sweep
modulo unit-group equivalence visits every orbit.

All forms are normalized to minimum exactly one, so equality of minima is
never a tolerance question.
"""

from gmpy2 import mpq

from . import linalg
from .algebra import flatten_scalar
from .errors import BudgetExceeded, DirectionNotOutward, NoProgress
from .isometry import form_minimum, stabilizer_units, first_isometry_unit


def scalar_sort_key(x):
    return flatten_scalar(x)


def form_sort_key(coords):
    return tuple(flatten_scalar(x) for x in coords)


def canonical_ray(vec, domain):
    """Scale a nonzero vector so its first nonzero coordinate is +-1."""
    for x in vec:
        if x:
            mag = -x if domain.sign_of(x) < 0 else x
            return tuple(v / mag for v in vec)
    return tuple(vec)


def dual_rays(constraints, dim, domain):
    """Extreme rays of {h : c . h >= 0 for all c}, by double description.

    Returns (lineality_basis, rays); rays are canonically scaled and
    sorted.  constraints are coordinate tuples of linear functionals.
    """
    zero = domain.zero
    one = domain.one
    lineality = [tuple(one if i == j else zero for j in range(dim))
                 for i in range(dim)]
    rays = []
    done = []

    def dot(c, v):
        acc = zero
        for a, b in zip(c, v):
            if a and b:
                acc = acc + a * b
        return acc

    def tight_set(v):
        return frozenset(k for k, c in enumerate(done) if not dot(c, v))

    for c in constraints:
        pivot = None
        for idx, l in enumerate(lineality):
            if dot(c, l):
                pivot = idx
                break
        if pivot is not None:
            l0 = lineality.pop(pivot)
            scale = dot(c, l0)
            l0 = tuple(x / scale for x in l0)
            lineality = [
                tuple(a - dot(c, l) * b for a, b in zip(l, l0))
                for l in lineality]
            rays = [canonical_ray(
                tuple(a - dot(c, r) * b for a, b in zip(r, l0)), domain)
                for r in rays]
            rays.append(canonical_ray(l0, domain))
            rays = sorted(set(rays), key=form_sort_key)
            done.append(c)
            continue
        signed = [(r, domain.sign_of(dot(c, r))) for r in rays]
        neg = [r for r, s in signed if s < 0]
        if not neg:
            done.append(c)
            continue
        pos = [r for r, s in signed if s > 0]
        zero_rays = [r for r, s in signed if s == 0]
        tights = {r: tight_set(r) for r in rays}
        new_rays = []
        for p in pos:
            cp = dot(c, p)
            for n in neg:
                common = tights[p] & tights[n]
                adjacent = True
                for r in rays:
                    if r is p or r is n:
                        continue
                    if common <= tights[r]:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                cn = dot(c, n)
                vec = tuple(cp * b - cn * a for a, b in zip(p, n))
                new_rays.append(canonical_ray(vec, domain))
        rays = sorted(set(zero_rays + pos + new_rays), key=form_sort_key)
        done.append(c)
    return lineality, rays


class FacetDirection:
    """One facet of a Voronoi domain: outward-positive normal plus the
    minimal vectors lying on it."""

    __slots__ = ("normal", "incidence")

    def __init__(self, normal, incidence):
        self.normal = normal
        self.incidence = incidence

    def __repr__(self):
        return "FacetDirection(%d vectors)" % len(self.incidence)


def facet_directions(problem, f, min_vecs):
    """Facets of the domain spanned by the rank-one projections of the
    minimal vectors.  Empty when the chart is a half-line."""
    if problem.chart_dim == 1:
        return []
    gram = problem.chart_gram
    constraints = []
    for x in min_vecs:
        r = problem.rank_one_chart(x)
        constraints.append(tuple(linalg.mat_vec(gram, list(r))))
    lineality, rays = dual_rays(constraints, problem.chart_dim,
                                problem.domain)
    if lineality:
        raise NoProgress("domain is not full-dimensional; the form is "
                         "not perfect")
    out = []
    for h in rays:
        incidence = frozenset(
            x for x in min_vecs if not problem.form_value(h, x))
        out.append(FacetDirection(h, incidence))
    out.sort(key=lambda fd: form_sort_key(fd.normal))
    return out


def _scale_form(f, factor):
    return tuple(factor * x for x in f)


def _grow_along(problem, f, h, min_vecs, max_steps=200):
    """Largest step f + t h keeping the minimum at one, stopped at the
    first new minimal vector on the strictly negative side of h.

    Returns (t, new_form, new_min_vecs).
    """
    dom = problem.domain
    one = dom.one
    lo = dom.zero
    theta = one
    half = dom.from_rational(mpq(1, 2))
    for _ in range(max_steps):
        cand = tuple(a + theta * b for a, b in zip(f, h))
        if not problem.is_pd_form(cand):
            theta = (lo + theta) * half
            continue
        minimum, vecs = form_minimum(problem, cand)
        drop = dom.sign_of(minimum - one)
        if drop > 0:
            raise NoProgress("minimum rose along a facet direction")
        if drop < 0:
            contact = None
            for x in vecs:
                hx = problem.form_value(h, x)
                if dom.sign_of(hx) >= 0:
                    continue
                lam = (one - problem.form_value(f, x)) / hx
                if contact is None or dom.sign_of(lam - contact) < 0:
                    contact = lam
            if contact is None:
                raise NoProgress("minimum dropped with no negative "
                                 "direction vector")
            theta = contact
            continue
        has_negative = any(
            dom.sign_of(problem.form_value(h, x)) < 0 for x in vecs)
        if has_negative:
            return theta, cand, vecs
        lo = theta
        theta = theta * 2
    raise NoProgress("direction walk did not terminate")


def initial_perfect_form(problem):
    """Walk from the trace form to a first perfect form."""
    dom = problem.domain
    f = problem.identity_form
    minimum, vecs = form_minimum(problem, f)
    f = _scale_form(f, dom.one / minimum)
    vecs = list(vecs)
    for _ in range(problem.chart_dim + 1):
        rows = [list(problem.rank_one_chart(x)) for x in vecs]
        if linalg.rank(rows) == problem.chart_dim:
            return f, tuple(vecs)
        gram = problem.chart_gram
        constraints = [linalg.mat_vec(gram, r) for r in rows]
        kern = linalg.kernel(constraints)
        h = tuple(kern[0])
        hg = problem.form_gram_rows(h)
        if linalg.is_positive_semidefinite(hg, dom.sign_of):
            h = tuple(-x for x in h)
        _, f, vecs = _grow_along(problem, f, h, vecs)
        vecs = list(vecs)
    raise NoProgress("perfection walk exceeded the chart dimension")


def neighbor_form(problem, f, facet, src_vecs=None):
    """The unique perfect form across a facet, certified."""
    for x in facet.incidence:
        if problem.sign(problem.form_value(facet.normal, x)) != 0:
            raise DirectionNotOutward("normal does not vanish on its facet")
    _, g, vecs = _grow_along(problem, f, facet.normal, sorted(facet.incidence))
    rows = [list(problem.rank_one_chart(x)) for x in vecs]
    if linalg.rank(rows) != problem.chart_dim:
        raise NoProgress("facet crossing produced an imperfect form")
    if src_vecs is None:
        src_vecs = form_minimum(problem, f)[1]
    shared = frozenset(vecs) & frozenset(src_vecs)
    if shared != facet.incidence:
        raise NoProgress("facet crossing changed the shared incidence")
    return g, vecs


class PerfectForm:
    """One orbit representative in the perfect-form graph."""

    def __init__(self, index, chart, min_vectors):
        self.index = index
        self.chart = chart
        self.min_vectors = tuple(min_vectors)

    def __repr__(self):
        return "PerfectForm(#%d, %d minimal vectors)" % (
            self.index, len(self.min_vectors))


class FacetEdge:
    """Facet of an orbit representative with its classified neighbor.

    transporter pulls the discovered neighbor form onto the destination
    orbit representative; tree edges (first discovery) carry the
    identity.
    """

    __slots__ = ("src", "facet_index", "normal", "incidence", "dst",
                 "transporter", "is_tree")

    def __init__(self, src, facet_index, normal, incidence, dst,
                 transporter, is_tree):
        self.src = src
        self.facet_index = facet_index
        self.normal = normal
        self.incidence = incidence
        self.dst = dst
        self.transporter = transporter
        self.is_tree = is_tree


class VoronoiGraph:
    """Perfect-form orbits, their stabilizers, and classified facets."""

    def __init__(self, problem, forms, facet_edges, stabilizers):
        self.problem = problem
        self.forms = forms
        self.facet_edges = facet_edges
        self.stabilizers = stabilizers

    def __repr__(self):
        return "VoronoiGraph(%d orbits, %d facets)" % (
            len(self.forms), sum(len(fe) for fe in self.facet_edges))

    def stabilizer_orders(self):
        return [len(s) for s in self.stabilizers]

    def check_invariants(self):
        """Tessellation sanity: every facet classified, transporters move
        neighbor forms onto representatives, incidences transport."""
        pr = self.problem
        for i, form in enumerate(self.forms):
            mv = frozenset(form.min_vectors)
            for e in self.facet_edges[i]:
                if e.incidence - mv:
                    raise NoProgress("facet incidence escapes the "
                                     "minimal vectors")
                nb, nb_vecs = neighbor_form(pr, form.chart, e,
                                            form.min_vectors)
                target = self.forms[e.dst].chart
                if pr.act_form(e.transporter, nb) != target:
                    raise NoProgress("transporter does not classify the "
                                     "neighbor")
                moved = {transport_vector(e.transporter, x)
                         for x in nb_vecs}
                target_vecs = set(self.forms[e.dst].min_vectors)
                if moved != target_vecs:
                    raise NoProgress("minimal vectors do not transport")
        return True


def transport_vector(u, x):
    """Image of a lattice vector under a unit, canonical sign."""
    from .shortvec import canonical_sign
    rho = u.rho
    return canonical_sign([
        sum(rho[i][j] * x[j] for j in range(len(x)))
        for i in range(len(rho))])


def form_invariant(problem, f, vecs):
    gram = problem.form_gram_rows(f)
    return (len(vecs), form_sort_key([linalg.det(gram)]))


def enumerate_perfect_forms(problem, max_orbits=512, progress=None):
    """Breadth-first sweep over perfect-form orbits.

    Returns a VoronoiGraph whose facet edges carry exact transporters.
    Raises BudgetExceeded when more than max_orbits orbits appear.
    progress, if given, is called as progress(done, known) before each
    orbit is expanded.
    """
    f0, vecs0 = initial_perfect_form(problem)
    forms = [PerfectForm(0, f0, vecs0)]
    invariants = [form_invariant(problem, f0, vecs0)]
    stabilizers = [stabilizer_units(problem, f0, list(vecs0))]
    facet_edges = [None]
    head = 0
    while head < len(forms):
        if progress is not None:
            progress(head, len(forms))
        rep = forms[head]
        edges = []
        facets = facet_directions(problem, rep.chart, rep.min_vectors)
        for fi, facet in enumerate(facets):
            nb, nb_vecs = neighbor_form(problem, rep.chart, facet,
                                        rep.min_vectors)
            inv = form_invariant(problem, nb, nb_vecs)
            dst = None
            transporter = None
            for j, known in enumerate(forms):
                if invariants[j] != inv:
                    continue
                g = first_isometry_unit(problem, nb, known.chart,
                                        list(nb_vecs),
                                        list(known.min_vectors))
                if g is not None:
                    dst, transporter = j, g
                    break
            is_tree = dst is None
            if is_tree:
                dst = len(forms)
                transporter = problem.units.identity
                forms.append(PerfectForm(dst, nb, nb_vecs))
                invariants.append(inv)
                stabilizers.append(
                    stabilizer_units(problem, nb, list(nb_vecs)))
                facet_edges.append(None)
                if len(forms) > max_orbits:
                    raise BudgetExceeded(
                        "more than %d perfect form orbits" % max_orbits)
            edges.append(FacetEdge(head, fi, facet.normal, facet.incidence,
                                   dst, transporter, is_tree))
        facet_edges[head] = edges
        head += 1
    return VoronoiGraph(problem, forms, facet_edges, stabilizers)
