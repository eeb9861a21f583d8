"""Problem-file parsing, pipeline orchestration, and result emission.

Problem files are line-oriented: `[section]` headers, `key = value`
entries, indented continuation lines, and `#` comments.  Sections:

  [field]       minpoly (monic, low degree first) and an isolating
                interval; for the `table` and `generated_matrix`
                constructions.
  [algebra]     `construction = <name>` plus its parameters, or
                `construction = table` with explicit structure constants.
  [involution]  dagger matrix rows (table construction).
  [trace]       trace pairing row (table construction).
  [embedding]   container coordinates of the algebra basis (table).
  [order]       order basis rows, rational algebra coordinates.
  [lattice]     container images of the module basis.
  [options]     mode, max_orbits, seed, label.

Scalars over a number field are written either as polynomials in the
generator `g` (`1-1/2g^2`) or as comma-joined coordinates (`1,-1/2`).

Exit codes: 0 success, 1 any validation or verification failure,
2 an exhausted orbit/retry budget.
"""

import argparse
import json
import os
import random
import re
import sys

from . import algebra
from .algebra import AlgebraSetup, StructureAlgebra
from .errors import (BudgetExceeded, GroupTooLarge, NotAUnit,
                     PerturbationBudgetExceeded, ProblemFileError,
                     UnitGroupError)
from .presentation import assemble_presentation, verify_presentation
from .problem import Problem
from .scalars import FieldElement, NumberField, make_field, scalar_domain, to_qq
from .tietze import (abelian_invariants, abelian_str, deficiency,
                     preferred_survivors, simplify)
from .voronoi import enumerate_perfect_forms
from .wordsolve import solve_word


# -- problem files -----------------------------------------------------------

_SECTIONS = ("field", "algebra", "involution", "trace", "embedding",
             "order", "lattice", "endomorphisms", "options")


def _parse_sections(text):
    """section -> key -> (value with continuations joined, line number)."""
    out = {}
    current = None
    last_key = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.startswith("["):
            name = line.strip()
            if not name.endswith("]"):
                raise ProblemFileError("unterminated section header", ln)
            name = name[1:-1].strip()
            if name not in _SECTIONS:
                raise ProblemFileError("unknown section [%s]" % name, ln)
            if name in out:
                raise ProblemFileError("duplicate section [%s]" % name, ln)
            out[name] = {}
            current = name
            last_key = None
            continue
        if current is None:
            raise ProblemFileError("entry before any section header", ln)
        if line[0] in " \t":
            if last_key is None:
                raise ProblemFileError("continuation without a key", ln)
            val, first = out[current][last_key]
            out[current][last_key] = (val + "\n" + line.strip(), first)
            continue
        if "=" not in line:
            raise ProblemFileError("expected `key = value`", ln)
        key, _, val = line.partition("=")
        key = key.strip()
        if key in out[current]:
            raise ProblemFileError("duplicate key `%s`" % key, ln)
        out[current][key] = (val.strip(), ln)
        last_key = key
    return out


def _rational(tok, line):
    try:
        return to_qq(tok)
    except (ValueError, ZeroDivisionError, TypeError):
        raise ProblemFileError("bad rational `%s`" % tok, line)


_TERM = re.compile(r"^([+-]?)(\d+(?:/\d+)?)?(g(?:\^(\d+))?)?$")


def _scalar(tok, domain, line):
    """One scalar token: rational, polynomial in g, or comma coordinates."""
    field = domain if isinstance(domain, NumberField) else None
    if "," in tok:
        if field is None:
            raise ProblemFileError(
                "coordinate scalar `%s` needs a number field" % tok, line)
        return field.element([_rational(c, line) for c in tok.split(",")])
    coeffs = [to_qq(0)] * (field.degree if field else 1)
    for term in re.findall(r"[+-]?[^+-]+|[+-](?=[+-])", tok):
        m = _TERM.match(term)
        if not m or (not m.group(2) and not m.group(3)):
            raise ProblemFileError("bad scalar term `%s`" % term, line)
        sign = -1 if m.group(1) == "-" else 1
        coeff = _rational(m.group(2), line) if m.group(2) else to_qq(1)
        power = 0
        if m.group(3):
            power = int(m.group(4)) if m.group(4) else 1
        if power >= len(coeffs):
            raise ProblemFileError(
                "generator power %d exceeds the field degree" % power, line)
        coeffs[power] += sign * coeff
    if field is None:
        return coeffs[0]
    return field.element(coeffs)


def format_scalar(x):
    """Canonical token for a scalar; inverse of the parser."""
    if not isinstance(x, FieldElement):
        return str(to_qq(x))
    parts = []
    for k, c in enumerate(x.c):
        if not c:
            continue
        mag = "" if abs(c) == 1 and k else str(abs(c))
        head = "-" if c < 0 else ("+" if parts else "")
        gen = "" if k == 0 else ("g" if k == 1 else "g^%d" % k)
        parts.append(head + mag + gen)
    return "".join(parts) or "0"


def _row(tokens, domain, line):
    return tuple(_scalar(t, domain, line) for t in tokens.split())


def _rows(value, domain, line):
    chunks = []
    for part in value.replace(";", "\n").splitlines():
        if part.strip():
            chunks.append(_row(part, domain, line))
    if not chunks:
        raise ProblemFileError("empty row list", line)
    return chunks


def _rational_rows(value, line):
    out = []
    for part in value.replace(";", "\n").splitlines():
        if part.strip():
            out.append(tuple(_rational(t, line) for t in part.split()))
    if not out:
        raise ProblemFileError("empty row list", line)
    return out


def _get(section, key, default=None):
    if key in section:
        return section[key]
    return (default, None)


def _require(sections, name, key):
    sec = sections.get(name, {})
    if key not in sec:
        raise ProblemFileError("missing `%s` in section [%s]" % (key, name))
    return sec[key]


def _int_option(section, key, default):
    val, ln = _get(section, key, None)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        raise ProblemFileError("`%s` must be an integer" % key, ln)


def _build_field(sections):
    sec = sections.get("field")
    if sec is None:
        return None
    mp_val, mp_ln = _require(sections, "field", "minpoly")
    iv_val, iv_ln = _require(sections, "field", "interval")
    coeffs = [_rational(t, mp_ln) for t in mp_val.split()]
    bounds = [_rational(t, iv_ln) for t in iv_val.split()]
    if len(bounds) != 2:
        raise ProblemFileError("interval needs two rational bounds", iv_ln)
    return make_field(coeffs, bounds[0], bounds[1])


def _table_setup(sections, field):
    domain = scalar_domain(field)
    alg = sections["algebra"]
    dim = _int_option(alg, "dimension", None)
    if dim is None:
        raise ProblemFileError("table construction needs `dimension`")
    one_val, one_ln = _require(sections, "algebra", "one")
    one = _row(one_val, domain, one_ln)
    if len(one) != dim:
        raise ProblemFileError("`one` has the wrong length", one_ln)
    prod_val, prod_ln = _require(sections, "algebra", "products")
    table = [[() for _ in range(dim)] for _ in range(dim)]
    for part in prod_val.replace(";", "\n").splitlines():
        if not part.strip():
            continue
        head, sep, coords = part.partition(":")
        if not sep:
            raise ProblemFileError("product rows read `i j : coords`",
                                   prod_ln)
        try:
            i, j = (int(t) for t in head.split())
        except ValueError:
            raise ProblemFileError("bad product indices `%s`" % head.strip(),
                                   prod_ln)
        if not (0 <= i < dim and 0 <= j < dim):
            raise ProblemFileError("product index out of range", prod_ln)
        row = _row(coords, domain, prod_ln)
        if len(row) != dim:
            raise ProblemFileError("product row has the wrong length",
                                   prod_ln)
        table[i][j] = tuple((k, c) for k, c in enumerate(row) if c)
    dag_val, dag_ln = _require(sections, "involution", "rows")
    dagger = _rows(dag_val, domain, dag_ln)
    if len(dagger) != dim or any(len(r) != dim for r in dagger):
        raise ProblemFileError("involution must be %d rows of %d"
                               % (dim, dim), dag_ln)
    tr_val, tr_ln = _require(sections, "trace", "row")
    trace = _row(tr_val, domain, tr_ln)
    if len(trace) != dim:
        raise ProblemFileError("trace row has the wrong length", tr_ln)
    label, _ = _get(sections.get("options", {}), "label", "table algebra")
    amb = StructureAlgebra(domain, table, one, dagger, trace, label=label)
    emb = sections.get("embedding")
    if emb is not None:
        emb_val, emb_ln = _require(sections, "embedding", "rows")
        img_basis = _rows(emb_val, domain, emb_ln)
    else:
        img_basis = [amb.basis_vector(i) for i in range(dim)]
    endo = sections.get("endomorphisms")
    if endo is not None:
        endo_val, endo_ln = _require(sections, "endomorphisms", "rows")
        endo_elements = _rows(endo_val, domain, endo_ln)
    else:
        endo_elements = [tuple(one)]
    return AlgebraSetup(amb, img_basis, None, None, endo_elements, label)


def _named_setup(sections, construction, alg, field):
    if "field" in sections and construction != "generated_matrix":
        raise ProblemFileError(
            "construction `%s` determines its own scalar field"
            % construction)

    def rat(key):
        val, ln = _get(alg, key, None)
        if val is None:
            raise ProblemFileError("construction `%s` needs `%s`"
                                   % (construction, key))
        return _rational(val, ln)

    quat_rows = None
    if construction == "matrix":
        setup = algebra.matrix_algebra(_int_option(alg, "n", 2))
    elif construction == "quaternion_split":
        split_on, _ = _get(alg, "split_on", "a")
        setup = algebra.quaternion_split(rat("a"), rat("b"),
                                         split_on=split_on)
    elif construction == "quaternion_definite":
        setup = algebra.quaternion_definite(rat("a"), rat("b"))
    elif construction == "quaternion_cm":
        setup = algebra.quaternion_cm(rat("a"), rat("b"), rat("d"))
    elif construction == "matrix_quaternion":
        n = _int_option(alg, "n", 2)
        setup = algebra.matrix_quaternion(rat("a"), rat("b"), n=n)
        qb_val, qb_ln = _get(alg, "quaternion_basis", None)
        if qb_val is None:
            raise ProblemFileError(
                "matrix_quaternion needs `quaternion_basis` rows")
        quat_rows = _rational_rows(qb_val, qb_ln)
        if any(len(r) != 4 for r in quat_rows):
            raise ProblemFileError("quaternion basis rows have 4 entries",
                                   qb_ln)
        setup.order_basis = algebra.matrix_quaternion_order(quat_rows, n=n)
        setup.sigma_images = algebra.matrix_quaternion_lattice(quat_rows,
                                                               n=n)
    elif construction == "generated_matrix":
        n = _int_option(alg, "n", None)
        if n is None:
            raise ProblemFileError("generated_matrix needs `n`")
        gv, gl = _get(alg, "generators", None)
        if gv is None:
            raise ProblemFileError(
                "generated_matrix needs `generators` rows")
        mats = _rows(gv, scalar_domain(field), gl)
        if any(len(r) != n * n for r in mats):
            raise ProblemFileError(
                "each generator needs n*n = %d entries" % (n * n), gl)
        setup = algebra.generated_matrix(field, n, mats)
    else:
        raise ProblemFileError("unknown construction `%s`" % construction)
    return setup


class ProblemSpec:
    """Validated problem description plus run options."""

    def __init__(self, setup, order_basis, sigma_images, options):
        self.setup = setup
        self.order_basis = order_basis
        self.sigma_images = sigma_images
        self.options = options

    def build(self):
        return Problem(self.setup, order_basis=self.order_basis,
                       sigma_images=self.sigma_images,
                       label=self.options["label"])


def parse_problem(text):
    """Parse and validate a problem file into a ProblemSpec."""
    sections = _parse_sections(text)
    if "algebra" not in sections:
        raise ProblemFileError("missing [algebra] section")
    alg = sections["algebra"]
    construction, _ = _get(alg, "construction", None)
    if construction is None:
        raise ProblemFileError("missing `construction` in [algebra]")
    field = _build_field(sections)
    if construction == "table":
        setup = _table_setup(sections, field)
    else:
        setup = _named_setup(sections, construction, alg, field)

    order_basis = None
    if "order" in sections:
        val, ln = _require(sections, "order", "rows")
        order_basis = _rational_rows(val, ln)
    sigma_images = None
    if "lattice" in sections:
        val, ln = _require(sections, "lattice", "rows")
        sigma_images = _rows(val, setup.ambient.domain, ln)

    opts = sections.get("options", {})
    mode, mode_ln = _get(opts, "mode", "units")
    if mode not in ("units", "units-mod-center"):
        raise ProblemFileError("mode is `units` or `units-mod-center`",
                               mode_ln)
    label, _ = _get(opts, "label", setup.label)
    options = {
        "mode": mode,
        "max_orbits": _int_option(opts, "max_orbits", 512),
        "seed": _int_option(opts, "seed", 0),
        "label": label,
    }
    for key in opts:
        if key not in ("mode", "max_orbits", "seed", "label"):
            raise ProblemFileError("unknown option `%s`" % key, opts[key][1])
    return ProblemSpec(setup, order_basis, sigma_images, options)


# -- words and serialization -------------------------------------------------

def format_word(names, word):
    if not word:
        return "1"
    parts = []
    for x in word:
        name = names[abs(x) - 1]
        parts.append(name if x > 0 else name + "^-1")
    return " ".join(parts)


def parse_word(text, names):
    """Inverse of format_word, with arbitrary integer exponents."""
    index = {name: k + 1 for k, name in enumerate(names)}
    word = []
    for tok in text.split():
        if tok == "1":
            continue
        name, _, exp = tok.partition("^")
        if name not in index:
            raise UnitGroupError("unknown generator `%s`" % name)
        try:
            e = int(exp) if exp else 1
        except ValueError:
            raise UnitGroupError("bad exponent on `%s`" % tok)
        word.extend([index[name] if e > 0 else -index[name]] * abs(e))
    return tuple(word)


def canonical_json(payload):
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def graph_payload(graph):
    orbits = []
    for i, form in enumerate(graph.forms):
        orbits.append({
            "index": i,
            "stabilizer_order": len(graph.stabilizers[i]),
            "min_vector_count": len(form.min_vectors),
            "form": [format_scalar(x) for x in form.chart],
        })
    facets = []
    for i, edges in enumerate(graph.facet_edges):
        for e in edges:
            facets.append({
                "src": e.src,
                "facet_index": e.facet_index,
                "dst": e.dst,
                "tree": e.is_tree,
                "incidence_size": len(e.incidence),
            })
    return {
        "label": graph.problem.label,
        "chart_dim": graph.problem.chart_dim,
        "lattice_rank": graph.problem.rank,
        "orbit_count": len(graph.forms),
        "orbits": orbits,
        "facets": facets,
    }


def graph_dot(graph):
    lines = ["digraph perfect_forms {"]
    for i in range(len(graph.forms)):
        lines.append('  P%d [label="P%d (stab %d)"];'
                     % (i, i, len(graph.stabilizers[i])))
    for i, edges in enumerate(graph.facet_edges):
        for e in edges:
            style = ' [style=dashed]' if e.is_tree else ""
            lines.append("  P%d -> P%d%s;" % (e.src, e.dst, style))
    lines.append("}")
    return "\n".join(lines) + "\n"


def presentation_payload(pres):
    free, torsion = abelian_invariants(len(pres.letters), pres.relators)
    keep = preferred_survivors(pres)
    names, rels, traces = simplify(pres.letters, pres.relators, keep=keep)
    sfree, storsion = abelian_invariants(len(names), rels)
    orders = [img.element_order(cap=2048) for img in pres.images]
    return {
        "mode": pres.mode,
        "letters": pres.letters,
        "letter_orders": orders,
        "images": [[list(r) for r in img.rho] for img in pres.images],
        "vertex_letters": pres.vertex_letters,
        "edge_orbits": pres.edge_orbits,
        "relator_count": len(pres.relators),
        "relators": [pres.word_str(r) for r in pres.relators],
        "abelianization": abelian_str(free, torsion),
        "simplified": {
            "letters": list(names),
            "relators": [format_word(names, r) for r in rels],
            "traces": [pres.word_str(t) for t in traces],
            "deficiency": deficiency(names, rels),
            "abelianization": abelian_str(sfree, storsion),
        },
    }


# -- commands ----------------------------------------------------------------

def _emit(args, stem, payload, extra=()):
    text = canonical_json(payload)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, stem + ".json"), "w") as fh:
            fh.write(text)
        for name, body in extra:
            with open(os.path.join(args.out, name), "w") as fh:
                fh.write(body)
    else:
        sys.stdout.write(text)


def _load(args):
    with open(args.problem) as fh:
        spec = parse_problem(fh.read())
    if args.mode:
        spec.options["mode"] = args.mode
    if args.max_orbits:
        spec.options["max_orbits"] = args.max_orbits
    if args.seed is not None:
        spec.options["seed"] = args.seed
    return spec, spec.build()


def _graph(spec, problem):
    return enumerate_perfect_forms(problem,
                                   max_orbits=spec.options["max_orbits"])


def cmd_perfect(args):
    spec, problem = _load(args)
    graph = _graph(spec, problem)
    _emit(args, "perfect", graph_payload(graph),
          extra=(("graph.dot", graph_dot(graph)),))
    return 0


def cmd_present(args):
    spec, problem = _load(args)
    pres = assemble_presentation(_graph(spec, problem),
                                 mode=spec.options["mode"])
    _emit(args, "present", presentation_payload(pres))
    return 0


def cmd_abelianize(args):
    spec, problem = _load(args)
    pres = assemble_presentation(_graph(spec, problem),
                                 mode=spec.options["mode"])
    free, torsion = abelian_invariants(len(pres.letters), pres.relators)
    _emit(args, "abelianize", {
        "mode": pres.mode,
        "free_rank": free,
        "invariant_factors": list(torsion),
        "group": abelian_str(free, torsion),
    })
    return 0


def cmd_word(args):
    spec, problem = _load(args)
    given = [x for x in (args.unit_coords, args.matrix, args.word)
             if x is not None]
    if len(given) != 1:
        raise UnitGroupError(
            "word needs exactly one of --unit-coords, --matrix, --word")
    pres = assemble_presentation(_graph(spec, problem),
                                 mode=spec.options["mode"])
    if args.unit_coords is not None:
        coords = [to_qq(t) for t in args.unit_coords.split()]
        target = problem.unit(coords)
        query = {"unit_coords": args.unit_coords}
    elif args.matrix is not None:
        rows = [[int(t) for t in part.split()]
                for part in args.matrix.split(";")]
        target = problem.action_to_unit(rows)
        if target is None:
            raise NotAUnit("matrix is not the lattice action of a unit")
        query = {"matrix": args.matrix}
    else:
        target = pres.evaluate(parse_word(args.word, pres.letters))
        query = {"word": args.word}
    word = solve_word(pres, target, seed=spec.options["seed"])
    assert pres.evaluate(word).rho == target.rho
    _emit(args, "word", {
        "query": query,
        "word": pres.word_str(word),
        "length": len(word),
        "verified": True,
    })
    return 0


def cmd_verify(args):
    spec, problem = _load(args)
    graph = _graph(spec, problem)
    report = {}
    ok = True

    def stage(name, fn):
        nonlocal ok
        try:
            fn()
            report[name] = "pass"
        except (BudgetExceeded, PerturbationBudgetExceeded, GroupTooLarge):
            raise
        except UnitGroupError as e:
            report[name] = "fail: %s" % e
            ok = False

    stage("tessellation", graph.check_invariants)
    pres = assemble_presentation(graph, mode=spec.options["mode"])
    stage("relators", lambda: verify_presentation(pres))

    def trips():
        rng = random.Random(spec.options["seed"])
        n = len(pres.letters)
        for k in range(args.trips):
            word = tuple(rng.choice([c for c in range(-n, n + 1) if c])
                         for _ in range(rng.randint(0, 10)))
            target = pres.evaluate(word)
            got = solve_word(pres, target, seed=k)
            if pres.evaluate(got).rho != target.rho:
                raise UnitGroupError("round trip diverged on %r" % (word,))

    stage("round_trips", trips)
    report["trips"] = args.trips
    _emit(args, "verify", report)
    return 0 if ok else 1


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="unitgroup",
        description="Generators, presentation, and word problem for the "
                    "unit group of an order, by perfect-form enumeration.")
    sub = ap.add_subparsers(dest="command", required=True)
    specs = {
        "perfect": (cmd_perfect, "enumerate perfect-form orbits"),
        "present": (cmd_present, "assemble and simplify a presentation"),
        "word": (cmd_word, "express a unit as a word in the generators"),
        "verify": (cmd_verify, "run the exactness invariant suite"),
        "abelianize": (cmd_abelianize, "invariant factors of the "
                                       "abelianized unit group"),
    }
    for name, (fn, help_text) in specs.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("problem", help="problem file path")
        p.add_argument("--mode", choices=("units", "units-mod-center"))
        p.add_argument("--max-orbits", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="directory for result artifacts")
        if name == "word":
            p.add_argument("--unit-coords",
                           help="order coordinates of the unit")
            p.add_argument("--matrix",
                           help="lattice action matrix, rows ; separated")
            p.add_argument("--word",
                           help="word in generator labels to resolve")
        if name == "verify":
            p.add_argument("--trips", type=int, default=25,
                           help="number of random round-trip words")
        p.set_defaults(fn=fn)
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (BudgetExceeded, PerturbationBudgetExceeded, GroupTooLarge) as e:
        print("budget exceeded: %s" % e, file=sys.stderr)
        return 2
    except UnitGroupError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
