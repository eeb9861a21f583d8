"""Unit groups of orders in simple rational algebras.

Computes generators, a finite presentation, and word-problem solutions for
the unit group of an order, by enumerating perfect quadratic and Hermitian
forms and reading the group structure off the resulting cell decomposition.
"""

from .errors import *  # noqa: F401,F403
from .scalars import NumberField, FieldElement, make_field, rational_field, QQ
from .problem import Problem
from .voronoi import VoronoiGraph, enumerate_perfect_forms
from .presentation import (GroupPresentation, assemble_presentation,
                           verify_presentation)
from .tietze import (abelian_invariants, abelianization, deficiency,
                     simplify, two_generator_reduction)
from .wordsolve import solve_word
from .cli import parse_problem

__version__ = "0.1.0"
