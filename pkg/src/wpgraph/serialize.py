"""JSON wire formats and exact rational parsing.

Rationals travel as canonical strings: ``"p/q"`` in lowest terms, or ``"p"``
when the denominator is 1.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError, WPGraphError, ZeroDenominatorError
from .graph import Graph, build_graph
from .groups import FiniteGroup, validate_group
from .measure import Measure
from .transport import Coupling

_RATIONAL = re.compile(r"\s*(-?\d+)(?:/(\d+))?\s*\Z")


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise ParseError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    m = _RATIONAL.match(str(text))
    if not m:
        raise ParseError(f"not a rational: {text!r}")
    num, den = m.groups()
    if den is not None and int(den) == 0:
        raise ZeroDenominatorError(f"zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def graph_to_json(g: Graph) -> dict:
    return {
        "vertices": list(g.vertices),
        "edges": [[g.vertices[i], g.vertices[j]] for i, j in g.sorted_edges()],
    }


def graph_from_json(obj) -> Graph:
    try:
        return build_graph(obj["vertices"], obj["edges"])
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph JSON: {exc}") from None


def measure_to_json(mu, g: Graph) -> dict:
    return {"mass": {g.vertices[x]: format_rational(w) for x, w in mu.items()}}


def measure_from_json(obj, g: Graph) -> Measure:
    try:
        mass = obj["mass"]
        return Measure({g.index(name): parse_rational(w) for name, w in mass.items()})
    except (KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"malformed measure JSON: {exc}") from None


def group_to_json(h: FiniteGroup) -> dict:
    return {"order": h.order, "table": [list(row) for row in h.table]}


def group_from_json(obj) -> FiniteGroup:
    try:
        table = obj["table"]
        if "order" in obj and obj["order"] != len(table):
            raise WPGraphError(f"order {obj['order']} disagrees with table size {len(table)}")
        return validate_group(table)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed group JSON: {exc}") from None


def plan_to_json(plan: Coupling, g: Graph, cost_p) -> dict:
    return {
        "entries": [[g.vertices[x], g.vertices[y], format_rational(w)]
                    for (x, y), w in plan.entries.items()],
        "cost_p": format_rational(cost_p),
    }


def plan_from_json(obj, g: Graph, source: Measure, target: Measure) -> Coupling:
    try:
        entries = {(g.index(x), g.index(y)): parse_rational(w) for x, y, w in obj["entries"]}
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, WPGraphError):
            raise
        raise ParseError(f"malformed plan JSON: {exc}") from None
    return Coupling(entries, source, target)
