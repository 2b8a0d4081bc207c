"""Classical uniform interpolants by substituting truth values.

The right interpolant of ``psi`` is the disjunction of ``psi`` with the
eliminated variables replaced by every vector of ``F``/``T``; the left one is
the corresponding conjunction.
"""
from __future__ import annotations

import itertools
from typing import Iterable

from .syntax import BOT, TOP, Formula, conj, disj, simplify_constants, substitute, varset

__all__ = ["cpc_right_ui", "cpc_left_ui", "boolean_instances"]


def boolean_instances(f: Formula, eliminate: Iterable[str]) -> list[Formula]:
    """``f`` under every assignment of ``F``/``T`` to ``eliminate`` (F first, sorted order)."""
    names = list(varset(eliminate))
    return [substitute(f, dict(zip(names, values)))
            for values in itertools.product((BOT, TOP), repeat=len(names))]


def cpc_right_ui(psi: Formula, eliminate: Iterable[str], simplify: bool = True) -> Formula:
    """Existential projection of ``psi``: it holds at a valuation iff some
    extension to the eliminated variables satisfies ``psi``."""
    raw = disj(boolean_instances(psi, eliminate))
    return simplify_constants(raw) if simplify else raw


def cpc_left_ui(theta: Formula, eliminate: Iterable[str], simplify: bool = True) -> Formula:
    """Universal projection of ``theta``."""
    raw = conj(boolean_instances(theta, eliminate))
    return simplify_constants(raw) if simplify else raw
