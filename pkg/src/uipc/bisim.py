"""Bisimulations between intuitionistic Kripke models.

Three independent routes to bounded bisimilarity live here and are
cross-checked by the test suite:

* :func:`bounded_le` follows the mutual recursion between the bounded
  preorder and bounded bisimilarity one level down;
* :func:`bounded_bisimulation` builds the layered relations ``Z_0 .. Z_n``;
* :func:`game_value` solves the back-and-forth game by minimax.

Whole universes are classified at once by partition refinement over their
disjoint union (:func:`bisimilarity_classes`).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .kripke import KripkeModel, ModelUniverse, PointedModel
from .syntax import VarSet, varset

__all__ = ["BisimRelation", "BoundedBisim", "max_bisimulation", "is_bisimulation",
           "bounded_bisimulation", "is_bounded_bisimulation", "bounded_le",
           "bounded_bisimilar", "bisimilar", "game_value", "game_strategy",
           "bisimilarity_classes", "BoundedOrder", "bounded_order"]


def _observed(a: KripkeModel, b: KripkeModel, observed) -> VarSet:
    obs = varset(observed)
    missing = (obs - a.signature) | (obs - b.signature)
    if missing:
        raise ValueError(f"observed variables {missing} are not in both signatures")
    return obs


def _agree(a, w, b, v, obs):
    return all((a.valuation[q] >> w & 1) == (b.valuation[q] >> v & 1) for q in obs)


def _below(a, w, b, v, obs):
    return all(not (a.valuation[q] >> w & 1) or (b.valuation[q] >> v & 1) for q in obs)


@dataclass(frozen=True)
class BisimRelation:
    left: KripkeModel
    right: KripkeModel
    pairs: frozenset
    observed: VarSet

    def __contains__(self, pair):
        return pair in self.pairs

    def __iter__(self):
        return iter(sorted(self.pairs))

    def __len__(self):
        return len(self.pairs)


@dataclass(frozen=True)
class BoundedBisim:
    left: KripkeModel
    right: KripkeModel
    layers: tuple
    observed: VarSet

    @property
    def depth(self) -> int:
        return len(self.layers) - 1

    def relates(self, w: int, v: int) -> bool:
        return (w, v) in self.layers[-1]


def _zig_zag(a, b, pairs, w, v):
    """Forth and back clauses of ``(w, v)`` against the relation ``pairs``."""
    for x in a.successors(w):
        if not any((x, y) in pairs for y in b.successors(v)):
            return False
    for y in b.successors(v):
        if not any((x, y) in pairs for x in a.successors(w)):
            return False
    return True


def max_bisimulation(a: KripkeModel, b: KripkeModel, observed: Iterable[str]) -> BisimRelation:
    """Largest ``observed``-bisimulation between ``a`` and ``b``.

    Greatest fixpoint: start from the atom-agreeing pairs and prune pairs
    violating forth or back until nothing changes.
    """
    obs = _observed(a, b, observed)
    pairs = {(w, v) for w in range(a.size) for v in range(b.size) if _agree(a, w, b, v, obs)}
    changed = True
    while changed:
        changed = False
        for pair in sorted(pairs):
            if not _zig_zag(a, b, pairs, *pair):
                pairs.discard(pair)
                changed = True
    return BisimRelation(a, b, frozenset(pairs), obs)


def is_bisimulation(rel: BisimRelation) -> bool:
    a, b = rel.left, rel.right
    return all(_agree(a, w, b, v, rel.observed) and _zig_zag(a, b, rel.pairs, w, v)
               for w, v in rel.pairs)


def bisimilar(x: PointedModel, y: PointedModel, observed: Iterable[str]) -> bool:
    return (x.point, y.point) in max_bisimulation(x.model, y.model, observed).pairs


def bounded_bisimulation(a: KripkeModel, b: KripkeModel, n: int,
                         observed: Iterable[str]) -> BoundedBisim:
    """The largest bounded bisimulation of depth ``n``, layer by layer."""
    if n < 0:
        raise ValueError("depth must be non-negative")
    obs = _observed(a, b, observed)
    base = frozenset((w, v) for w in range(a.size) for v in range(b.size)
                     if _agree(a, w, b, v, obs))
    layers = [base]
    for _ in range(n):
        prev = layers[-1]
        layers.append(frozenset(p for p in base if _zig_zag(a, b, prev, *p)))
    return BoundedBisim(a, b, tuple(layers), obs)


def is_bounded_bisimulation(z: BoundedBisim) -> bool:
    a, b = z.left, z.right
    if not all(_agree(a, w, b, v, z.observed) for layer in z.layers for w, v in layer):
        return False
    return all(_zig_zag(a, b, z.layers[i], w, v)
               for i in range(len(z.layers) - 1) for w, v in z.layers[i + 1])


def bounded_le(x: PointedModel, y: PointedModel, n: int, observed: Iterable[str],
               _memo: dict | None = None) -> bool:
    """Decide the bounded preorder ``x <=_{n, observed} y``.

    ``n = 0``: every observed atom true at ``x`` is true at ``y``.  ``n >= 1``:
    every successor of ``y`` is ``(n-1)``-bisimilar to some successor of ``x``.
    """
    if n < 0:
        raise ValueError("depth must be non-negative")
    a, b = x.model, y.model
    obs = _observed(a, b, observed)
    memo = {} if _memo is None else _memo

    def le(m1, w, m2, v, k):
        key = (id(m1), w, id(m2), v, k)
        r = memo.get(key)
        if r is None:
            if k == 0:
                r = _below(m1, w, m2, v, obs)
            else:
                r = all(any(sim(m1, s, m2, t, k - 1) for s in m1.successors(w))
                        for t in m2.successors(v))
            memo[key] = r
        return r

    def sim(m1, w, m2, v, k):
        return le(m1, w, m2, v, k) and le(m2, v, m1, w, k)

    return le(a, x.point, b, y.point, n)


def bounded_bisimilar(x: PointedModel, y: PointedModel, n: int, observed: Iterable[str]) -> bool:
    memo: dict = {}
    return bounded_le(x, y, n, observed, memo) and bounded_le(y, x, n, observed, memo)


# -- the back-and-forth game ------------------------------------------------------

def _spoiler_moves(a, b, w, v):
    for s in a.successors(w):
        yield ("left", s)
    for t in b.successors(v):
        yield ("right", t)


def _replies(a, b, w, v, move):
    side, node = move
    if side == "left":
        return [(node, t) for t in b.successors(v)]
    return [(s, node) for s in a.successors(w)]


def game_value(x: PointedModel, y: PointedModel, n: int, observed: Iterable[str]) -> bool:
    """Whether Duplicator survives ``n`` rounds of the bisimulation game.

    A position loses for Duplicator as soon as the observed atoms differ.  In
    each round Spoiler moves up in one model and Duplicator must move up in
    the other.
    """
    a, b = x.model, y.model
    obs = _observed(a, b, observed)
    memo: dict = {}

    def duplicator_wins(w, v, k):
        key = (w, v, k)
        if key in memo:
            return memo[key]
        if not _agree(a, w, b, v, obs):
            r = False
        elif k == 0:
            r = True
        else:
            r = all(any(duplicator_wins(s, t, k - 1) for s, t in _replies(a, b, w, v, mv))
                    for mv in _spoiler_moves(a, b, w, v))
        memo[key] = r
        return r

    return duplicator_wins(x.point, y.point, n)


def game_strategy(x: PointedModel, y: PointedModel, n: int, observed: Iterable[str]) -> list[str]:
    """Human readable winning strategy for whichever player wins."""
    a, b = x.model, y.model
    obs = _observed(a, b, observed)

    def wins(w, v, k):
        return game_value(PointedModel(a, w), PointedModel(b, v), k, obs)

    lines = []

    def spoiler(w, v, k, indent):
        pad = "  " * indent
        if not _agree(a, w, b, v, obs):
            diff = sorted(q for q in obs if (a.valuation[q] >> w & 1) != (b.valuation[q] >> v & 1))
            lines.append(f"{pad}position ({w}, {v}): atoms differ on {', '.join(diff)}; Spoiler wins")
            return
        for mv in _spoiler_moves(a, b, w, v):
            if not any(wins(s, t, k - 1) for s, t in _replies(a, b, w, v, mv)):
                lines.append(f"{pad}position ({w}, {v}): Spoiler moves {mv[0]} to {mv[1]}")
                for s, t in _replies(a, b, w, v, mv):
                    lines.append(f"{pad}  Duplicator answers ({s}, {t})")
                    spoiler(s, t, k - 1, indent + 2)
                return

    def duplicator(w, v, k, indent):
        pad = "  " * indent
        if k == 0:
            return
        for mv in _spoiler_moves(a, b, w, v):
            for s, t in _replies(a, b, w, v, mv):
                if wins(s, t, k - 1):
                    lines.append(f"{pad}Spoiler {mv[0]} {mv[1]} -> Duplicator answers ({s}, {t})")
                    duplicator(s, t, k - 1, indent + 1)
                    break

    if wins(x.point, y.point, n):
        lines.append(f"Duplicator wins the {n}-round game from ({x.point}, {y.point})")
        duplicator(x.point, y.point, n, 1)
    else:
        lines.append(f"Spoiler wins the {n}-round game from ({x.point}, {y.point})")
        spoiler(x.point, y.point, n, 1)
    return lines


# -- whole-universe classification ------------------------------------------------

def _atom_codes(u: ModelUniverse, obs) -> np.ndarray:
    code = np.zeros(len(u), dtype=np.int64)
    for i, q in enumerate(obs):
        code |= u.atoms[q].astype(np.int64) << i
    return code


def _successor_sets(u: ModelUniverse, cls: np.ndarray) -> np.ndarray:
    """Row ``g``: sorted distinct classes of the successors of ``g``, padded with -1."""
    s = np.append(cls, -1)[u.succ]
    s.sort(axis=1)
    dup = np.zeros_like(s, dtype=bool)
    dup[:, 1:] = s[:, 1:] == s[:, :-1]
    s[dup] = -1
    s.sort(axis=1)
    return s


def bisimilarity_classes(u: ModelUniverse, observed: Iterable[str],
                         rounds: int | None = None) -> np.ndarray:
    """Class index per pointed model of ``u``.

    With ``rounds=None`` the classes are those of full ``observed``-bisimilarity
    (refinement to a fixpoint); with ``rounds=k`` they are the classes of
    ``k``-bisimilarity.
    """
    obs = varset(observed)
    if obs - u.signature:
        raise ValueError(f"observed variables {obs - u.signature} not in the universe signature")
    atoms = _atom_codes(u, obs)
    _, cls = np.unique(atoms, return_inverse=True)
    count = cls.max() + 1 if len(cls) else 0
    k = 0
    while rounds is None or k < rounds:
        key = np.ascontiguousarray(np.column_stack([atoms, _successor_sets(u, cls)]))
        rows = key.view(np.dtype((np.void, key.dtype.itemsize * key.shape[1]))).ravel()
        _, new = np.unique(rows, return_inverse=True)
        new = new.reshape(-1)
        new_count = new.max() + 1 if len(new) else 0
        k += 1
        if rounds is None and new_count == count:
            break
        cls, count = new, new_count
    return cls


class BoundedOrder:
    """The preorder ``<=_{n, observed}`` between pointed models of a universe.

    For ``n = 0`` the key of a pointed model is its set of observed atoms;
    for ``n >= 1`` it is the set of ``(n-1)``-bisimilarity classes of its
    successors.  ``le(g, h)`` compares keys accordingly.
    """

    def __init__(self, u: ModelUniverse, n: int, observed):
        self.n = n
        obs = varset(observed)
        if n == 0:
            codes = _atom_codes(u, obs)
            self.keys = [int(c) for c in codes]
        else:
            cls = bisimilarity_classes(u, obs, rounds=n - 1)
            rows = _successor_sets(u, cls)
            self.keys = []
            for row in rows:
                m = 0
                for c in row:
                    if c >= 0:
                        m |= 1 << int(c)
                self.keys.append(m)

    def le(self, g: int, h: int) -> bool:
        if self.n == 0:
            return not (self.keys[g] & ~self.keys[h])
        return not (self.keys[h] & ~self.keys[g])


def bounded_order(u: ModelUniverse, n: int, observed) -> BoundedOrder:
    return BoundedOrder(u, n, observed)
