"""Depth-bounded theory bases and bounded theories of pointed models.

Every formula of implication depth ``<= n`` over ``sig`` is IPC-equivalent to
a lattice combination (``/\\``, ``\\/``, ``F``, ``T``) of the *generators*

    G_0 = sig
    G_n = G_0 + { /\\A -> \\/B : A, B subsets of G_{n-1} }

because ``->`` turns a disjunction on the left and a conjunction on the right
into a conjunction of implications, and each layer is a distributive lattice
(so DNF/CNF exist).  The representatives of the depth-``n`` classes are the
lattice closure of ``G_n``.

At a single point forcing commutes with ``/\\`` and ``\\/``, so the bounded
theory of a point is determined by the generators it forces, and theory
inclusion can be decided on generators alone.  This is what makes theory
comparisons feasible when the full class list is astronomically large.
"""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .bisim import BoundedOrder
from .config import DEFAULT, ResourceLimitError
from .kripke import ModelUniverse, PointedModel, enumerate_universe
from .prover import Prover, default_prover
from .syntax import BOT, TOP, And, Or, Formula, Imp, VarSet, conj, disj, sort_key, to_text, varset, Var

log = logging.getLogger(__name__)

__all__ = ["TheoryBasis", "TheorySet", "TheoriesReport", "build_basis", "theory_of",
           "theory_mask", "check_theories_prop", "probe_universe", "random_formula",
           "validate_basis"]


def probe_universe(sig: VarSet) -> ModelUniverse:
    """Universe used to fingerprint formulas over ``sig``."""
    nodes = 5 if len(sig) <= 1 else 4 if len(sig) == 2 else 3
    return enumerate_universe(sig, nodes)


def _fingerprint(u: ModelUniverse, f: Formula) -> bytes:
    return np.packbits(u.extension(f)).tobytes()


@dataclass
class TheoryBasis:
    """Generators (and, when built, representatives) of the depth-bounded classes.

    ``reps`` is ``None`` when only the generating set was requested.  The
    closure separates classes by their extension on a probe universe, which
    is exact when the probe realises every generator pattern a point can
    have; ``probe_stable`` records whether a universe one node larger (or,
    at the enumeration limit, smaller) realises the same patterns, which is
    the available evidence for that.
    """

    signature: VarSet
    depth_bound: int
    generators: tuple
    reps: tuple | None = None
    entails: dict = field(default_factory=dict, repr=False)
    probe_stable: bool | None = None

    def __len__(self):
        if self.reps is None:
            raise ValueError("representatives were not built for this basis")
        return len(self.reps)

    def generator_entails(self, i: int, j: int) -> bool:
        return self.entails.get((i, j), i == j)


@dataclass(frozen=True)
class TheorySet:
    """The bounded theory of a point: the generators and classes it forces."""

    basis: TheoryBasis = field(compare=False, repr=False)
    mask: int
    members: frozenset | None = None

    def __le__(self, other: "TheorySet") -> bool:
        return not (self.mask & ~other.mask)

    def __lt__(self, other):
        return self <= other and self.mask != other.mask

    def __contains__(self, rep_index: int) -> bool:
        if self.members is None:
            raise ValueError("representatives were not built for this basis")
        return rep_index in self.members

    def generators(self) -> list[Formula]:
        return [g for i, g in enumerate(self.basis.generators) if self.mask >> i & 1]

    def formula(self) -> Formula:
        """Conjunction of the theory, reduced to its entailment-minimal generators."""
        idx = [i for i in range(len(self.basis.generators)) if self.mask >> i & 1]
        keep = [i for i in idx if not any(j != i and self.basis.generator_entails(j, i)
                                          for j in idx)]
        return conj(sorted((self.basis.generators[i] for i in keep), key=sort_key))


class _Classes:
    """Formulas grouped by fingerprint; equal fingerprints are merged only when
    the prover confirms equivalence."""

    def __init__(self, u, prover, cap):
        self.u = u
        self.prover = prover
        self.cap = cap
        self.buckets: dict = {}
        self.order: list = []

    def add(self, f: Formula) -> tuple[Formula, bool]:
        fp = _fingerprint(self.u, f)
        bucket = self.buckets.setdefault(fp, [])
        for k, g in enumerate(bucket):
            if self.prover.equiv(f, g):
                if sort_key(f) < sort_key(g):
                    bucket[k] = f
                    self.order[self.order.index(g)] = f
                    return f, False
                return g, False
        bucket.append(f)
        self.order.append(f)
        if len(self.order) > self.cap:
            raise ResourceLimitError(f"more than {self.cap} classes")
        return f, True


def _generators(sig: VarSet, n: int, prover: Prover, cap: int):
    u = probe_universe(sig)
    gens = [Var(x) for x in sig]
    ent = _entailment(gens, u, prover)
    for _ in range(n):
        classes = _Classes(u, prover, cap)
        for g in gens:
            classes.add(g)
        for a_set, b_set in _implication_shapes(len(gens), ent, cap):
            lhs = conj(gens[i] for i in a_set)
            rhs = disj(gens[j] for j in b_set)
            f = Imp(lhs, rhs)
            ext = u.extension(f)
            if ext.all():
                if prover.entails(TOP, f):
                    continue
            elif not ext.any() and prover.entails(f, BOT):
                continue
            classes.add(f)
        gens = sorted(classes.order, key=sort_key)
        gens = [g for g in gens if g is not TOP and g is not BOT]
        ent = _entailment(gens, u, prover)
    return tuple(gens), ent, u


def _implication_shapes(k, ent, cap):
    """Pairs ``(A, B)`` of antichains, ``A`` nonempty, with no ``a`` entailing a ``b``.

    The whole list is built before any formula so that an infeasible layer
    fails fast.
    """
    budget = 10 * cap
    shapes = []
    for a_set in _antichains_of(list(range(k)), ent, cap):
        if not a_set:
            continue
        allowed = [j for j in range(k) if j not in a_set
                   and not any(ent.get((i, j), False) for i in a_set)]
        for b_set in _antichains_of(allowed, ent, cap):
            shapes.append((a_set, b_set))
        if len(shapes) > budget:
            raise ResourceLimitError(f"generator layer needs more than {budget} implications")
    return shapes


def _antichains_of(items, ent, cap):
    """All subsets of ``items`` without two comparable elements."""
    out = [()]
    for x in items:
        new = []
        for s in out:
            if not any(ent.get((x, y)) or ent.get((y, x)) for y in s):
                new.append(s + (x,))
        out.extend(new)
        if len(out) > 50 * cap:
            raise ResourceLimitError("generator layer too large")
    return out


def _entailment(gens, u, prover):
    exts = [u.extension(g) for g in gens]
    ent = {}
    for i, j in itertools.permutations(range(len(gens)), 2):
        if not (exts[i] & ~exts[j]).any() and prover.entails(gens[i], gens[j]):
            ent[(i, j)] = True
    return ent


def _as_int(u: ModelUniverse, f: Formula) -> int:
    return int.from_bytes(np.packbits(u.extension(f)).tobytes(), "big")


def _lattice_closure(gens, u, cap):
    """Close ``gens`` under binary meet and join.

    Classes are identified by their extension on the probe universe, kept as
    Python ints so that meet and join are ``&`` and ``|``.
    """
    by_ext: dict = {}
    for f in [BOT, TOP, *gens]:
        e = _as_int(u, f)
        if e not in by_ext or sort_key(f) < sort_key(by_ext[e]):
            by_ext[e] = f
    frontier = list(by_ext)
    while frontier:
        current = list(by_ext)
        new = []
        for x in frontier:
            fx = by_ext[x]
            for y in current:
                fy = by_ext[y]
                for e, op in ((x & y, And), (x | y, Or)):
                    old = by_ext.get(e)
                    if old is not None:
                        if 1 + fx.size + fy.size < old.size:
                            by_ext[e] = op(fx, fy)
                        continue
                    by_ext[e] = op(fx, fy)
                    new.append(e)
                    if len(by_ext) > cap:
                        raise ResourceLimitError(f"basis exceeds the cap of {cap} classes")
        frontier = new
    return tuple(sorted(by_ext.values(), key=sort_key))


_too_large: dict = {}


@lru_cache(maxsize=64)
def _build(sig: VarSet, n: int, closure: bool, cap: int):
    prover = default_prover()
    gens, ent, u = _generators(sig, n, prover, cap)
    basis = TheoryBasis(sig, n, gens, None, ent)
    if closure:
        basis.reps = _lattice_closure(gens, u, cap)
        other = u.max_nodes + 1 if u.max_nodes < 5 else u.max_nodes - 1
        basis.probe_stable = (len(set(theory_mask(u, basis)))
                              == len(set(theory_mask(enumerate_universe(sig, other), basis))))
        if not basis.probe_stable:
            log.warning("probe universe may miss classes of depth %d over %s", n, sig)
    return basis


def build_basis(sig: Iterable[str], n: int, closure: bool = True,
                cap: int | None = None) -> TheoryBasis:
    """Generators of the depth-``n`` classes over ``sig`` and, with ``closure``,
    one representative per class (smallest by size, then text)."""
    if n < 0:
        raise ValueError("depth bound must be non-negative")
    key = (varset(sig), n, closure, cap or DEFAULT.basis_cap)
    if key in _too_large:
        raise ResourceLimitError(_too_large[key])
    try:
        return _build(*key)
    except ResourceLimitError as exc:
        _too_large[key] = str(exc)
        raise


def theory_mask(u: ModelUniverse, basis: TheoryBasis) -> list[int]:
    """Generator mask of the bounded theory of every pointed model of ``u``."""
    cols = [u.extension(g) for g in basis.generators]
    if not cols:
        return [0] * len(u)
    bits = np.zeros(len(u), dtype=object)
    bits[:] = 0
    for i, c in enumerate(cols):
        bits[c] += 1 << i
    return [int(b) for b in bits]


def theory_of(m: PointedModel, basis: TheoryBasis) -> TheorySet:
    """The classes of ``basis`` forced at ``m``."""
    model, w = m
    if basis.signature - model.signature:
        raise ValueError("basis signature is not contained in the model signature")
    mask = 0
    for i, g in enumerate(basis.generators):
        if model.forces(w, g):
            mask |= 1 << i
    members = None
    if basis.reps is not None:
        members = frozenset(i for i, r in enumerate(basis.reps) if model.forces(w, r))
    return TheorySet(basis, mask, members)


@dataclass
class TheoriesReport:
    universe: str
    depth: int
    observed: VarSet
    pairs_checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_theories_prop(u: ModelUniverse, n: int, observed: Iterable[str],
                        basis: TheoryBasis | None = None) -> TheoriesReport:
    """Check, for all ordered pairs of pointed models of ``u``, that the bounded
    preorder holds exactly when the bounded theories are included."""
    obs = varset(observed)
    if obs - u.signature:
        raise ValueError("observed variables must lie in the universe signature")
    basis = basis or build_basis(obs, n, closure=False)
    masks = theory_mask(u, basis)
    order = BoundedOrder(u, n, obs)
    groups: dict = {}
    for g in range(len(u)):
        groups.setdefault((masks[g], order.keys[g]), []).append(g)
    reps = [(key[0], members) for key, members in groups.items()]
    violations = []
    for (ma, ga), (mb, gb) in itertools.product(reps, repeat=2):
        le = order.le(ga[0], gb[0])
        incl = not (ma & ~mb)
        if le != incl:
            violations.append((u.pointed[ga[0]], u.pointed[gb[0]], le, incl))
    return TheoriesReport(repr(u), n, obs, len(u) ** 2, violations)


# -- validation helpers ----------------------------------------------------------------

def random_formula(rng: random.Random, sig, max_depth: int, size: int = 6,
                   constant_rate: float = 0.1) -> Formula:
    """Random formula over ``sig`` with implication depth at most ``max_depth``.

    Leaves are ``F`` or ``T`` with probability ``constant_rate`` (always, if
    ``sig`` is empty), otherwise variables.
    """
    names = list(sig)

    def leaf():
        if not names or rng.random() < constant_rate:
            return rng.choice([BOT, TOP])
        return Var(rng.choice(names))

    def go(budget, d):
        if budget <= 1 or rng.random() < 0.25:
            return leaf()
        ops = ["and", "or"] + (["imp", "imp"] if d > 0 else [])
        op = rng.choice(ops)
        left = rng.randint(1, budget - 1)
        if op == "imp":
            return Imp(go(left, d - 1), go(budget - left, d - 1))
        a, b = go(left, d), go(budget - left, d)
        return (a & b) if op == "and" else (a | b)

    return go(size, max_depth)


def validate_basis(basis: TheoryBasis, samples: int = 200, seed: int = 0,
                   prover: Prover | None = None) -> list:
    """Sample formulas of bounded depth and return those matching no rep."""
    prover = prover or default_prover()
    if basis.reps is None:
        raise ValueError("validation needs representatives")
    u = probe_universe(basis.signature)
    index = {_fingerprint(u, r): r for r in basis.reps}
    rng = random.Random(seed)
    missing = []
    for _ in range(samples):
        f = random_formula(rng, list(basis.signature), basis.depth_bound)
        r = index.get(_fingerprint(u, f))
        if r is None or not prover.equiv(f, r):
            missing.append(f)
    return missing
