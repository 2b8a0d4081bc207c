"""Decision procedures: intuitionistic entailment and classical validity.

IPC is decided by backward search in Dyckhoff's contraction-free sequent
calculus G4ip.  Every rule except right-disjunction and the nested-implication
left rule is invertible, so those are applied eagerly and only the remaining
two are backtracked over.  The calculus is terminating, so the search is a
decision procedure; results are memoised per sequent.
"""
from __future__ import annotations

import logging
import threading

from .config import DEFAULT, ResourceLimitError
from .syntax import BOT, TOP, And, Formula, Imp, Or, Var, sort_key

log = logging.getLogger(__name__)

__all__ = ["Prover", "ipc_entails", "ipc_equiv", "ipc_valid", "cpc_valid",
           "cpc_entails", "cpc_equiv", "truth_table", "default_prover"]


class Prover:
    """G4ip prover with a shared sequent memo.

    The memo only ever stores decided sequents, so concurrent callers observe
    a pure function.  ``step_budget`` bounds rule applications per query.
    """

    def __init__(self, step_budget: int | None = None, max_memo: int = 2_000_000):
        self.step_budget = step_budget or DEFAULT.step_budget
        self.max_memo = max_memo
        self._memo: dict = {}
        self._equiv: dict = {}
        self._tables: dict = {}
        self._local = threading.local()

    def clear(self):
        self._memo.clear()
        self._equiv.clear()
        self._tables.clear()

    # -- public API ---------------------------------------------------------

    def entails(self, phi: Formula, psi: Formula) -> bool:
        """Decide ``phi |- psi`` in intuitionistic propositional logic."""
        if phi is psi or psi is TOP or phi is BOT:
            return True
        self._local.steps = 0
        if len(self._memo) > self.max_memo:
            self._memo.clear()
        names = tuple(sorted(phi.vars | psi.vars))
        self._local.tables = (self._tables.setdefault(names, {}), names,
                              (1 << (1 << len(names))) - 1) if len(names) <= 10 else None
        return self._prove(frozenset((phi,)), psi)

    def equiv(self, phi: Formula, psi: Formula) -> bool:
        if phi is psi:
            return True
        a, b = sorted((phi, psi), key=sort_key)
        key = (a, b)
        r = self._equiv.get(key)
        if r is None:
            r = self.entails(a, b) and self.entails(b, a)
            self._equiv[key] = r
        return r

    # -- search -------------------------------------------------------------

    def _tick(self):
        steps = getattr(self._local, "steps", 0) + 1
        self._local.steps = steps
        if steps > self.step_budget:
            raise ResourceLimitError(
                f"prover exceeded step budget of {self.step_budget} rule applications")

    def _prove(self, gamma: frozenset, goal: Formula) -> bool:
        key = (gamma, goal)
        r = self._memo.get(key)
        if r is None:
            self._tick()
            r = self._classically_possible(gamma, goal) and self._search(gamma, goal)
            self._memo[key] = r
        return r

    def _classically_possible(self, gamma, goal) -> bool:
        """False when a Boolean valuation refutes the sequent.

        A one-node Kripke model is a valuation, so such sequents are not
        intuitionistically derivable either; this prunes most failing
        branches of the two backtracking rules cheaply.
        """
        tables = getattr(self._local, "tables", None)
        if tables is None:
            return True
        cache, names, full = tables
        acc = full
        for f in gamma:
            acc &= _table(f, cache, names, full)
            if not acc:
                return True
        return not (acc & ~_table(goal, cache, names, full))

    def _search(self, gamma, goal):
        # invertible right rules
        if goal is TOP or goal in gamma:
            return True
        if isinstance(goal, And):
            return self._prove(gamma, goal.left) and self._prove(gamma, goal.right)
        if isinstance(goal, Imp):
            if goal.left is BOT:
                return True
            return self._prove(gamma | {goal.left}, goal.right)

        norm = _normalise(gamma)
        if norm is True:
            return True
        ctx, disjunctions = norm
        if goal in ctx:
            return True
        if disjunctions:
            d = disjunctions[0]
            rest = ctx.union(disjunctions[1:])
            return (self._prove(rest | {d.left}, goal)
                    and self._prove(rest | {d.right}, goal))
        if ctx != gamma:
            return self._prove(ctx, goal)

        # non-invertible rules; ctx holds atoms, p -> B with p absent, and (C -> D) -> B
        if isinstance(goal, Or):
            if self._prove(ctx, goal.left) or self._prove(ctx, goal.right):
                return True
        nested = sorted((f for f in ctx if isinstance(f, Imp) and isinstance(f.left, Imp)),
                        key=sort_key)
        for f in nested:
            c, d, b = f.left.left, f.left.right, f.right
            rest = ctx - {f}
            if self._prove(rest | {Imp(d, b)}, Imp(c, d)) and self._prove(rest | {b}, goal):
                return True
        return False


def _table(f, cache, names, full):
    """Truth table of ``f`` over ``names`` as a bitmask, memoised in ``cache``."""
    r = cache.get(f)
    if r is not None:
        return r
    if len(cache) > 200_000:
        cache.clear()
    if isinstance(f, Var):
        j = names.index(f.name)
        r = 0
        for i in range(1 << len(names)):
            if i >> j & 1:
                r |= 1 << i
    elif f is BOT:
        r = 0
    elif f is TOP:
        r = full
    else:
        a, b = _table(f.left, cache, names, full), _table(f.right, cache, names, full)
        if isinstance(f, And):
            r = a & b
        elif isinstance(f, Or):
            r = a | b
        else:
            r = (full & ~a) | b
    cache[f] = r
    return r


def _normalise(gamma):
    """Apply the invertible left rules exhaustively.

    Returns True if the context contains falsum, otherwise the normalised
    context (as a frozenset) and the pending disjunctions (sorted).
    """
    atoms = set()
    pending: dict = {}
    ctx = set()
    disjunctions = set()
    work = list(gamma)
    while work:
        f = work.pop()
        if f is BOT:
            return True
        if f is TOP:
            continue
        if isinstance(f, Var):
            if f not in atoms:
                atoms.add(f)
                ctx.add(f)
                for g in pending.pop(f, ()):
                    ctx.discard(g)
                    work.append(g.right)
            continue
        if isinstance(f, And):
            work.append(f.left)
            work.append(f.right)
            continue
        if isinstance(f, Or):
            disjunctions.add(f)
            continue
        a, b = f.left, f.right
        if a is BOT or b is TOP:
            continue
        if a is TOP:
            work.append(b)
        elif isinstance(a, Var):
            if a in atoms:
                work.append(b)
            elif f not in ctx:
                ctx.add(f)
                pending.setdefault(a, []).append(f)
        elif isinstance(a, And):
            work.append(Imp(a.left, Imp(a.right, b)))
        elif isinstance(a, Or):
            work.append(Imp(a.left, b))
            work.append(Imp(a.right, b))
        else:
            ctx.add(f)
    ctx_f = frozenset(ctx)
    disjunctions = [d for d in disjunctions if d.left not in ctx_f and d.right not in ctx_f]
    disjunctions.sort(key=sort_key)
    return ctx_f, disjunctions


_default = Prover()
_default_lock = threading.Lock()


def default_prover() -> Prover:
    return _default


def ipc_entails(phi: Formula, psi: Formula, prover: Prover | None = None) -> bool:
    """True iff ``phi |- psi`` holds intuitionistically."""
    return (prover or _default).entails(phi, psi)


def ipc_equiv(phi: Formula, psi: Formula, prover: Prover | None = None) -> bool:
    return (prover or _default).equiv(phi, psi)


def ipc_valid(phi: Formula, prover: Prover | None = None) -> bool:
    return (prover or _default).entails(TOP, phi)


# -- classical logic ------------------------------------------------------------

def truth_table(f: Formula, names=None) -> tuple[int, list[str]]:
    """Evaluate ``f`` on all valuations of ``names`` at once.

    Returns an integer whose bit ``i`` is the value under valuation ``i``, where
    bit ``j`` of ``i`` is the value of ``names[j]``.
    """
    names = sorted(f.vars) if names is None else list(names)
    k = len(names)
    full = (1 << (1 << k)) - 1
    masks = {}
    for j, n in enumerate(names):
        m = 0
        for i in range(1 << k):
            if i >> j & 1:
                m |= 1 << i
        masks[n] = m
    memo: dict = {}

    def ev(g):
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Var):
            r = masks[g.name]
        elif g is BOT:
            r = 0
        elif g is TOP:
            r = full
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        else:
            r = (full & ~ev(g.left)) | ev(g.right)
        memo[g] = r
        return r

    return ev(f), names


def cpc_valid(phi: Formula) -> bool:
    """True iff ``phi`` holds under every Boolean valuation of its variables."""
    table, names = truth_table(phi)
    return table == (1 << (1 << len(names))) - 1


def cpc_entails(phi: Formula, psi: Formula) -> bool:
    return cpc_valid(Imp(phi, psi))


def cpc_equiv(phi: Formula, psi: Formula) -> bool:
    return cpc_valid(And(Imp(phi, psi), Imp(psi, phi)))
