"""Uniform interpolants by the semantic route.

For a formula ``phi`` and a variable ``p`` the pipeline is

1. enumerate a universe of pointed models over ``vars(phi)``;
2. close ``[[phi]]`` under bisimilarity that ignores ``p`` (right side) or
   shrink it to the points all of whose partners force ``phi`` (left side);
3. read off a formula: the disjunction, over the depth-``n`` theories realised
   in that class, of the conjunction of each theory;
4. verify the result independently with the prover.

Step 3 only defines the class when it is upward closed for the bounded
preorder, and nothing bounds the depth at which that happens, so the bounds
are raised round by round until verification succeeds.  Verification is what
the certificate reports; nothing in steps 1-3 is trusted.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bisim import BoundedOrder, bisimilarity_classes
from .config import DEFAULT, Config, ResourceLimitError
from .kripke import ModelUniverse, PointedModel, enumerate_universe
from .prover import Prover, default_prover
from .syntax import (BOT, TOP, And, Formula, Imp, Or, Var, VarSet, conj, disj, neg,
                     simplify_constants, sort_key, substitute, to_text, varset)
from .theories import (TheoryBasis, TheorySet, _fingerprint, build_basis, probe_universe,
                       theory_mask, theory_of)

log = logging.getLogger(__name__)

__all__ = ["UIRequest", "Certificate", "UIResult", "AxiomInstance", "DeepeningExhausted",
           "class_E", "class_A", "synthesize_chi", "uniform_interpolant",
           "uniform_interpolant_set", "craig_interpolant", "verify_interpolant",
           "is_upward_closed", "model_completion_axiom", "simplify_candidate"]

RIGHT, LEFT = "right", "left"


class DeepeningExhausted(RuntimeError):
    """No round produced a candidate with the required entailment.

    ``result`` holds the last candidate, uncertified.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class UIRequest:
    phi: Formula
    eliminate: str
    side: str = RIGHT
    depth: int | None = None
    models: int = DEFAULT.models
    verify_depth: int = DEFAULT.verify_depth

    def __post_init__(self):
        if self.side not in (RIGHT, LEFT):
            raise ValueError(f"side must be 'right' or 'left', not {self.side!r}")
        varset([self.eliminate])
        for name in ("depth", "models", "verify_depth"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative")
        if self.models < 1:
            raise ValueError("models must be at least 1")


@dataclass
class Certificate:
    """Which conditions were checked, how, and at which bounds.

    ``None`` means a check was not run.  ``minimality_scope`` says whether
    minimality was settled for every formula (``"exact"``) or only for a
    bounded family.
    """

    side: str
    eliminated: VarSet
    retained: VarSet
    var_condition: bool = False
    entailment: bool = False
    minimality: bool | None = None
    minimality_scope: str = "not checked"
    semantic_equality: bool | None = None
    semantic_inner: bool | None = None
    depth: int | None = None
    models: int | None = None
    verify_depth: int | None = None
    rounds: int = 0
    raw: Formula | None = None
    source: str = ""
    notes: list = field(default_factory=list)

    @property
    def certified(self) -> bool:
        """Variable condition and entailment exactly, minimality at least within its scope.

        Semantic equality on the universe is reported but not required: the
        universe-level quantified class is only approximate for points of
        maximal size, whose bisimilar partners may need more nodes.
        """
        return bool(self.var_condition and self.entailment and self.minimality is True)

    @property
    def exact(self) -> bool:
        return self.certified and self.minimality_scope == "exact"

    def lines(self) -> list[str]:
        def fmt(v):
            return "not checked" if v is None else ("pass" if v else "FAIL")
        out = [f"side: {self.side}",
               f"eliminated: {','.join(self.eliminated)}",
               f"retained: {','.join(self.retained)}",
               f"var-condition: {fmt(self.var_condition)} (exact)",
               f"entailment: {fmt(self.entailment)} (exact)",
               f"minimality: {fmt(self.minimality)} ({self.minimality_scope})",
               f"semantic-equality: {fmt(self.semantic_equality)}"
               + (f" (universe of models with <= {self.models} nodes)" if self.models else ""),
               f"depth: {self.depth}",
               f"models: {self.models}",
               f"verify-depth: {self.verify_depth}",
               f"rounds: {self.rounds}"]
        if self.source:
            out.append(f"source: {self.source}")
        if self.raw is not None:
            out.append(f"raw: {to_text(self.raw)}")
        out.extend(f"note: {n}" for n in self.notes)
        return out


@dataclass
class UIResult:
    candidate: Formula
    certificate: Certificate
    steps: tuple = ()

    @property
    def certified(self) -> bool:
        if self.steps:
            return all(s.certified for s in self.steps) and self.certificate.certified
        return self.certificate.certified

    @property
    def emitted(self) -> bool:
        """Variable condition and entailment passed, the minimum for reporting a candidate."""
        return self.certificate.var_condition and self.certificate.entailment


@dataclass(frozen=True)
class AxiomInstance:
    xs: VarSet
    y: str
    phis: tuple
    psis: tuple
    exists: Formula
    foralls: tuple
    psi_formula: str
    psi_prime_formula: str
    sentence: str
    results: tuple = ()


# -- class operators ----------------------------------------------------------------

def _classes(u: ModelUniverse, observed: VarSet) -> np.ndarray:
    key = ("bisim-classes", observed)
    cls = u.cache.get(key)
    if cls is None:
        cls = bisimilarity_classes(u, observed)
        u.cache[key] = cls
    return cls


def _as_mask(k, u):
    if isinstance(k, np.ndarray):
        return k.astype(bool), True
    return u.to_mask(k), False


def _observed(u, p) -> VarSet:
    elim = varset([p]) if isinstance(p, str) else varset(p)
    return u.signature - elim


def class_E(k, p, u: ModelUniverse):
    """Points of ``u`` bisimilar, ignoring ``p``, to some point of ``k``.

    ``k`` is a set of pointed models or a boolean mask; the result has the same kind.
    """
    mask, is_mask = _as_mask(k, u)
    cls = _classes(u, _observed(u, p))
    out = np.isin(cls, np.unique(cls[mask]))
    return out if is_mask else u.to_set(out)


def class_A(k, p, u: ModelUniverse):
    """Points of ``u`` all of whose bisimilar partners, ignoring ``p``, lie in ``k``."""
    mask, is_mask = _as_mask(k, u)
    out = ~class_E(~mask, p, u)
    return out if is_mask else u.to_set(out)


def is_upward_closed(k, u: ModelUniverse, n: int, observed) -> bool:
    """Whether ``k`` is closed upwards under the bounded preorder within ``u``."""
    mask, _ = _as_mask(k, u)
    order = BoundedOrder(u, n, observed)
    inside = {order.keys[g] for g in np.flatnonzero(mask)}
    outside = {order.keys[g] for g in np.flatnonzero(~mask)}
    if n == 0:
        return not any(not (a & ~b) for a in inside for b in outside)
    return not any(not (b & ~a) for a in inside for b in outside)


# -- reading a formula off a class --------------------------------------------------------

def _minimal_masks(masks: Iterable[int]) -> list[int]:
    distinct = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    keep: list[int] = []
    for m in distinct:
        if not any(not (k & ~m) for k in keep):
            keep.append(m)
    return keep


def synthesize_chi(k, basis: TheoryBasis, u: ModelUniverse | None = None) -> Formula:
    """Disjunction over the theories realised in ``k`` of their conjunctions.

    A theory containing another one contributes a redundant disjunct, so only
    the minimal theories are kept.  ``k`` is a set of pointed models, or a mask
    over ``u``.
    """
    if isinstance(k, np.ndarray):
        if u is None:
            raise ValueError("a mask needs its universe")
        all_masks = theory_mask(u, basis)
        masks = [all_masks[g] for g in np.flatnonzero(k)]
    else:
        masks = [theory_of(m, basis).mask for m in k]
    disjuncts = [TheorySet(basis, m).formula() for m in _minimal_masks(masks)]
    return disj(sorted(disjuncts, key=sort_key))


# -- simplification -------------------------------------------------------------------

def _flatten(f, cls):
    if isinstance(f, cls):
        return _flatten(f.left, cls) + _flatten(f.right, cls)
    return [f]


def _prune(f: Formula, prover: Prover, budget: int = 400) -> Formula:
    """Drop disjuncts, then conjuncts inside disjuncts, while equivalence holds."""
    parts = _flatten(f, Or)
    if len(parts) > budget:
        return f
    i = 0
    while i < len(parts) and len(parts) > 1:
        rest = parts[:i] + parts[i + 1:]
        if prover.entails(parts[i], disj(rest)):
            parts = rest
        else:
            i += 1
    # a weaker disjunct keeps the whole equivalent iff it still entails the original
    whole = disj(parts)
    for j, d in enumerate(parts):
        cs = _flatten(d, And)
        i = 0
        while i < len(cs) and len(cs) > 1:
            trial = cs[:i] + cs[i + 1:]
            if prover.entails(conj(trial), whole):
                cs = trial
            else:
                i += 1
        parts[j] = conj(cs)
    return disj(sorted(set(parts), key=sort_key))


_rep_index: dict = {}


def _lookup_rep(f: Formula, sig: VarSet, max_depth: int, prover: Prover) -> Formula | None:
    """Smallest representative equivalent to ``f`` among the small bases that fit."""
    u = probe_universe(sig)
    fp = _fingerprint(u, f)
    for d in range(max_depth + 1):
        key = (sig, d)
        index = _rep_index.get(key)
        if index is None:
            try:
                basis = build_basis(sig, d)
            except ResourceLimitError:
                return None
            index = {}
            for r in basis.reps:
                index.setdefault(_fingerprint(u, r), []).append(r)
            _rep_index[key] = index
        for r in index.get(fp, ()):
            if prover.equiv(f, r):
                return r
    return None


def simplify_candidate(f: Formula, sig: VarSet, prover: Prover | None = None,
                       lookup_depth: int = 2) -> Formula:
    """An equivalent formula over ``sig`` that is usually much smaller."""
    prover = prover or default_prover()
    f = simplify_constants(f)
    if prover.entails(TOP, f):
        return TOP
    if prover.entails(f, BOT):
        return BOT
    best = _prune(f, prover)
    rep = _lookup_rep(best, sig, lookup_depth, prover)
    if rep is not None and sort_key(rep) <= sort_key(best):
        best = rep
    return best


# -- verification ---------------------------------------------------------------------

def _instance_pool(retained: VarSet) -> list[Formula]:
    """Small ``p``-free formulas substituted for eliminated variables."""
    atoms = [Var(x) for x in retained]
    return ([BOT, TOP] + atoms + [neg(a) for a in atoms]
            + [Imp(a, b) for a, b in itertools.permutations(atoms, 2)])


def _instances(phi, elim: VarSet) -> list[Formula]:
    names = list(elim)
    pool = _instance_pool(phi.vars - elim)
    if len(pool) ** len(names) > 256:
        return []
    return [simplify_constants(substitute(phi, dict(zip(names, vals))))
            for vals in itertools.product(pool, repeat=len(names))]


def _substitution_witness(phi, elim: VarSet, side, cand, prover) -> bool:
    """Exact minimality check by instances of ``phi``.

    For ``p``-free ``s``, ``phi |- theta`` gives ``phi[s/p] |- theta`` when
    ``theta`` is ``p``-free.  So if ``cand`` entails the disjunction of some
    instances, every consequence of ``phi`` follows from ``cand``; dually on the
    left.
    """
    instances = _instances(phi, elim)
    if not instances:
        return False
    if side == RIGHT:
        return prover.entails(cand, disj(instances))
    return prover.entails(conj(instances), cand)


def _check_reps(phi, side, cand, reps, u, prover) -> tuple[bool, object]:
    ext_phi, ext_c = u.extension(phi), u.extension(cand)
    for theta in reps:
        ext_t = u.extension(theta)
        if side == RIGHT:
            if (ext_phi & ~ext_t).any() or not prover.entails(phi, theta):
                continue
            if (ext_c & ~ext_t).any() or not prover.entails(cand, theta):
                return False, theta
        else:
            if (ext_t & ~ext_phi).any() or not prover.entails(theta, phi):
                continue
            if (ext_t & ~ext_c).any() or not prover.entails(theta, cand):
                return False, theta
    return True, None


def _check_clauses(phi, side, cand, basis, u, prover) -> tuple[bool, object]:
    """Minimality for lattice combinations of the depth-``m`` generators.

    It suffices to test clauses (right) or cubes (left) of generators, and a
    failing one can be read off any point separating ``cand`` from it.  Only
    points of ``u`` are tried, so this is bounded by the universe too.
    """
    gens = basis.generators
    full = (1 << len(gens)) - 1
    masks = theory_mask(u, basis)
    ext_phi, ext_c = u.extension(phi), u.extension(cand)
    if side == RIGHT:
        phi_masks = {masks[g] for g in np.flatnonzero(ext_phi)}
        for t in sorted({masks[g] for g in np.flatnonzero(ext_c)}):
            if any(not (v & ~t) for v in phi_masks):
                continue
            clause = disj(gens[i] for i in range(len(gens)) if (full & ~t) >> i & 1)
            if prover.entails(phi, clause):
                return False, clause
    else:
        not_phi = {masks[g] for g in np.flatnonzero(~ext_phi)}
        for t in sorted({masks[g] for g in np.flatnonzero(~ext_c)}):
            if any(not (t & ~v) for v in not_phi):
                continue
            cube = conj(gens[i] for i in range(len(gens)) if t >> i & 1)
            if prover.entails(cube, phi):
                return False, cube
    return True, None


def _verify(cert: Certificate, phi, cand, side, u, target, m, cap, prover):
    elim = cert.eliminated
    retained = cert.retained
    cert.var_condition = cand.vars <= retained
    cert.entailment = (prover.entails(phi, cand) if side == RIGHT
                       else prover.entails(cand, phi))
    if not (cert.var_condition and cert.entailment):
        return
    if _substitution_witness(phi, elim, side, cand, prover):
        cert.minimality, cert.minimality_scope = True, "exact"
    else:
        try:
            basis = build_basis(retained, m, cap=cap)
            ok, bad = _check_reps(phi, side, cand, basis.reps, u, prover)
            cert.minimality_scope = f"all {len(basis.reps)} classes of depth <= {m}"
        except ResourceLimitError:
            basis = build_basis(retained, m, closure=False, cap=cap)
            ok, bad = _check_clauses(phi, side, cand, basis, u, prover)
            cert.minimality_scope = (f"generator clauses of depth <= {m} separated on "
                                     f"models with <= {u.max_nodes} nodes")
        cert.minimality = ok
        if bad is not None:
            cert.notes.append(f"minimality fails for {to_text(bad)}")
    if target is not None:
        diff = u.extension(cand) != target
        cert.semantic_equality = not diff.any()
        cert.semantic_inner = not (diff & _inner(u)).any()
        if diff.any() and not (diff & _inner(u)).any():
            cert.notes.append("semantic equality fails only on models of maximal size")


def _prover_for(config: Config) -> Prover:
    if config.step_budget == DEFAULT.step_budget:
        return default_prover()
    return Prover(config.step_budget)


def _inner(u: ModelUniverse) -> np.ndarray:
    """Points of models below the size bound, where the class operators are reliable."""
    key = "inner"
    mask = u.cache.get(key)
    if mask is None:
        sizes = np.array([m.size for m in u.models])[u.model_of]
        mask = sizes < u.max_nodes if u.max_nodes > 1 else np.ones(len(u), dtype=bool)
        u.cache[key] = mask
    return mask


def _target(u, phi, elim, side):
    ext = u.extension(phi)
    return class_E(ext, elim, u) if side == RIGHT else class_A(ext, elim, u)


def verify_interpolant(phi: Formula, eliminate, side: str, candidate: Formula,
                       models: int = DEFAULT.models, verify_depth: int = DEFAULT.verify_depth,
                       config: Config = DEFAULT) -> Certificate:
    """Check a user-supplied candidate against the three conditions and the class."""
    elim = varset([eliminate]) if isinstance(eliminate, str) else varset(eliminate)
    retained = phi.vars - elim
    prover = _prover_for(config)
    cert = Certificate(side, elim, retained, models=models, verify_depth=verify_depth)
    sig = phi.vars | candidate.vars
    u = enumerate_universe(sig, models, config.universe_cap)
    target = _target(u, phi, elim & sig, side) if elim & phi.vars else u.extension(phi)
    _verify(cert, phi, candidate, side, u, target, verify_depth, config.basis_cap, prover)
    return cert


# -- the pipeline -------------------------------------------------------------------

def _candidates(phi, elim, side, target, u, retained, n, raw, basis, prover, cap):
    """Formulas defining ``target`` below the size bound, smallest first, tagged by source.

    Small representatives come first, then single generators and meets or
    joins of two generators, and finally the simplified disjunction of
    theories.  Candidates are produced lazily because the last one costs
    prover calls.
    """
    inner = _inner(u)
    target = target[inner]
    seen = set()
    for d in range(n + 1):
        try:
            small = build_basis(retained, d, cap=cap)
        except ResourceLimitError:
            break
        for rep in small.reps:
            if rep not in seen and np.array_equal(u.extension(rep)[inner], target):
                seen.add(rep)
                yield f"representative of depth <= {d}", lambda rep=rep: rep
                break
    gens = basis.generators
    exts = [u.extension(g)[inner] for g in gens]
    hits = [g for g, e in zip(gens, exts) if np.array_equal(e, target)]
    for i, j in itertools.combinations(range(len(gens)), 2):
        if np.array_equal(exts[i] & exts[j], target):
            hits.append(gens[i] & gens[j])
        if np.array_equal(exts[i] | exts[j], target):
            hits.append(gens[i] | gens[j])
    for f in sorted(set(hits) - seen, key=sort_key)[:3]:
        yield f"generators of depth <= {n}", lambda f=f: f
    yield "disjunction of realised theories", lambda: simplify_candidate(raw, retained, prover)
    yield "substitution instance", lambda: _best_instance(phi, elim, side, prover)
    if side == LEFT:
        yield "realised theories entailing the formula", \
            lambda: _lower_bound(phi, u, basis, retained, prover)


def _lower_bound(phi, u, basis, retained, prover):
    """Disjunction of the realised theories whose conjunction entails ``phi``.

    It always passes the entailment check, which makes it the fallback when
    the universal class needs a deeper basis than the cap allows.
    """
    keep: list[int] = []
    for m in sorted(set(theory_mask(u, basis)), key=lambda m: (bin(m).count("1"), m)):
        if any(not (k & ~m) for k in keep):
            continue
        if prover.entails(TheorySet(basis, m).formula(), phi):
            keep.append(m)
    chi = disj(sorted((TheorySet(basis, m).formula() for m in keep), key=sort_key))
    return simplify_candidate(chi, retained, prover)


def _best_instance(phi, elim, side, prover):
    """An instance ``phi[s/p]`` entailed by ``phi`` (right) or entailing it (left).

    Such an instance is the interpolant itself: every ``p``-free consequence
    of ``phi`` is a consequence of each instance.  ``phi`` is returned when no
    instance qualifies, and then fails the variable condition.
    """
    for f in sorted(set(_instances(phi, elim)), key=sort_key):
        if f.vars & elim:
            continue
        if (prover.entails(phi, f) if side == RIGHT else prover.entails(f, phi)):
            return f
    return phi


def _next_bounds(sig, retained, n, nodes, config, cert):
    """Raise both bounds by one, holding either one that would exceed its cap."""
    new_n, new_nodes = n + 1, nodes + 1
    try:
        build_basis(retained, new_n, closure=False, cap=config.basis_cap)
    except ResourceLimitError:
        new_n = n
    try:
        enumerate_universe(sig, new_nodes, config.universe_cap)
    except ResourceLimitError:
        new_nodes = nodes
    if (new_n, new_nodes) == (n, nodes):
        cert.notes.append(f"deepening stopped: neither depth {n + 1} nor "
                          f"{nodes + 1} nodes fits the caps")
        return None, None
    if new_n == n:
        cert.notes.append(f"depth held at {n}: depth {n + 1} exceeds the basis cap")
    if new_nodes == nodes:
        cert.notes.append(f"models held at {nodes} nodes: the universe cap is reached")
    return new_n, new_nodes


def _identity_result(req: UIRequest) -> UIResult:
    cert = Certificate(req.side, varset([req.eliminate]), req.phi.vars, var_condition=True,
                       entailment=True, minimality=True, minimality_scope="exact",
                       verify_depth=req.verify_depth)
    cert.notes.append("eliminated variable does not occur; the formula is its own interpolant")
    return UIResult(req.phi, cert)


def _rank(res: UIResult) -> int:
    """3: certified and consistent with the class below the size bound, 2: certified,
    1: variable condition and entailment only, 0: not emitted."""
    c = res.certificate
    if res.certified:
        return 3 if c.exact or c.semantic_inner is not False else 2
    return 1 if res.emitted else 0


def _feasible_depth(retained: VarSet, n: int, config: Config) -> int:
    """The largest depth ``<= n`` whose generating set fits the basis cap."""
    while n > 0:
        try:
            build_basis(retained, n, closure=False, cap=config.basis_cap)
            return n
        except ResourceLimitError:
            n -= 1
    return n


def uniform_interpolant(req: UIRequest, config: Config = DEFAULT) -> UIResult:
    """Synthesise and verify the right or left uniform interpolant of ``req.phi``.

    Raises :class:`DeepeningExhausted` when no round yields a candidate with
    the required entailment.  A candidate that passes the variable condition and entailment but not the
    bounded checks is returned with ``certified`` false.
    """
    phi, p, side = req.phi, req.eliminate, req.side
    if p not in phi.vars:
        return _identity_result(req)
    prover = _prover_for(config)
    elim = varset([p])
    retained = phi.vars - elim
    n = phi.depth if req.depth is None else req.depth
    nodes = req.models
    start = n
    n = _feasible_depth(retained, n, config)
    best = None
    for r in range(config.deepening_rounds):
        try:
            u = enumerate_universe(phi.vars, nodes, config.universe_cap)
            target = _target(u, phi, elim, side)
            basis = build_basis(retained, n, closure=False, cap=config.basis_cap)
            # members of the universal class are unreliable at the size bound
            source_class = target if side == RIGHT else target & _inner(u)
            raw = synthesize_chi(source_class, basis, u)
            result = None
            for source, make in _candidates(phi, elim, side, target, u, retained, n, raw,
                                            basis, prover, config.basis_cap):
                cert = Certificate(side, elim, retained, depth=n, models=nodes,
                                   verify_depth=req.verify_depth, rounds=r + 1, raw=raw,
                                   source=source)
                cand = make()
                _verify(cert, phi, cand, side, u, target, req.verify_depth,
                        config.basis_cap, prover)
                trial = UIResult(cand, cert)
                if result is None or _rank(trial) > _rank(result):
                    result = trial
                if _rank(trial) == 3:
                    break
        except ResourceLimitError as exc:
            log.info("round %d stopped: %s", r + 1, exc)
            if best is None:
                raise
            best.certificate.notes.append(f"deepening stopped at depth {n}, "
                                          f"{nodes} nodes: {exc}")
            break
        log.debug("round %d: n=%d N=%d candidate %s", r + 1, n, nodes, result.candidate)
        if n < start and r == 0:
            result.certificate.notes.append(
                f"basis depth lowered from {start} to {n} to fit the basis cap")
        if best is None or _rank(result) >= _rank(best):
            best = result
        if _rank(best) == 3:
            return best
        n, nodes = _next_bounds(phi.vars, retained, n, nodes, config, best.certificate)
        if n is None:
            break
    if not best.emitted:
        raise DeepeningExhausted(
            f"no candidate entailment after {best.certificate.rounds} rounds", best)
    return best


def uniform_interpolant_set(phi: Formula, eliminate, side: str = RIGHT,
                            depth: int | None = None, models: int = DEFAULT.models,
                            verify_depth: int = DEFAULT.verify_depth,
                            config: Config = DEFAULT) -> UIResult:
    """Eliminate several variables one at a time, in sorted order."""
    elim = varset(eliminate)
    if len(elim) == 1:
        return uniform_interpolant(UIRequest(phi, next(iter(elim)), side, depth, models,
                                             verify_depth), config)
    current = phi
    steps = []
    for p in elim:
        res = uniform_interpolant(UIRequest(current, p, side, depth, models, verify_depth), config)
        steps.append(res.certificate)
        current = res.candidate
    prover = _prover_for(config)
    cert = Certificate(side, elim, phi.vars - elim, verify_depth=verify_depth,
                       models=models, rounds=len(steps))
    cert.var_condition = not (current.vars & elim)
    cert.entailment = (prover.entails(phi, current) if side == RIGHT
                       else prover.entails(current, phi))
    if all(s.minimality for s in steps):
        cert.minimality = True
        exact = all(s.minimality_scope == "exact" for s in steps)
        cert.minimality_scope = "exact" if exact else "composed from bounded steps"
    elif steps:
        cert.minimality = False
        cert.minimality_scope = "composed from bounded steps"
    else:
        cert.minimality, cert.minimality_scope = True, "exact"
    return UIResult(current, cert, tuple(steps))


def craig_interpolant(psi: Formula, theta: Formula, config: Config = DEFAULT,
                      **kwargs) -> Formula:
    """An interpolant over the shared variables, from the right uniform interpolant of ``psi``."""
    prover = _prover_for(config)
    if not prover.entails(psi, theta):
        raise ValueError("precondition violated: psi does not entail theta")
    res = uniform_interpolant_set(psi, psi.vars - theta.vars, RIGHT, config=config, **kwargs)
    chi = res.candidate
    if not (prover.entails(psi, chi) and prover.entails(chi, theta)):
        raise RuntimeError(f"interpolant {chi} failed verification")
    return chi


# -- model completion axioms ------------------------------------------------------------

def _eq_text(f: Formula) -> str:
    s = to_text(f)
    return s if isinstance(f, Var) or f in (TOP, BOT) else f"({s})"


def model_completion_axiom(xs, y: str, phis: Sequence[Formula], psis: Sequence[Formula],
                           config: Config = DEFAULT, **kwargs) -> AxiomInstance:
    """The quantifier-free replacement of one existential equation system.

    ``exists y. (phi_i = T ... /\\ psi_j != T ...)`` is matched by the equations
    ``E_y(/\\phi) = T`` and ``A_y(/\\phi -> psi_j) != T``.
    """
    xs = varset(xs)
    varset([y])
    scope = xs | {y}
    for f in list(phis) + list(psis):
        if not f.vars <= scope:
            raise ValueError(f"{f} mentions variables outside {scope}")
    big = conj(phis)
    e = uniform_interpolant(UIRequest(big, y, RIGHT, **kwargs), config)
    alls = [uniform_interpolant(UIRequest(Imp(big, s), y, LEFT, **kwargs), config)
            for s in psis]
    psi_parts = ([f"{_eq_text(f)} = T" for f in phis]
                 + [f"{_eq_text(f)} ≠ T" for f in psis])
    prime_parts = ([f"{_eq_text(e.candidate)} = T"]
                   + [f"{_eq_text(a.candidate)} ≠ T" for a in alls])
    psi_text = f"∃{y}. (" + " ∧ ".join(psi_parts) + ")"
    prime_text = " ∧ ".join(prime_parts)
    prefix = f"∀{','.join(xs)}. " if xs else ""
    sentence = f"{prefix}(({prime_text}) → {psi_text})"
    return AxiomInstance(xs, y, tuple(phis), tuple(psis), e.candidate,
                         tuple(a.candidate for a in alls), psi_text, prime_text, sentence,
                         (e, *alls))
