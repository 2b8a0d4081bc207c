"""Finite intuitionistic Kripke models, forcing and model enumeration.

Node sets are ``range(size)``; the preorder is stored as one bitmask per node
(``up[i]`` has bit ``j`` set iff ``i <= j``) and every variable is valued by a
bitmask of nodes.  A :class:`ModelUniverse` additionally lays all of its models
out as one disjoint union so that forcing and bisimulation classification run
over numpy arrays, one entry per pointed model.
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .config import DEFAULT, ResourceLimitError
from .syntax import BOT, TOP, And, Formula, Imp, Or, Var, VarSet, varset

log = logging.getLogger(__name__)

__all__ = ["KripkeModel", "PointedModel", "ModelUniverse", "UnknownVariableError",
           "forces", "persistence_check", "semantic_class", "enumerate_universe",
           "parse_model", "dump_model", "find_countermodel", "preorders"]


class UnknownVariableError(ValueError):
    pass


def _bits(mask):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _closure(size, pairs):
    up = [1 << i for i in range(size)]
    for i, j in pairs:
        if not (0 <= i < size and 0 <= j < size):
            raise ValueError(f"node index out of range in pair ({i}, {j})")
        up[i] |= 1 << j
    changed = True
    while changed:
        changed = False
        for i in range(size):
            m = up[i]
            for j in _bits(m):
                m |= up[j]
            if m != up[i]:
                up[i] = m
                changed = True
    return tuple(up)


class KripkeModel:
    """A finite preordered set of nodes with a persistent valuation."""

    __slots__ = ("size", "up", "valuation", "signature", "_hash", "_ext")

    def __init__(self, size: int, up: Iterable[int], valuation: Mapping[str, int],
                 signature: Iterable[str] | None = None):
        up = tuple(up)
        if size < 1 or len(up) != size:
            raise ValueError("a model needs at least one node and one up-set per node")
        full = (1 << size) - 1
        for i, m in enumerate(up):
            if m & ~full:
                raise ValueError(f"up-set of node {i} mentions unknown nodes")
            if not m >> i & 1:
                raise ValueError(f"order is not reflexive at node {i}")
            for j in _bits(m):
                if up[j] & ~m:
                    raise ValueError(f"order is not transitive at {i} <= {j}")
        sig = varset(valuation.keys() if signature is None else signature)
        val = {}
        for name in sig:
            mask = valuation.get(name, 0)
            if mask & ~full:
                raise ValueError(f"valuation of {name} mentions unknown nodes")
            for j in _bits(mask):
                if up[j] & ~mask:
                    raise ValueError(f"valuation of {name} is not upward closed at node {j}")
            val[name] = mask
        extra = set(valuation) - set(sig)
        if extra:
            raise ValueError(f"valuation mentions variables outside the signature: {sorted(extra)}")
        self.size = size
        self.up = up
        self.valuation = val
        self.signature = sig
        self._hash = hash((size, up, tuple(sorted(val.items()))))
        self._ext = {}

    @classmethod
    def from_relation(cls, size, pairs=(), valuation=None, signature=None):
        """Build from generating ``(i, j)`` pairs (closure is taken) and node lists."""
        valuation = valuation or {}
        masks = {}
        for name, nodes in valuation.items():
            m = 0
            for j in nodes:
                if not 0 <= j < size:
                    raise ValueError(f"node {j} out of range in valuation of {name}")
                m |= 1 << j
            masks[name] = m
        return cls(size, _closure(size, pairs), masks, signature)

    def __eq__(self, other):
        return (isinstance(other, KripkeModel) and self._hash == other._hash
                and self.size == other.size and self.up == other.up
                and self.valuation == other.valuation and self.signature == other.signature)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"KripkeModel({dump_model(self).strip()!r})"

    def le(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def successors(self, i: int) -> list[int]:
        return list(_bits(self.up[i]))

    def atoms(self, i: int, observed: Iterable[str] | None = None) -> frozenset:
        names = self.signature if observed is None else observed
        return frozenset(n for n in names if self.valuation[n] >> i & 1)

    def is_upset(self, mask: int) -> bool:
        return all(not (self.up[j] & ~mask) for j in _bits(mask))

    def extension(self, phi: Formula) -> int:
        """Bitmask of the nodes forcing ``phi``."""
        r = self._ext.get(phi)
        if r is not None:
            return r
        if isinstance(phi, Var):
            try:
                r = self.valuation[phi.name]
            except KeyError:
                raise UnknownVariableError(
                    f"variable {phi.name!r} is not in the model signature {self.signature}") from None
        elif phi is BOT:
            r = 0
        elif phi is TOP:
            r = (1 << self.size) - 1
        elif isinstance(phi, And):
            r = self.extension(phi.left) & self.extension(phi.right)
        elif isinstance(phi, Or):
            r = self.extension(phi.left) | self.extension(phi.right)
        else:
            bad = self.extension(phi.left) & ~self.extension(phi.right)
            r = 0
            for i in range(self.size):
                if not self.up[i] & bad:
                    r |= 1 << i
        if len(self._ext) > 4096:
            self._ext.clear()
        self._ext[phi] = r
        return r

    def forces(self, i: int, phi: Formula) -> bool:
        return bool(self.extension(phi) >> i & 1)

    def restrict(self, signature: Iterable[str]) -> "KripkeModel":
        sig = varset(signature)
        return KripkeModel(self.size, self.up, {n: self.valuation[n] for n in sig}, sig)

    def relabel(self, perm) -> "KripkeModel":
        """Apply the node bijection ``i -> perm[i]``."""
        return KripkeModel(self.size, _permute_frame(self.up, perm),
                           {n: _permute_mask(m, perm) for n, m in self.valuation.items()},
                           self.signature)


class PointedModel(NamedTuple):
    model: KripkeModel
    point: int

    def forces(self, phi: Formula) -> bool:
        return self.model.forces(self.point, phi)

    def __repr__(self):
        return f"PointedModel({dump_model(self.model, self.point).strip()!r})"


def forces(m: PointedModel, phi: Formula) -> bool:
    """Kripke forcing ``M, w ||- phi``."""
    model, point = m
    if not 0 <= point < model.size:
        raise ValueError(f"point {point} is not a node of the model")
    return model.forces(point, phi)


def persistence_check(m: KripkeModel, phi: Formula) -> bool:
    """Whether the set of nodes forcing ``phi`` is upward closed."""
    return m.is_upset(m.extension(phi))


# -- enumeration ----------------------------------------------------------------

def _permute_mask(mask, perm):
    r = 0
    for j in _bits(mask):
        r |= 1 << perm[j]
    return r


def _permute_frame(up, perm):
    new = [0] * len(up)
    for i, m in enumerate(up):
        new[perm[i]] = _permute_mask(m, perm)
    return tuple(new)


@lru_cache(maxsize=None)
def _labelled_preorders(k):
    """Labelled preorders, grown one node at a time.

    Node ``k-1`` is added below a down-set ``D`` and above an up-set ``U`` of
    a preorder on the first ``k-1`` nodes; transitivity needs ``d <= u`` for
    all ``d`` in ``D`` and ``u`` in ``U``.
    """
    if k == 0:
        return [()]
    new = 1 << (k - 1)
    out = []
    for up in _labelled_preorders(k - 1):
        n = k - 1
        down = [sum(1 << i for i in range(n) if up[i] >> j & 1) for j in range(n)]
        for U in range(1 << n):
            if any(up[j] & ~U for j in _bits(U)):
                continue
            for D in range(1 << n):
                if any(down[j] & ~D for j in _bits(D)):
                    continue
                if any(U & ~up[d] for d in _bits(D)):
                    continue
                frame = [up[i] | (new | U if D >> i & 1 else 0) for i in range(n)]
                out.append(tuple(frame) + (new | U,))
    return out


@lru_cache(maxsize=None)
def preorders(k: int) -> tuple:
    """Preorders on ``k`` nodes up to isomorphism, as canonical up-set tuples.

    Returns ``(frame, automorphisms)`` pairs in a deterministic order.
    """
    if k > 5:
        raise ResourceLimitError("preorder enumeration is limited to 5 nodes")
    perms = list(itertools.permutations(range(k)))
    frames = np.array(_labelled_preorders(k), dtype=np.int64)
    rel = (frames[:, :, None] >> np.arange(k)) & 1
    inv = np.argsort(np.array(perms), axis=1)
    # relabel every frame by every permutation at once: R'[p(i), p(j)] = R[i, j]
    moved = rel[:, inv[:, :, None], inv[:, None, :]]
    rows = (moved << np.arange(k)).sum(axis=3)
    codes = (rows << (k * np.arange(k - 1, -1, -1))).sum(axis=2)
    best = codes.argmin(axis=1)
    seen = dict.fromkeys(tuple(int(x) for x in rows[f, best[f]]) for f in range(len(frames)))
    out = []
    for code in sorted(seen):
        autos = tuple(p for p in perms if _permute_frame(code, p) == code)
        out.append((code, autos))
    return tuple(out)


def _upsets(up):
    k = len(up)
    return [m for m in range(1 << k) if all(not (up[j] & ~m) for j in _bits(m))]


class ModelUniverse:
    """All pointed models over ``signature`` with at most ``max_nodes`` nodes.

    ``pointed[g]`` is the pointed model at global node ``g`` of the disjoint
    union of ``models``; semantic classes are exchanged either as frozensets of
    :class:`PointedModel` or, internally, as boolean masks over global nodes.
    """

    def __init__(self, signature: VarSet, max_nodes: int, models: list[KripkeModel]):
        self.signature = signature
        self.max_nodes = max_nodes
        self.models = models
        self.pointed = [PointedModel(m, i) for m in models for i in range(m.size)]
        self.index = {pm: g for g, pm in enumerate(self.pointed)}
        self.offsets = np.cumsum([0] + [m.size for m in models])
        total = len(self.pointed)
        self.model_of = np.repeat(np.arange(len(models)), [m.size for m in models])
        width = max([m.size for m in models], default=1)
        succ = np.full((total, width), total, dtype=np.int64)
        atoms = {n: np.zeros(total, dtype=bool) for n in signature}
        g = 0
        for m in models:
            base = g
            for i in range(m.size):
                nxt = [base + j for j in _bits(m.up[i])]
                succ[g, :len(nxt)] = nxt
                for n in signature:
                    atoms[n][g] = bool(m.valuation[n] >> i & 1)
                g += 1
        self.succ = succ
        self.atoms = atoms
        self._ext: dict = {}
        self.cache: dict = {}

    def __len__(self):
        return len(self.pointed)

    def __repr__(self):
        return (f"ModelUniverse(signature={self.signature}, max_nodes={self.max_nodes}, "
                f"models={len(self.models)}, pointed={len(self.pointed)})")

    def extension(self, phi: Formula) -> np.ndarray:
        """Boolean mask over pointed models of those forcing ``phi``."""
        r = self._ext.get(phi)
        if r is not None:
            return r
        if isinstance(phi, Var):
            if phi.name not in self.atoms:
                raise UnknownVariableError(
                    f"variable {phi.name!r} is not in the universe signature {self.signature}")
            r = self.atoms[phi.name]
        elif phi is BOT:
            r = np.zeros(len(self), dtype=bool)
        elif phi is TOP:
            r = np.ones(len(self), dtype=bool)
        elif isinstance(phi, And):
            r = self.extension(phi.left) & self.extension(phi.right)
        elif isinstance(phi, Or):
            r = self.extension(phi.left) | self.extension(phi.right)
        else:
            bad = self.extension(phi.left) & ~self.extension(phi.right)
            r = ~np.append(bad, False)[self.succ].any(axis=1)
        r.flags.writeable = False
        if len(self._ext) > 20000:
            self._ext.clear()
        self._ext[phi] = r
        return r

    def to_set(self, mask) -> frozenset:
        return frozenset(self.pointed[g] for g in np.flatnonzero(mask))

    def to_mask(self, models: Iterable[PointedModel]) -> np.ndarray:
        mask = np.zeros(len(self), dtype=bool)
        for pm in models:
            mask[self.index[pm]] = True
        return mask


def semantic_class(phi: Formula, u: ModelUniverse) -> frozenset:
    """The pointed models of ``u`` that force ``phi``."""
    return u.to_set(u.extension(phi))


@lru_cache(maxsize=16)
def _enumerate(sig: VarSet, max_nodes: int, cap: int) -> ModelUniverse:
    names = list(sig)
    # orbits >= labelled valuations / automorphisms, so this bound fails fast
    estimate = sum(k * len(_upsets(frame)) ** len(names) / len(autos)
                   for k in range(1, max_nodes + 1) for frame, autos in preorders(k))
    if estimate > cap:
        raise ResourceLimitError(
            f"universe over {sig} with {max_nodes} nodes exceeds the cap of {cap} pointed models")
    models = []
    count = 0
    for k in range(1, max_nodes + 1):
        for frame, autos in preorders(k):
            ups = _upsets(frame)
            orbit_perms = [a for a in autos if list(a) != list(range(k))]
            for vals in itertools.product(ups, repeat=len(names)):
                if orbit_perms and any(
                        tuple(_permute_mask(v, a) for v in vals) < vals for a in orbit_perms):
                    continue
                count += k
                if count > cap:
                    raise ResourceLimitError(
                        f"universe over {sig} with {max_nodes} nodes exceeds the cap of "
                        f"{cap} pointed models")
                models.append(KripkeModel(k, frame, dict(zip(names, vals)), sig))
    log.debug("enumerated %d models (%d pointed) over %s, max_nodes=%d",
              len(models), count, sig, max_nodes)
    return ModelUniverse(sig, max_nodes, models)


def enumerate_universe(sig: Iterable[str], max_nodes: int, cap: int | None = None) -> ModelUniverse:
    """All models with at most ``max_nodes`` nodes, up to isomorphism, each at every point."""
    if max_nodes < 1:
        raise ValueError("max_nodes must be at least 1")
    return _enumerate(varset(sig), max_nodes, cap or DEFAULT.universe_cap)


def find_countermodel(phi: Formula, psi: Formula, max_nodes: int = 4,
                      cap: int | None = None) -> PointedModel | None:
    """Smallest pointed model forcing ``phi`` but not ``psi``, if one exists."""
    sig = phi.vars | psi.vars
    for n in range(1, max_nodes + 1):
        u = enumerate_universe(sig, n, cap)
        bad = u.extension(phi) & ~u.extension(psi)
        hits = np.flatnonzero(bad)
        if len(hits):
            return u.pointed[hits[0]]
    return None


# -- text format ------------------------------------------------------------------

def dump_model(model: KripkeModel, point: int | None = None) -> str:
    """Render in the line format ``nodes:``/``le:``/``val:``/``point:``."""
    lines = [f"nodes: {model.size}"]
    for i in range(model.size):
        for j in _bits(model.up[i]):
            if i != j:
                lines.append(f"le: {i} {j}")
    for name in model.signature:
        nodes = " ".join(str(j) for j in _bits(model.valuation[name]))
        lines.append(f"val: {name} {nodes}".rstrip())
    if point is not None:
        lines.append(f"point: {point}")
    return "\n".join(lines) + "\n"


def parse_model(text: str):
    """Parse the model format; returns a KripkeModel or a PointedModel."""
    size = None
    pairs = []
    val: dict = {}
    point = None
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        parts = rest.split()
        try:
            if key == "nodes":
                size = int(parts[0])
            elif key == "le":
                i, j = (int(x) for x in parts)
                pairs.append((i, j))
            elif key == "val":
                name, nodes = parts[0], [int(x) for x in parts[1:]]
                if name in val:
                    raise ValueError(f"duplicate valuation for {name}")
                val[name] = nodes
            elif key == "point":
                point = int(parts[0])
            else:
                raise ValueError(f"unknown directive {key!r}")
        except (IndexError, ValueError) as exc:
            raise ValueError(f"line {lineno}: {exc or 'malformed line'}") from None
    if size is None:
        raise ValueError("missing 'nodes:' line")
    model = KripkeModel.from_relation(size, pairs, val)
    if point is None:
        return model
    if not 0 <= point < size:
        raise ValueError(f"point {point} is not a node")
    return PointedModel(model, point)
