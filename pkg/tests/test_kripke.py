import itertools
import random

import numpy as np
import pytest

from uipc.config import ResourceLimitError
from uipc.kripke import (KripkeModel, PointedModel, UnknownVariableError, dump_model,
                         enumerate_universe, forces, parse_model, persistence_check, preorders,
                         semantic_class)
from uipc.prover import Prover
from uipc.syntax import BOT, TOP, parse
from uipc.theories import random_formula

P = parse


def chain_p_top():
    return KripkeModel.from_relation(2, [(0, 1)], {"p": [1]})


def test_forcing_examples():
    one = KripkeModel.from_relation(1, [], {"p": [0]})
    assert forces(PointedModel(one, 0), P("p"))
    assert not forces(PointedModel(one, 0), BOT)
    assert not forces(PointedModel(chain_p_top(), 0), P(r"p \/ ~p"))
    assert forces(PointedModel(chain_p_top(), 0), P(r"~~p"))


def test_unknown_variable():
    with pytest.raises(UnknownVariableError):
        forces(PointedModel(chain_p_top(), 0), P("q"))


def test_construction_is_validated():
    with pytest.raises(ValueError):
        KripkeModel.from_relation(2, [(0, 1)], {"p": [0]})
    with pytest.raises(ValueError):
        KripkeModel.from_relation(2, [(0, 2)], {})


def test_clusters_allowed():
    m = KripkeModel.from_relation(2, [(0, 1), (1, 0)], {"p": [0, 1]})
    assert m.le(1, 0) and m.le(0, 1)


def test_semantic_class_examples():
    u = enumerate_universe(["p"], 1)
    assert semantic_class(TOP, u) == frozenset(u.pointed)
    assert semantic_class(BOT, u) == frozenset()
    (only,) = semantic_class(P("p"), u)
    assert only.model.size == 1 and only.model.valuation["p"] == 1


def test_universe_counts():
    assert len(enumerate_universe([], 1)) == 1
    assert len(enumerate_universe([], 1).models) == 1
    assert len(enumerate_universe(["p"], 1)) == 2
    frames = enumerate_universe([], 2).models
    assert sorted((m.size, m.up) for m in frames if m.size == 2) == [
        (2, (1, 2)), (2, (1, 3)), (2, (3, 3))]


def test_preorder_counts():
    assert [len(preorders(k)) for k in range(1, 6)] == [1, 3, 9, 33, 139]


def test_universe_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_universe(["p", "q"], 3, cap=50)


def test_universe_is_deterministic():
    a, b = enumerate_universe(["p", "q"], 3), enumerate_universe(["q", "p"], 3)
    assert [dump_model(m) for m in a.models] == [dump_model(m) for m in b.models]


def test_isomorphism_reduction():
    u = enumerate_universe(["p"], 3)
    orbits = [frozenset(m.relabel(perm) for perm in itertools.permutations(range(m.size)))
              for m in u.models]
    assert len(set(orbits)) == len(orbits)


def test_persistence_exhaustive():
    rng = random.Random(11)
    u = enumerate_universe(["p", "q"], 3)
    fs = [random_formula(rng, ["p", "q"], 2, rng.randint(2, 8)) for _ in range(40)]
    for m in u.models:
        for f in fs:
            assert persistence_check(m, f)


def test_isomorphic_models_agree():
    rng = random.Random(5)
    u = enumerate_universe(["p", "q"], 3)
    fs = [random_formula(rng, ["p", "q"], 2, 6) for _ in range(30)]
    for m in u.models[::7]:
        for perm in itertools.permutations(range(m.size)):
            twin = m.relabel(perm)
            for i in range(m.size):
                for f in fs:
                    assert m.forces(i, f) == twin.forces(perm[i], f)


def test_vectorised_extension_matches_forcing():
    rng = random.Random(2)
    u = enumerate_universe(["p", "q"], 3)
    for _ in range(20):
        f = random_formula(rng, ["p", "q"], 3, 8)
        ext = u.extension(f)
        assert [pm.forces(f) for pm in u.pointed] == list(ext)


def test_entailment_is_inclusion():
    pr = Prover()
    rng = random.Random(9)
    u = enumerate_universe(["p", "q"], 3)
    fs = [random_formula(rng, ["p", "q"], 2, rng.randint(2, 6)) for _ in range(30)]
    for a, b in itertools.product(fs, repeat=2):
        if pr.entails(a, b):
            assert semantic_class(a, u) <= semantic_class(b, u)


def test_model_format_round_trip():
    m = KripkeModel.from_relation(3, [(0, 1), (0, 2)], {"p": [1], "q": [1, 2]})
    text = dump_model(m, 0)
    assert text == "nodes: 3\nle: 0 1\nle: 0 2\nval: p 1\nval: q 1 2\npoint: 0\n"
    back = parse_model(text)
    assert back == PointedModel(m, 0)
    assert parse_model(dump_model(m)) == m


@pytest.mark.parametrize("text", ["le: 0 1\n", "nodes: 2\nval: p 0\nle: 0 1\n",
                                  "nodes: 1\npoint: 3\n", "nodes: 1\nbogus: 1\n"])
def test_model_format_errors(text):
    with pytest.raises(ValueError):
        parse_model(text)
