import itertools
import random

import pytest
from hypothesis import given

from conftest import formulas
from corpus import JUDGMENTS
from uipc.config import ResourceLimitError
from uipc.kripke import enumerate_universe, find_countermodel
from uipc.prover import (Prover, cpc_entails, cpc_valid, ipc_entails, ipc_equiv, ipc_valid,
                         truth_table)
from uipc.syntax import TOP, Imp, parse
from uipc.theories import random_formula

P = parse


@pytest.mark.parametrize("phi,psi,expected", [
    ("p", "p", True),
    ("T", r"p \/ ~p", False),
    ("T", r"~~(p \/ ~p)", True),
    ("T", "((p -> q) -> p) -> p", False),
])
def test_entailment_examples(phi, psi, expected):
    assert ipc_entails(P(phi), P(psi)) is expected


def test_equivalence_examples():
    assert ipc_equiv(P("~~~p"), P("~p"))
    assert ipc_equiv(P(r"p \/ q"), P(r"q \/ p"))
    assert not ipc_equiv(P("~~p"), P("p"))


def test_classical_validity_examples():
    assert cpc_valid(P(r"p \/ ~p"))
    assert not cpc_valid(P("p"))
    assert cpc_valid(P("((p -> q) -> p) -> p"))


def test_truth_table_bits():
    bits, names = truth_table(P(r"p /\ ~q"))
    assert names == ["p", "q"] and bits == 0b0010


@pytest.mark.parametrize("phi,psi,expected", JUDGMENTS)
def test_corpus_against_countermodels(phi, psi, expected):
    phi, psi = P(phi), P(psi)
    assert ipc_entails(phi, psi) is expected
    cm = find_countermodel(phi, psi, max_nodes=4)
    assert (cm is None) is expected
    if cm is not None:
        assert cm.forces(phi) and not cm.forces(psi)


def test_step_budget_is_an_error():
    with pytest.raises(ResourceLimitError):
        Prover(step_budget=3).entails(TOP, P("((p -> q) -> p) -> p"))


def test_soundness_on_small_universe(prover):
    u = enumerate_universe(["p", "q"], 3)
    rng = random.Random(7)
    fs = [random_formula(rng, ["p", "q"], 2, rng.randint(2, 7)) for _ in range(60)]
    ext = {f: u.extension(f) for f in fs}
    for a, b in itertools.product(fs[:25], fs[25:50]):
        if prover.entails(a, b):
            assert not (ext[a] & ~ext[b]).any(), (a, b)


@given(formulas(), formulas(), formulas())
def test_reflexive_and_transitive(a, b, c):
    pr = Prover()
    assert pr.entails(a, a)
    if pr.entails(a, b) and pr.entails(b, c):
        assert pr.entails(a, c)


@given(formulas(), formulas())
def test_deduction_property(a, b):
    assert ipc_entails(a, b) == ipc_valid(Imp(a, b))


@given(formulas(max_leaves=10))
def test_ipc_valid_implies_cpc_valid(f):
    if ipc_valid(f):
        assert cpc_valid(f)


@given(formulas(), formulas())
def test_ipc_entailment_implies_cpc(a, b):
    if ipc_entails(a, b):
        assert cpc_entails(a, b)
