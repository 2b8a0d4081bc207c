import pytest
from hypothesis import given

from conftest import formulas
from uipc.syntax import (BOT, TOP, And, Imp, Or, ParseError, Var, VarSet, conj, depth, disj,
                         neg, parse, simplify_constants, substitute, to_text, varset)

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_examples():
    assert parse(r"p -> (q \/ ~r)") is Imp(p, Or(q, Imp(r, BOT)))
    assert parse("T") is TOP
    assert parse("p -> q -> r") is Imp(p, Imp(q, r))


def test_left_associative_lattice_ops():
    assert parse(r"p /\ q /\ r") is And(And(p, q), r)
    assert parse(r"p \/ q /\ r") is Or(p, And(q, r))
    assert parse(r"~p /\ q") is And(neg(p), q)


def test_print_examples():
    assert to_text(Imp(p, Imp(q, r))) == "p -> q -> r"
    assert to_text(And(Or(p, q), r)) == r"(p \/ q) /\ r"
    assert to_text(Imp(p, BOT)) == "~p"
    assert to_text(Imp(Imp(p, q), r)) == "(p -> q) -> r"


def test_depth():
    assert depth(p) == 0
    assert depth(Imp(p, Imp(q, r))) == 2
    assert depth(And(Imp(p, q), r)) == 1
    assert depth(TOP) == 0
    assert depth(neg(p)) == 1


def test_vars_and_substitute():
    assert Imp(p, Or(q, p)).vars == {"p", "q"}
    assert BOT.vars == set()
    assert And(TOP, r).vars == {"r"}
    assert substitute(Imp(p, q), {"p": TOP}) is Imp(TOP, q)
    assert substitute(p, {"p": q, "q": p}) is q
    assert substitute(Or(p, q), {}) is Or(p, q)
    assert substitute(And(p, q), {"p": q, "q": p}) is And(q, p)


def test_interning_and_immutability():
    assert Imp(p, q) is parse("p -> q")
    with pytest.raises(AttributeError):
        p.name = "x"


def test_folds():
    assert conj([]) is TOP and disj([]) is BOT
    assert conj([p, q, r]) is And(p, And(q, r))
    assert disj([p]) is p


def test_varset_sorted():
    assert list(varset("r,p,q")) == ["p", "q", "r"]
    assert isinstance(varset("p") | {"q"}, VarSet)
    with pytest.raises(ValueError):
        varset("1x")
    with pytest.raises(ValueError):
        Var("T")


@pytest.mark.parametrize("text,line,col", [("p ->", 1, 5), ("(p", 1, 3), ("p $ q", 1, 3),
                                           ("p\n-> )", 2, 4)])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert info.value.expected


def test_simplify_constants():
    assert simplify_constants(parse(r"(F /\ q) \/ (T /\ q)")) is q
    assert simplify_constants(parse("F -> p")) is TOP
    assert simplify_constants(parse("T -> p")) is p
    assert simplify_constants(parse("p -> F")) is neg(p)


@given(formulas())
def test_round_trip(f):
    assert parse(to_text(f)) is f
    assert to_text(parse(to_text(f))) == to_text(f)


@given(formulas())
def test_variable_renaming_keeps_depth(f):
    assert depth(substitute(f, {"p": q, "q": r})) == depth(f)


@given(formulas(), formulas(("q", "r")))
def test_substitution_vars(f, g):
    assert substitute(f, {"p": g}).vars <= (f.vars - {"p"}) | (g.vars if "p" in f.vars else set())
