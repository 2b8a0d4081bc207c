"""Acceptance criteria 1-9, each at its stated tolerance.

Each test records one pass/fail line, printed in the terminal summary.
Runtimes are asserted against the limits but not printed, so that the
log stays byte-identical between runs.
"""
import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from conftest import CRITERIA
from corpus import JUDGMENTS
from uipc.bisim import bounded_le, max_bisimulation
from uipc.classical import cpc_right_ui
from uipc.kripke import enumerate_universe, find_countermodel
from uipc.prover import Prover, truth_table
from uipc.quantifiers import (LEFT, RIGHT, UIRequest, class_A, class_E, craig_interpolant,
                              uniform_interpolant)
from uipc.syntax import And, Or, Var, parse, to_text
from uipc.theories import build_basis, random_formula, theory_mask

P = parse


@contextmanager
def criterion(n, summary):
    """Record the outcome of criterion ``n`` whether or not the body raises."""
    CRITERIA[n] = (False, summary)
    yield
    CRITERIA[n] = (True, summary)


def test_criterion_1_prover_against_model_search():
    pr = Prover()
    with criterion(1, f"{len(JUDGMENTS)} judgments agree with countermodel search, "
                      "4 nodes, under 60 s"):
        assert len(JUDGMENTS) >= 40
        start = time.perf_counter()
        disagreements = []
        for a, b, expected in JUDGMENTS:
            phi, psi = P(a), P(b)
            proved = pr.entails(phi, psi)
            refuted = find_countermodel(phi, psi, max_nodes=4) is not None
            if proved == refuted or proved != expected:
                disagreements.append((a, b))
        assert disagreements == []
        assert time.perf_counter() - start < 60


def test_criterion_2_theories_proposition():
    with criterion(2, "bounded preorder iff theory inclusion, sig {}, {p}, {p,q}, "
                      "n <= 2, <= 3 nodes, under 5 min"):
        start = time.perf_counter()
        violations = 0
        for sig in ([], ["p"], ["p", "q"]):
            u = enumerate_universe(sig, 3)
            for n in range(3):
                masks = theory_mask(u, build_basis(sig, n, closure=False))
                memo = {}
                for g, h in itertools.product(range(len(u)), repeat=2):
                    le = bounded_le(u.pointed[g], u.pointed[h], n, sig, memo)
                    violations += le != (not masks[g] & ~masks[h])
        assert violations == 0
        assert time.perf_counter() - start < 300


def test_criterion_3_bisimilar_points_agree():
    with criterion(3, "bisimilar pairs over <= 3 nodes agree on depth-2 classes"):
        u = enumerate_universe(["p", "q"], 3)
        for obs, basis in ((["p", "q"], build_basis(["p", "q"], 2, closure=False)),
                           (["q"], build_basis(["q"], 2))):
            # a point forces a lattice combination iff it forces the right generators,
            # so agreement on generators is agreement on every class
            formulas = basis.reps if basis.reps is not None else basis.generators
            violations = 0
            related = 0
            for a, b in itertools.product(u.models, repeat=2):
                for w, v in max_bisimulation(a, b, obs):
                    related += 1
                    violations += any(a.forces(w, f) != b.forces(v, f) for f in formulas)
            assert related > len(u) and violations == 0


def _projection_ok(f, elim):
    keep = sorted(f.vars - set(elim))
    g = cpc_right_ui(f, elim)
    if g.vars - set(keep):
        return False
    bits, _ = truth_table(f, keep + sorted(elim))
    gbits, _ = truth_table(g, keep)
    for v in range(1 << len(keep)):
        some = any(bits >> (v | e << len(keep)) & 1 for e in range(1 << len(elim)))
        if bool(gbits >> v & 1) != some:
            return False
    return True


def test_criterion_4_classical_projection():
    with criterion(4, "200 random formulas over <= 4 variables match the projection"):
        rng = random.Random(2024)
        sig = ["p", "q", "r", "s"]
        failures = 0
        for _ in range(200):
            names = sig[:rng.randint(1, 4)]
            f = random_formula(rng, names, 3, rng.randint(3, 12))
            elim = rng.sample(names, rng.randint(1, len(names)))
            failures += not _projection_ok(f, elim)
        assert failures == 0


KNOWN = [
    ("q -> p", RIGHT, "T"),
    (r"(q -> p) /\ (p -> r)", RIGHT, "q -> r"),
    (r"p \/ q", LEFT, "q"),
    ("p", LEFT, "F"),
    (r"p \/ q", RIGHT, "T"),
]


@pytest.fixture(scope="module")
def known_results():
    out = []
    for text, side, expected in KNOWN:
        start = time.perf_counter()
        res = uniform_interpolant(UIRequest(P(text), "p", side, verify_depth=2))
        out.append((text, side, expected, res, time.perf_counter() - start))
    return out


def test_criterion_5_known_interpolants(known_results):
    pr = Prover()
    with criterion(5, "five known interpolants certified at verify depth 2, "
                      "under 2 min each"):
        for text, side, expected, res, seconds in known_results:
            c = res.certificate
            assert c.var_condition and c.entailment, text
            assert c.minimality is True and c.verify_depth == 2, text
            assert pr.equiv(res.candidate, P(expected)), (text, to_text(res.candidate))
            assert seconds < 120


def test_criterion_7_converse_definability(known_results):
    with criterion(7, "candidate extension equals the quantified class on the universe"):
        for text, side, _, res, _ in known_results:
            phi = P(text)
            u = enumerate_universe(phi.vars, res.certificate.models)
            op = class_E if side == RIGHT else class_A
            target = op(u.extension(phi), "p", u)
            assert (u.extension(res.candidate) == target).all(), text


def _corpus30():
    rng = random.Random(30)
    out = []
    while len(out) < 30:
        f = random_formula(rng, ["p", "q", "r"], 2, rng.randint(3, 8))
        if "p" in f.vars and f not in out:
            out.append(f)
    return out


def test_criterion_6_adjunction():
    pr = Prover()
    corpus = _corpus30()
    free = list(build_basis(["q", "r"], 1).reps)

    def E(f):
        return uniform_interpolant(UIRequest(f, "p", RIGHT)).candidate

    def A(f):
        return uniform_interpolant(UIRequest(f, "p", LEFT)).candidate

    with criterion(6, "adjunction laws (i)-(iv) on 30 formulas over 3 variables, depth <= 2"):
        es = {f: E(f) for f in corpus}
        as_ = {f: A(f) for f in corpus}
        violations = []
        for f in corpus:
            e, a = es[f], as_[f]
            if not (pr.entails(a, f) and pr.entails(f, e)):
                violations.append(("i", f))
            for psi in free:
                if pr.entails(f, psi) != pr.entails(e, psi):
                    violations.append(("ii-E", f, psi))
                if pr.entails(psi, f) != pr.entails(psi, a):
                    violations.append(("ii-A", f, psi))
            if not (pr.equiv(E(e), e) and pr.equiv(A(a), a)):
                violations.append(("iv", f))
        for f, g in itertools.product(corpus, repeat=2):
            if f is not g and pr.entails(f, g):
                if not (pr.entails(es[f], es[g]) and pr.entails(as_[f], as_[g])):
                    violations.append(("iii", f, g))
        for psi in free:
            if not (pr.equiv(E(psi), psi) and pr.equiv(A(psi), psi)):
                violations.append(("iv-free", psi))
        assert violations == []


def _entailing_pair(rng):
    """``psi |- theta`` by construction: weaken a conjunct or use modus ponens."""
    alpha = random_formula(rng, ["p", "q", "r"], 2, rng.randint(2, 6))
    beta = random_formula(rng, ["q", "r"], 2, rng.randint(1, 5))
    rho = random_formula(rng, ["q", "r", "s"], 1, rng.randint(1, 3))
    kind = rng.randrange(3)
    if kind == 0:
        psi = And(alpha, beta)
    elif kind == 1:
        psi = And(alpha, alpha >> beta)
    else:
        psi = And(Or(alpha, beta), alpha >> beta)
    return psi, Or(beta, rho)


def test_criterion_8_craig():
    pr = Prover()
    rng = random.Random(8)
    with criterion(8, "Craig interpolants for 50 random entailing pairs"):
        passed = 0
        for _ in range(50):
            psi, theta = _entailing_pair(rng)
            assert pr.entails(psi, theta)
            chi = craig_interpolant(psi, theta)
            passed += (chi.vars <= psi.vars & theta.vars
                       and pr.entails(psi, chi) and pr.entails(chi, theta))
        assert passed == 50


WORKLOAD = r'''
import random
from uipc.cli import main
from uipc.quantifiers import UIRequest, uniform_interpolant, craig_interpolant
from uipc.syntax import to_text, Or, And
from uipc.theories import random_formula
main(["basis", "--vars", "p,q", "--depth", "1"])
main(["models", "--vars", "p", "--nodes", "2"])
main(["ui", "--eliminate", "p", "--certificate", r"(q -> p) /\ (p -> r)"])
main(["ui", "--side", "left", "--eliminate", "p", "--certificate", r"p \/ q"])
main(["prove", r"(p -> q) \/ (q -> p)"])
main(["axiom", "--vars", "x", "--bound", "y", "--phi", "x -> y", "--psi", "y"])
rng = random.Random(9)
for i in range(40):
    f = random_formula(rng, ["p", "q", "r"], 2, rng.randint(3, 8))
    for side in ("right", "left"):
        r = uniform_interpolant(UIRequest(f, "p", side))
        print(to_text(f), side, to_text(r.candidate), *r.certificate.lines(), sep=" | ")
'''


def test_criterion_9_determinism():
    with criterion(9, "two runs of the logged workload are byte-identical"):
        outs = []
        for seed in ("0", "12345"):
            proc = subprocess.run([sys.executable, "-c", WORKLOAD], capture_output=True,
                                  env={"PYTHONHASHSEED": seed}, cwd=Path(__file__).parent)
            assert proc.returncode == 0, proc.stderr.decode()
            outs.append(proc.stdout + proc.stderr)
        assert len(outs[0]) > 1000
        assert outs[0] == outs[1]
