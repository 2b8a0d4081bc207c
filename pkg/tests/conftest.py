import pytest
from hypothesis import HealthCheck, settings, strategies as st

from uipc.syntax import BOT, TOP, And, Imp, Or, Var

# derandomized so that repeated runs print the same log
settings.register_profile("uipc", derandomize=True, deadline=None, max_examples=80,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("uipc")


def formulas(names=("p", "q", "r"), max_leaves=8):
    leaf = st.sampled_from([Var(n) for n in names] + [BOT, TOP])
    return st.recursive(
        leaf,
        lambda sub: st.one_of(st.builds(And, sub, sub), st.builds(Or, sub, sub),
                              st.builds(Imp, sub, sub)),
        max_leaves=max_leaves)


@pytest.fixture(scope="session")
def prover():
    from uipc.prover import Prover
    return Prover()


# one line per acceptance criterion, printed at the end of the run
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, text = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {text}")
