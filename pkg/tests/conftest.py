import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from rigiduality.polyring import QQ, PolyRing

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

R3 = PolyRing(QQ, ("x", "y", "z"))


@st.composite
def polys(draw, ring=R3, max_terms=5, max_exp=3):
    n = ring.nvars
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_exp)] * n),
        st.fractions(min_value=-20, max_value=20, max_denominator=6),
        max_size=max_terms))
    return ring.from_dict({e: QQ(c) for e, c in terms.items() if c})


def from_sympy(expr, ring):
    """Parse a sympy expression into ``ring`` (independent conversion path)."""
    return ring.parse(str(sympy.expand(expr)).replace("**", "^"))


# one pass/fail line per acceptance criterion, printed in the terminal summary
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, label, secs = ACCEPTANCE[k]
        terminalreporter.write_line("criterion %2d  %s  %-44s %6.2fs"
                                    % (k, "PASS" if ok else "FAIL", label, secs))
