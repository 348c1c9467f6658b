from hypothesis import settings, strategies as st

from bgglab.exactfield import Poly, RatFunc

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

small_fractions = st.fractions(min_value=-9, max_value=9, max_denominator=6)
small_polys = st.lists(small_fractions, min_size=0, max_size=4).map(Poly)
nonzero_polys = small_polys.filter(lambda p: not p.is_zero())


@st.composite
def ratfuncs(draw, nonzero=False):
    num = draw(nonzero_polys if nonzero else small_polys)
    den = draw(nonzero_polys)
    return RatFunc(num, den)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: (k == 0, k)):
        terminalreporter.write_line(results[key])
