import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from fracindex import catalog as cat  # noqa: E402
from fracindex.exact_algebra import CohClass  # noqa: E402

small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def class_strategy(ring, positive_degree=False, degree=None):
    """Random CohClass in ``ring`` with small rational coefficients."""
    idx = [
        i for i, d in enumerate(ring.degrees)
        if (degree is None or d == degree) and (not positive_degree or d > 0)
    ]
    return st.lists(small_fractions, min_size=len(idx), max_size=len(idx)).map(
        lambda cs: CohClass(ring, tuple(
            cs[idx.index(i)] if i in idx else Fraction(0) for i in range(ring.dimension)
        ))
    )


CATALOG_RINGS = {
    "cp2": lambda: cat.cp(2).ring,
    "cp4": lambda: cat.cp(4).ring,
    "v4_5": lambda: cat.hypersurface(2, 5).ring,
    "cp1xcp1": lambda: cat.product(cat.cp(1), cat.cp(1)).ring,
    "cp2xcp1": lambda: cat.product(cat.cp(2), cat.cp(1)).ring,
}


@pytest.fixture(params=sorted(CATALOG_RINGS))
def catalog_ring(request):
    return CATALOG_RINGS[request.param]()


def complex_catalog_up_to_12():
    """Every complex catalog model of real dimension <= 12 exercised by the identity tests."""
    models = [cat.cp(n) for n in range(1, 7)]
    models += [cat.hypersurface(n, d) for n in (1, 2, 3) for d in range(1, 7)]
    models += [
        cat.product(cat.cp(a), cat.cp(b)) for a in range(1, 4) for b in range(a, 7 - a) if a + b <= 6
    ]
    models += [cat.product(cat.hypersurface(1, 4), cat.cp(1)), cat.product(cat.hypersurface(1, 3), cat.cp(2)),
               cat.product(cat.product(cat.cp(1), cat.cp(1)), cat.cp(1)), cat.point()]
    return models


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
