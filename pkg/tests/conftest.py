import pytest

from shalika_padic import gl2_symbols


@pytest.fixture(scope="session")
def delta_symbol():
    return gl2_symbols.reference_symbol("Delta")


@pytest.fixture(scope="session")
def curve_symbol():
    return gl2_symbols.reference_symbol("11a")


@pytest.fixture(scope="session")
def delta_towers(delta_symbol):
    """Delta at 11: all j, levels 1..3, precision 11^20."""
    st = gl2_symbols.ordinary_stabilize(delta_symbol, 11, 20)
    tower, ms = gl2_symbols.build_padic_L(st, 3)
    return st, tower, ms


@pytest.fixture(scope="session")
def rep_3_1_0_m2():
    from shalika_padic.highest_weight import build_rep
    from shalika_padic.weights import Weight
    return build_rep(Weight.single((3, 1, 0, -2)))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
