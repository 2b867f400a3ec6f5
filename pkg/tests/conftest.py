import pytest

from genrep import free_module, gf, poly_quot, quotient_module, submodule_generated, zn


@pytest.fixture(scope="session")
def Z4():
    return zn(4)


@pytest.fixture(scope="session")
def F2():
    return gf(2)


@pytest.fixture(scope="session")
def dual_numbers():
    return poly_quot(zn(2), [0, 0, 1])


def cyclic(R, gen_index):
    """R / R·r for the ring element with index ``gen_index``."""
    F = free_module(R, 1)
    return quotient_module(F, submodule_generated(F, [gen_index]))[0]


@pytest.fixture(scope="session")
def Z2_over_Z4(Z4):
    return cyclic(Z4, 2)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(results):
        ok, line = results[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {line}")
