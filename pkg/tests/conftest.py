import pytest

from hasseweil.curves import WeierstrassCurve


@pytest.fixture(scope="session")
def e37():
    """Conductor 37, rank 1, w = -1, trivial torsion."""
    return WeierstrassCurve(0, 0, 1, -1, 0)


@pytest.fixture(scope="session")
def e11():
    """Conductor 11, rank 0, torsion Z/5, c_11 = 5."""
    return WeierstrassCurve(0, -1, 1, -10, -20)


@pytest.fixture(scope="session")
def e36():
    """Conductor 36, rank 0, torsion Z/6, additive at 2 and 3."""
    return WeierstrassCurve(0, 0, 0, 0, 1)


@pytest.fixture(scope="session")
def reference_curves(e37, e11, e36):
    return {"37a": e37, "11a": e11, "36a": e36}


@pytest.fixture(scope="session")
def ctx37(e37):
    from hasseweil.analytic import AnalyticContext

    return AnalyticContext(e37)


@pytest.fixture(scope="session")
def ctx11(e11):
    from hasseweil.analytic import AnalyticContext

    return AnalyticContext(e11)


@pytest.fixture(scope="session")
def ctx36(e36):
    from hasseweil.analytic import AnalyticContext

    return AnalyticContext(e36)
