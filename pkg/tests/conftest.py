import pytest

from vertexlink.models import build_model


@pytest.fixture(scope="session")
def m2():
    return build_model(2)


@pytest.fixture(scope="session")
def m3():
    return build_model(3)


@pytest.fixture(scope="session")
def m4():
    return build_model(4)


@pytest.fixture(scope="session", params=[2, 3, 4], ids=["N2", "N3", "N4"])
def each_model(request):
    return build_model(request.param)


@pytest.fixture(scope="session", params=[(2, 1), (2, -1), (3, 1), (3, -1), (4, 1), (4, -1)],
                ids=["N2+", "N2-", "N3+", "N3-", "N4+", "N4-"])
def each_signed_model(request):
    N, sign = request.param
    return build_model(N, sign)
