import pytest

from leibniz_kit.exactlin import GF, Q

FIELDS = [Q, GF(3), GF(5), GF(7)]


@pytest.fixture(params=FIELDS, ids=str)
def field(request):
    return request.param
