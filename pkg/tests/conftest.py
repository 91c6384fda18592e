import pytest

from arithreg.nf import embeddings, parse_field

# shipped test fields; power bases are maximal for all of these
FIELD_RECORDS = {
    "Q": {"poly": [0, 1]},
    "Qi": {"poly": [1, 0, 1]},
    "Qsqrt2": {"poly": [-2, 0, 1]},
    "Qphi": {"poly": [-1, -1, 1]},
    "Qsqrtm5": {"poly": [5, 0, 1]},
    "cubic": {"poly": [1, -1, 0, 1]},  # x^3 - x + 1
}


@pytest.fixture(scope="session")
def fields():
    return {name: parse_field(rec) for name, rec in FIELD_RECORDS.items()}


@pytest.fixture(scope="session")
def embset(fields):
    return {name: embeddings(K, 50) for name, K in fields.items()}
