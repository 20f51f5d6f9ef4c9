import random

import pytest

from vpas.dve import dve_setup
from vpas.snark import build_passthrough_circuit, build_valid_snp_circuit

_CRS_CACHE = {}


@pytest.fixture(scope="session")
def crs_for():
    """Session-wide trusted-setup cache keyed by relation shape.

    The CRS depends only on the relation, so tests reuse one setup per
    shape instead of paying for a fresh multi-second setup per run.
    """

    def get(relation, n_chunks, merkle_depth=0, seed=1234):
        key = (relation, n_chunks, merkle_depth)
        if key not in _CRS_CACHE:
            rng = random.Random(seed)
            if relation == "snp":
                r1cs = build_valid_snp_circuit(n_chunks, merkle_depth)
            else:
                r1cs = build_passthrough_circuit(n_chunks)
            _CRS_CACHE[key] = dve_setup(r1cs, rng)
        return _CRS_CACHE[key]

    return get


@pytest.fixture()
def rng():
    return random.Random(20260823)
