from __future__ import annotations

import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from coxblow import ConfigSpec, build_linear, build_m0n
from coxblow.linalg import available_backends

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

FOUR_POINTS = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1))


def four_point_spec(field=None) -> ConfigSpec:
    kw = {} if field is None else {"field": field}
    return ConfigSpec("linear", r=2, subspaces=tuple((p,) for p in FOUR_POINTS), **kw)


@pytest.fixture(scope="session")
def m5():
    return build_m0n(5)


@pytest.fixture(scope="session")
def m6():
    return build_m0n(6)


@pytest.fixture(scope="session")
def m7():
    return build_m0n(7)


@pytest.fixture(scope="session")
def lin4():
    return build_linear(four_point_spec())


@pytest.fixture(params=sorted(available_backends()))
def kernels(request):
    return available_backends()[request.param]


@pytest.fixture
def write_config(tmp_path: Path):
    def _write(payload, name: str = "config.json") -> Path:
        path = tmp_path / name
        path.write_text(payload if isinstance(payload, str) else json.dumps(payload, indent=2))
        return path
    return _write
