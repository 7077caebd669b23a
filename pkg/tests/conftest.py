import pytest

from coxrack.coxeter import build_group, preset_matrix


@pytest.fixture(scope="session")
def group_cache():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = build_group(preset_matrix(name))
        return cache[name]

    return get
