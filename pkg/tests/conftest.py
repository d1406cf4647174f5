import pytest

from recoin.index import build_index
from recoin.ingest import load_dump

ASTRO_MINI_LINES = [
    b'{"id":"A1","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"],"P3":["x"]}}',
    b'{"id":"A2","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"]}}',
    b'{"id":"A3","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"]}}',
    b'{"id":"A4","claims":{"P31":["Q5"],"P106":["QAST"],"P1":["x"],"P2":["x"],"P3":["x"],"P4":["x"]}}',
]


@pytest.fixture(scope="session")
def astro_lines():
    return list(ASTRO_MINI_LINES)


@pytest.fixture()
def astro_store():
    return load_dump(iter(ASTRO_MINI_LINES))


@pytest.fixture()
def astro_index(astro_store):
    return build_index(astro_store)


@pytest.fixture()
def astro_dump(tmp_path):
    path = tmp_path / "astro.jsonl"
    path.write_bytes(b"\n".join(ASTRO_MINI_LINES) + b"\n")
    return path


@pytest.fixture()
def astro_snapshot(tmp_path, astro_store, astro_index):
    from recoin.index import write_snapshot
    path = tmp_path / "astro.idx"
    write_snapshot(str(path), astro_index, astro_store)
    return path
