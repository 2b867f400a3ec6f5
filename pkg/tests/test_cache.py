import json

import pytest

from genrep import context, gf, zn
from genrep.cache import Cache, CacheWarning


@pytest.fixture()
def ctx(Z4):
    return context(Z4, 2)


def _table_files(root):
    return sorted((root / "chartable").rglob("*.json"))


def test_store_and_reload_table(tmp_path, ctx):
    cache = Cache(tmp_path)
    cache.warm(ctx)
    cls = ctx.classes()[-1]
    G = cls.aut_group
    saved = G._tables.pop(ctx.q)
    try:
        T = cache.load_table(ctx.ring, cls, ctx.q)
        assert T is not None and T.rows == saved.rows and cache.hits == 1
    finally:
        G._tables[ctx.q] = saved


def test_poisoned_row_is_evicted(tmp_path, ctx):
    cache = Cache(tmp_path)
    cache.warm(ctx)
    cls = max(ctx.classes(), key=lambda c: c.aut_order)
    path = cache._path("chartable", ctx.ring, {"class_id": cls.class_id, "q": ctx.q})
    doc = json.loads(path.read_text())
    doc["payload"]["rows"][-1][-1] = (doc["payload"]["rows"][-1][-1] + 1) % ctx.q
    # keep the digest consistent so only the orthogonality check can catch it
    from genrep.rings import canonical_json
    import hashlib
    doc["digest"] = hashlib.sha256(canonical_json(doc["payload"]).encode()).hexdigest()
    path.write_text(json.dumps(doc))
    G = cls.aut_group
    saved = G._tables.pop(ctx.q)
    try:
        with pytest.warns(CacheWarning):
            assert cache.load_table(ctx.ring, cls, ctx.q) is None
        assert not path.exists() and cache.evictions == 1
    finally:
        G._tables[ctx.q] = saved


def test_corrupt_json_is_evicted(tmp_path, ctx):
    cache = Cache(tmp_path)
    cache.warm(ctx)
    path = _table_files(tmp_path)[0]
    path.write_text("{not json")
    cls = next(c for c in ctx.classes()
               if cache._path("chartable", ctx.ring, {"class_id": c.class_id, "q": ctx.q}) == path)
    saved = cls.aut_group._tables.pop(ctx.q)
    try:
        with pytest.warns(CacheWarning):
            assert cache.load_table(ctx.ring, cls, ctx.q) is None
    finally:
        cls.aut_group._tables[ctx.q] = saved


def test_cross_ring_isolation(tmp_path, Z4):
    cache = Cache(tmp_path)
    cache.store_catalog(Z4, 1)
    F4 = gf(4)
    assert cache._path("catalog", Z4, {"depth": 1}) != cache._path("catalog", F4, {"depth": 1})
    assert not (tmp_path / "catalog" / F4.canonical_id).exists()


def test_catalog_roundtrip(tmp_path):
    R = zn(25)
    cache = Cache(tmp_path)
    cache.store_catalog(R, 1)
    import importlib
    catmod = importlib.import_module("genrep.catalog")
    live = catmod._CATALOGS.pop(R.canonical_id)
    try:
        cat = cache.load_catalog(R, 1)
        assert [c.class_id for c in cat.upto(1)] == [c.class_id for c in live.upto(1)]
    finally:
        catmod._CATALOGS[R.canonical_id] = live
