import json

import pytest

from conftest import CATALOG_IDS
from symplectic_hodge import catalog
from symplectic_hodge.lie_model import dump_model, load_model


def test_catalog_size_and_ids():
    assert len(catalog.ids()) >= 5
    assert catalog.ids() == sorted(CATALOG_IDS)
    assert {"t4", "kodaira-thurston"} <= set(catalog.ids())


@pytest.mark.parametrize("model_id", CATALOG_IDS)
def test_entry_valid(model_id):
    e = catalog.get(model_id)
    assert e.check() == []
    assert e.provenance
    assert e.omega == e.model.omega


@pytest.mark.parametrize("model_id", CATALOG_IDS)
def test_model_file_canonical(model_id):
    e = catalog.get(model_id)
    assert dump_model(load_model(e.model_text)) == e.model_text


@pytest.mark.parametrize("model_id", CATALOG_IDS)
def test_fixture_rederives_byte_for_byte(model_id):
    e = catalog.get(model_id)
    assert catalog.render_fixture(e) == e.fixture_text()


def test_fixture_contents():
    d = json.loads(catalog.get("kodaira-thurston").fixture_text())
    assert d["dims"]["dR"] == [1, 3, 4, 3, 1]
    assert d["hlp"]["holds"] is False


def test_write_fixtures_to_directory(tmp_path):
    written = catalog.write_fixtures(tmp_path)
    assert sorted(p.name for p in written) == sorted(f"{i}.json" for i in CATALOG_IDS)
    for p in written:
        assert p.read_text() == catalog.get(p.stem).fixture_text()


def test_unknown_id():
    with pytest.raises(catalog.UnknownModelError, match="unknown catalog model"):
        catalog.get("nope")
