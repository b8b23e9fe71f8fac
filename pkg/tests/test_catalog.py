import pytest

from synccodes import catalog
from synccodes.catalog import CatalogEntry, CatalogError
from synccodes.core import Code


def test_seed_loads_and_verifies():
    entries = catalog.load()
    assert len(entries) == 13
    assert sum(e.n is None for e in entries) == 5
    assert {e.src for e in entries} == {"paper"}
    assert all(e.d == 8 for e in entries)


def test_env_var_overrides_seed(tmp_path, monkeypatch):
    path = tmp_path / "cat.txt"
    path.write_text("d=2 k=6 n=4 src=native-solver code=011_100_\n")
    monkeypatch.setenv(catalog.ENV_VAR, str(path))
    (entry,) = catalog.load()
    assert str(entry.code) == "011_100_"


def test_save_load_is_byte_exact(tmp_path):
    path = tmp_path / "cat.txt"
    entries = catalog.load()
    catalog.save(entries, path)
    first = path.read_bytes()
    assert catalog.load(path) == entries
    catalog.save(catalog.load(path), path)
    assert path.read_bytes() == first


def test_append_with_timestamp(tmp_path):
    path = tmp_path / "cat.txt"
    entry = CatalogEntry(2, 6, 4, Code.parse("011_100_"), "oracle", "2026-01-02T03:04:05Z")
    catalog.append(entry, path)
    catalog.append(entry, path)
    assert catalog.load(path) == [entry, entry]
    assert path.read_text().splitlines()[0].endswith(" ts=2026-01-02T03:04:05Z")


@pytest.mark.parametrize("line", [
    "d=8 k=10 n=8 src=paper code=____00011____01011",  # wrong window
    "d=8 k=9 n=9 src=paper code=____00011____01011",  # wrong counts
    "d=8 k=10 n=9 src=somebody code=____00011____01011",  # unknown provenance
    "d=8 k=10 n=9 code=____00011____01011",  # malformed
    "d=2 k=2 n=none src=oracle code=0x__",
])
def test_bad_entry_aborts_load(tmp_path, line):
    path = tmp_path / "cat.txt"
    path.write_text("d=2 k=6 n=4 src=oracle code=011_100_\n" + line + "\n")
    with pytest.raises(CatalogError, match=":2:"):
        catalog.load(path)


def test_append_refuses_unverified_entry(tmp_path):
    bad = CatalogEntry(2, 6, 3, Code.parse("011_100_"), "oracle")
    with pytest.raises(CatalogError):
        catalog.append(bad, tmp_path / "cat.txt")
    assert not (tmp_path / "cat.txt").exists()
