"""Class number store: persistence, compaction, conflict detection."""

from __future__ import annotations

import pytest

from triquad.cache import ClassNumberStore, default_cache_path


def test_record_and_get_round_trip(tmp_path):
    store = ClassNumberStore(tmp_path / "h.txt")
    store.record(-84, 4, "forms")
    store.record(-84, 4, "dirichlet")
    store.record(-8587, 18, "forms")
    assert store.get(-84, "forms") == 4
    assert store.get(-84, "dirichlet") == 4
    assert store.get(-84, "bound-only") is None
    assert store.get(-999, "forms") is None
    assert len(store) == 3


def test_reload_preserves_entries(tmp_path):
    path = tmp_path / "h.txt"
    store = ClassNumberStore(path)
    store.record(-15, 2, "forms")
    store.record(-100003, 1234.5, "bound-only")
    again = ClassNumberStore(path)
    assert again.get(-15, "forms") == 2
    assert again.get(-100003, "bound-only") == 1234.5
    assert len(again) == 2


def test_identical_rerecord_is_a_noop(tmp_path):
    path = tmp_path / "h.txt"
    store = ClassNumberStore(path)
    store.record(-84, 4, "forms")
    store.record(-84, 4, "forms")
    store.record(-84, 4, "forms")
    assert len(path.read_text().splitlines()) == 1


def test_conflicting_value_raises(tmp_path):
    store = ClassNumberStore(tmp_path / "h.txt")
    store.record(-84, 4, "forms")
    with pytest.raises(ValueError, match="conflicting"):
        store.record(-84, 5, "forms")
    with pytest.raises(ValueError, match="mismatch"):
        store.record(-84, 5, "dirichlet")


def test_method_agreement_enforced_on_load(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("-84 4 forms t0\n-84 5 dirichlet t1\n")
    with pytest.raises(ValueError, match="mismatch"):
        ClassNumberStore(path)


def test_malformed_lines_are_dropped_and_compacted(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text(
        "-84 4 forms 2026-01-01T00:00:00+00:00\n"
        "complete nonsense\n"
        "-15 2 unknown-method 2026-01-01T00:00:00+00:00\n"
        "-15 2 forms 2026-01-01T00:00:00+00:00\n"
    )
    store = ClassNumberStore(path)
    assert len(store) == 2
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert all(" forms " in line for line in lines)


def test_duplicate_lines_compact_to_one(tmp_path):
    path = tmp_path / "h.txt"
    path.write_text("-84 4 forms t0\n-84 4 forms t1\n-84 4 forms t2\n")
    store = ClassNumberStore(path)
    assert len(store) == 1
    assert path.read_text() == "-84 4 forms t2\n"


def test_unknown_method_rejected(tmp_path):
    store = ClassNumberStore(tmp_path / "h.txt")
    with pytest.raises(ValueError):
        store.get(-84, "guesswork")
    with pytest.raises(ValueError):
        store.record(-84, 4, "guesswork")


def test_unwritable_path_degrades_to_memory():
    store = ClassNumberStore("/proc/does-not-exist/h.txt")
    store.record(-84, 4, "forms")
    assert store.get(-84, "forms") == 4


def test_default_path_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv("TRIQUAD_CACHE", str(tmp_path / "custom.txt"))
    assert default_cache_path() == tmp_path / "custom.txt"
    monkeypatch.delenv("TRIQUAD_CACHE")
    assert default_cache_path().name == "class_numbers.txt"
